"""Finitely generated rational cones: membership, extremal rays, lattice symmetries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Sequence

from .exactmat import IntMatrix, primitive, rank
from .matgroup import MatrixGroup, generate_closure


class RaysDoNotSpan(ValueError):
    pass


@dataclass(frozen=True)
class RationalCone:
    dim: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.dim:
                raise ValueError(f"generator {g} has wrong length")
            if not any(g):
                raise ValueError("zero generator")
            d = 0
            for x in g:
                d = gcd(d, x)
            if d != 1:
                raise ValueError(f"generator {g} is not primitive")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], dim: int | None = None) -> "RationalCone":
        vs = [primitive(v) for v in vectors]
        return cls(dim if dim is not None else len(vs[0]), tuple(vs))


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for j in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][j]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == len(a):
            break
    return a, pivots


def _fm_feasible(ineqs: list[tuple[list[Fraction], Fraction]], nvars: int) -> bool:
    """Is there t with a.t + b >= 0 for every (a, b)?  Fourier-Motzkin elimination."""
    cur = [(list(a), b) for a, b in ineqs]
    for k in range(nvars - 1, -1, -1):
        pos, neg, rest = [], [], []
        for a, b in cur:
            if a[k] > 0:
                pos.append((a, b))
            elif a[k] < 0:
                neg.append((a, b))
            else:
                rest.append((a, b))
        nxt = rest
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[k], -an[k]
                a = [cn * x + cp * y for x, y in zip(ap, an)]
                a[k] = Fraction(0)
                nxt.append((a, cn * bp + cp * bn))
        # Drop exact duplicates to keep growth in check.
        uniq = {}
        for a, b in nxt:
            key = (tuple(a[:k]), b)
            uniq[key] = (a, b)
        cur = list(uniq.values())
    return all(b >= 0 for _, b in cur)


def contains(cone: RationalCone, v: Sequence) -> bool:
    """Is ``v`` a nonnegative rational combination of the generators?"""
    v = [Fraction(x) for x in v]
    if len(v) != cone.dim:
        raise ValueError("dimension mismatch")
    k = len(cone.generators)
    if k == 0:
        return not any(v)
    # Solve G lam = v; general solution lam = lam0 + N t.
    rows = [[Fraction(g[i]) for g in cone.generators] + [v[i]] for i in range(cone.dim)]
    red, pivots = _rref(rows, k)
    if any(all(x == 0 for x in r[:k]) and r[k] != 0 for r in red):
        return False
    free = [j for j in range(k) if j not in pivots]
    lam0 = [Fraction(0)] * k
    for r, j in zip(red, pivots):
        lam0[j] = r[k]
    nullvecs = []
    for f in free:
        vec = [Fraction(0)] * k
        vec[f] = Fraction(1)
        for r, j in zip(red, pivots):
            vec[j] = -r[f]
        nullvecs.append(vec)
    if not nullvecs:
        return all(x >= 0 for x in lam0)
    ineqs = [([nv[i] for nv in nullvecs], lam0[i]) for i in range(k)]
    return _fm_feasible(ineqs, len(nullvecs))


def extremal_generators(cone: RationalCone) -> list[tuple[int, ...]]:
    out = []
    gens = cone.generators
    for i, g in enumerate(gens):
        others = [h for j, h in enumerate(gens) if j != i and h != g]
        if others and contains(RationalCone(cone.dim, tuple(others)), g):
            continue
        if g in out:
            continue
        out.append(g)
    return out


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    red, pivots = _rref(aug, n)
    if pivots != list(range(n)):
        raise ValueError("singular")
    return [r[n:] for r in red]


def symmetry_group(rays: Sequence[Sequence[int]], fixed: Sequence[int]) -> MatrixGroup:
    """All M in GL_n(Z) permuting the ray set and fixing ``fixed``."""
    rays = [tuple(int(x) for x in r) for r in rays]
    fixed = tuple(int(x) for x in fixed)
    n = len(fixed)
    if not any(fixed):
        raise ValueError("fixed vector must be nonzero")
    if rank(IntMatrix.from_rows(rays, n)) < n:
        raise RaysDoNotSpan(f"{len(rays)} rays do not span Q^{n}")
    # Greedy spanning subset.
    basis_idx: list[int] = []
    for i in range(len(rays)):
        trial = basis_idx + [i]
        if rank(IntMatrix.from_rows([rays[j] for j in trial], n)) == len(trial):
            basis_idx = trial
        if len(basis_idx) == n:
            break
    B = [[Fraction(rays[j][i]) for j in basis_idx] for i in range(n)]
    B_inv = _inverse(B)
    ray_set = set(rays)
    found: list[IntMatrix] = []
    for images in permutations(range(len(rays)), n):
        Bp = [[Fraction(rays[j][i]) for j in images] for i in range(n)]
        M = [[sum(Bp[i][k] * B_inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for r in M for x in r):
            continue
        Mi = IntMatrix.from_rows([[int(x) for x in r] for r in M], n)
        if Mi.det() not in (1, -1):
            continue
        if Mi @ fixed != fixed:
            continue
        if {Mi @ r for r in rays} != ray_set:
            continue
        found.append(Mi)
    return generate_closure(found, rank=n)
