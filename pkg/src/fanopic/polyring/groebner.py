"""Buchberger's algorithm over prime fields (degrevlex, Gebauer-Moeller criteria).

Internally a polynomial is a dict ``{exponent tuple: coefficient in [1, p)}``.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Sequence

from .fields import PrimeField
from .poly import MultiPoly, degrevlex_key

Mono = tuple[int, ...]
Poly = dict


class ChartTimeout(TimeoutError):
    def __init__(self, message: str = "Groebner basis exceeded its time budget", chart=None):
        super().__init__(message)
        self.chart = chart


@dataclass(frozen=True)
class PolyIdeal:
    generators: tuple[MultiPoly, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        f0 = gens[0]
        for g in gens[1:]:
            if g.variables != f0.variables or g.field != f0.field:
                raise ValueError("generators must share a ring")
        object.__setattr__(self, "generators", gens)

    @property
    def field(self):
        return self.generators[0].field

    @property
    def variables(self):
        return self.generators[0].variables


class _Deadline:
    __slots__ = ("t", "ticks")

    def __init__(self, budget: float | None):
        self.t = None if budget is None else time.monotonic() + budget
        self.ticks = 0

    def check(self):
        if self.t is None:
            return
        self.ticks += 1
        if self.ticks & 63 == 0 and time.monotonic() > self.t:
            raise ChartTimeout()


def _lm(f: Poly) -> Mono:
    return max(f, key=degrevlex_key)


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Mono, b: Mono) -> Mono:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: Mono, b: Mono) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _monic(f: Poly, p: int) -> Poly:
    lm = _lm(f)
    inv = pow(f[lm], -1, p)
    return {m: c * inv % p for m, c in f.items()}


class _Basis:
    """Polynomials with cached leading monomials, indexable by integer id."""

    def __init__(self, p: int):
        self.p = p
        self.polys: list[Poly] = []
        self.lms: list[Mono] = []

    def add(self, f: Poly) -> int:
        self.polys.append(f)
        self.lms.append(_lm(f))
        return len(self.polys) - 1


def _reduce(f: Poly, basis: _Basis, active: Sequence[int], p: int, deadline: _Deadline,
            stop_on_unit: bool = False) -> Poly:
    """Full normal form of ``f`` with respect to the active basis elements."""
    f = dict(f)
    heap = [(tuple(-k for k in degrevlex_key(m)), m) for m in f]
    heapq.heapify(heap)
    rem: Poly = {}
    divisors = [(basis.lms[i], basis.polys[i]) for i in active]
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        deadline.check()
        for lm, g in divisors:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                # g is monic, so subtract c * x^q * g.
                for mg, cg in g.items():
                    if mg == lm:
                        continue
                    mm = tuple(a + b for a, b in zip(mg, q))
                    old = f.get(mm)
                    if old is None:
                        f[mm] = -c * cg % p
                        heapq.heappush(heap, (tuple(-k for k in degrevlex_key(mm)), mm))
                    else:
                        new = (old - c * cg) % p
                        if new:
                            f[mm] = new
                        else:
                            del f[mm]
                break
        else:
            rem[m] = c
            if stop_on_unit and not any(m):
                return rem
    return rem


def _spoly(f: Poly, lf: Mono, g: Poly, lg: Mono, p: int) -> Poly:
    l = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(l, lf))
    qg = tuple(a - b for a, b in zip(l, lg))
    out: Poly = {}
    for m, c in f.items():
        mm = tuple(a + b for a, b in zip(m, qf))
        out[mm] = c
    for m, c in g.items():
        mm = tuple(a + b for a, b in zip(m, qg))
        v = (out.get(mm, 0) - c) % p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _update(basis: _Basis, G: list[int], B: list[tuple[int, int]], h: int):
    lms = basis.lms
    lh = lms[h]
    C = [(h, g) for g in G]
    D: list[tuple[int, int]] = []
    while C:
        _, g1 = C.pop(0)
        l1 = _lcm(lh, lms[g1])
        if _coprime(lh, lms[g1]) or not any(
            _divides(_lcm(lh, lms[g2]), l1) for _, g2 in C + D
        ):
            D.append((h, g1))
    E = [(a, b) for a, b in D if not _coprime(lh, lms[b])]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(lms[g1], lms[g2])
        if (
            _divides(lh, l12)
            and _lcm(lms[g1], lh) != l12
            and _lcm(lh, lms[g2]) != l12
        ):
            continue
        B_new.append((g1, g2))
    B_new.extend(E)
    G_new = [g for g in G if not _divides(lh, lms[g])]
    G_new.append(h)
    return G_new, B_new


def _to_dicts(polys: Sequence[MultiPoly]) -> tuple[int, tuple[str, ...], list[Poly]]:
    if not polys:
        raise ValueError("empty generator list")
    F = polys[0].field
    if not isinstance(F, PrimeField):
        raise TypeError("Groebner bases are computed over prime fields only; specialize first")
    return F.p, polys[0].variables, [{m: c % F.p for m, c in f.terms.items() if c % F.p} for f in polys]


def buchberger(gens: Sequence[Poly], p: int, budget: float | None = None,
               stop_on_unit: bool = True) -> list[Poly]:
    """Reduced Groebner basis of the ideal generated by ``gens`` (dict form)."""
    deadline = _Deadline(budget)
    gens = [_monic(g, p) for g in gens if g]
    if not gens:
        return []
    for g in gens:
        if len(g) == 1 and not any(next(iter(g))):
            return [g]
    basis = _Basis(p)
    G: list[int] = []
    B: list[tuple[int, int]] = []
    # Feed generators in increasing order of leading monomial.
    for g in sorted(gens, key=lambda f: degrevlex_key(_lm(f))):
        r = _reduce(g, basis, G, p, deadline)
        if not r:
            continue
        r = _monic(r, p)
        h = basis.add(r)
        if stop_on_unit and not any(basis.lms[h]):
            return [{basis.lms[h]: 1}]
        G, B = _update(basis, G, B, h)
    while B:
        deadline.check()
        # Normal strategy: smallest lcm first, ties broken by pair ids.
        best = min(
            range(len(B)),
            key=lambda k: (degrevlex_key(_lcm(basis.lms[B[k][0]], basis.lms[B[k][1]])), B[k]),
        )
        a, b = B.pop(best)
        s = _spoly(basis.polys[a], basis.lms[a], basis.polys[b], basis.lms[b], p)
        r = _reduce(s, basis, G, p, deadline, stop_on_unit)
        if not r:
            continue
        r = _monic(r, p)
        h = basis.add(r)
        if not any(basis.lms[h]):
            if stop_on_unit:
                return [{basis.lms[h]: 1}]
        G, B = _update(basis, G, B, h)
    return _interreduce(basis, G, p, deadline)


def _interreduce(basis: _Basis, G: list[int], p: int, deadline: _Deadline) -> list[Poly]:
    lms = basis.lms
    minimal = [
        g for g in G
        if not any(h != g and _divides(lms[h], lms[g]) and (lms[h] != lms[g] or h < g) for h in G)
    ]
    out: list[Poly] = []
    for g in minimal:
        others = [h for h in minimal if h != g]
        tail = dict(basis.polys[g])
        lead = lms[g]
        c = tail.pop(lead)
        red = _reduce(tail, basis, others, p, deadline)
        red[lead] = c
        out.append(_monic(red, p))
    out.sort(key=lambda f: degrevlex_key(_lm(f)), reverse=True)
    return out


def normal_form_dict(f: Poly, gb: Sequence[Poly], p: int) -> Poly:
    basis = _Basis(p)
    ids = [basis.add(g) for g in gb]
    return _reduce(f, basis, ids, p, _Deadline(None))


# ------------------------------------------------------------------ public API

def _as_polys(ideal) -> list[MultiPoly]:
    return list(ideal.generators) if isinstance(ideal, PolyIdeal) else list(ideal)


def groebner_basis(ideal, budget: float | None = None) -> list[MultiPoly]:
    """Reduced degrevlex Groebner basis over the ideal's prime field."""
    polys = _as_polys(ideal)
    p, variables, dicts = _to_dicts(polys)
    F = polys[0].field
    gb = buchberger(dicts, p, budget, stop_on_unit=False)
    return [MultiPoly(F, variables, g) for g in gb]


def contains_one(ideal, budget: float | None = None) -> bool:
    polys = _as_polys(ideal)
    p, _, dicts = _to_dicts(polys)
    gb = buchberger(dicts, p, budget, stop_on_unit=True)
    return any(len(g) == 1 and not any(next(iter(g))) for g in gb)


def normal_form(f: MultiPoly, gb: Sequence[MultiPoly]) -> MultiPoly:
    p, variables, dicts = _to_dicts([f, *gb])
    r = normal_form_dict(dicts[0], dicts[1:], p)
    return MultiPoly(f.field, variables, r)


def ideal_contains(ideal, f: MultiPoly, budget: float | None = None) -> bool:
    polys = _as_polys(ideal)
    p, _, dicts = _to_dicts([f, *polys])
    gb = buchberger(dicts[1:], p, budget, stop_on_unit=True)
    return not normal_form_dict(dicts[0], gb, p)
