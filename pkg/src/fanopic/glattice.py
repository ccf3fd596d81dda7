"""Integral representations of finite groups: invariants, H^1, permutation bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactmat import (
    IntMatrix,
    as_matrix,
    integer_kernel,
    is_unimodular,
    smith_divisors,
)
from .matgroup import MatrixGroup, generate_closure


class NotABasis(ValueError):
    pass


class NotPermuted(ValueError):
    def __init__(self, generator: int, vector: tuple[int, ...]):
        super().__init__(f"generator #{generator} sends {vector} outside the candidate set")
        self.generator = generator
        self.vector = vector


@dataclass(frozen=True)
class GLattice:
    group: MatrixGroup
    basis_labels: tuple[str, ...] = ()

    def __post_init__(self):
        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(self.group.rank))
        if len(labels) != self.group.rank:
            raise ValueError("one label per basis vector is required")
        object.__setattr__(self, "basis_labels", labels)
        # The action is the inclusion of a matrix group, so it is a homomorphism
        # as long as the element list is closed under products.
        for a in self.group.elements:
            for b in self.group.elements:
                if a @ b not in self.group:
                    raise ValueError("group element list is not closed under multiplication")

    @classmethod
    def from_generators(cls, generators, labels: Sequence[str] = (), rank: int | None = None) -> "GLattice":
        return cls(generate_closure(generators, rank=rank), tuple(labels))

    @property
    def rank(self) -> int:
        return self.group.rank

    def restrict(self, subgroup: MatrixGroup) -> "GLattice":
        return GLattice(subgroup, self.basis_labels)


def _stack(blocks: list[IntMatrix], ncols: int) -> IntMatrix:
    rows = [r for b in blocks for r in b.to_rows()]
    return IntMatrix.from_rows(rows, ncols)


def invariant_sublattice(L: GLattice) -> list[tuple[int, ...]]:
    n = L.rank
    ident = IntMatrix.identity(n)
    blocks = [g - ident for g in L.group.elements if g != ident]
    if not blocks:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(_stack(blocks, n))


def _hnf_coordinates(basis: list[tuple[int, ...]], v: Sequence[int]) -> list[int]:
    """Coordinates of ``v`` in a basis that is in row echelon form."""
    v = list(v)
    coords = []
    for b in basis:
        piv = next(i for i, x in enumerate(b) if x)
        c, r = divmod(v[piv], b[piv])
        if r:
            raise ValueError("vector is not in the lattice spanned by the basis")
        coords.append(c)
        if c:
            v = [x - c * y for x, y in zip(v, b)]
    if any(v):
        raise ValueError("vector is not in the lattice spanned by the basis")
    return coords


def cocycle_system(L: GLattice) -> IntMatrix:
    """Stacked constraints f(gh) - f(g) - A_g f(h) = 0 over all ordered pairs.

    Unknowns are the blocks f(g) in element order (block k occupies columns
    k*n .. k*n+n-1).  Duplicate rows are dropped; they do not change the kernel.
    """
    G = L.group
    n, N = L.rank, G.order
    table = G.cayley_table()
    rows: dict[tuple[int, ...], None] = {}
    for gi, A in enumerate(G.elements):
        for hi in range(N):
            ki = table[gi][hi]
            for r in range(n):
                row = [0] * (n * N)
                row[ki * n + r] += 1
                row[gi * n + r] -= 1
                for c in range(n):
                    row[hi * n + c] -= A[r, c]
                t = tuple(row)
                if any(t):
                    rows[t] = None
    if not rows:
        return IntMatrix(0, n * N, ())
    return IntMatrix.from_rows(list(rows), n * N)


def cocycle_lattice(L: GLattice) -> list[tuple[int, ...]]:
    """HNF basis of Z^1, with the normalisation f(identity) = 0 checked."""
    G = L.group
    n = L.rank
    basis = integer_kernel(cocycle_system(L))
    e = G.index(G.identity)
    for v in basis:
        if any(v[e * n:(e + 1) * n]):
            raise AssertionError("cocycle constraints failed to force f(identity) = 0")
    return basis


def coboundary_generators(L: GLattice) -> list[tuple[int, ...]]:
    n = L.rank
    out = []
    for i in range(n):
        vec = []
        for A in L.group.elements:
            col = A.col(i)
            vec.extend(col[r] - int(r == i) for r in range(n))
        out.append(tuple(vec))
    return out


def first_cohomology(L: GLattice) -> list[int]:
    """Elementary divisors (> 1) of H^1(G, L); the empty list means H^1 = 0."""
    if L.group.order == 1:
        return []
    z1 = cocycle_lattice(L)
    if not z1:
        return []
    coords = [_hnf_coordinates(z1, b) for b in coboundary_generators(L)]
    C = IntMatrix.from_rows(coords, len(z1)).T
    divisors = smith_divisors(C)
    if len(divisors) != len(z1):
        raise AssertionError("coboundaries have lower rank than cocycles for a finite group")
    return [d for d in divisors if d != 1]


# ------------------------------------------------------------ permutation bases

def format_cycles(perm: Sequence[int]) -> str:
    """1-indexed cycle notation without fixed points, "()" for the identity."""
    seen = set()
    parts = []
    sep = "" if len(perm) < 10 else " "
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = []
        j = start
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = perm[j]
        parts.append("(" + sep.join(cyc) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Inverse of :func:`format_cycles` for single-digit labels or space-separated ones."""
    perm = list(range(n))
    text = text.strip()
    if text in ("", "()"):
        return tuple(perm)
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        body = chunk.strip("()")
        labels = body.replace(",", " ").split()
        if len(labels) == 1:
            labels = list(labels[0])
        pts = [int(x) - 1 for x in labels]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return tuple(perm)


def verify_permutation_basis(L: GLattice, candidate: Sequence[Sequence[int]],
                             generators: Sequence[IntMatrix] | None = None) -> list[tuple[int, ...]]:
    """Permutations of the candidate induced by each generator.

    ``perm[i] = j`` means the generator sends candidate ``i`` to candidate ``j``.
    """
    cand = [tuple(int(x) for x in v) for v in candidate]
    if len(cand) != L.rank:
        raise NotABasis(f"need {L.rank} vectors, got {len(cand)}")
    if not is_unimodular(IntMatrix.from_columns(cand, L.rank)):
        raise NotABasis("transition matrix is not unimodular")
    where = {v: i for i, v in enumerate(cand)}
    gens = list(generators) if generators is not None else L.group.generators
    out = []
    for gi, A in enumerate(gens):
        A = as_matrix(A)
        perm = []
        for v in cand:
            w = A @ v
            if w not in where:
                raise NotPermuted(gi, v)
            perm.append(where[w])
        out.append(tuple(perm))
    return out


def blowup_picard_action(base_action, exceptional_permutation: Sequence[int]) -> IntMatrix:
    """Block matrix ``base ⊕ P`` with ``P e_j = e_{perm[j]}`` on the exceptional classes."""
    B = as_matrix(base_action)
    m, k = B.nrows, len(exceptional_permutation)
    n = m + k
    entries = [0] * (n * n)
    for i in range(m):
        for j in range(m):
            entries[i * n + j] = B[i, j]
    for j, t in enumerate(exceptional_permutation):
        entries[(m + t) * n + (m + j)] = 1
    return IntMatrix(n, n, tuple(entries))


def direct_sum(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    m, k = A.nrows, B.nrows
    n = m + k
    entries = [0] * (n * n)
    for i in range(m):
        for j in range(m):
            entries[i * n + j] = A[i, j]
    for i in range(k):
        for j in range(k):
            entries[(m + i) * n + m + j] = B[i, j]
    return IntMatrix(n, n, tuple(entries))
