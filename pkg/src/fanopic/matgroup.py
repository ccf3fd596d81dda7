"""Finite groups of integer matrices: closure, subgroups, structure tags."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactmat import IntMatrix, as_matrix

DEFAULT_CAP = 10_000


class CapExceeded(RuntimeError):
    pass


class NotInvertibleOverZ(ValueError):
    pass


@dataclass(frozen=True)
class MatrixGroup:
    rank: int
    elements: tuple[IntMatrix, ...]
    generator_indices: tuple[int, ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, m) -> bool:
        return as_matrix(m) in self._index

    def index(self, m: IntMatrix) -> int:
        return self._index[m]

    @property
    def generators(self) -> list[IntMatrix]:
        return [self.elements[i] for i in self.generator_indices]

    @property
    def identity(self) -> IntMatrix:
        return IntMatrix.identity(self.rank)

    def element_set(self) -> frozenset[IntMatrix]:
        return frozenset(self.elements)

    def cayley_table(self) -> list[list[int]]:
        idx = self._index
        return [[idx[a @ b] for b in self.elements] for a in self.elements]


def _check_generator(m: IntMatrix, n: int) -> None:
    if m.shape != (n, n):
        raise ValueError(f"generator of shape {m.shape}, expected {(n, n)}")
    if m.det() not in (1, -1):
        raise NotInvertibleOverZ(f"generator {m.to_rows()} has det {m.det()}")


def generate_closure(generators: Iterable, cap: int = DEFAULT_CAP, rank: int | None = None) -> MatrixGroup:
    """BFS closure under right multiplication by the generators.

    For a finite set of invertible matrices the monoid they generate is already
    a group, so no explicit inverses are needed.
    """
    gens = [as_matrix(g) for g in generators]
    if rank is None:
        if not gens:
            raise ValueError("rank is required for an empty generator list")
        rank = gens[0].nrows
    for g in gens:
        _check_generator(g, rank)
    ident = IntMatrix.identity(rank)
    elements = [ident]
    seen = {ident: 0}
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = a @ g
            if b not in seen:
                if len(elements) >= cap:
                    raise CapExceeded(f"closure exceeds {cap} elements")
                seen[b] = len(elements)
                elements.append(b)
                queue.append(b)
    gidx = tuple(dict.fromkeys(seen[g] for g in gens))
    return MatrixGroup(rank, tuple(elements), gidx)


def element_order(m: IntMatrix, limit: int = DEFAULT_CAP) -> int:
    ident = IntMatrix.identity(m.nrows)
    p, k = m, 1
    while p != ident:
        p = p @ m
        k += 1
        if k > limit:
            raise CapExceeded("element order exceeds cap")
    return k


# ---------------------------------------------------------------- structure

@dataclass(frozen=True)
class StructureTag:
    name: str
    order: int

    def __str__(self) -> str:
        return self.name

    @property
    def pretty(self) -> str:
        return PRETTY.get(self.name, self.name)


def _sig(order, abelian, orders: dict[int, int], center):
    return (order, abelian, tuple(sorted(orders.items())), center)


# Signatures of the catalog groups: element-order multiset and center order.
CATALOG: dict[tuple, str] = {
    _sig(1, True, {1: 1}, 1): "trivial",
    _sig(2, True, {1: 1, 2: 1}, 2): "Z2",
    _sig(3, True, {1: 1, 3: 2}, 3): "Z3",
    _sig(4, True, {1: 1, 2: 3}, 4): "Z2xZ2",
    _sig(4, True, {1: 1, 2: 1, 4: 2}, 4): "Z4",
    _sig(6, False, {1: 1, 2: 3, 3: 2}, 1): "S3",
    _sig(6, True, {1: 1, 2: 1, 3: 2, 6: 2}, 6): "Z6",
    _sig(8, True, {1: 1, 2: 7}, 8): "Z2xZ2xZ2",
    _sig(8, False, {1: 1, 2: 5, 4: 2}, 2): "D4",
    _sig(8, False, {1: 1, 2: 1, 4: 6}, 2): "Q8",
    _sig(12, False, {1: 1, 2: 3, 3: 8}, 1): "A4",
    _sig(12, False, {1: 1, 2: 1, 3: 2, 4: 6, 6: 2}, 2): "Dic3",
    _sig(12, False, {1: 1, 2: 7, 3: 2, 6: 2}, 2): "Z2xS3",
    _sig(24, False, {1: 1, 2: 9, 3: 8, 4: 6}, 1): "S4",
}

CATALOG_ORDERS = {name: sig[0] for sig, name in CATALOG.items()}

PRETTY = {
    "trivial": "0",
    "Z2": "Z/2",
    "Z3": "Z/3",
    "Z4": "Z/4",
    "Z6": "Z/6",
    "Z2xZ2": "(Z/2)^2",
    "Z2xZ2xZ2": "(Z/2)^3",
    "Z2xS3": "Z/2 × S3",
}


def tag_from_name(name: str) -> StructureTag:
    if name in CATALOG_ORDERS:
        return StructureTag(name, CATALOG_ORDERS[name])
    if name.startswith("other(") and name.endswith(")"):
        return StructureTag(name, int(name[6:-1]))
    raise ValueError(f"unknown structure tag {name!r}")


def group_signature(group: MatrixGroup) -> tuple:
    els = group.elements
    table = group.cayley_table()
    n = len(els)
    commuting = [[table[i][j] == table[j][i] for j in range(n)] for i in range(n)]
    abelian = all(all(r) for r in commuting)
    center = sum(1 for r in commuting if all(r))
    orders = Counter(element_order(m) for m in els)
    return _sig(n, abelian, dict(orders), center)


def identify_structure(group: MatrixGroup) -> StructureTag:
    sig = group_signature(group)
    name = CATALOG.get(sig)
    if name is None:
        return StructureTag(f"other({group.order})", group.order)
    return StructureTag(name, group.order)


def enumerate_subgroups(group: MatrixGroup) -> list[MatrixGroup]:
    """All subgroups generated by at most two elements, deduplicated, sorted by order."""
    els = group.elements
    found: dict[frozenset, MatrixGroup] = {}

    def add(gens):
        sub = generate_closure(gens, rank=group.rank)
        key = sub.element_set()
        if key not in found:
            found[key] = sub
        return key

    add([])
    cyclic = [add([g]) for g in els]
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            if els[j] in cyclic[i] or els[i] in cyclic[j]:
                continue
            add([els[i], els[j]])
    # Stable order: by size, then by sorted element indices in the parent.
    return sorted(
        found.values(),
        key=lambda s: (s.order, sorted(group.index(m) for m in s.elements)),
    )


def conjugate(group: MatrixGroup, P: IntMatrix, P_inv: IntMatrix) -> MatrixGroup:
    return MatrixGroup(
        group.rank,
        tuple(P @ m @ P_inv for m in group.elements),
        group.generator_indices,
    )


def permutation_matrices(perms: Sequence[Sequence[int]]) -> list[IntMatrix]:
    return [IntMatrix.permutation(p) for p in perms]
