"""Cox-ring audits for toric varieties: induced Picard matrices and irrelevant ideals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactmat import IntMatrix, as_matrix, is_unimodular, solve_integer


class Incompatible(ValueError):
    def __init__(self, coordinate: int, message: str = ""):
        super().__init__(message or f"permutation is not compatible with the grading at coordinate {coordinate}")
        self.coordinate = coordinate


@dataclass(frozen=True)
class CoxPresentation:
    coordinates: tuple[str, ...]
    grading: IntMatrix
    picard_basis: tuple[int, ...]
    irrelevant_monomials: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        coords = tuple(self.coordinates)
        G = as_matrix(self.grading)
        if G.ncols != len(coords):
            raise ValueError("one grading column per coordinate")
        basis = tuple(self.picard_basis)
        if len(basis) != G.nrows:
            raise ValueError("picard basis must have one coordinate per grading row")
        if not is_unimodular(IntMatrix.from_columns([G.col(j) for j in basis], G.nrows)):
            raise ValueError("picard basis columns are not a Z-basis")
        mons = tuple(tuple(sorted(m, key=coords.index)) for m in self.irrelevant_monomials)
        if not mons:
            raise ValueError("irrelevant ideal needs at least one generator")
        for m in mons:
            if len(set(m)) != len(m) or any(v not in coords for v in m):
                raise ValueError(f"irrelevant monomial {m} is not squarefree in the coordinates")
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "grading", G)
        object.__setattr__(self, "picard_basis", basis)
        object.__setattr__(self, "irrelevant_monomials", mons)

    @property
    def rank(self) -> int:
        return self.grading.nrows

    def degree(self, j: int) -> tuple[int, ...]:
        return self.grading.col(j)

    def basis_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns([self.degree(j) for j in self.picard_basis], self.rank)

    def class_in_basis(self, v: Sequence[int]) -> tuple[int, ...]:
        x = solve_integer(self.basis_matrix(), v)
        if x is None:
            raise ValueError(f"{v} is not an integral class")
        return x

    def anticanonical(self) -> tuple[int, ...]:
        """Sum of all coordinate classes, in basis coordinates."""
        tot = [sum(self.degree(j)[i] for j in range(len(self.coordinates))) for i in range(self.rank)]
        return self.class_in_basis(tot)


def induced_picard_matrix(cox: CoxPresentation, perm: Sequence[int]) -> IntMatrix:
    """Row i is the class of D_{x_perm(b_i)} in the basis, b_i the i-th basis coordinate.

    The linear map L sending each basis class to the class of its image must
    also send every other coordinate's class to the class of that coordinate's
    image; otherwise :class:`Incompatible` names the first offender.
    """
    n = len(cox.coordinates)
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of the coordinates")
    rows = [cox.class_in_basis(cox.degree(perm[b])) for b in cox.picard_basis]
    M = IntMatrix.from_rows(rows, cox.rank)
    # Column convention for the linear map: L(basis_i) = row i.
    L = M.T
    for j in range(n):
        if j in cox.picard_basis:
            continue
        src = cox.class_in_basis(cox.degree(j))
        if L @ src != cox.class_in_basis(cox.degree(perm[j])):
            raise Incompatible(j)
    return M


def preserves_irrelevant_ideal(cox: CoxPresentation, perm: Sequence[int]) -> bool:
    coords = cox.coordinates
    idx = {c: i for i, c in enumerate(coords)}
    original = {frozenset(m) for m in cox.irrelevant_monomials}
    image = {frozenset(coords[perm[idx[v]]] for v in m) for m in cox.irrelevant_monomials}
    return image == original


def parse_coordinate_permutation(cycles: str, n: int) -> tuple[int, ...]:
    from .glattice import parse_cycles

    return parse_cycles(cycles, n)


def compose_permutations(first: Sequence[int], then: Sequence[int]) -> tuple[int, ...]:
    """Apply ``first`` and then ``then``: j -> then[first[j]]."""
    return tuple(then[first[j]] for j in range(len(first)))
