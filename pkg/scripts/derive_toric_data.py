"""Derive fans, irrelevant monomials and nef rays for the toric families.

The rays of a toric variety are the integer kernel of its grading matrix.  For
smooth Fano toric varieties the maximal cones are spanned by the vertex sets of
the facets of the ray polytope.  Everything is validated exactly; scipy only
proposes facets.

Usage:  python3 scripts/derive_toric_data.py [--json out.json]
"""

from __future__ import annotations

import argparse
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull

from fanopic.exactmat import IntMatrix, integer_kernel, is_unimodular, solve_integer
from fanopic.glattice import format_cycles, parse_cycles
from fanopic.matgroup import generate_closure
from fanopic.toric import CoxPresentation, induced_picard_matrix, preserves_irrelevant_ideal


@dataclass
class ToricInput:
    family: str
    coordinates: str
    grading: list[list[int]]
    basis: str
    permutations: dict[str, str]
    notes: list[str] = field(default_factory=list)


INPUTS = [
    ToricInput("3.31", "s0 s1 t0 t1 x y",
               [[1, 1, 0, 0, -1, 0], [0, 0, 1, 1, -1, 0], [0, 0, 0, 0, 1, 1]],
               "s0 t0 y", {"sigma": "(13)(24)"}),
    ToricInput("4.10", "u v s0 s1 t0 t1 w",
               [[1, -1, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, -1, 1], [0, 0, 1, 1, 0, 0, 0], [0, 1, 0, 0, 0, 1, -1]],
               "u v s0 t0", {"sigma": "(15)(26)"}),
    # The printed permutation (45) is incompatible with this grading; (45)(67)
    # reproduces the printed matrix.
    ToricInput("4.12", "s0 s1 x y2 y3 u v",
               [[1, 1, -1, 0, 0, 0, 0], [0, 0, -1, 0, 0, 1, 1], [0, 0, 1, 1, 0, -1, 0], [0, 0, 1, 0, 1, 0, -1]],
               "s0 x y2 y3", {"sigma": "(45)(67)"}, ["printed sigma (45) is grading-incompatible"]),
    # Row 5 differs from the stated grading in two entries (x: 1 -> -1, y: 0 -> 1).
    ToricInput("5.2", "s0 s1 t2 t3 x y u v",
               [[1, 1, 0, 0, -1, 0, 0, 0], [0, 0, 1, 1, 0, -1, 0, 0], [0, 0, 0, 1, 1, 0, -1, 0],
                [0, 0, 1, 0, 1, 0, 0, -1], [0, 0, -1, -1, -1, 1, 1, 1]],
               "s0 t2 t3 x y", {"sigma": "(34)(78)"}, ["printed row 5 gives a zero ray"]),
    ToricInput("5.3", "u v w x y0 y1 s0 s1",
               [[1, -1, 1, 0, 0, 0, 0, 0], [0, 0, 0, 1, -1, 1, 0, 0], [0, 0, 1, -1, 1, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 1, 1], [0, 1, -1, 1, 0, 0, 0, 0]],
               "u v w y1 s0", {"g": "(14)(25)(36)", "sigma": "(12)(36)(45)", "tau": "(153)(264)"}),
]

PRINTED_GRADING_52_ROW5 = [0, 0, -1, -1, 1, 0, 1, 1]


def rays_from_grading(grading: list[list[int]]) -> list[tuple[int, ...]]:
    """Row j of the kernel-basis matrix is the ray of coordinate j."""
    K = integer_kernel(IntMatrix.from_rows(grading))
    return [tuple(k[j] for k in K) for j in range(len(grading[0]))]


def maximal_cones(rays: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    dim = len(rays[0])
    pts = np.array(rays, dtype=float)
    hull = ConvexHull(pts)
    cones = set()
    for eq in hull.equations:
        if eq[-1] >= -1e-9:
            raise ValueError("origin is not interior to the ray polytope")
        tight = tuple(i for i in range(len(rays)) if abs(eq[:-1] @ pts[i] + eq[-1]) < 1e-9)
        cones.add(tight)
    out = sorted(cones)
    for c in out:
        if len(c) != dim:
            raise ValueError(f"facet {c} is not simplicial")
        if not is_unimodular(IntMatrix.from_rows([rays[i] for i in c])):
            raise ValueError(f"cone {c} is not smooth")
    # Exact check that each facet hyperplane supports the polytope.
    for c in out:
        M = IntMatrix.from_rows([rays[i] for i in c])
        normal = _facet_normal(M)
        if any(sum(a * b for a, b in zip(normal, r)) > 1 for r in rays):
            raise ValueError("facet proposal fails exact support check")
    return out


def _facet_normal(M: IntMatrix) -> list[Fraction]:
    # u with <u, v_i> = 1 for the cone generators.
    n = M.nrows
    a = [[Fraction(M[i, j]) for j in range(n)] + [Fraction(1)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def irrelevant_monomials(coords: list[str], cones) -> list[list[str]]:
    return [[c for i, c in enumerate(coords) if i not in cone] for cone in cones]


def nef_rays(cox: CoxPresentation) -> list[tuple[int, ...]]:
    """Extremal rays of the intersection over maximal cones of cone(deg x_i : x_i not in the cone)."""
    rho = cox.rank
    B = cox.basis_matrix()
    ineqs = set()
    for mono in cox.irrelevant_monomials:
        cols = [cox.class_in_basis(cox.degree(cox.coordinates.index(v))) for v in mono]
        C = IntMatrix.from_columns(cols, rho)
        # Simplicial cone: inequalities are the rows of C^{-1} (scaled to integers).
        inv = _rational_inverse(C)
        for row in inv:
            den = 1
            for x in row:
                den = den * x.denominator // np.gcd(den, x.denominator)
            ineqs.add(tuple(int(x * den) for x in row))
    ineqs = sorted(ineqs)
    rays = set()
    for subset in itertools.combinations(ineqs, rho - 1):
        K = integer_kernel(IntMatrix.from_rows(subset, rho))
        if len(K) != 1:
            continue
        for v in (K[0], tuple(-x for x in K[0])):
            if all(sum(a * b for a, b in zip(q, v)) >= 0 for q in ineqs):
                rays.add(v)
    return sorted(rays)


def _rational_inverse(C: IntMatrix) -> list[list[Fraction]]:
    n = C.nrows
    a = [[Fraction(C[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def permuted_basis_search(group_mats, candidates):
    """A unimodular basis drawn from G-orbits of candidate vectors, or None."""
    G = generate_closure(group_mats)
    orbits = []
    seen = set()
    for v in candidates:
        if v in seen:
            continue
        orb = sorted({g @ v for g in G.elements})
        seen |= set(orb)
        orbits.append(orb)
    rho = G.rank
    for k in range(1, len(orbits) + 1):
        for combo in itertools.combinations(orbits, k):
            vecs = [v for o in combo for v in o]
            if len(vecs) != rho:
                continue
            if is_unimodular(IntMatrix.from_columns(vecs, rho)):
                return vecs
    return None


def box_basis_search(group_mats, radius: int = 2):
    """Fallback: orbits of small vectors, cheapest first, combined until unimodular.

    Cost favours few negative entries and small absolute values, so the basis
    found is as close to effective classes as the box allows.
    """
    G = generate_closure(group_mats)
    rho = G.rank
    seen = set()
    orbits = []
    for v in itertools.product(range(-radius, radius + 1), repeat=rho):
        if not any(v) or v in seen:
            continue
        orb = sorted({g @ v for g in G.elements})
        seen |= set(orb)
        if len(orb) <= rho:
            orbits.append(orb)

    def cost(orb):
        v = orb[0]
        return (sum(1 for x in v if x < 0), sum(abs(x) for x in v), orb)

    orbits.sort(key=cost)
    best = None
    for k in range(1, rho + 1):
        for combo in itertools.combinations(range(len(orbits)), k):
            if sum(len(orbits[i]) for i in combo) != rho:
                continue
            c = tuple(cost(orbits[i])[:2] for i in combo)
            total = (sum(x[0] for x in c), sum(x[1] for x in c))
            if best is not None and total >= best[0]:
                continue
            vecs = [v for i in combo for v in orbits[i]]
            if is_unimodular(IntMatrix.from_columns(vecs, rho)):
                best = (total, vecs)
    return best[1] if best else None


def derive(inp: ToricInput) -> dict:
    coords = inp.coordinates.split()
    rays = rays_from_grading(inp.grading)
    cones = maximal_cones(rays)
    irr = irrelevant_monomials(coords, cones)
    cox = CoxPresentation(tuple(coords), IntMatrix.from_rows(inp.grading),
                          tuple(coords.index(b) for b in inp.basis.split()), tuple(map(tuple, irr)))
    mats = {}
    for name, cyc in inp.permutations.items():
        perm = parse_cycles(cyc, len(coords))
        M = induced_picard_matrix(cox, perm)
        assert preserves_irrelevant_ideal(cox, perm), (inp.family, name)
        mats[name] = M
    nef = nef_rays(cox)
    lattice_action = [M.T for M in mats.values()]
    nef_is_basis = len(nef) == cox.rank and is_unimodular(IntMatrix.from_columns(nef, cox.rank))
    cand = nef + [cox.class_in_basis(cox.degree(j)) for j in range(len(coords))]
    basis = nef if nef_is_basis else permuted_basis_search(lattice_action, cand)
    basis_source = "nef_rays" if nef_is_basis else "orbit_search"
    if basis is None:
        for radius in (1, 2):
            basis = box_basis_search(lattice_action, radius)
            if basis:
                break
        basis_source = "box_search"
    return {
        "family": inp.family,
        "coordinates": coords,
        "grading": inp.grading,
        "rays": [list(r) for r in rays],
        "maximal_cones": [[coords[i] for i in c] for c in cones],
        "irrelevant_monomials": irr,
        "picard_basis": inp.basis.split(),
        "permutations": inp.permutations,
        "matrices": {k: M.to_rows() for k, M in mats.items()},
        "anticanonical": list(cox.anticanonical()),
        "nef_rays": [list(v) for v in nef],
        "nef_rays_form_basis": nef_is_basis,
        "permuted_basis": [list(v) for v in basis] if basis else None,
        "permuted_basis_source": basis_source,
        "notes": inp.notes,
    }


def printed_52_defect() -> dict:
    grading = [r[:] for r in INPUTS[3].grading]
    grading[4] = PRINTED_GRADING_52_ROW5
    rays = rays_from_grading(grading)
    B = IntMatrix.from_columns([[grading[i][j] for i in range(5)] for j in (0, 2, 3, 4, 5)], 5)
    return {"zero_rays": [c for c, r in zip(INPUTS[3].coordinates.split(), rays) if not any(r)],
            "basis_det": B.det()}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", default="scripts/derived/toric.json", help="write derived data to this path")
    args = ap.parse_args(argv)
    out = [derive(i) for i in INPUTS]
    for d in out:
        print(f"{d['family']}: {len(d['maximal_cones'])} maximal cones, nef rays {d['nef_rays']}, "
              f"-K = {d['anticanonical']}, permuted basis {d['permuted_basis']}")
        for k, M in d["matrices"].items():
            print(f"   {k} = {d['permutations'][k]} -> {M}")
    print("printed 5.2 grading:", printed_52_defect())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(out, fh, indent=1)


if __name__ == "__main__":
    main()
