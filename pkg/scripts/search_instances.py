"""Randomized search for symmetric coefficient instances that pass the checks.

Families 2.6 (both models), 3.1 and 3.7 are only specified up to a symmetry
condition on their coefficients.  This script draws small random integer
coefficients obeying that symmetry, and keeps the first draw whose variety is
certified smooth on three primes and invariant under the family's maps.

Usage:  python3 scripts/search_instances.py [--seed 1] [--out scripts/derived/instances.json]
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
from dataclasses import dataclass

from fanopic.geometry import (
    AmbientMap,
    MultiHomogeneousVariety,
    MultiProjectiveSpace,
    is_invariant,
    smoothness_certificate,
)

P2P2 = MultiProjectiveSpace((("x0", "x1", "x2"), ("y0", "y1", "y2")))
P1CUBED = MultiProjectiveSpace((("x0", "x1"), ("y0", "y1"), ("z0", "z1")))
SWAP_P2P2 = {"x0": "y0", "x1": "y1", "x2": "y2", "y0": "x0", "y1": "x1", "y2": "x2"}
W_EQ = "x0*y0 + x1*y1 + x2*y2"


@dataclass
class SearchConfig:
    seed: int = 1
    coeff_range: int = 3
    max_tries: int = 200
    primes: tuple[int, ...] = (10007, 10009, 10037)


def _term(c: int, mono: str) -> str:
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{c}*{mono}"


def _join(terms: list[str]) -> str:
    return (" + ".join(terms) or "0").replace("+ -", "- ")


def quad_monomials(v: tuple[str, str, str]) -> list[str]:
    a, b, c = v
    return [f"{a}^2", f"{b}^2", f"{c}^2", f"{a}*{b}", f"{b}*{c}", f"{a}*{c}"]


def symmetric_22_form(rng: random.Random, r: int) -> tuple[str, list[list[int]]]:
    """sum a_ij m_i(x) m_j(y) with a symmetric 6x6."""
    a = [[0] * 6 for _ in range(6)]
    for i in range(6):
        for j in range(i, 6):
            a[i][j] = a[j][i] = rng.randint(-r, r)
    mx = quad_monomials(("x0", "x1", "x2"))
    my = quad_monomials(("y0", "y1", "y2"))
    terms = [_term(a[i][j], f"{mx[i]}*{my[j]}") for i in range(6) for j in range(6) if a[i][j]]
    return _join(terms), a


def symmetric_222_form(rng: random.Random, r: int) -> tuple[str, dict[str, int]]:
    """An S3-invariant (2,2,2) form on (P1)^3: coefficients depend on the multiset of factor monomials."""
    kinds = ["0^2", "01", "1^2"]
    coeff = {}
    for combo in itertools.combinations_with_replacement(range(3), 3):
        coeff[combo] = rng.randint(-r, r)

    def mono(var: str, k: int) -> str:
        return {0: f"{var}0^2", 1: f"{var}0*{var}1", 2: f"{var}1^2"}[k]

    terms = []
    for i, j, k in itertools.product(range(3), repeat=3):
        c = coeff[tuple(sorted((i, j, k)))]
        if c:
            terms.append(_term(c, f"{mono('x', i)}*{mono('y', j)}*{mono('z', k)}"))
    return _join(terms), {"".join(kinds[t] for t in k): v for k, v in coeff.items()}


def symmetric_bilinear(rng: random.Random, r: int) -> tuple[str, list[list[int]]]:
    A = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            A[i][j] = A[j][i] = rng.randint(-r, r)
    terms = [_term(A[i][j], f"x{i}*y{j}") for i in range(3) for j in range(3) if A[i][j]]
    return _join(terms), A


def _passes(amb, eqs, maps, primes) -> bool:
    try:
        V = MultiHomogeneousVariety.from_strings(amb, eqs)
    except ValueError:
        return False
    if not smoothness_certificate(V, primes, budget=30).certified:
        return False
    return all(is_invariant(V, AmbientMap.from_strings(amb, g), primes[0]) for g in maps)


def search_26a(cfg: SearchConfig, rng: random.Random) -> dict:
    for attempt in range(cfg.max_tries):
        eq, a = symmetric_22_form(rng, cfg.coeff_range)
        if _passes(P2P2, [eq], [SWAP_P2P2], cfg.primes):
            return {"equation": eq, "a": a, "attempts": attempt + 1}
    raise RuntimeError("no 2.6(a) instance found")


def search_26b(cfg: SearchConfig, rng: random.Random) -> dict:
    for attempt in range(cfg.max_tries):
        eq, a = symmetric_22_form(rng, cfg.coeff_range)
        if _passes(P2P2, [eq, W_EQ], [SWAP_P2P2], cfg.primes):
            return {"equation": eq, "a": a, "attempts": attempt + 1}
    raise RuntimeError("no 2.6(b) instance found")


def search_31(cfg: SearchConfig, rng: random.Random) -> dict:
    sigma = {"x0": "y0", "x1": "y1", "y0": "x0", "y1": "x1"}
    tau = {"x0": "y0", "x1": "y1", "y0": "z0", "y1": "z1", "z0": "x0", "z1": "x1"}
    for attempt in range(cfg.max_tries):
        eq, coeff = symmetric_222_form(rng, cfg.coeff_range)
        if _passes(P1CUBED, [eq], [sigma, tau], cfg.primes):
            return {"equation": eq, "coefficients": coeff, "attempts": attempt + 1}
    raise RuntimeError("no 3.1 instance found")


def search_37(cfg: SearchConfig, rng: random.Random) -> dict:
    for attempt in range(cfg.max_tries):
        ea, A = symmetric_bilinear(rng, cfg.coeff_range)
        eb, B = symmetric_bilinear(rng, cfg.coeff_range)
        if _passes(P2P2, [W_EQ, ea, eb], [SWAP_P2P2], cfg.primes):
            return {"equations": [W_EQ, ea, eb], "A": A, "B": B, "attempts": attempt + 1}
    raise RuntimeError("no 3.7 instance found")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=SearchConfig.seed)
    ap.add_argument("--out", default="scripts/derived/instances.json")
    args = ap.parse_args(argv)
    cfg = SearchConfig(seed=args.seed)
    out = {}
    for fam, fn in [("2.6a", search_26a), ("2.6b", search_26b), ("3.1", search_31), ("3.7", search_37)]:
        rng = random.Random(f"{cfg.seed}:{fam}")
        out[fam] = fn(cfg, rng)
        print(fam, "found after", out[fam]["attempts"], "draws")
    out["config"] = {"seed": cfg.seed, "coeff_range": cfg.coeff_range, "primes": list(cfg.primes)}
    with open(args.out, "w") as fh:
        json.dump(out, fh, indent=1)


if __name__ == "__main__":
    main()
