from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fanopic.polyring import (
    OMEGA,
    QQ,
    SQRT2,
    BadPrime,
    ChartTimeout,
    MultiPoly,
    PolyParseError,
    contains_one,
    groebner_basis,
    ideal_contains,
    infer_field,
    normal_form,
    parse_poly,
    prime_field_for,
    valid_primes,
)

VARS = ("x", "y", "z")
P = 10007
SYMS = sympy.symbols(VARS)


def to_sympy(f: MultiPoly):
    return sum(sympy.Integer(int(c)) * sympy.Mul(*[s**e for s, e in zip(SYMS, m)]) for m, c in f.terms.items())


def sympy_terms(expr, p=None) -> dict:
    poly = sympy.Poly(expr, *SYMS)
    out = {}
    for m, c in poly.terms():
        c = int(c) % p if p else Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
        if c:
            out[m] = c
    return out


monomials = st.tuples(*[st.integers(0, 2)] * 3)
polys = st.dictionaries(monomials, st.integers(-5, 5).filter(bool), min_size=1, max_size=4)


def from_dict(d, field=QQ) -> MultiPoly:
    return MultiPoly(field, VARS, {m: field.convert(c) for m, c in d.items()})


def show(f: MultiPoly) -> str:
    parts = []
    for m, c in f.terms.items():
        mono = "*".join(f"{v}^{e}" for v, e in zip(VARS, m) if e)
        parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts) or "0"


@given(polys)
def test_parse_round_trip_against_sympy(d):
    text = show(from_dict(d))
    f = parse_poly(text, VARS, QQ)
    assert {m: Fraction(c) for m, c in f.terms.items()} == sympy_terms(sympy.sympify(text))


def test_parse_grammar_examples():
    f = parse_poly("2x^2 y - 3(x + y)z + 1", VARS)
    assert f.terms == {(2, 1, 0): 2, (1, 0, 1): -3, (0, 1, 1): -3, (0, 0, 0): 1}
    assert parse_poly("-x + (-y)", VARS).terms == {(1, 0, 0): -1, (0, 1, 0): -1}
    # A sign is accepted only at the start of an expression.
    for bad in ("", "x +", "x^y", "w", "x / y", "(x", "x + -y"):
        with pytest.raises(PolyParseError):
            parse_poly(bad, VARS)


def test_extension_symbols():
    assert infer_field(["x + sqrt2*y"]) == SQRT2
    assert infer_field(["x", "omega*y"]) == OMEGA
    with pytest.raises(PolyParseError):
        infer_field(["sqrt2*x", "omega*y"])
    s = parse_poly("sqrt2", (), SQRT2)
    assert (s * s).terms[()] == SQRT2.convert(2)
    w = parse_poly("omega", (), OMEGA)
    assert (w * w * w).terms[()] == OMEGA.one
    assert (w * w + w + 1).is_zero()


def test_quadratic_field_inverse():
    a = SQRT2.convert((3, 2))
    assert SQRT2.mul(a, SQRT2.inv(a)) == SQRT2.one
    b = OMEGA.convert((2, -5))
    assert OMEGA.mul(b, OMEGA.inv(b)) == OMEGA.one


def test_prime_filtering():
    # 2 is a square mod p exactly when p = +-1 mod 8.
    assert valid_primes(SQRT2, [10007, 10009, 10037, 10039]) == [10007, 10009, 10039]
    # omega needs p = 1 mod 3.
    assert valid_primes(OMEGA, [10007, 10009, 10037]) == [10009]
    assert valid_primes(QQ, [10007, 10008]) == [10007]
    with pytest.raises(BadPrime):
        prime_field_for(SQRT2, 10037)


@given(st.sampled_from([10007, 10009, 10039]))
def test_sqrt2_image_squares_to_two(p):
    F = prime_field_for(SQRT2, p)
    assert F.root * F.root % p == 2


def _sympy_gb(fs, p):
    G = sympy.groebner([to_sympy(f) for f in fs], *SYMS, order="grevlex", modulus=p)
    out = set()
    for g in G.exprs:
        t = sympy_terms(g, p)
        lead = sympy.Poly(g, *SYMS).LC(order="grevlex")
        inv = pow(int(lead) % p, -1, p)
        out.add(frozenset((m, c * inv % p) for m, c in t.items()))
    return out


@given(st.lists(polys, min_size=1, max_size=3))
def test_reduced_groebner_basis_matches_sympy(ds):
    fs = [from_dict(d).specialize(P) for d in ds]
    gb = groebner_basis(fs)
    ours = {frozenset((m, int(c) % P) for m, c in g.terms.items()) for g in gb}
    assert ours == _sympy_gb([from_dict(d) for d in ds], P)


@given(st.lists(polys, min_size=1, max_size=3), st.lists(polys, min_size=1, max_size=3))
def test_ideal_membership_of_combinations(gens, mults):
    fs = [from_dict(d).specialize(P) for d in gens]
    combo = fs[0] * 0
    for f, d in zip(fs, mults):
        combo = combo + f * from_dict(d).specialize(P)
    assert ideal_contains(fs, combo)
    assert normal_form(combo, groebner_basis(fs)).is_zero()


def _f5_points(fs):
    F = fs[0].field
    return [pt for pt in product(range(5), repeat=3)
            if all(F.is_zero(f.evaluate(dict(zip(VARS, pt)))) for f in fs)]


@given(st.lists(polys, min_size=1, max_size=3))
def test_unit_ideal_has_no_points_over_f5(ds):
    fs = [from_dict(d).specialize(5) for d in ds]
    # Only one direction is checkable: a point over F_5 rules out the unit ideal.
    if contains_one(fs):
        assert _f5_points(fs) == []


def test_unit_ideal_examples():
    f = [from_dict({(1, 0, 0): 1, (0, 0, 0): -1}).specialize(5), from_dict({(1, 0, 0): 1}).specialize(5)]
    assert contains_one(f)
    assert not contains_one([from_dict({(2, 0, 0): 1, (0, 0, 0): 1}).specialize(5)])


def test_budget_raises_timeout():
    fs = [parse_poly(t, VARS, QQ).specialize(P) for t in
          ("x^5 + y^4 + z^3 - 1", "x^3 + y^3 + z^2 - 1", "x*y*z + x^2 + y^2 - 3")]
    with pytest.raises(ChartTimeout):
        groebner_basis(fs, budget=1e-9)


def test_specialize_rejects_bad_prime():
    with pytest.raises(BadPrime):
        parse_poly("sqrt2*x", VARS).specialize(10037)
