from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanopic.geometry import (
    CERTIFIED,
    SINGULAR,
    AmbientMap,
    MultiHomogeneousVariety,
    MultiProjectiveSpace,
    NoIdentityFactor,
    ShapeMismatch,
    ideal_contains_saturated,
    ideals_equal_saturated,
    irreducibility_flag,
    is_invariant,
    parse_parametrization,
    same_point,
    smoothness_certificate,
    verify_parametrized_curve,
)
from fanopic.polyring import OMEGA, QQ, parse_poly

PRIMES = (10007, 10009, 10037)


def space(*dims, names="xyzwv"):
    return MultiProjectiveSpace(tuple(tuple(f"{names[i]}{j}" for j in range(d + 1)) for i, d in enumerate(dims)))


def variety(dims, eqs, **kw):
    return MultiHomogeneousVariety.from_strings(space(*dims), eqs, **kw)


# One deliberately singular variant per ambient shape used by the shipped data.
MUTATIONS = {
    "P2 line pair": ((2,), ["x0*x1"]),
    "P3 meeting lines": ((3,), ["x0", "x1*x2"]),
    "P4 quadric cone": ((4,), ["x0*x1 + x2*x3"]),
    "P2xP2 rank 2 form": ((2, 2), ["x0*y0 + x1*y1"]),
    "P3xP3 rank 2 form": ((3, 3), ["x0*y0 + x1*y1"]),
    "P1xP1xP1 reducible": ((1, 1, 1), ["x0*y0*z0"]),
    "P1xP1xP2 reducible": ((1, 1, 2), ["x0*y0*z0"]),
    "P2xP2xP2 reducible": ((2, 2, 2), ["x0*y0", "z0"]),
    "P1^4 reducible": ((1, 1, 1, 1), ["x0*y0*z0*w0"]),
}

SMOOTH = {
    "P2 Fermat cubic": ((2,), ["x0^3 + x1^3 + x2^3"]),
    "P4 smooth quadric": ((4,), ["x4^2 + x0*x1 + x2*x3"]),
    "P2xP2 flag variety": ((2, 2), ["x0*y0 + x1*y1 + x2*y2"]),
    "P1xP1 diagonal": ((1, 1), ["x0*y1 - x1*y0"]),
    "P3 two quadrics": ((3,), ["x0^2 + x1^2 + x2^2 + x3^2", "x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2"]),
}


@pytest.mark.parametrize("label", sorted(MUTATIONS))
def test_mutation_suite_is_singular(label):
    dims, eqs = MUTATIONS[label]
    cert = smoothness_certificate(variety(dims, eqs), PRIMES, label)
    assert cert.overall == SINGULAR
    assert cert.verdict.startswith("SINGULAR_MOD_P(")
    assert cert.failing_prime == PRIMES[0]


@pytest.mark.parametrize("label", sorted(SMOOTH))
def test_smooth_examples_certify(label):
    dims, eqs = SMOOTH[label]
    cert = smoothness_certificate(variety(dims, eqs), PRIMES, label)
    assert cert.overall == CERTIFIED
    assert len(cert.charts) == len(PRIMES) * len(space(*dims).charts())
    assert cert.to_json()["overall"] == CERTIFIED


def test_twisted_cubic_needs_full_minors():
    minors = ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]
    V = variety((3,), minors, declared_codim=2, complete_intersection=False)
    cert = smoothness_certificate(V, PRIMES)
    assert cert.certified and "pure codimension" in cert.note
    param = parse_parametrization([["s0^3", "s0^2*s1", "s0*s1^2", "s1^3"]], QQ)
    assert verify_parametrized_curve(V.equations, param, V.ambient)
    assert irreducibility_flag(V, parametrized=True) == "PARAMETRIZED"


def test_parametrization_needs_immersion_witness():
    V = variety((1, 1), ["x0*y1 - x1*y0"])
    param = parse_parametrization([["s0^2", "s1^2"], ["s0^2", "s1^2"]], QQ)
    with pytest.raises(NoIdentityFactor):
        verify_parametrized_curve(V.equations, param, V.ambient)
    param = parse_parametrization([["s0", "s1"], ["s0", "s1"]], QQ)
    assert verify_parametrized_curve(V.equations, param, V.ambient)
    with pytest.raises(ShapeMismatch):
        verify_parametrized_curve(V.equations, parse_parametrization([["s0", "s1"]], QQ), V.ambient)


def test_irreducibility_flags():
    assert irreducibility_flag(variety((3,), ["x0", "x1"])) == "LINEAR"
    assert irreducibility_flag(variety((2, 2), ["x0*y0 + x1*y1 + x2*y2"])) == "AMPLE_COMPLETE_INTERSECTION"
    assert irreducibility_flag(variety((1, 1, 1), ["x0*y0 - x1*y1", "z0"])) == "IRREDUCIBILITY_UNCHECKED"


def test_non_homogeneous_equation_rejected():
    with pytest.raises(ValueError):
        variety((2,), ["x0^2 + x1"])


def test_swap_map_and_picard_matrix():
    amb = space(2, 2)
    swap = AmbientMap.from_strings(amb, {f"x{i}": f"y{i}" for i in range(3)} | {f"y{i}": f"x{i}" for i in range(3)})
    assert swap.factor_sources == (1, 0)
    assert swap.picard_matrix().to_rows() == [[0, 1], [1, 0]]
    W = variety((2, 2), ["x0*y0 + x1*y1 + x2*y2"])
    assert is_invariant(W, swap, PRIMES[0])
    assert not is_invariant(variety((2, 2), ["x0*y0 + x1*y1 + 2*x2*y2 + x0*y1"]), swap, PRIMES[0])


def test_map_shape_errors():
    amb = space(1, 2)
    with pytest.raises(ShapeMismatch):
        AmbientMap.from_strings(amb, {"x0": "y0", "x1": "y1"})
    with pytest.raises(ShapeMismatch):
        AmbientMap.from_strings(amb, {"x0": "x0^2"})
    with pytest.raises(ValueError):
        AmbientMap.from_strings(space(1), {"x0": "x1", "x1": "x1"})


def test_saturation_equality():
    amb = space(2)
    F = QQ
    I = [parse_poly(t, amb.variables, F) for t in ("x0^2", "x0*x1", "x0*x2")]
    J = [parse_poly("x0", amb.variables, F)]
    # (x0^2, x0 x1, x0 x2) saturates to (x0) but does not contain it.
    assert ideals_equal_saturated(I, J, amb, PRIMES[0])
    assert ideal_contains_saturated(I, J[0], amb, PRIMES[0])
    assert not ideal_contains_saturated(J, parse_poly("x1", amb.variables, F), amb, PRIMES[0])


def test_same_point_over_cyclotomic_field():
    w = OMEGA.gen
    one = OMEGA.one
    assert same_point([(one, w)], [(OMEGA.mul(w, w), one)], OMEGA)
    assert not same_point([(one, w)], [(one, OMEGA.mul(w, w))], OMEGA)


linear_forms = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3).filter(
    lambda M: M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
    - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
    + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]) != 0
)
points = st.lists(st.integers(-4, 4), min_size=3, max_size=3).filter(any)
cubics = st.dictionaries(st.sampled_from(["x0^3", "x0*x1*x2", "x1^2*x2", "x2^3", "x0^2*x1"]),
                         st.integers(-3, 3), min_size=1)


@given(linear_forms, points, cubics)
def test_pullback_agrees_with_point_map(M, pt, cubic):
    amb = space(2)
    images = {f"x{i}": " + ".join(f"({M[i][j]})*x{j}" for j in range(3)) for i in range(3)}
    g = AmbientMap.from_strings(amb, images)
    f = parse_poly(" + ".join(f"({c})*{m}" for m, c in cubic.items()), amb.variables, QQ)
    image = g.map_point([pt])
    lhs = f.evaluate(dict(zip(amb.variables, image[0])))
    rhs = g.pullback(f).evaluate(dict(zip(amb.variables, pt)))
    assert lhs == rhs


@given(points, st.integers(1, 5))
def test_same_point_is_projective(pt, scale):
    F = QQ
    a = [tuple(F.convert(x) for x in pt)]
    b = [tuple(F.convert(scale * x) for x in pt)]
    assert same_point(a, b, F)


@given(st.permutations(range(3)))
def test_symmetric_cubic_invariant_under_permutations(perm):
    amb = space(2)
    g = AmbientMap.from_strings(amb, {f"x{i}": f"x{perm[i]}" for i in range(3)})
    V = variety((2,), ["x0^3 + x1^3 + x2^3 + 5*x0*x1*x2"])
    assert is_invariant(V, g, PRIMES[0])
    assert g.picard_matrix().to_rows() == [[1]]
