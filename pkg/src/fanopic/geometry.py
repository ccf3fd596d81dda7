"""Varieties in products of projective spaces: automorphisms, invariance, smoothness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .polyring import (
    BadPrime,
    ChartTimeout,
    MultiPoly,
    PolyIdeal,
    contains_one,
    groebner_basis,
    normal_form,
    parse_poly,
)
from .polyring.fields import PrimeField, prime_field_for

DEFAULT_BUDGET = 30.0


class ShapeMismatch(ValueError):
    pass


class NotMultihomogeneous(ValueError):
    pass


class NoIdentityFactor(ValueError):
    pass


# ------------------------------------------------------------------ ambient

@dataclass(frozen=True)
class MultiProjectiveSpace:
    factors: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        facs = tuple(tuple(f) for f in self.factors)
        if not facs:
            raise ValueError("at least one factor")
        for f in facs:
            if len(f) < 2:
                raise ValueError("every factor needs dimension >= 1")
        flat = [v for f in facs for v in f]
        if len(set(flat)) != len(flat):
            raise ValueError("variable names must be distinct")
        object.__setattr__(self, "factors", facs)

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return tuple(len(f) - 1 for f in self.factors)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for f in self.factors for v in f)

    def factor_of(self, var: str) -> int:
        for i, f in enumerate(self.factors):
            if var in f:
                return i
        raise KeyError(var)

    def charts(self) -> list[tuple[int, ...]]:
        """Affine charts, one coordinate index per factor, in lexicographic order."""
        return list(itertools.product(*[range(len(f)) for f in self.factors]))

    def chart_label(self, chart: Sequence[int]) -> str:
        return ",".join(f"{f[i]}=1" for f, i in zip(self.factors, chart))

    def chart_vars(self, chart: Sequence[int]) -> list[str]:
        return [f[i] for f, i in zip(self.factors, chart)]

    def __str__(self) -> str:
        return " x ".join(f"P{d}" for d in self.factor_dims)


@dataclass(frozen=True)
class MultiHomogeneousVariety:
    ambient: MultiProjectiveSpace
    equations: tuple[MultiPoly, ...]
    declared_codim: int | None = None
    complete_intersection: bool = True
    name: str = ""

    def __post_init__(self):
        eqs = tuple(self.equations)
        vars_ = self.ambient.variables
        degs = []
        for f in eqs:
            if f.variables != vars_:
                f_vars = set(f.used_variables())
                if not f_vars <= set(vars_):
                    raise ShapeMismatch(f"equation {f} uses variables outside the ambient")
                raise ShapeMismatch("equations must be written in the ambient variable order")
            if f.is_zero():
                raise NotMultihomogeneous("zero equation")
            d = f.multidegree(self.ambient.factors)
            if d is None:
                raise NotMultihomogeneous(f"{f} is not multihomogeneous")
            degs.append(d)
        codim = self.declared_codim if self.declared_codim is not None else len(eqs)
        if self.complete_intersection and codim != len(eqs):
            raise ValueError("a complete intersection has one equation per codimension")
        object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "declared_codim", codim)
        object.__setattr__(self, "_multidegrees", tuple(degs))

    @classmethod
    def from_strings(cls, factors, equations: Sequence[str], field=None, **kw) -> "MultiHomogeneousVariety":
        from .polyring import parse_system

        amb = factors if isinstance(factors, MultiProjectiveSpace) else MultiProjectiveSpace(tuple(map(tuple, factors)))
        eqs = parse_system(list(equations), amb.variables, field)
        return cls(amb, tuple(eqs), **kw)

    @property
    def multidegrees(self) -> tuple[tuple[int, ...], ...]:
        return self._multidegrees

    @property
    def field(self):
        return self.equations[0].field

    @property
    def dimension(self) -> int:
        return sum(self.ambient.factor_dims) - self.declared_codim


# ------------------------------------------------------------- linear algebra

def _field_inverse(M: list[list], F) -> list[list]:
    n = len(M)
    a = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not F.is_zero(a[r][c])), None)
        if piv is None:
            raise ValueError("linear substitution is not invertible")
        a[c], a[piv] = a[piv], a[c]
        inv = F.inv(a[c][c])
        a[c] = [F.mul(x, inv) for x in a[c]]
        for r in range(n):
            if r != c and not F.is_zero(a[r][c]):
                f = a[r][c]
                a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


# ------------------------------------------------------------ ambient maps

@dataclass(frozen=True)
class AmbientMap:
    """A product of linear maps composed with a permutation of equal-dimension factors.

    Stored as the pullback substitution: each ambient variable is replaced by a
    linear form in the variables of a single (source) factor.
    """

    ambient: MultiProjectiveSpace
    images: Mapping[str, MultiPoly]
    name: str = ""

    def __post_init__(self):
        amb = self.ambient
        imgs = {}
        for v in amb.variables:
            img = self.images.get(v)
            if img is None:
                img = MultiPoly.var(self.field_hint(), amb.variables, v)
            if img.variables != amb.variables:
                img = img.reindex(amb.variables)
            imgs[v] = img
        sources = []
        for i, fac in enumerate(amb.factors):
            src = set()
            for v in fac:
                img = imgs[v]
                if img.is_zero() or img.total_degree() != 1 or any(sum(m) != 1 for m in img.terms):
                    raise ShapeMismatch(f"image of {v} is not a nonzero linear form")
                src |= {amb.factor_of(u) for u in img.used_variables()}
            if len(src) != 1:
                raise ShapeMismatch(f"factor {i} is not sent into a single factor")
            s = src.pop()
            if amb.factor_dims[s] != amb.factor_dims[i]:
                raise ShapeMismatch("factor permutation between factors of different dimension")
            sources.append(s)
        if sorted(sources) != list(range(len(amb.factors))):
            raise ShapeMismatch("factor map is not a permutation")
        F = next(iter(imgs.values())).field
        imgs = {v: (img if img.field == F else img.change_field(F)) for v, img in imgs.items()}
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_sources", tuple(sources))
        for i in range(len(amb.factors)):
            _field_inverse(self.block(i), F)

    def field_hint(self):
        for img in self.images.values():
            return img.field
        from .polyring import QQ

        return QQ

    @classmethod
    def from_strings(cls, ambient: MultiProjectiveSpace, images: Mapping[str, str], field=None, name="") -> "AmbientMap":
        from .polyring import infer_field

        if field is None:
            field = infer_field(images.values())
        imgs = {v: parse_poly(t, ambient.variables, field) for v, t in images.items()}
        if not imgs:
            v0 = ambient.variables[0]
            imgs = {v0: MultiPoly.var(field, ambient.variables, v0)}
        return cls(ambient, imgs, name)

    @property
    def field(self):
        return next(iter(self.images.values())).field

    @property
    def factor_sources(self) -> tuple[int, ...]:
        """``factor_sources[i]`` is the factor whose coordinates feed factor ``i``."""
        return self._sources

    @property
    def factor_permutation(self) -> tuple[int, ...]:
        return self._sources

    def block(self, i: int) -> list[list]:
        """Matrix of the substitution for factor ``i``: rows indexed by its variables."""
        amb = self.ambient
        src = amb.factors[self._sources[i]]
        F = self.field
        rows = []
        for v in amb.factors[i]:
            img = self.images[v]
            row = []
            for u in src:
                k = amb.variables.index(u)
                mono = tuple(int(j == k) for j in range(len(amb.variables)))
                row.append(img.terms.get(mono, F.zero))
            rows.append(row)
        return rows

    def picard_matrix(self):
        """Pullback on the hyperplane classes: column i is the class of H_{source(i)}."""
        from .exactmat import IntMatrix

        k = len(self.ambient.factors)
        return IntMatrix.from_columns(
            [tuple(int(j == self._sources[i]) for j in range(k)) for i in range(k)], k
        )

    def inverse(self) -> "AmbientMap":
        amb = self.ambient
        F = self.field
        imgs = {}
        for i, fac in enumerate(amb.factors):
            s = self._sources[i]
            inv = _field_inverse(self.block(i), F)
            # x_fac = A y_src  =>  y_src = A^{-1} x_fac
            for r, u in enumerate(amb.factors[s]):
                form = MultiPoly(F, amb.variables)
                for c, v in enumerate(fac):
                    if not F.is_zero(inv[r][c]):
                        form = form + MultiPoly.var(F, amb.variables, v).scale(inv[r][c])
                imgs[u] = form
        return AmbientMap(amb, imgs, (self.name + "^-1") if self.name else "")

    def pullback(self, f: MultiPoly) -> MultiPoly:
        F = self.field
        if f.field != F:
            from .polyring import QQ

            if f.field == QQ:
                f = f.change_field(F)
            elif F == QQ:
                return f.substitute({v: img.change_field(f.field) for v, img in self.images.items()})
            else:
                raise ShapeMismatch("incompatible coefficient fields")
        return f.substitute(self.images)

    def map_point(self, point: Sequence[Sequence]) -> tuple[tuple, ...]:
        """Forward image of a point given per factor; coordinates are field elements."""
        amb = self.ambient
        F = self.field
        flat = {v: F.convert(c) if not isinstance(c, tuple) else c
                for fac, coords in zip(amb.factors, point) for v, c in zip(fac, coords)}
        return tuple(tuple(self.images[v].evaluate(flat) for v in fac) for fac in amb.factors)

    def specialize(self, p: int) -> "AmbientMap":
        target = prime_field_for(self.field, p)
        return AmbientMap(self.ambient, {v: img.specialize(target) for v, img in self.images.items()}, self.name)


def compose(g: AmbientMap, h: AmbientMap) -> AmbientMap:
    """Substitute with ``h`` first and then with ``g``: each x becomes g*(h*(x))."""
    return AmbientMap(g.ambient, {v: g.pullback(h.images[v]) for v in g.ambient.variables}, "")


def same_point(a: Sequence[Sequence], b: Sequence[Sequence], F) -> bool:
    """Projective equality factor by factor."""
    for u, v in zip(a, b):
        for i in range(len(u)):
            for j in range(i + 1, len(u)):
                if not F.is_zero(F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i]))):
                    return False
        if all(F.is_zero(x) for x in u) or all(F.is_zero(x) for x in v):
            return False
    return True


# ------------------------------------------------------------ operations

def apply_ambient_map(V: MultiHomogeneousVariety, g: AmbientMap) -> MultiHomogeneousVariety:
    if g.ambient != V.ambient:
        raise ShapeMismatch("map and variety live on different ambients")
    eqs = tuple(g.pullback(f).monic() for f in V.equations)
    return MultiHomogeneousVariety(V.ambient, eqs, V.declared_codim, V.complete_intersection, V.name)


def _specialize_all(polys: Sequence[MultiPoly], p: int) -> list[MultiPoly]:
    fields = {f.field for f in polys}
    from .polyring import QQ

    ext = [F for F in fields if F != QQ]
    if len(ext) > 1:
        raise BadPrime("mixed coefficient extensions")
    target = prime_field_for(ext[0] if ext else QQ, p)
    return [f.specialize(target) for f in polys]


def _is_scalar_multiple(f: MultiPoly, g: MultiPoly) -> bool:
    if f.field != g.field:
        raise ShapeMismatch("fields differ")
    if set(f.terms) != set(g.terms):
        return False
    return f.monic() == g.monic()


def _chart_ideal_member(ideal: Sequence[MultiPoly], f: MultiPoly, amb: MultiProjectiveSpace,
                        budget: float | None) -> bool:
    """Membership in the saturation of the ideal, tested chart by chart."""
    for chart in amb.charts():
        ones = amb.chart_vars(chart)
        gens = [h.set_to_one(ones) for h in ideal]
        gens = [h for h in gens if not h.is_zero()]
        ff = f.set_to_one(ones)
        if ff.is_zero():
            continue
        if not gens:
            return False
        gb = groebner_basis(gens, budget)
        if not normal_form(ff, gb).is_zero():
            return False
    return True


def ideal_contains_saturated(ideal: Sequence[MultiPoly], f: MultiPoly, amb: MultiProjectiveSpace,
                             p: int, budget: float | None = DEFAULT_BUDGET) -> bool:
    """Is ``f`` in the saturation of ``ideal`` by the irrelevant ideal, over GF(p)?"""
    spec = _specialize_all([f, *ideal], p)
    f_p, gens = spec[0], spec[1:]
    gb = groebner_basis(gens, budget)
    if normal_form(f_p, gb).is_zero():
        return True
    return _chart_ideal_member(gens, f_p, amb, budget)


def is_invariant(V: MultiHomogeneousVariety, g: AmbientMap, p: int,
                 budget: float | None = DEFAULT_BUDGET) -> bool:
    """Does the pullback of every equation lie in the (saturated) ideal of V?

    Hypersurfaces use an exact scalar-multiple test over the coefficient field.
    Otherwise a Groebner reduction over GF(p) is tried first, and chart-wise
    membership is the fallback for ideals that are not saturated.
    """
    moved = [g.pullback(f) for f in V.equations]
    if len(V.equations) == 1:
        f = V.equations[0]
        h = moved[0]
        if h.field != f.field:
            from .polyring import QQ

            if f.field == QQ:
                f = f.change_field(h.field)
            else:
                h = h.change_field(f.field)
        return _is_scalar_multiple(f, h)
    # Validate p for the coefficient fields before doing any work.
    _specialize_all([*V.equations, *moved], p)
    return all(ideal_contains_saturated(V.equations, h, V.ambient, p, budget) for h in moved)


def ideals_equal_saturated(I: Sequence[MultiPoly], J: Sequence[MultiPoly], amb: MultiProjectiveSpace,
                           p: int, budget: float | None = DEFAULT_BUDGET) -> bool:
    return all(ideal_contains_saturated(J, f, amb, p, budget) for f in I) and all(
        ideal_contains_saturated(I, f, amb, p, budget) for f in J
    )


# ------------------------------------------------------------ smoothness

CERTIFIED = "CERTIFIED_SMOOTH_MOD_P"
SINGULAR = "SINGULAR_MOD_P"
ERROR = "ERROR"


@dataclass
class ChartVerdict:
    chart: str
    prime: int
    smooth: bool
    seconds: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {"chart": self.chart, "prime": self.prime, "smooth": self.smooth}


@dataclass
class SmoothnessCertificate:
    family_id: str
    primes: list[int]
    charts: list[ChartVerdict]
    overall: str
    failing_chart: str | None = None
    failing_prime: int | None = None
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.overall == CERTIFIED

    @property
    def verdict(self) -> str:
        if self.overall == SINGULAR:
            return f"{SINGULAR}({self.failing_chart}, {self.failing_prime})"
        return self.overall

    def to_json(self) -> dict:
        out = {
            "family": self.family_id,
            "primes": self.primes,
            "overall": self.verdict,
            "charts": [c.to_json() for c in self.charts],
        }
        if self.note:
            out["note"] = self.note
        return out


def _determinant(rows: list[list[MultiPoly]], zero: MultiPoly) -> MultiPoly:
    n = len(rows)
    memo: dict[tuple[int, tuple[int, ...]], MultiPoly] = {}

    def det(r: int, cols: tuple[int, ...]) -> MultiPoly:
        if r == n:
            return zero + 1
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = zero
        for k, c in enumerate(cols):
            a = rows[r][c]
            if a.is_zero():
                continue
            sub = det(r + 1, cols[:k] + cols[k + 1:])
            term = a * sub
            acc = acc - term if k % 2 else acc + term
        memo[key] = acc
        return acc

    return det(0, tuple(range(len(rows[0]))))


def jacobian_minors(eqs: Sequence[MultiPoly], c: int) -> list[MultiPoly]:
    """All c x c minors of the Jacobian of ``eqs`` with respect to all ring variables."""
    if not eqs:
        return []
    vars_ = eqs[0].variables
    jac = [[f.diff(v) for v in vars_] for f in eqs]
    zero = MultiPoly(eqs[0].field, vars_)
    out = []
    seen = set()
    for rows in itertools.combinations(range(len(eqs)), c):
        for cols in itertools.combinations(range(len(vars_)), c):
            sub = [[jac[i][j] for j in cols] for i in rows]
            m = _determinant(sub, zero)
            if not m.is_zero() and m not in seen:
                seen.add(m)
                out.append(m)
    return out


def chart_singular_ideal(eqs: Sequence[MultiPoly], amb: MultiProjectiveSpace, chart: Sequence[int],
                         codim: int) -> list[MultiPoly]:
    ones = amb.chart_vars(chart)
    local = [f.set_to_one(ones) for f in eqs]
    return [f for f in local if not f.is_zero()] + jacobian_minors(local, codim)


def smoothness_certificate(V: MultiHomogeneousVariety, primes: Sequence[int], family_id: str = "",
                           budget: float | None = DEFAULT_BUDGET) -> SmoothnessCertificate:
    """Jacobian-criterion certificate on every affine chart, for every prime.

    For a complete intersection a pass means smooth of the declared dimension.
    For other ideals all c x c minors of the full Jacobian are used; a pass then
    shows the scheme has embedding codimension >= c everywhere, which is
    smoothness once the caller knows the variety is pure of codimension c
    (for instance from a verified parametrization).
    """
    import time

    if not primes:
        raise BadPrime("no primes supplied")
    amb = V.ambient
    verdicts: list[ChartVerdict] = []
    per_prime: dict[int, list[tuple[str, bool]]] = {}
    for p in primes:
        eqs = _specialize_all(V.equations, p)
        rows = []
        for chart in amb.charts():
            label = amb.chart_label(chart)
            ideal = chart_singular_ideal(eqs, amb, chart, V.declared_codim)
            t0 = time.perf_counter()
            try:
                ok = contains_one(PolyIdeal(tuple(ideal)), budget) if ideal else False
            except ChartTimeout as exc:
                exc.chart = f"{label} mod {p}"
                raise
            verdicts.append(ChartVerdict(label, p, ok, time.perf_counter() - t0))
            rows.append((label, ok))
        per_prime[p] = rows
    outcomes = {p: all(ok for _, ok in rows) for p, rows in per_prime.items()}
    if all(outcomes.values()):
        note = "" if V.complete_intersection else "not a complete intersection: pure codimension assumed"
        return SmoothnessCertificate(family_id, list(primes), verdicts, CERTIFIED, note=note)
    if any(outcomes.values()):
        return SmoothnessCertificate(
            family_id, list(primes), verdicts, ERROR,
            note="primes disagree: " + ", ".join(f"{p}:{'smooth' if o else 'singular'}" for p, o in outcomes.items()),
        )
    p0 = primes[0]
    bad = next(label for label, ok in per_prime[p0] if not ok)
    return SmoothnessCertificate(family_id, list(primes), verdicts, SINGULAR, bad, p0)


# ------------------------------------------------------------ curves

def _substitute_param(f: MultiPoly, amb: MultiProjectiveSpace, param: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    images = {}
    for fac, comps in zip(amb.factors, param):
        for v, c in zip(fac, comps):
            images[v] = c
    return f.substitute(images, target_vars=param[0][0].variables)


def _is_immersion_witness(comps: Sequence[MultiPoly]) -> bool:
    """Components that contain s0^d, s0^(d-1) s1, s0 s1^(d-1), s1^d (up to units)."""
    d = comps[0].total_degree()
    if d < 1 or any(c.multidegree([c.variables]) != (d,) for c in comps if not c.is_zero()):
        return False
    wanted = {(d, 0), (d - 1, 1), (1, d - 1), (0, d)}
    have = set()
    for c in comps:
        if len(c.terms) == 1:
            have.add(next(iter(c.terms)))
    return wanted <= have


def verify_parametrized_curve(equations: Sequence[MultiPoly], param: Sequence[Sequence[MultiPoly]],
                              ambient: MultiProjectiveSpace) -> bool:
    """Do all equations vanish identically on the parametrization?

    At least one factor must be an immersion witness: the identity onto a P1
    factor, or more generally components containing the four monomials
    s0^d, s0^(d-1) s1, s0 s1^(d-1), s1^d (a rational normal curve projection).
    """
    if len(param) != len(ambient.factors):
        raise ShapeMismatch("one parametrization per factor is required")
    for fac, comps in zip(ambient.factors, param):
        if len(comps) != len(fac):
            raise ShapeMismatch("component count does not match factor dimension")
        degs = {c.total_degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or any(c.multidegree([c.variables]) is None for c in comps if not c.is_zero()):
            raise ShapeMismatch("components must be homogeneous of a common degree")
    if not any(_is_immersion_witness(comps) for comps in param):
        raise NoIdentityFactor("no factor of the parametrization is an immersion witness")
    return all(_substitute_param(f, ambient, param).is_zero() for f in equations)


def parse_parametrization(param: Sequence[Sequence[str]], field) -> list[list[MultiPoly]]:
    return [[parse_poly(c, ("s0", "s1"), field) for c in comps] for comps in param]


# ------------------------------------------------------------ irreducibility flag

PARAMETRIZED = "PARAMETRIZED"
AMPLE_CI = "AMPLE_COMPLETE_INTERSECTION"
LINEAR = "LINEAR"
UNCHECKED = "IRREDUCIBILITY_UNCHECKED"


def irreducibility_flag(V: MultiHomogeneousVariety, parametrized: bool = False) -> str:
    if parametrized:
        return PARAMETRIZED
    if all(sum(d) == 1 for d in V.multidegrees) and len(V.ambient.factors) == 1:
        return LINEAR
    if V.complete_intersection and V.dimension >= 1 and all(all(x > 0 for x in d) for d in V.multidegrees):
        return AMPLE_CI
    return UNCHECKED
