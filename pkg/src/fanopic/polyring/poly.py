"""Sparse multivariate polynomials over the fields in :mod:`fields`."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .fields import QQ, BadPrime, PrimeField, prime_field_for, specialize_scalar

Mono = tuple[int, ...]


def degrevlex_key(m: Mono) -> tuple:
    """Sort key: larger key means larger monomial in degree reverse lexicographic order."""
    return (sum(m),) + tuple(-e for e in reversed(m))


class MultiPoly:
    __slots__ = ("field", "variables", "terms")

    def __init__(self, field, variables: Sequence[str], terms: Mapping[Mono, object] | None = None):
        self.field = field
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise ValueError(f"exponent vector {m} does not match {n} variables")
            if not field.is_zero(c):
                clean[m] = c
        self.terms = clean

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, field, variables, c) -> "MultiPoly":
        return cls(field, variables, {(0,) * len(variables): field.convert(c)})

    @classmethod
    def var(cls, field, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name)
        m = tuple(int(j == i) for j in range(len(variables)))
        return cls(field, variables, {m: field.one})

    def _like(self, terms) -> "MultiPoly":
        return MultiPoly(self.field, self.variables, terms)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables or other.field != self.field:
                raise ValueError("polynomials live in different rings")
            return other
        return MultiPoly.constant(self.field, self.variables, other)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = F.add(t[m], c) if m in t else c
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: self.field.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = F.mul(c1, c2)
                t[m] = F.add(t[m], c) if m in t else c
        return self._like(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.field, self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "MultiPoly":
        F = self.field
        return self._like({m: F.mul(v, c) for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def leading_monomial(self) -> Mono:
        return max(self.terms, key=degrevlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def monic(self) -> "MultiPoly":
        """Scale so that the leading degrevlex coefficient is 1."""
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading_coeff()))

    def degree_in(self, names: Iterable[str]) -> set[int]:
        idx = [self.variables.index(v) for v in names]
        return {sum(m[i] for i in idx) for m in self.terms}

    def multidegree(self, groups: Sequence[Sequence[str]]) -> tuple[int, ...] | None:
        """Common multidegree of all terms, or None when the polynomial is not multihomogeneous."""
        idx = [[self.variables.index(v) for v in g] for g in groups]
        degs = {tuple(sum(m[i] for i in g) for g in idx) for m in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def used_variables(self) -> set[str]:
        return {self.variables[i] for m in self.terms for i, e in enumerate(m) if e}

    # transformations ------------------------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        F = self.field
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = m[:i] + (m[i] - 1,) + m[i + 1:]
                t[mm] = F.mul(c, F.convert(m[i]))
        return self._like(t)

    def substitute(self, images: Mapping[str, "MultiPoly"], target_vars: Sequence[str] | None = None) -> "MultiPoly":
        """Replace each variable by a polynomial; unmapped variables map to themselves."""
        target_vars = tuple(target_vars) if target_vars is not None else self.variables
        F = self.field
        imgs = []
        for v in self.variables:
            if v in images:
                img = images[v]
                if img.variables != target_vars:
                    img = img.reindex(target_vars)
                imgs.append(img)
            else:
                imgs.append(MultiPoly.var(F, target_vars, v))
        out = MultiPoly(F, target_vars)
        powers: dict[tuple[int, int], MultiPoly] = {}
        for m, c in self.terms.items():
            term = MultiPoly.constant(F, target_vars, 1).scale(c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = imgs[i] ** e
                    term = term * powers[key]
            out = out + term
        return out

    def reindex(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Same polynomial viewed in another variable list (must contain all used variables)."""
        new_vars = tuple(new_vars)
        pos = {v: i for i, v in enumerate(new_vars)}
        for v in self.used_variables():
            if v not in pos:
                raise ValueError(f"variable {v} missing from target ring")
        t = {}
        for m, c in self.terms.items():
            mm = [0] * len(new_vars)
            for i, e in enumerate(m):
                if e:
                    mm[pos[self.variables[i]]] = e
            t[tuple(mm)] = c
        return MultiPoly(self.field, new_vars, t)

    def set_to_one(self, names: Iterable[str]) -> "MultiPoly":
        """Dehomogenize: substitute 1 for the given variables and drop them from the ring."""
        names = set(names)
        keep = [i for i, v in enumerate(self.variables) if v not in names]
        F = self.field
        t: dict = {}
        for m, c in self.terms.items():
            mm = tuple(m[i] for i in keep)
            t[mm] = F.add(t[mm], c) if mm in t else c
        return MultiPoly(F, [self.variables[i] for i in keep], t)

    def specialize(self, p: int | PrimeField) -> "MultiPoly":
        """Image over GF(p), sending an adjoined root to its smallest root mod p."""
        target = p if isinstance(p, PrimeField) else prime_field_for(self.field, p)
        if isinstance(self.field, PrimeField):
            if self.field.p != target.p:
                raise BadPrime("characteristic mismatch")
            return self
        t = {m: specialize_scalar(self.field, c, target) for m, c in self.terms.items()}
        return MultiPoly(target, self.variables, t)

    def change_field(self, field) -> "MultiPoly":
        return MultiPoly(field, self.variables, {m: field.convert(c) for m, c in self.terms.items()})

    def evaluate(self, point: Mapping[str, object]):
        F = self.field
        vals = [F.convert(point[v]) if not isinstance(point[v], tuple) else point[v] for v in self.variables]
        acc = F.zero
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                for _ in range(e):
                    t = F.mul(t, v)
            acc = F.add(acc, t)
        return acc

    def to_dict(self) -> dict[Mono, object]:
        return dict(self.terms)

    # printing -------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=degrevlex_key, reverse=True):
            c = self.field.fmt(self.terms[m])
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e
            )
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self}; {self.field.name})"


def poly_ring_zero(field, variables) -> MultiPoly:
    return MultiPoly(field, variables)


__all__ = ["MultiPoly", "degrevlex_key", "poly_ring_zero", "QQ"]
