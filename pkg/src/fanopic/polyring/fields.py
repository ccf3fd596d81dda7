"""Coefficient fields: Q, Q(sqrt2), Q(omega) and prime fields with a chosen root."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class BadPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Rationals:
    name: str = "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def fmt(self, a) -> str:
        return str(a)

    def to_prime(self, a, p: int) -> int:
        if a.denominator % p == 0:
            raise BadPrime(f"{p} divides the denominator of {a}")
        return a.numerator * pow(a.denominator, -1, p) % p


QQ = Rationals()


@dataclass(frozen=True)
class QuadraticField:
    """Q(theta) with theta^2 = c0 + c1*theta; elements are pairs (a, b) = a + b*theta."""

    name: str
    symbol: str
    c0: int
    c1: int

    @property
    def zero(self):
        return (Fraction(0), Fraction(0))

    @property
    def one(self):
        return (Fraction(1), Fraction(0))

    @property
    def gen(self):
        return (Fraction(0), Fraction(1))

    def convert(self, x):
        if isinstance(x, tuple):
            return (Fraction(x[0]), Fraction(x[1]))
        return (Fraction(x), Fraction(0))

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        # (a0 + a1 t)(b0 + b1 t) = a0 b0 + (a0 b1 + a1 b0) t + a1 b1 (c0 + c1 t)
        t2 = a[1] * b[1]
        return (a[0] * b[0] + t2 * self.c0, a[0] * b[1] + a[1] * b[0] + t2 * self.c1)

    def conj(self, a):
        # The other root is c1 - theta.
        return (a[0] + a[1] * self.c1, -a[1])

    def norm(self, a) -> Fraction:
        n = self.mul(a, self.conj(a))
        assert n[1] == 0
        return n[0]

    def inv(self, a):
        n = self.norm(a)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj(a)
        return (c[0] / n, c[1] / n)

    def is_zero(self, a) -> bool:
        return a[0] == 0 and a[1] == 0

    def fmt(self, a) -> str:
        if a[1] == 0:
            return str(a[0])
        b = {1: "", -1: "-"}.get(a[1], f"{a[1]}*")
        if a[0] == 0:
            return f"{b}{self.symbol}"
        return f"({a[0]} + {b}{self.symbol})".replace("+ -", "- ")

    def roots_mod(self, p: int) -> list[int]:
        return [t for t in range(p) if (t * t - self.c1 * t - self.c0) % p == 0]

    def to_prime(self, a, p: int, root: int) -> int:
        out = 0
        for part, w in ((a[0], 1), (a[1], root)):
            if part.denominator % p == 0:
                raise BadPrime(f"{p} divides a coefficient denominator")
            out += part.numerator * pow(part.denominator, -1, p) * w
        return out % p


SQRT2 = QuadraticField("QQ(sqrt2)", "sqrt2", 2, 0)
OMEGA = QuadraticField("QQ(omega)", "omega", -1, -1)


@dataclass(frozen=True)
class PrimeField:
    p: int
    root: int | None = None
    source: str | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise BadPrime(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        if self.root is None:
            return f"GF({self.p})"
        return f"GF({self.p})[{self.source}={self.root}]"

    zero = 0
    one = 1

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            return QQ.to_prime(x, self.p)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def fmt(self, a) -> str:
        return str(a)


def prime_field_for(field, p: int) -> PrimeField:
    """The residue field at ``p`` together with the image of the adjoined root.

    The root is the smallest nonnegative solution of the minimal polynomial.
    """
    if isinstance(field, PrimeField):
        if field.p != p:
            raise BadPrime(f"field already has characteristic {field.p}")
        return field
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    if isinstance(field, Rationals):
        return PrimeField(p)
    roots = field.roots_mod(p)
    if not roots:
        raise BadPrime(f"{field.symbol} has no image mod {p}")
    if p == 2 or (field.c1 * field.c1 + 4 * field.c0) % p == 0:
        raise BadPrime(f"minimal polynomial of {field.symbol} is ramified at {p}")
    return PrimeField(p, roots[0], field.symbol)


def specialize_scalar(field, a, target: PrimeField) -> int:
    if isinstance(field, Rationals):
        return QQ.to_prime(a, target.p)
    if isinstance(field, QuadraticField):
        return field.to_prime(a, target.p, target.root)
    return a % target.p


def valid_primes(field, candidates) -> list[int]:
    out = []
    for p in candidates:
        try:
            prime_field_for(field, p)
        except BadPrime:
            continue
        out.append(p)
    return out
