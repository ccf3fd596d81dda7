from .fields import OMEGA, QQ, SQRT2, BadPrime, PrimeField, QuadraticField, is_prime, prime_field_for, valid_primes
from .groebner import ChartTimeout, PolyIdeal, contains_one, groebner_basis, ideal_contains, normal_form
from .parse import PolyParseError, infer_field, parse_poly, parse_system
from .poly import MultiPoly, degrevlex_key


def specialize(f: MultiPoly, p: int) -> MultiPoly:
    return f.specialize(p)


__all__ = [
    "OMEGA", "QQ", "SQRT2", "BadPrime", "PrimeField", "QuadraticField", "is_prime",
    "prime_field_for", "valid_primes", "ChartTimeout", "PolyIdeal", "contains_one",
    "groebner_basis", "ideal_contains", "normal_form", "PolyParseError", "infer_field",
    "parse_poly", "parse_system", "MultiPoly", "degrevlex_key", "specialize",
]
