from .records import (
    CONSTRUCTIONS,
    DEFAULT_REGISTRY,
    FamilyRecord,
    ParseError,
    ValidationError,
    find_record,
    load_registry,
    validate_record,
)
from .render import render_table
from .verify import (
    CHECKS,
    DEFAULT_PRIMES,
    CheckResult,
    VerificationReport,
    VerifyConfig,
    verify_all,
    verify_family,
)

__all__ = [
    "CONSTRUCTIONS", "DEFAULT_REGISTRY", "FamilyRecord", "ParseError", "ValidationError",
    "find_record", "load_registry", "validate_record", "render_table", "CHECKS",
    "DEFAULT_PRIMES", "CheckResult", "VerificationReport", "VerifyConfig", "verify_all",
    "verify_family",
]
