"""Family records: the JSON schema, loading and validation."""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..matgroup import CATALOG_ORDERS

CONSTRUCTIONS = (
    "divisor", "complete_intersection", "double_cover", "blowup",
    "two_stage_blowup", "toric", "product", "metadata_only",
)
UNKNOWN = "UNKNOWN"
NONE = "NONE"
# Bounds outside the small-group catalog (rho >= 6 only).
EXTRA_GROUPS = {"S5": 120, "W(D5)": 1920, "W(E6)": 51840, "W(E7)": 2903040, "W(E8)": 696729600}
FAMILY_COUNTS = {1: 17, 2: 36, 3: 31, 4: 13, 5: 3, 6: 1, 7: 1, 8: 1, 9: 1, 10: 1}

# Known Weyl-group bounds for rho <= 5; every other family in that range is trivial.
WG_BOUNDS: dict[str, str] = {
    **{f: "Z2" for f in (
        "2.2 2.6 2.12 2.21 2.32 3.3 3.7 3.9 3.10 3.17 3.19 3.20 3.25 3.31 "
        "4.3 4.4 4.7 4.8 4.10 4.12 4.13 5.2").split()},
    **{f: "S3" for f in "3.1 3.13 3.27 4.6 5.1".split()},
    "4.2": "Z2xZ2", "4.1": "S4", "5.3": "Z2xS3",
    "6.1": "S5", "7.1": "W(D5)", "8.1": "W(E6)", "9.1": "W(E7)", "10.1": "W(E8)",
}
UNDETERMINED = ("3.9", "4.2")

DEFAULT_REGISTRY = Path(__file__).resolve().parent.parent / "data" / "families.json"


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class ValidationError(ValueError):
    def __init__(self, family: str, field_name: str, message: str):
        super().__init__(f"family {family}, field {field_name}: {message}")
        self.family = family
        self.field = field_name


def family_sort_key(fid: str) -> tuple[int, int]:
    rho, n = fid.split(".")
    return int(rho), int(n)


def all_family_ids() -> list[str]:
    return [f"{rho}.{n}" for rho, count in FAMILY_COUNTS.items() for n in range(1, count + 1)]


@dataclass
class FamilyRecord:
    id: str
    picard_rank: int
    construction: str
    expected_autp: str
    expected_wg: str
    expected_wg_order: int | None = None
    expected_h1_trivial: bool = False
    picard_basis: list[str] = field(default_factory=list)
    ambient: list[list[str]] | None = None
    equations: list[str] | None = None
    centers: list[dict] | None = None
    branch: dict | None = None
    automorphisms: list[dict] = field(default_factory=list)
    nef: dict | None = None
    permutation_bases: list[dict] = field(default_factory=list)
    cox: dict | None = None
    justification: str = ""
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def metadata_only(self) -> bool:
        return self.construction == "metadata_only"

    @property
    def has_realized_group(self) -> bool:
        return bool(self.automorphisms)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for k, v in self.__dict__.items():
            if v is None or v == [] or v == {} or v == "":
                continue
            if k == "expected_h1_trivial" and not v:
                continue
            out[k] = copy.deepcopy(v)
        return out


_FIELDS = set(FamilyRecord.__dataclass_fields__)


def _check_tag(fid: str, name: str, value: Any, allow: tuple[str, ...]) -> None:
    if not isinstance(value, str):
        raise ValidationError(fid, name, "must be a string tag")
    if value in allow or value in CATALOG_ORDERS or value in EXTRA_GROUPS:
        return
    raise ValidationError(fid, name, f"unknown group tag {value!r}")


def validate_record(raw: dict) -> FamilyRecord:
    if not isinstance(raw, dict):
        raise ValidationError("?", "record", "must be an object")
    fid = raw.get("id")
    if not isinstance(fid, str) or fid not in set(all_family_ids()):
        raise ValidationError(str(fid), "id", "not a recognized family id")
    unknown = set(raw) - _FIELDS
    if unknown:
        raise ValidationError(fid, sorted(unknown)[0], "unknown field")
    for key in ("picard_rank", "construction", "expected_autp", "expected_wg"):
        if key not in raw:
            raise ValidationError(fid, key, "missing")
    rho = raw["picard_rank"]
    if rho != int(fid.split(".")[0]):
        raise ValidationError(fid, "picard_rank", "does not match the family id")
    if raw["construction"] not in CONSTRUCTIONS:
        raise ValidationError(fid, "construction", f"unknown kind {raw['construction']!r}")
    _check_tag(fid, "expected_wg", raw["expected_wg"], ("trivial",))
    _check_tag(fid, "expected_autp", raw["expected_autp"], (UNKNOWN, NONE, "trivial"))
    if raw["expected_wg"] != WG_BOUNDS.get(fid, "trivial"):
        raise ValidationError(fid, "expected_wg", f"expected {WG_BOUNDS.get(fid, 'trivial')}")
    if fid in UNDETERMINED and raw["expected_autp"] != UNKNOWN:
        raise ValidationError(fid, "expected_autp", "must be UNKNOWN")
    if fid == "2.2" and raw["expected_autp"] != "trivial":
        raise ValidationError(fid, "expected_autp", "must be trivial")
    for key, value in raw.items():
        if value is None:
            raise ValidationError(fid, key, "optional sections are omitted, not null")
    rec = FamilyRecord(**raw)
    if rec.metadata_only and not rec.justification:
        raise ValidationError(fid, "justification", "metadata_only records need a justification")
    if not rec.metadata_only:
        if rec.construction == "toric":
            if rec.cox is None:
                raise ValidationError(fid, "cox", "toric records need cox data")
        elif rec.ambient is None:
            raise ValidationError(fid, "ambient", "missing")
        if not rec.automorphisms:
            raise ValidationError(fid, "automorphisms", "constructions need at least one automorphism")
    if rec.picard_basis and len(rec.picard_basis) != rho:
        raise ValidationError(fid, "picard_basis", "length differs from the Picard rank")
    for i, a in enumerate(rec.automorphisms):
        if "name" not in a:
            raise ValidationError(fid, f"automorphisms[{i}]", "missing name")
        M = a.get("picard_matrix") or a.get("printed_matrix")
        if M is None:
            raise ValidationError(fid, f"automorphisms[{i}]", "needs a recorded Picard matrix")
        if len(M) != rho or any(len(r) != rho for r in M):
            raise ValidationError(fid, f"automorphisms[{i}]", "matrix shape differs from the Picard rank")
    for i, pb in enumerate(rec.permutation_bases):
        if len(pb.get("basis", [])) != rho:
            raise ValidationError(fid, f"permutation_bases[{i}]", "basis length differs from the Picard rank")
    if rec.nef is not None:
        if len(rec.nef.get("anticanonical", [])) != rho:
            raise ValidationError(fid, "nef", "anticanonical class has the wrong length")
    return rec


def registry_path(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get("FANO_REGISTRY")
    return Path(env) if env else DEFAULT_REGISTRY


def load_registry(path: str | os.PathLike | None = None) -> list[FamilyRecord]:
    p = registry_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(p), f"cannot read: {exc.strerror}") from exc
    if not text.strip():
        raise ParseError(str(p), "empty file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    if not isinstance(raw, list):
        raise ParseError(str(p), "top level must be an array of records")
    records = []
    seen = set()
    for item in raw:
        rec = validate_record(item)
        if rec.id in seen:
            raise ValidationError(rec.id, "id", "duplicate record")
        seen.add(rec.id)
        records.append(rec)
    records.sort(key=lambda r: family_sort_key(r.id))
    return records


def find_record(records: list[FamilyRecord], fid: str) -> FamilyRecord:
    for r in records:
        if r.id == fid:
            return r
    raise KeyError(fid)
