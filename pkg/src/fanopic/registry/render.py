"""Text tables from verification reports."""

from __future__ import annotations

from typing import Sequence

from ..matgroup import PRETTY
from .records import NONE, UNKNOWN, family_sort_key
from .verify import VerificationReport

KINDS = ("summary", "weyl", "h1")
_HEADERS = {
    "summary": ("family", "AutP", "WG", "verdict"),
    "weyl": ("family", "AutP", "WG", "cone symmetry"),
    "h1": ("family", "group", "subgroups", "H1"),
}


def pretty_group(name: str | None) -> str:
    if name is None:
        return "?"
    if name == UNKNOWN:
        return "?"
    if name == NONE:
        return "-"
    return PRETTY.get(name, name)


def _row(rep: VerificationReport, kind: str) -> tuple[str, ...]:
    autp = pretty_group(rep.computed_autp)
    if kind == "summary":
        return rep.family, autp, pretty_group(rep.expected_wg), rep.overall
    if kind == "weyl":
        c = rep.checks["containment_in_cone_symmetry"]
        return rep.family, autp, pretty_group(rep.expected_wg), c.verdict
    h = rep.checks["h1_all_subgroups"]
    count = next((d.split()[0] for d in h.details if d.endswith("subgroups checked")), "-")
    return rep.family, autp, count, {"PASS": "0", "FAIL": "nonzero"}.get(h.verdict, h.verdict)


def render_table(reports: Sequence[VerificationReport], kind: str = "summary") -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown table kind {kind!r}")
    lines = [" | ".join(_HEADERS[kind])]
    for rep in sorted(reports, key=lambda r: family_sort_key(r.family)):
        lines.append(" | ".join(_row(rep, kind)))
    return "\n".join(lines) + "\n"
