from __future__ import annotations

import copy
import json

import pytest

from fanopic.exactmat import IntMatrix, integer_kernel
from fanopic.geometry import MultiProjectiveSpace, ideal_contains_saturated, same_point
from fanopic.polyring import OMEGA, QQ, parse_poly
from fanopic.registry import (
    CHECKS,
    FamilyRecord,
    ParseError,
    ValidationError,
    VerificationReport,
    VerifyConfig,
    find_record,
    load_registry,
    render_table,
    validate_record,
    verify_all,
    verify_family,
)
from fanopic.registry.records import UNKNOWN, all_family_ids
from fanopic.toric import CoxPresentation, Incompatible, induced_picard_matrix, parse_coordinate_permutation


def raw(registry, fid) -> dict:
    return copy.deepcopy(find_record(registry, fid).to_json())


def write(tmp_path, data, name="reg.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return p


# ------------------------------------------------------------ loading

def test_shipped_registry_shape(registry):
    assert [r.id for r in registry] == all_family_ids()
    assert len(registry) == 105
    assert sum(1 for r in registry if not r.metadata_only) == 27


def test_undetermined_and_exception_records(registry):
    assert find_record(registry, "3.9").expected_autp == UNKNOWN
    assert find_record(registry, "4.2").expected_autp == UNKNOWN
    r22 = find_record(registry, "2.2")
    assert (r22.expected_autp, r22.expected_wg) == ("trivial", "Z2")


def test_every_metadata_record_is_justified(registry):
    assert all(r.justification for r in registry if r.metadata_only)


def test_empty_and_malformed_files(tmp_path):
    with pytest.raises(ParseError):
        load_registry(write(tmp_path, ""))
    with pytest.raises(ParseError) as exc:
        load_registry(write(tmp_path, "[{\"id\": }]"))
    assert ":1:" in str(exc.value)
    with pytest.raises(ParseError):
        load_registry(write(tmp_path, "{}"))
    with pytest.raises(ParseError):
        load_registry(tmp_path / "missing.json")


def test_duplicate_record_rejected(registry, tmp_path):
    r = raw(registry, "2.32")
    with pytest.raises(ValidationError) as exc:
        load_registry(write(tmp_path, [r, r]))
    assert exc.value.family == "2.32"


@pytest.mark.parametrize("mutate,field_name", [
    (lambda r: r.update(id="9.99"), "id"),
    (lambda r: r.update(picard_rank=3), "picard_rank"),
    (lambda r: r.update(construction="flop"), "construction"),
    (lambda r: r.update(expected_wg="S3"), "expected_wg"),
    (lambda r: r.update(expected_autp="Z7"), "expected_autp"),
    (lambda r: r.update(nef=None), "nef"),
    (lambda r: r.update(colour="blue"), "colour"),
    (lambda r: r.pop("expected_autp"), "expected_autp"),
    (lambda r: r.update(automorphisms=[]), "automorphisms"),
    (lambda r: r["automorphisms"][0].update(picard_matrix=[[1]]), "automorphisms[0]"),
])
def test_validation_errors_name_the_field(registry, mutate, field_name):
    r = raw(registry, "2.32")
    mutate(r)
    with pytest.raises(ValidationError) as exc:
        validate_record(r)
    assert exc.value.field == field_name


def test_exception_records_are_enforced(registry):
    r = raw(registry, "3.9")
    r["expected_autp"] = "Z2"
    with pytest.raises(ValidationError):
        validate_record(r)
    r = raw(registry, "2.2")
    r["expected_autp"] = "Z2"
    with pytest.raises(ValidationError):
        validate_record(r)
    r = raw(registry, "2.2")
    r.pop("justification")
    with pytest.raises(ValidationError):
        validate_record(r)


def test_registry_path_from_environment(registry, tmp_path, monkeypatch):
    p = write(tmp_path, [raw(registry, "2.32")])
    monkeypatch.setenv("FANO_REGISTRY", str(p))
    assert [r.id for r in load_registry()] == ["2.32"]


# ------------------------------------------------------------ verification

def test_verify_2_32(registry):
    rep = verify_family(find_record(registry, "2.32"))
    assert rep.overall == "PASS"
    assert rep.computed_autp == "Z2"
    assert "closure order 2" in rep.checks["group_structure"].details
    assert "2 subgroups checked" in rep.checks["h1_all_subgroups"].details
    assert rep.checks["toric_matrices"].verdict == "N/A"


def test_verify_2_2_is_partial_without_computation(registry):
    rep = verify_family(find_record(registry, "2.2"))
    assert rep.overall == "PARTIAL"
    assert {c.verdict for c in rep.checks.values()} == {"N/A"}
    assert rep.computed_autp == "trivial"


def test_verify_4_1_is_s4(registry):
    rep = verify_family(find_record(registry, "4.1"))
    assert rep.overall == "PASS"
    assert rep.computed_autp == "S4"
    assert "closure order 24" in rep.checks["group_structure"].details


def test_report_key_order_and_round_trip(registry):
    rep = verify_family(find_record(registry, "3.10"))
    data = rep.to_json()
    assert list(data["checks"]) == list(CHECKS)
    back = VerificationReport.from_json(json.loads(json.dumps(data)))
    assert back.to_json() == data and back.overall == rep.overall
    assert "timings" not in data and "timings" in rep.to_json(include_timings=True)


def test_reports_are_deterministic(registry):
    recs = [find_record(registry, f) for f in ("2.12", "3.13", "5.1", "5.3")]
    a = [r.to_json() for r in verify_all(recs, VerifyConfig(jobs=1))]
    b = [r.to_json() for r in verify_all(list(reversed(recs))[::-1], VerifyConfig(jobs=2))]
    assert json.dumps(a) == json.dumps(b)


def test_sqrt2_family_records_used_primes(registry):
    rep = verify_family(find_record(registry, "2.12"))
    assert rep.primes_used == [10007, 10009, 10039]
    assert rep.overall == "PASS"


def test_wrong_recorded_matrix_fails(registry):
    r = raw(registry, "2.32")
    r["automorphisms"][0]["picard_matrix"] = [[1, 0], [0, 1]]
    rep = verify_family(validate_record(r))
    assert rep.checks["picard_action_match"].verdict == "FAIL"
    assert rep.overall == "FAIL"


def test_singular_equation_fails_smoothness(registry):
    r = raw(registry, "2.32")
    r["equations"] = ["x0*y0 + x1*y1"]
    rep = verify_family(validate_record(r))
    assert rep.checks["smoothness"].verdict == "FAIL"
    assert rep.checks["smoothness"].details[0].startswith("variety: SINGULAR_MOD_P(")


def test_non_preserving_map_fails_invariance(registry):
    r = raw(registry, "3.10")
    r["automorphisms"][0]["images"] = {"x0": "x2", "x2": "x0"}
    rep = verify_family(validate_record(r))
    assert rep.checks["invariance"].verdict == "FAIL"
    assert rep.overall == "FAIL"


def test_broken_polynomial_becomes_fail_not_crash(registry):
    r = raw(registry, "2.32")
    r["equations"] = ["x0*y0 +"]
    rep = verify_family(validate_record(r))
    assert rep.overall == "FAIL"
    for name in ("smoothness", "invariance"):
        assert rep.checks[name].verdict == "FAIL"
        assert rep.checks[name].details[0].startswith("PolyParseError")


def test_timeout_is_an_operational_error(registry, monkeypatch):
    import fanopic.registry.verify as verify_mod
    from fanopic.polyring import ChartTimeout

    def slow(*args, **kw):
        raise ChartTimeout(chart="x0=1 mod 10007")

    monkeypatch.setattr(verify_mod, "smoothness_certificate", slow)
    rep = verify_family(find_record(registry, "2.32"))
    assert rep.operational_error and rep.overall == "FAIL"
    assert rep.checks["smoothness"].details[0].startswith("timeout")
    assert rep.checks["group_structure"].verdict == "PASS"


# ------------------------------------------------------------ rendering

def test_render_empty_table():
    assert render_table([]) == "family | AutP | WG | verdict\n"


def test_render_single_5_3(registry):
    text = render_table([verify_family(find_record(registry, "5.3"))])
    assert text.splitlines()[1] == "5.3 | Z/2 × S3 | Z/2 × S3 | PASS"


def test_render_unknown_rows(full_reports):
    rows = {line.split(" | ")[0]: line for line in render_table(list(full_reports.values())).splitlines()[1:]}
    assert rows["3.9"] == "3.9 | ? | Z/2 | PARTIAL"
    assert rows["4.2"] == "4.2 | ? | (Z/2)^2 | PARTIAL"
    assert rows["2.2"] == "2.2 | 0 | Z/2 | PARTIAL"
    assert rows["7.1"] == "7.1 | - | W(D5) | PARTIAL"
    order = list(rows)
    assert order == sorted(order, key=lambda f: tuple(map(int, f.split("."))))


def test_other_table_kinds(full_reports):
    reps = [full_reports[f] for f in ("3.27", "4.1")]
    weyl = render_table(reps, "weyl").splitlines()
    assert weyl[1] == "3.27 | S3 | S3 | PASS"
    h1 = render_table(reps, "h1").splitlines()
    assert h1[2] == "4.1 | S4 | 30 | 0"
    with pytest.raises(ValueError):
        render_table(reps, "pie")


# ------------------------------------------------------------ corrected data

def _omega_point(text):
    return [tuple(parse_poly(c, (), OMEGA).terms.get((), OMEGA.zero) for c in text.split(":"))]


def test_printed_5_1_points_coincide():
    p1 = _omega_point("0:0:1:omega:omega^2")
    p2 = _omega_point("0:0:omega:1:omega^2")
    p3 = _omega_point("0:0:1:omega^2:omega")
    # p2 = omega * p3 exactly, so the printed configuration has two points.
    assert same_point(p2, p3, OMEGA)
    assert not same_point(p1, p2, OMEGA)


def test_shipped_5_1_points_are_distinct(registry):
    rec = find_record(registry, "5.1")
    pts = [c["point"] for c in rec.centers if "point" in c]
    conv = [[tuple(QQ.convert(int(x)) for x in p[0])] for p in pts]
    assert len(pts) == 3
    assert not any(same_point(conv[i], conv[j], QQ) for i in range(3) for j in range(i + 1, 3))


def test_printed_3_20_lines_miss_the_quadric():
    amb = MultiProjectiveSpace((("x0", "x1", "x2", "x3", "x4"),))
    q = parse_poly("x4^2 + x0*x1 + x2*x3", amb.variables, QQ)
    line = [parse_poly(v, amb.variables, QQ) for v in ("x2", "x3", "x4")]
    assert not ideal_contains_saturated(line, q, amb, 10007)
    shipped = [parse_poly(v, amb.variables, QQ) for v in ("x1", "x2", "x4")]
    assert ideal_contains_saturated(shipped, q, amb, 10007)


def test_printed_4_12_transposition_breaks_grading(registry):
    c = find_record(registry, "4.12").cox
    coords = tuple(c["coordinates"])
    cox = CoxPresentation(coords, IntMatrix.from_rows(c["grading"]),
                          tuple(coords.index(b) for b in c["picard_basis"]),
                          tuple(tuple(m) for m in c["irrelevant_monomials"]))
    with pytest.raises(Incompatible):
        induced_picard_matrix(cox, parse_coordinate_permutation("(45)", len(coords)))


def test_printed_5_2_grading_row_gives_zero_ray(registry):
    c = find_record(registry, "5.2").cox
    rows = [list(r) for r in c["grading"]]
    rows[4] = [0, 0, -1, -1, 1, 0, 1, 1]
    K = integer_kernel(IntMatrix.from_rows(rows))
    x = c["coordinates"].index("x")
    assert all(k[x] == 0 for k in K)
