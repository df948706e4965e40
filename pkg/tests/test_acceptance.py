"""Acceptance criteria, one PASS/FAIL line each (printed in the terminal summary).

Tolerances are pinned in oracles.BUDGET (wall-clock seconds per fixture,
including algebra construction and report rendering). Everything else is exact.
Two sub-claims are known to be false for these fixtures; their tests are
strict xfail so the suite stays green while the line still reads FAIL.
"""
import json
import time

import pytest

from conftest import engine
from oracles import BUDGET, DIMS, EX2_SIGMA_PAPER
from ringquot.battery import BatteryConfig, fixture_extensions, run_battery
from ringquot.cli import FIXTURE_NAMES, load_fixture, run
from ringquot.descent import total_containments
from ringquot.perfectness import check_elementwise_symmetric, perfectness_report

RESULTS: dict[str, tuple[bool, str]] = {}
SEVEN = ("qmax", "qlmax", "qsigmamax", "qtot", "qltot", "qsigmatot", "qcl")


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _machine(text: str) -> dict:
    body = text.split("--- machine ---\n", 1)[1].split("--- end ---", 1)[0]
    return json.loads(body)


def _timed_report(fixture: str, field: str | None = None):
    t0 = time.perf_counter()
    text = run(load_fixture(fixture, field)).text(machine=True)
    return text, _machine(text), time.perf_counter() - t0


def _dims(data: dict) -> dict:
    return {k: v["value"] for k, v in data["dims"].items()}


def _certs(data: dict) -> dict:
    return {k: v["value"] for k, v in data["certificates"].items()}


@pytest.fixture(scope="module")
def ex2_report():
    return _timed_report("example_5_4_2")


# -- 1


@pytest.mark.parametrize("field", ["GF(2)", "QQ"])
def test_criterion_1_example_one(field):
    _, data, secs = _timed_report("example_5_4_1", field)
    dims = _dims(data)
    want = {n: DIMS[("example_5_4_1", n)][0] for n in SEVEN if n != "qcl"}
    got = {n: dims[n] for n in want}
    ok = got == want and dims["qsigmamax"] == dims["qsigmatot"] == 4
    ok = ok and data["equals_R"]["qsigmamax"]["value"] and data["equals_R"]["qsigmatot"]["value"]
    certs = _certs(data)
    big = [n for n in want if want[n] == 9]
    if field == "GF(2)":
        ok = ok and all(certs[n].startswith("M3(GF(2))") for n in big)
    ok = ok and secs < BUDGET["example_5_4_1"]
    record(f"1[{field}]", ok, f"dims {got}, sigma = R, certs {sorted({certs[n] for n in big})}, "
                              f"{secs:.1f}s < {BUDGET['example_5_4_1']}s")


# -- 2


def test_criterion_2_example_two_maximal(ex2_report):
    _, data, secs = ex2_report
    dims, certs = _dims(data), _certs(data)
    ok = dims["qmax"] == dims["qlmax"] == 16
    ok = ok and certs["qmax"].startswith("M4(GF(2))") and certs["qlmax"].startswith("M4(GF(2))")
    ok = ok and secs < BUDGET["example_5_4_2"]
    record("2a", ok, f"Q_max = Q_lmax = {dims['qmax']}, {certs['qmax']}, {secs:.1f}s < {BUDGET['example_5_4_2']}s")


@pytest.mark.xfail(strict=True, reason="both symmetric constructions give M4 (dim 16), not R (dim 9)")
def test_criterion_2_example_two_symmetric(ex2_report):
    _, data, _ = ex2_report
    dims = _dims(data)
    want = EX2_SIGMA_PAPER[0]
    ok = dims["qsigmamax"] == dims["qsigmatot"] == want and data["equals_R"]["qsigmamax"]["value"]
    record("2b", ok, f"Q_max^sigma = {dims['qsigmamax']}, Q_tot^sigma = {dims['qsigmatot']}, expected {want} = R")


# -- 3


def test_criterion_3_matrix_ring():
    _, data, secs = _timed_report("m2")
    eq = {n: data["equals_R"][n]["value"] for n in SEVEN}
    ok = all(eq.values()) and secs < BUDGET["m2"]
    record("3", ok, f"all seven equal R: {all(eq.values())}, {secs:.1f}s < {BUDGET['m2']}s")


# -- 4


@pytest.mark.parametrize("fixture", ["dual_numbers", "chain2_incidence"])
def test_criterion_4_classical_quotient(fixture):
    e = engine(fixture)
    qcl = e.get("qcl")
    sym = check_elementwise_symmetric(qcl.q)
    _, data, _ = _timed_report(fixture)
    inside = data["containments"]["qcl_in_qsigmatot"]["value"]
    ok = qcl.dim == DIMS[(fixture, "qcl")][0] and sym.ok and inside
    record(f"4[{fixture}]", ok, f"Q_cl dim {qcl.dim}, elementwise {sym.ok} [{sym.label}], "
                                f"Q_cl in Q_tot^sigma: {inside}")


# -- 5


@pytest.fixture(scope="module")
def battery():
    return run_battery(BatteryConfig(seed=0, count=200, max_dim=6))


def test_criterion_5_battery(battery):
    def bad(prefixes):
        return [c.index for c in battery.cases if any(f.startswith(prefixes) for f in c.failures)]
    five = bad(("right.", "left."))
    triple = bad(("triple.",))
    kern = [c.index for c in battery.cases
            if "sym.kernel_is_torsion" in c.failures or "sym.meet_inside_kernel" in c.failures]
    cov = battery.coverage()
    ok = cov["cases"] >= 200 and not five and not triple and not kern
    record("5a", ok, f"{cov['cases']} cases, coverage {cov}; five-term failures {five}, "
                     f"S(x)M(x)S torsion failures {triple}, ker i_M = two-sided torsion failures {kern}")


@pytest.mark.xfail(strict=True, reason="_S t meet t_S differs from ker i_M; T2 in M2 with M = D(T2)")
def test_criterion_5_meet_is_kernel(battery):
    bad = [c.index for c in battery.cases if "sym.meet_is_kernel" in c.failures]
    record("5b", not bad, f"_S t meet t_S = ker i_M fails on cases {bad} of {len(battery.cases)}")


# -- 6


def test_criterion_6_route_agreement():
    exts = fixture_extensions("GF(2)", max_target=9)
    disagree, verdicts = [], {}
    for name, ext in exts:
        rep = perfectness_report(ext)
        verdicts[rep.verdict] = verdicts.get(rep.verdict, 0) + 1
        if not rep.routes_agree:
            disagree.append(name)
    ok = not disagree and len(exts) > 0
    record("6", ok, f"{len(exts)} extensions, verdicts {dict(sorted(verdicts.items()))}, disagreements {disagree}")


# -- 7, 8


@pytest.mark.parametrize("fixture", FIXTURE_NAMES)
def test_criterion_7_descent(fixture):
    e = engine(fixture)
    traces = {n: e.get(n).data["trace"] for n in ("qtot", "qltot", "qsigmatot")}
    dec = all(t.strictly_decreasing for t in traces.values())
    cert = all(t.certificate["ok"] for t in traces.values())
    qs = e.get("qsigmatot")
    cross = qs.data["cross_trace"].dims[-1] == qs.dim
    record(f"7[{fixture}]", dec and cert and cross,
           f"stages {({n: t.dims for n, t in traces.items()})}, fixpoints certified {cert}, "
           f"descents from Q_max^sigma and Q_max agree {cross}")


@pytest.mark.parametrize("fixture", FIXTURE_NAMES)
def test_criterion_8_containments(fixture):
    e = engine(fixture)
    rep = total_containments(e.R, e.get("qsigmatot"), e.get("qtot"), e.get("qltot"))
    record(f"8[{fixture}]", rep.ok, f"Q_tot^sigma in Q_tot {rep.in_right}, in Q_tot^l {rep.in_left}, dims {rep.dims}")


# -- 9


@pytest.mark.parametrize("fixture", FIXTURE_NAMES)
def test_criterion_9_determinism(fixture, ex2_report):
    first = ex2_report[0] if fixture == "example_5_4_2" else _timed_report(fixture)[0]
    second = _timed_report(fixture)[0]
    record(f"9[{fixture}]", first == second, f"{len(first)} bytes, identical {first == second}")

