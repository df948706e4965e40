import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ringquot.cli import (
    EXIT_ENGINE,
    EXIT_INPUT,
    EXIT_NEGATIVE,
    EXIT_OK,
    FIXTURE_NAMES,
    QUOTIENT_TASKS,
    SENSES,
    TASKS,
    AlgebraSpec,
    InputError,
    JobSpec,
    Options,
    build_algebra,
    load_fixture,
    main,
    parse_job,
    print_job,
    run,
)

MINIMAL = "field GF(2); algebra matrix(2); task qmax"


def _machine_block(text):
    start = text.index("--- machine ---\n") + len("--- machine ---\n")
    return json.loads(text[start:text.index("--- end ---")])


def test_minimal_form_parses():
    spec = parse_job(MINIMAL)
    assert spec == JobSpec("GF(2)", AlgebraSpec("matrix", 2), "qmax")
    assert parse_job(MINIMAL + ";") == spec


def test_comments_and_whitespace_are_ignored():
    text = "# leading\nfield  QQ ;\n\talgebra truncated(3);  # trailing\ntask qcl\n"
    assert parse_job(text) == JobSpec("QQ", AlgebraSpec("truncated", 3), "qcl")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_round_trip(name):
    spec = load_fixture(name)
    assert parse_job(print_job(spec)) == spec
    assert spec.name == name


@pytest.mark.parametrize("text, line, col", [
    ("field GF(2);\nalgebra matrx(2);\ntask qmax;", 2, 9),
    ("field GF(4); algebra matrix(2); task qmax;", 1, 7),
    ("field QQ;\nalgebra matrix(2)\ntask qmax;", 3, 1),
    ("field QQ; algebra matrix(2); task qmax; options { seed x; }", 1, 56),
    ("field QQ; algebra pattern(2) { cell (1,1) ;", 1, 44),
    ("field QQ; algebra matrix(2); task qmax; $", 1, 41),
    ("field QQ; algebra constants(1) { mult 0 0 -> 1 1; }; task qmax", 1, 34),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(InputError, match=rf"^line {line}, col {col}: "):
        parse_job(text)


def test_missing_statement_is_named():
    with pytest.raises(InputError, match="missing statement.*task"):
        parse_job("field QQ; algebra matrix(2);")


def test_coefficients_are_canonical():
    spec = parse_job("field QQ; algebra constants(1) { mult 0 0 -> 0 2/2; unit 4/4; }; task qcl")
    assert spec.algebra.mults == ((0, 0, 0, "1"),)
    assert spec.algebra.unit == ("1",)


def test_constants_unit_is_solved_when_omitted():
    R = build_algebra(load_fixture("dual_numbers"))
    assert R.dim == 2 and list(R.one.entries()) == [1, 0]


# -- round trip


_ident = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)
_coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(
    lambda q: str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}")


@st.composite
def algebra_specs(draw):
    kind = draw(st.sampled_from(["matrix", "truncated", "pattern", "constants", "quiver", "poset"]))
    if kind in ("matrix", "truncated"):
        return AlgebraSpec(kind, draw(st.integers(1, 5)))
    if kind == "pattern":
        n = draw(st.integers(1, 4))
        cell = st.tuples(st.integers(1, n), st.integers(1, n))
        cells = tuple(draw(st.lists(cell, max_size=6)))
        ties = tuple(draw(st.lists(st.tuples(cell, cell), max_size=2)))
        return AlgebraSpec(kind, n, cells=cells, ties=ties)
    if kind == "constants":
        n = draw(st.integers(1, 3))
        idx = st.integers(0, n - 1)
        mults = tuple(draw(st.lists(st.tuples(idx, idx, idx, _coeff), max_size=5)))
        unit = tuple(draw(st.one_of(st.just(()), st.lists(_coeff, min_size=n, max_size=n))))
        labels = tuple(draw(st.one_of(st.just(()), st.lists(_ident, min_size=n, max_size=n))))
        return AlgebraSpec(kind, n, mults=mults, unit=unit, labels=labels)
    verts = tuple(draw(st.lists(_ident, min_size=1, max_size=4, unique=True)))
    v = st.sampled_from(verts)
    if kind == "quiver":
        arrows = tuple(draw(st.lists(st.tuples(_ident, v, v), max_size=4)))
        return AlgebraSpec(kind, vertices=verts, arrows=arrows)
    return AlgebraSpec(kind, elements=verts, relations=tuple(draw(st.lists(st.tuples(v, v), max_size=4))))


job_specs = st.builds(
    JobSpec,
    field=st.sampled_from(["QQ", "GF(2)", "GF(3)", "GF(7)"]),
    algebra=algebra_specs(),
    task=st.sampled_from(TASKS),
    options=st.builds(Options, seed=st.integers(0, 99), max_dim=st.integers(1, 200),
                      samples=st.integers(1, 500),
                      extension=st.sampled_from(QUOTIENT_TASKS + ("identity",)),
                      sense=st.sampled_from(SENSES)),
    name=st.one_of(st.just(""), _ident),
)


@given(job_specs)
def test_print_parse_round_trip(spec):
    assert parse_job(print_job(spec)) == spec


@given(job_specs)
def test_printing_is_a_fixpoint(spec):
    text = print_job(spec)
    assert print_job(parse_job(text)) == text


# -- main()


def test_exit_ok(capsys):
    assert main(["--input", "m2", "--task", "qmax", "--assert"]) == EXIT_OK
    assert "qmax:" in capsys.readouterr().out


def test_exit_negative_under_assert(tmp_path, capsys):
    job = tmp_path / "job.alg"
    job.write_text(print_job(load_fixture("example_5_4_1")).replace("report-all", "check-perfect"))
    # R -> Q_max is right perfect only, so the default symmetric sense fails
    assert main(["--input", str(job)]) == EXIT_OK
    assert main(["--input", str(job), "--assert"]) == EXIT_NEGATIVE
    assert "verdict: perfect_right" in capsys.readouterr().out


def test_exit_input_error(tmp_path, capsys):
    job = tmp_path / "bad.alg"
    job.write_text("field GF(2);\nalgebra matrix(2)\ntask qmax\n")
    assert main(["--input", str(job)]) == EXIT_INPUT
    assert "line 3, col 1" in capsys.readouterr().err
    assert main(["--input", "no_such_fixture"]) == EXIT_INPUT
    assert main(["--input", "m2", "--field", "GF(6)"]) == EXIT_INPUT
    assert main(["--input", "example_5_4_2", "--max-dim", "4"]) == EXIT_INPUT


def test_invalid_pattern_is_an_input_error(tmp_path):
    job = tmp_path / "p.alg"
    job.write_text("field GF(2); algebra pattern(2) { cell (1,2); }; task qmax")
    assert main(["--input", str(job)]) == EXIT_INPUT


def test_exit_engine_error(capsys):
    # R has dim 4 but Q_max has dim 9
    assert main(["--input", "example_5_4_1", "--task", "qmax", "--max-dim", "5"]) == EXIT_ENGINE
    assert "engine error" in capsys.readouterr().err


def test_overrides_reach_the_report(capsys):
    main(["--input", "example_5_4_1", "--task", "qsigmamax", "--field", "QQ", "--seed", "9"])
    out = capsys.readouterr().out
    assert "field: QQ" in out and "task: qsigmamax" in out and "seed 9;" in out


def test_machine_block_is_json_with_labels(capsys):
    main(["--input", "chain2_incidence", "--field", "QQ", "--task", "check-perfect", "--emit-machine-block"])
    data = _machine_block(capsys.readouterr().out)
    assert list(data)[:4] == ["input", "field", "task", "algebra"]
    assert list(data)[-1] == "assertion"
    perf = data["perfectness"]
    # the structural verdict is exact; the elementwise route over QQ is sampled
    assert perf["verdict"] == {"value": "perfect_symmetric", "label": "exact"}
    assert perf["elementwise_i"]["label"] == "sampled"
    assert data["assertion"] == {"value": True, "label": "exact"}


def _claims(node):
    if isinstance(node, dict):
        if set(node) == {"value", "label"}:
            yield node
        else:
            for v in node.values():
                yield from _claims(v)


def test_every_claim_is_labelled(capsys):
    main(["--input", "example_5_4_1", "--emit-machine-block"])
    claims = list(_claims(_machine_block(capsys.readouterr().out)))
    assert len(claims) > 50
    assert {c["label"] for c in claims} <= {"exact", "sampled"}


def test_rationals_print_as_p_over_q(tmp_path, capsys):
    # a^2 = e/4, so a +- e/2 are the idempotent directions
    job = tmp_path / "q.alg"
    job.write_text("field QQ; algebra constants(2) { mult 0 0 -> 0 1; mult 0 1 -> 1 1; "
                   "mult 1 0 -> 1 1; mult 1 1 -> 0 2/8; labels e a; }; task qmax")
    assert main(["--input", str(job)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "1/4" in out and "2/8" not in out
    for tok in out.replace(",", " ").split():
        if "/" in tok and tok.strip("[]()").replace("/", "").replace("-", "").isdigit():
            q = Fraction(tok.strip("[]()"))
            assert tok.strip("[]()") == f"{q.numerator}/{q.denominator}"


def test_report_is_byte_identical_across_runs():
    spec = load_fixture("example_5_4_1")
    assert run(spec).text(True) == run(spec).text(True)


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "ringquot", "--input", "dual_numbers", "--emit-machine-block"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"--- end ---\n")
