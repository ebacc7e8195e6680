from __future__ import annotations

import subprocess
import sys

import pytest
from hypothesis import given

from chantab.circuit import CircuitError, format_circuit, load, parse
from chantab.cli import main
from chantab.elements import Kind, MeasureObservable, Postselect
from chantab.pauli import PhasePoint
from chantab.randomcircuit import RandomCircuitConfig
from chantab.simulate import distribution, final_classical_tableau
from chantab.tableau import InfeasibleError
from tests.conftest import FIXTURES
from tests.strategies import circuits

ALL_FIXTURES = sorted(p.name for p in FIXTURES.glob("*.scf") if p.name != "bad_mnemonic.scf")


def test_bell_fixture(fixture_path):
    c = load(fixture_path("bell.scf"))
    assert len(c.instructions) == 6
    assert c.records() == ["a", "b"]


def test_measure_statement():
    ins = parse("qubits 2\nMEASURE +ZZ 0 1 -> m0\n").instructions[0]
    assert ins.element == MeasureObservable(PhasePoint.from_str("ZZ"), 0, keep=True)
    assert ins.qubits == (0, 1) and ins.record == "m0"
    ps = parse("qubits 1\nPREP0 0\nMZ 0 -> a\nPOSTSELECT a = 1\n").instructions[2]
    assert ps.element == Postselect(PhasePoint.from_str("Z"), 1) and ps.source == "a"


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("qubits 2\nCNOT 0 0\n", 2, "duplicate target"),
        ("qubits 1\nFOO 0\n", 2, "unknown mnemonic"),
        ("qubits 1\nH\n", 2, "takes 1"),
        ("qubits 1\nCNOT 0\n", 2, "takes 2"),
        ("qubits 1\nH 3\n", 2, "out of range"),
        ("qubits 1\nPREP0 0\nDISCARD 0\nH 0\n", 4, "after it was discarded"),
        ("qubits 1\nPREP0 0\nMZ 0 -> a\nH 0\n", 4, "after it was discarded"),
        ("qubits 2\nMZ 0 -> a\nMZ 1 -> a\n", 3, "duplicate record"),
        ("qubits 1\nPREP0 0\nPREP0 0\n", 3, "already prepared"),
        ("qubits 1\nH x\n", 2, "qubit index"),
        ("qubits 1\nMEASURE ZZ 0 -> m\n", 2, "explicit sign"),
        ("qubits 1\nMEASURE +ZQ 0 -> m\n", 2, "bad Pauli"),
        ("qubits 2\nMEASURE +Z 0 1 -> m\n", 2, "factor"),
        ("qubits 1\nPOSTSELECT a = 0\n", 2, "unknown record"),
        ("qubits 1\nMZ 0 -> a\nPOSTSELECT a = 2\n", 3, "0 or 1"),
        ("qubits 1\nMZ 0 -> a\nPOSTSELECT a = 0\nPOSTSELECT a = 1\n", 4, "already post-selected"),
        ("H 0\n", 1, "first statement"),
        ("qubits 1\nMZ 0 ->\n", 2, "missing record"),
        ("", 0, "missing 'qubits"),
    ],
)
def test_parse_errors(text, line, fragment):
    with pytest.raises(CircuitError) as info:
        parse(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    if line:
        assert str(info.value).startswith(f"line {line}:")


def test_comments_and_blank_lines():
    c = parse("# header\n\nqubits 1   # one qubit\nPREP+ 0 # plus\n")
    assert c.instructions[0].element is Kind.PREP_PLUS


def test_open_and_live_qubits():
    c = parse("qubits 3\nH 0\nPREP0 1\nCNOT 0 1\nMZ 1 -> m\n")
    assert c.open_qubits() == [0]
    assert c.live_qubits() == [0]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixtures_parse_and_round_trip(name):
    c = load(FIXTURES / name)
    assert parse(format_circuit(c)).instructions == c.instructions


@given(circuits(RandomCircuitConfig(allow_postselect=True)))
def test_round_trip_random(c):
    assert parse(format_circuit(c)).instructions == c.instructions


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_distributions_normalized(name):
    c = load(FIXTURES / name)
    if c.open_qubits() or len(c.output_records()) > 10:
        return
    try:
        ct = final_classical_tableau(c)
    except InfeasibleError:
        return
    assert sum(p.as_fraction() for p in distribution(ct).values()) == 1


# command line ------------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_prob(capsys, fixture_path):
    assert run(capsys, "prob", fixture_path("bell.scf"), "--outcome", "00") == (0, "p = 1/2^1 (= 0.5)\n", "")
    assert run(capsys, "prob", fixture_path("bell.scf"), "--outcome", "01")[1] == "p = 0/2^0 (= 0)\n"
    for s in ("seq", "chan", "greedy"):
        code, out, _ = run(capsys, "prob", fixture_path("ghz3.scf"), "--outcome", "111", "--strategy", s)
        assert (code, out) == (0, "p = 1/2^1 (= 0.5)\n")


def test_cli_sample_deterministic(capsys, fixture_path):
    a = run(capsys, "sample", fixture_path("bell.scf"), "--shots", "2", "--seed", "7")
    b = run(capsys, "sample", fixture_path("bell.scf"), "--shots", "2", "--seed", "7")
    assert a == b and a[0] == 0
    assert all(line in ("00", "11") for line in a[1].split())


def test_cli_channel(capsys, fixture_path):
    code, out, _ = run(capsys, "channel", fixture_path("open_identity.scf"), "--human")
    assert code == 0
    assert out.splitlines() == ["tableau in=1 out=1 tp=1", "X -> +Z", "Z -> +X"]
    code, out, _ = run(capsys, "channel", fixture_path("bell.scf"), "--dump-diagram")
    assert "vertex 3 [CNOT 0 1]" in out and out.endswith("|1010|0\n")


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_cli_verify_fixtures(capsys, name):
    code, out, err = run(capsys, "verify", str(FIXTURES / name))
    expected = 3 if name == "contradictory.scf" else 0
    assert code == expected, out + err


@pytest.mark.parametrize(
    "argv,code,fragment",
    [
        ([], 1, "required"),
        (["bogus"], 1, "invalid choice"),
        (["prob", "bell.scf"], 1, "--outcome"),
        (["prob", "bell.scf", "--outcome", "0"], 1, "output records"),
        (["prob", "bell.scf", "--outcome", "0x"], 1, "not a bit string"),
        (["prob", "bell.scf", "--outcome", "00", "--strategy", "fast"], 1, "invalid choice"),
        (["sample", "bell.scf", "--shots", "-1", "--seed", "1"], 1, "nonnegative"),
        (["prob", "missing.scf", "--outcome", "0"], 1, "cannot read"),
        (["prob", "bad_mnemonic.scf", "--outcome", "0"], 2, "line 3: unknown mnemonic"),
        (["prob", "contradictory.scf", "--outcome", ""], 3, "infeasible"),
        (["sample", "contradictory.scf", "--shots", "3", "--seed", "1"], 3, "infeasible"),
        (["prob", "open_identity.scf", "--outcome", ""], 1, "open quantum inputs"),
        (["verify", "ghz3.scf", "--max-qubits", "2"], 1, "max-qubits"),
    ],
)
def test_cli_exit_codes(capsys, argv, code, fragment):
    argv = [str(FIXTURES / a) if a.endswith(".scf") else a for a in argv]
    got, out, err = run(capsys, *argv)
    assert got == code
    assert fragment in err


def test_cli_verify_detects_mismatch(monkeypatch, capsys, fixture_path):
    import chantab.oracle as oracle

    real = oracle.ptm_of_circuit
    monkeypatch.setattr(oracle, "ptm_of_circuit", lambda c, trace_out_live=False: -real(c, trace_out_live))
    code, out, _ = run(capsys, "verify", fixture_path("bell.scf"))
    assert code == 4 and "MISMATCH" in out


def test_cli_help_mentions_record_order(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "statement" in out and "order" in out


def test_module_entry_point(fixture_path):
    res = subprocess.run(
        [sys.executable, "-m", "chantab", "prob", fixture_path("bell.scf"), "--outcome", "11"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and res.stdout == "p = 1/2^1 (= 0.5)\n"
