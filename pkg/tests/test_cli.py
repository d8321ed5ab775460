import io
from pathlib import Path

import pytest

from sjinv.cli import EXIT_FAIL, EXIT_INCOHERENT, EXIT_OK, EXIT_USAGE, main

SCN = Path(__file__).resolve().parent.parent / "scenarios"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", ["bounded_blocks", "buffer_pairs", "ba_four_atoms",
                                  "tree_reveal", "equivalence"])
def test_scenarios_verify(name):
    code, text = run("run", str(SCN / f"{name}.scn"))
    assert code == EXIT_OK
    assert text.rstrip().splitlines()[-1].endswith("OK")


def test_dcf0_scenario_audit():
    code, text = run("run", str(SCN / "dcf0_pairs.scn"))
    assert code == EXIT_OK
    assert text.rstrip().splitlines()[-1] == "TYPE-AUDIT n=1 OK"


def test_short_horizon_fails_verification():
    code, text = run("run", str(SCN / "bounded_blocks.scn"), "--stages", "4",
                     "--verify-prefix", "4")
    assert code == EXIT_FAIL
    assert "FAIL" in text.splitlines()[-1]


def test_incoherent_fixture(capsys):
    assert run("run", str(SCN / "corrupted_order.scn"))[0] == EXIT_INCOHERENT
    assert "incoherent" in capsys.readouterr().err


def test_malformed_scenario(capsys):
    assert run("run", str(SCN / "malformed.scn"))[0] == EXIT_USAGE
    assert "malformed.scn:3" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert run("run", str(tmp_path / "missing.scn"))[0] == EXIT_USAGE
    assert run("run", str(SCN / "equivalence.scn"), "--class", "tree")[0] == EXIT_USAGE
    assert run("enumerate", "bogus")[0] == EXIT_USAGE
    assert run("enumerate", "dcf0", "--n", "0")[0] == EXIT_USAGE


def test_trace_out(tmp_path):
    dest = tmp_path / "trace.txt"
    code, text = run("run", str(SCN / "tree_reveal.scn"), "--trace-out", str(dest))
    assert code == EXIT_OK
    assert dest.read_text().strip() and text.count("\n") <= 3


@pytest.mark.parametrize("what", ["linear-order", "boolean-algebra", "tree"])
def test_enumerate_lists_exactly_max_index(what):
    code, text = run("enumerate", what, "--max-index", "10")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert len(lines) == 10
    idx = [int(line.split(":")[0]) for line in lines]
    assert idx == sorted(set(idx))


def test_enumerate_dcf0_starts_with_zero_polynomial():
    code, text = run("enumerate", "dcf0", "--size-bound", "3")
    assert code == EXIT_OK
    assert text.startswith("#0 0\n")
    assert sum(1 for line in text.splitlines() if line.startswith("#")) == 3


@pytest.mark.parametrize("name", ["buffer_pairs", "ba_four_atoms", "dcf0_pairs"])
def test_reruns_are_byte_identical(name):
    assert run("run", str(SCN / f"{name}.scn")) == run("run", str(SCN / f"{name}.scn"))
