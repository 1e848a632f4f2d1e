"""
Test script for the rectifier command line.
Runs under pytest, or directly for a pass/fail summary.
"""

import argparse
import inspect
import io
import sys
import tempfile
from pathlib import Path

from app.main import main
from app.models.schemas import RunStatus
from app.services.report_writer import get_report_writer


def run_cli(argv, capsys):
    """Run one command and parse the document it printed."""
    code = main(argv)
    out = capsys.readouterr().out
    return code, get_report_writer().parse(out)


def test_rectify_golden(capsys):
    code, document = run_cli(["rectify", "--p", "13", "--k", "2", "--set", "1,5"], capsys)
    assert code == 0
    assert document.status is RunStatus.VERIFIED
    assert document.result["tower_degree"] == 2
    assert document.result["anchors"] == [1, 5]
    assert document.result["verified"] is True
    assert document.flags["verified"] is True


def test_rectify_rational_golden(capsys):
    code, document = run_cli(["rectify", "--p", "11", "--k", "2", "--set", "3,7"], capsys)
    assert code == 0
    assert document.result["points"] == ["-1/7", "7"]
    assert document.result["tower_degree"] == 1


def test_require_guarantee_aborts(capsys):
    code, document = run_cli(
        ["rectify", "--p", "13", "--k", "2", "--set", "1,5", "--require-guarantee"], capsys
    )
    assert code == 2
    assert document.status is RunStatus.BOUND_ABORT
    assert document.error["type"] == "BoundAbortError"
    assert document.result is None


def test_not_prime_is_usage_error(capsys):
    code, document = run_cli(["rectify", "--p", "12", "--set", "1"], capsys)
    assert code == 1
    assert document.status is RunStatus.USAGE_ERROR
    assert document.error["type"] == "NotPrimeError"


def test_unknown_flag_is_usage_error(capsys):
    code = main(["rectify", "--bogus"])
    captured = capsys.readouterr()
    assert code == 1
    assert "usage error" in captured.err


def test_duplicate_values_rejected(capsys):
    code, document = run_cli(["rectify", "--p", "13", "--set", "5,5"], capsys)
    assert code == 1
    assert document.error["type"] == "PreconditionError"


def test_json_and_text_agree(capsys):
    argv = ["rectify", "--p", "11", "--k", "2", "--set", "3,7"]
    _, text_doc = run_cli(argv + ["--format", "text"], capsys)
    _, json_doc = run_cli(argv + ["--format", "json"], capsys)
    assert text_doc.result == json_doc.result
    assert text_doc.status == json_doc.status


def test_rectify_then_verify_document(tmp_path, capsys):
    out = tmp_path / "rectify.txt"
    code, _ = run_cli(["rectify", "--p", "13", "--k", "2", "--set", "1,5", "--out", str(out)], capsys)
    assert code == 0
    assert out.exists()
    code, document = run_cli(["verify", "--document", str(out)], capsys)
    assert code == 0
    assert document.result["passed"] is True


def test_verify_rejects_bad_candidate(capsys):
    code, document = run_cli(
        ["verify", "--p", "11", "--k", "2", "--set", "3,7", "--points", "3,8"], capsys
    )
    assert code == 3
    assert document.status is RunStatus.VERIFICATION_FAILURE
    assert document.result["passed"] is False


def test_lift_linear(capsys):
    code, document = run_cli(["lift-linear", "--p", "101", "--k", "2", "--set", "3,7"], capsys)
    assert code == 0
    assert document.result["verified"] is True
    assert len(document.result["integer_points"]) == 2


def test_resultant_command(capsys):
    code, document = run_cli(["resultant", "--f", "x1^2 - 2", "--g", "x1 - 1"], capsys)
    assert code == 0
    assert int(document.result["resultant"]) == -1
    assert len(document.result["sylvester"]) == 3


def test_subres_command(capsys):
    code, document = run_cli(
        ["subres", "--f", "x1^2 - 3*x1 + 2", "--g", "x1^2 + 2*x1 - 3"], capsys
    )
    assert code == 0
    assert document.result["gcd_index"] == 1


def test_mersenne_chain(capsys):
    code, document = run_cli(["chain", "--target", "127", "--special", "mersenne"], capsys)
    assert code == 0
    assert document.result["step_count"] == 7
    assert [step["value"] for step in document.result["steps"]] == ["1", "2", "4", "8", "16", "128", "127"]
    assert document.result["verified"] is True


def test_chain_certificate(capsys):
    code, document = run_cli(["chain", "--certify", str(10 ** 9), "--k", "2"], capsys)
    assert code == 0
    assert document.result["steps"] == 1
    assert document.result["reachable_upper"] == "37"


def test_adversarial(capsys):
    code, document = run_cli(["adversarial", "--p", "127", "--k", "3"], capsys)
    assert code == 0
    assert document.result["residues"] == [0, 1, 2, 4, 8, 16]


def test_demo_lattice(capsys):
    code, document = run_cli(["demo", "lattice", "--n", "64"], capsys)
    assert code == 0
    assert document.result["incidences"] == 16


def test_demo_inverse_transfer_lift_limit(capsys):
    code, document = run_cli(
        ["demo", "transfer", "--mode", "inverse", "--p", "10007", "--set", "3,7"], capsys
    )
    assert code == 2
    assert document.status is RunStatus.BOUND_ABORT
    assert document.error["type"] == "BoundAbortError"


def test_demo_incidence_transfer(capsys):
    code, document = run_cli(
        ["demo", "incidences", "--p", "11", "--points", "0:0,0:1,1:0,1:1", "--lines", "1:0:0,0:1:0,1:1:0"], capsys
    )
    assert code == 0
    assert document.result["values"] == [0, 1]
    assert document.result["equal"] is True
    assert document.flags["verified"] is True


def test_demo_terms(capsys):
    code, document = run_cli(["demo", "terms", "--poly", "x1^2 + x1 + 1"], capsys)
    assert code == 0
    assert document.result["terms"] == 3
    assert document.result["square_terms"] == 5


def test_solve_system(capsys):
    code, document = run_cli(
        ["solve", "--p", "13", "--set", "1,5", "--poly", "x2^2 + 1", "--poly", "x1 - 1"], capsys
    )
    assert code == 0
    assert document.result["tower_degree"] == 2
    assert document.result["anchors"] == [1, 5]


class _Capture:
    """Stand-in for the pytest capsys fixture when run as a script."""

    def readouterr(self):
        text = sys.stdout.getvalue()
        sys.stdout.truncate(0)
        sys.stdout.seek(0)
        err = sys.stderr.getvalue() if isinstance(sys.stderr, io.StringIO) else ""
        return argparse.Namespace(out=text, err=err)


def _run_standalone(name, fn, workdir):
    saved = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = io.StringIO(), io.StringIO()
    try:
        params = inspect.signature(fn).parameters
        kwargs = {}
        if "capsys" in params:
            kwargs["capsys"] = _Capture()
        if "tmp_path" in params:
            kwargs["tmp_path"] = workdir
        fn(**kwargs)
        return True
    except Exception as e:
        saved[0].write(f"{name}: {type(e).__name__}: {e}\n")
        return False
    finally:
        sys.stdout, sys.stderr = saved


def _main():
    parser = argparse.ArgumentParser(description="Test rectifier CLI")
    parser.add_argument("-k", "--keyword", help="only run tests whose name contains this")
    args = parser.parse_args()

    tests = [
        (name, fn) for name, fn in sorted(globals().items())
        if name.startswith("test_") and callable(fn) and (not args.keyword or args.keyword in name)
    ]
    results = []
    with tempfile.TemporaryDirectory() as workdir:
        for name, fn in tests:
            print(f"\n=== {name} ===")
            results.append((name, _run_standalone(name, fn, Path(workdir))))

    print("\n" + "=" * 50)
    print("TEST SUMMARY")
    print("=" * 50)

    for name, passed in results:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"{name}: {status}")

    sys.exit(0 if all(passed for _, passed in results) else 1)


if __name__ == "__main__":
    _main()
