"""Acceptance gate: every numbered end-to-end check at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see one PASS/FAIL line per
criterion.  Items 1-10 are the registered repro checks (tolerances and
runtime budgets live next to the computations in wienerlab.repro); item 11
drives the `repro` subcommand end-to-end through the CLI.
"""

import time

import pytest

from wienerlab import repro

_CHECKS = {item: (name, fn, budget) for item, name, fn, budget in repro.CHECKS}


@pytest.mark.parametrize("item", sorted(_CHECKS), ids=lambda i: f"criterion-{i}")
def test_acceptance_criterion(item):
    name, fn, budget = _CHECKS[item]
    t0 = time.perf_counter()
    passed, detail = fn()
    elapsed = time.perf_counter() - t0
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] criterion {item:>2} {name}: {detail} ({elapsed:.2f}s)")
    assert passed, f"criterion {item} ({name}): {detail}"
    if budget is not None:
        assert elapsed <= budget, f"criterion {item} took {elapsed:.2f}s > {budget}s"


def test_acceptance_criterion_11_repro_cli(capsys):
    from wienerlab.cli import main

    t0 = time.perf_counter()
    code = main(["repro"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    with capsys.disabled():
        status = "PASS" if code == 0 and elapsed < 120 else "FAIL"
        print(f"[{status}] criterion 11 repro-cli: exit={code} ({elapsed:.2f}s)")
    assert "ALL PASS" in out
    assert code == 0
    assert elapsed < 120
