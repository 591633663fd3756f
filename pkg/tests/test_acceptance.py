"""Exit criteria, each at its stated size and tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line, which is also collected for
the terminal summary.
"""
import subprocess
import sys
import time

import pytest

from opweak import suites
from opweak.constants import CONSTANTS

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def _announce(capsys, k, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    return ok


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def norms_suite():
    return _timed(suites.run_norms, seed=1)


@pytest.fixture(scope="module")
def schur_suite():
    return _timed(suites.run_schur, seed=1)


@pytest.fixture(scope="module")
def trunc_suite():
    return _timed(suites.run_trunc, seed=1)


def _group_ok(res, label, instances):
    g = res.groups[label]
    return g["failed"] == 0 and g["instances"] >= instances, g


def test_criterion_01_min_ratio_decomposition(capsys):
    res, dt = _timed(suites.run_phi_decompositions, seed=1)
    ok, g = _group_ok(res, "min-ratio matrix decomposition", 200)
    ok = ok and dt < 10.0
    _announce(capsys, 1, ok, f"{g['instances']} alpha (n<=32), {g['failed']} failed checks, {dt:.2f}s (< 10s)")
    assert ok, res.failures[:3]


def test_criterion_02_s_factorization(capsys, trunc_suite):
    res, _ = trunc_suite
    ok, g = _group_ok(res, "S = (2T-1)(2M_Phi-1) factorization", 200)
    _announce(capsys, 2, ok, f"{g['instances']} (alpha, A), residual <= 1e-13 ||A||_F, {g['failed']} failed")
    assert ok, res.failures[:3]


def test_criterion_03_schur(capsys, schur_suite):
    res, _ = schur_suite
    ok1, g1 = _group_ok(res, "Schur product theorem", 500)
    ok2, g2 = _group_ok(res, "positive Schur multiplier trace bound", 500)
    ok3, g3 = _group_ok(res, "block Schur multiplier positivity", 100)
    ok = ok1 and ok2 and ok3
    _announce(capsys, 3, ok, f"Schur theorem {g1['instances']}, trace bound {g2['instances']}, "
              f"block positivity {g3['instances']}; failed {g1['failed'] + g2['failed'] + g3['failed']}")
    assert ok, res.failures[:3]


def test_criterion_04_truncation_bounds(capsys, trunc_suite):
    res, _ = trunc_suite
    ok1, g1 = _group_ok(res, "self-adjoint truncation bound", 500)
    ok2, g2 = _group_ok(res, "general truncation bound", 500)
    ok3, g3 = _group_ok(res, "divided-difference multiplier bound", 200)
    ok = ok1 and ok2 and ok3
    _announce(capsys, 4, ok, f"4e/pi on {g1['instances']}, 16e/pi on {g2['instances']}, "
              f"80e/pi on {g3['instances']}; failed {g1['failed'] + g2['failed'] + g3['failed']}")
    assert ok, res.failures[:3]


def test_criterion_05_four_term_identity(capsys):
    res = suites.run_decompositions(seed=1)
    labels = [k for k in res.groups if k.startswith("four-term decomposition")]
    total = sum(res.groups[k]["instances"] for k in labels)
    degenerate = res.groups.get("four-term decomposition (degenerate)", {}).get("instances", 0)
    ok = res.passed and total >= 200 and degenerate > 0
    _announce(capsys, 5, ok, f"{total} symmetric pairs (2n<=64, {degenerate} degenerate), {res.failed} failed checks")
    assert ok, res.failures[:3]


def test_criterion_06_main_bound(capsys):
    res, dt = _timed(suites.run_certified, seed=1)
    pairs = res.data["sweep_pairs"]
    worst = max(res.data["sweep_max_ratio"], res.data["search_best"])
    ok = (res.passed and pairs >= 1000 and res.data["search_evaluations"] == 10_000
          and worst <= CONSTANTS.c_main and dt < 300.0)
    _announce(capsys, 6, ok, f"{pairs} pairs + search (n=16, 10^4 evals); max ratio {worst:.4g} "
              f"<= {CONSTANTS.c_main:.4f}; {res.failed} failed checks; {dt:.1f}s (< 300s)")
    assert ok, res.failures[:3]


def test_criterion_07_singular_value_inequalities(capsys, norms_suite):
    res, _ = norms_suite
    ok1, g1 = _group_ok(res, "singular-value inequalities", 500)
    ok2, g2 = _group_ok(res, "direct-sum weak-L1 inequality", 500)
    quasi = res.data["max_quasi_triangle_ratio"]
    ok = ok1 and ok2 and quasi <= 2.0 + 1e-9
    _announce(capsys, 7, ok, f"{g1['instances']} pairs, {g2['instances']} direct sums; "
              f"max quasi-triangle ratio {quasi:.4f}; failed {g1['failed'] + g2['failed']}")
    assert ok, res.failures[:3]


def test_criterion_08_commutators(capsys):
    res = suites.run_comm(seed=1)
    ok1, g1 = _group_ok(res, "weak-L1 commutator bound", 500)
    # 100 pairs at two eps and two truncation orders
    ok2, g2 = _group_ok(res, "exponential commutator series", 400)
    ok3, g3 = _group_ok(res, "conjugation limit", 50)
    ok = ok1 and ok2 and ok3 and res.passed
    _announce(capsys, 8, ok, f"commutator ratio max {res.data['max_commutator_ratio']:.4g} on {g1['instances']}, "
              f"series {g2['instances']}, limit {g3['instances']}; {res.failed} failed checks")
    assert ok, res.failures[:3]


def test_criterion_09_davies(capsys):
    res = suites.run_davies(seed=1)
    ok1, g1 = _group_ok(res, "distorted variation closed form", 300)
    ok2, g2 = _group_ok(res, "discretization", 200)
    ok3, g3 = _group_ok(res, "Davies-class Lipschitz bound", 200)
    ok = ok1 and ok2 and ok3
    _announce(capsys, 9, ok, f"DV {g1['instances']}, discretizations {g2['instances']}, "
              f"assembled bound {g3['instances']}; failed {g1['failed'] + g2['failed'] + g3['failed']}")
    assert ok, res.failures[:3]


def test_criterion_10_numerical_core(capsys, norms_suite, tmp_path):
    res, _ = norms_suite
    ok_eig, g = _group_ok(res, "eigensolver accuracy", 2 * len(suites.EIG_SIZES))
    cmd = [sys.executable, "-m", "opweak", "check", "--suite", "all", "--seed", "1", "--no-timestamp", "--out"]
    runs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        t0 = time.perf_counter()
        proc = subprocess.run(cmd + [str(out)], capture_output=True, text=True)
        runs.append((proc, time.perf_counter() - t0, out.read_bytes() if out.exists() else b""))
    (p1, dt, j1), (p2, _, j2) = runs
    same = j1 == j2 and p1.stdout == p2.stdout and len(j1) > 0
    ok = ok_eig and p1.returncode == 0 and p2.returncode == 0 and dt < 600.0 and same
    _announce(capsys, 10, ok, f"eigensolver up to n={max(suites.EIG_SIZES)} ({g['failed']} failed); "
              f"check --suite all exit {p1.returncode} in {dt:.1f}s (< 600s); "
              f"reruns byte-identical: {same}")
    assert ok, p1.stdout + p1.stderr
