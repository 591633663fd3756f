"""Randomized verification suites shared by the CLI and the acceptance tests.

Each suite draws its instances from ``make_rng(seed, index)`` streams and
returns a :class:`SuiteResult`. A failed check keeps the offending instance as
matrix JSON so it can be replayed.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import absdiff, commutator, davies, harness, norms, schur, weaktrunc
from .constants import CONSTANTS
from .matcore import hermitian_eig, hermitize, matrix_to_json
from .report import DEFAULT_SLACK, Check, Report, leq
from .sampling import ginibre, haar_unitary, make_rng, sample_gue

SUITES = ("norms", "schur", "trunc", "absdiff", "davies", "comm")
EIG_SIZES = (1, 2, 3, 5, 8, 16, 32, 64, 128)
SWEEP_SIZES = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64)
SWEEP_PER_SIZE = 17
MAX_FAILURE_DUMPS = 20


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failed: int = 0
    groups: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def group(self, label: str) -> dict:
        return self.groups.setdefault(label, {"instances": 0, "checks": 0, "failed": 0})

    def record(self, label: str, rep: Report | Check, instance: Callable[[], dict] | None = None) -> bool:
        """Count one instance; keep its matrices when any check failed."""
        checks = rep.checks if isinstance(rep, Report) else [rep]
        bad = [c for c in checks if not c.passed]
        g = self.group(label)
        g["instances"] += 1
        g["checks"] += len(checks)
        g["failed"] += len(bad)
        self.checks += len(checks)
        self.failed += len(bad)
        if bad and len(self.failures) < MAX_FAILURE_DUMPS:
            self.failures.append({
                "group": label,
                "violated": [c.to_dict() for c in bad],
                "instance": instance() if instance else {},
            })
        return not bad

    def to_dict(self, timing: bool = True) -> dict:
        out = {"suite": self.name, "passed": self.passed, "checks": self.checks, "failed": self.failed,
               "groups": self.groups, "data": self.data, "failures": self.failures}
        if timing:
            out["elapsed_s"] = round(self.elapsed_s, 3)
        return out


def _mats(**kw) -> dict:
    return {k: matrix_to_json(v) if isinstance(v, np.ndarray) and v.ndim == 2 else
            (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in kw.items()}


def _count(trials, default):
    return default if trials is None else int(trials)


def _cap(max_n, default):
    return default if max_n is None else max(1, min(int(max_n), default))


def random_alpha(rng, n: int) -> np.ndarray:
    """Decreasing positive weights over a few decades, sometimes with ties."""
    a = np.sort(10.0 ** rng.uniform(-2, 1, n))[::-1]
    if n > 1 and rng.random() < 0.2:
        a = np.sort(rng.choice(a[: max(1, n // 2)], n))[::-1]
    return a


def _psd(rng, n: int) -> np.ndarray:
    g = ginibre(n, rng)[:, : int(rng.integers(1, n + 1))]
    return hermitize(g @ g.conj().T)


def _zero_diag(x: np.ndarray) -> np.ndarray:
    return x - np.diag(np.diag(x))


# -- norms: singular-value inequalities, direct sums, eigensolver --------------

def eigensolver_report(a: np.ndarray) -> Report:
    n = a.shape[0]
    eig = hermitian_eig(a)
    fro = float(np.linalg.norm(a))
    rec = float(np.linalg.norm(eig.reconstruct() - a))
    orth = float(np.linalg.norm(eig.unitary.conj().T @ eig.unitary - np.eye(n)))
    rep = Report(f"eigensolver n={n}")
    rep.add(leq("||Q diag(w) Q* - A||_F <= n 1e-12 ||A||_F", rec, n * 1e-12 * fro))
    rep.add(leq("||Q*Q - I||_F <= n 1e-12", orth, n * 1e-12))
    rep.add(leq("eigenvalues sorted nonincreasing", float(np.max(np.diff(eig.eigenvalues), initial=0.0)), 0.0))
    return rep


def run_norms(seed: int = 1, trials: int | None = None, max_n: int | None = None,
              slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = SuiteResult("norms")
    cap = _cap(max_n, 32)
    quasi = 0.0
    for i in range(_count(trials, 500)):
        rng = make_rng(seed, i)
        n = int(rng.integers(1, cap + 1))
        a = ginibre(n, rng) * 10.0 ** rng.uniform(-2, 2)
        b = ginibre(n, rng) * 10.0 ** rng.uniform(-2, 2)
        if rng.random() < 0.3:
            a, b = hermitize(a), hermitize(b)
        rep = norms.check_singular_inequalities(a, b, slack)
        quasi = max(quasi, rep.data["quasi_triangle_ratio"])
        res.record("singular-value inequalities", rep, lambda: _mats(A=a, B=b))
    res.data["max_quasi_triangle_ratio"] = quasi
    for i in range(_count(trials, 500)):
        rng = make_rng(seed + 1, i)
        k = int(rng.integers(1, 5))
        blocks = [ginibre(int(rng.integers(1, max(2, cap // 2) + 1)), rng) for _ in range(k)]
        res.record("direct-sum weak-L1 inequality", norms.direct_sum_weak_bound(blocks, slack),
                   lambda: {"blocks": [matrix_to_json(b) for b in blocks]})
    sizes = [n for n in EIG_SIZES if max_n is None or n <= max_n] or [1]
    for i, n in enumerate(sizes):
        rng = make_rng(seed + 2, i)
        for kind in ("gue", "degenerate"):
            if kind == "gue":
                a = sample_gue(n, rng)
            else:
                w = haar_unitary(n, rng)
                lam = rng.choice([-1.0, 0.0, 0.5, 2.0], n)
                a = hermitize((w * lam) @ w.conj().T)
            res.record("eigensolver accuracy", eigensolver_report(a), lambda: _mats(A=a))
    return res


# -- schur: min-ratio matrix, Schur product, block multipliers -------------------

def phi_decomposition_report(alpha) -> Report:
    n = len(alpha)
    phi = schur.phi_matrix(alpha)
    terms = schur.phi_decomposition(alpha)
    total = sum(c * t for c, t in terms)
    rel = float(np.linalg.norm(total - phi) / np.linalg.norm(phi))
    rep = Report("min-ratio matrix decomposition")
    rep.add(leq("sum of terms reconstructs Phi (relative)", rel, 1e-12 * n))
    worst = 0.0
    for c, t in terms:
        w = hermitian_eig(c * t).eigenvalues
        scale = max(1.0, abs(w[0]), abs(w[-1]))
        worst = min(worst, float(w[-1]) / scale)
    rep.add(Check("every term positive semidefinite", -worst, 1e-10, worst >= -1e-10))
    return rep


def run_phi_decompositions(seed: int = 1, trials: int | None = None, max_n: int | None = None,
                           res: SuiteResult | None = None) -> SuiteResult:
    res = res or SuiteResult("schur")
    cap = _cap(max_n, 32)
    for i in range(_count(trials, 200)):
        rng = make_rng(seed, i)
        alpha = random_alpha(rng, int(rng.integers(1, cap + 1)))
        res.record("min-ratio matrix decomposition", phi_decomposition_report(alpha),
                   lambda: {"alpha": alpha.tolist()})
    return res


def run_schur(seed: int = 1, trials: int | None = None, max_n: int | None = None,
              slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = run_phi_decompositions(seed, trials, max_n)
    small = _cap(max_n, 16)
    for i in range(_count(trials, 500)):
        rng = make_rng(seed + 1, i)
        n = int(rng.integers(1, small + 1))
        a, b = _psd(rng, n), _psd(rng, n)
        prod = schur.hadamard(a, b)
        ok, lam = schur.is_psd(prod)
        scale = max(1.0, float(np.linalg.norm(prod)))
        res.record("Schur product theorem", Check("lambda_min(A o B) >= -1e-10 scale", -lam, 1e-10 * scale, ok),
                   lambda: _mats(A=a, B=b))
        x = ginibre(n, rng)
        res.record("positive Schur multiplier trace bound", schur.schur_multiplier_trace_bound(b, x, slack),
                   lambda: _mats(B=b, A=x))
    for i in range(_count(trials, 100)):
        rng = make_rng(seed + 2, i)
        n = int(rng.integers(2, small + 1)) if small > 1 else 1
        k = int(rng.integers(1, n + 1))
        cuts = np.sort(rng.choice(np.arange(1, n), k - 1, replace=False)) if k > 1 else np.array([], int)
        edges = [0, *cuts.tolist(), n]
        w = haar_unitary(n, rng)
        projs = [w[:, edges[j]:edges[j + 1]] @ w[:, edges[j]:edges[j + 1]].conj().T for j in range(k)]
        bm, x = _psd(rng, k), _psd(rng, n)
        out = schur.block_schur(bm, projs, x)
        ok, lam = schur.is_psd(hermitize(out))
        scale = max(1.0, float(np.linalg.norm(out)))
        res.record("block Schur multiplier positivity",
                   Check("lambda_min(sum B_ij p_i X p_j) >= -1e-10 scale", -lam, 1e-10 * scale, ok),
                   lambda: _mats(B=bm, X=x, edges=edges))
    return res


# -- trunc: triangular truncation and the divided-difference multiplier ---------

def run_trunc(seed: int = 1, trials: int | None = None, max_n: int | None = None,
              slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = SuiteResult("trunc")
    cap = _cap(max_n, 32)
    for i in range(_count(trials, 200)):
        rng = make_rng(seed, i)
        n = int(rng.integers(1, cap + 1))
        alpha, a = random_alpha(rng, n), ginibre(n, rng)
        gap = weaktrunc.verify_s_factorization(alpha, a)
        res.record("S = (2T-1)(2M_Phi-1) factorization",
                   leq("||S(A) - (2T-1)(2Phi o A - A)||_F <= 1e-13 ||A||_F", gap, 1e-13 * np.linalg.norm(a)),
                   lambda: _mats(alpha=alpha, A=a))
    for i in range(_count(trials, 500)):
        rng = make_rng(seed + 1, i)
        n = int(rng.integers(2, cap + 1)) if cap > 1 else 1
        x = _zero_diag(hermitize(ginibre(n, rng)))
        res.record("self-adjoint truncation bound", weaktrunc.check_truncation_bounds(x, slack),
                   lambda: _mats(X=x))
        y = _zero_diag(ginibre(n, rng))
        res.record("general truncation bound", weaktrunc.check_truncation_bounds(y, slack),
                   lambda: _mats(X=y))
    for i in range(_count(trials, 200)):
        rng = make_rng(seed + 2, i)
        n = int(rng.integers(1, cap + 1))
        alpha, a = random_alpha(rng, n), ginibre(n, rng)
        res.record("divided-difference multiplier bound", weaktrunc.check_s_bound(alpha, a, slack),
                   lambda: _mats(alpha=alpha, A=a))
    return res


# -- absdiff: four-term decomposition and the certified bound --------------------

def _decomposition_instance(rng, m: int, kind: str):
    mu = harness._symmetric_mu(m, rng)
    if kind == "degenerate" and m > 1:
        mu = np.sort(rng.choice(mu[: max(1, m // 3)], m))[::-1]
    sa, sb = (int(s) for s in rng.integers(0, 2**63 - 1, 2))
    if kind == "commuting":
        sb = sa
    spec = absdiff.SymmetricPairSpec(m, tuple(mu), sa, sb)
    return absdiff.synth_symmetric_pair(spec)


def run_decompositions(seed: int = 1, trials: int | None = None, max_n: int | None = None,
                       slack: float = DEFAULT_SLACK, res: SuiteResult | None = None) -> SuiteResult:
    """Four-term decompositions of synthesized symmetric pairs (size ``2m <= max_n``)."""
    res = res or SuiteResult("absdiff")
    half = max(1, _cap(max_n, 64) // 2)
    kinds = ("generic", "degenerate", "generic", "commuting")
    for i in range(_count(trials, 200)):
        rng = make_rng(seed, i)
        kind = kinds[i % len(kinds)]
        a, b = _decomposition_instance(rng, int(rng.integers(1, half + 1)), kind)
        cert = absdiff.decompose_abs_difference(a, b)
        rep = cert.invariant_report()
        rep.extend(cert.bound_report(slack).checks)
        res.record(f"four-term decomposition ({kind})", rep, lambda: _mats(A=a, B=b))
    return res


def run_certified(seed: int = 1, trials: int | None = None, max_n: int | None = None,
                  slack: float = DEFAULT_SLACK, search_budget: int = 10_000,
                  res: SuiteResult | None = None) -> SuiteResult:
    """Full bound-chain certificates over every structure, then an adversarial search."""
    res = res or SuiteResult("absdiff")
    sizes = [n for n in SWEEP_SIZES if max_n is None or n <= max_n] or [1]
    per = SWEEP_PER_SIZE if trials is None else max(1, int(trials) // (len(sizes) * len(harness.STRUCTURES)))
    max_ratio = 0.0
    count = 0
    for s_idx, structure in enumerate(harness.STRUCTURES):
        for n in sizes:
            cfg = harness.TrialConfig(seed=seed + 1000 * (s_idx + 1) + n, n=n, trials=per,
                                      structure=structure, tol_slack=slack)
            for t in range(per):
                rec, cert, a, b = harness.run_trial(cfg, t, timing=False)
                max_ratio = max(max_ratio, rec.ratio)
                count += 1
                res.record("certified bound chain", cert.report, lambda: _mats(A=a, B=b))
    res.data.update(sweep_pairs=count, sweep_max_ratio=max_ratio)

    if search_budget > 0:
        n_search = _cap(max_n, 16)
        found = harness.adversarial_search(n_search, search_budget, restarts=4, seed=seed, objective="weak_ratio")
        rep = Report("adversarial weak-ratio search")
        rep.add(leq("best weak ratio <= (34+2560e/pi)", found.best_value, CONSTANTS.c_main))
        _, cert = found.record(seed, slack)
        rep.extend(cert.report.checks)
        res.record("adversarial search", rep, lambda: _mats(A=found.A, B=found.B))
        res.data.update(search_best=found.best_value, search_evaluations=found.evaluations)
    return res


def run_absdiff(seed: int = 1, trials: int | None = None, max_n: int | None = None,
                slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = run_decompositions(seed, trials, max_n, slack)
    search_budget = 10_000 if trials is None else max(1, 20 * int(trials))
    return run_certified(seed, trials, max_n, slack, search_budget, res)


# -- davies ----------------------------------------------------------------------

def random_measure(rng, max_atoms: int = 10, unit: bool = False) -> davies.DiscreteMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    lo, hi = (0.0, 1.0) if unit else (-1.5, 1.5)
    atoms = np.sort(rng.uniform(lo, hi, k))
    while np.any(np.diff(atoms) <= 0):
        atoms = np.sort(rng.uniform(lo, hi, k))
    weights = rng.standard_normal(k) * 10.0 ** rng.uniform(-1, 1, k)
    weights[weights == 0] = 1.0
    return davies.DiscreteMeasure(tuple(atoms), tuple(weights))


def random_density(rng, max_cells: int = 6) -> davies.PiecewiseConstantMeasure:
    k = int(rng.integers(1, max_cells + 1))
    inner = np.sort(rng.choice(np.arange(1, 100), k - 1, replace=False)) / 100.0 if k > 1 else np.array([])
    breaks = np.concatenate([[0.0], inner])
    return davies.PiecewiseConstantMeasure(tuple(breaks), tuple(rng.standard_normal(k)))


def run_davies(seed: int = 1, trials: int | None = None, max_n: int | None = None,
               slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = SuiteResult("davies")
    for i in range(_count(trials, 300)):
        rng = make_rng(seed, i)
        nu = random_measure(rng)
        closed, brute = davies.distorted_variation(nu)
        res.record("distorted variation closed form",
                   Check("DV closed form = brute force", abs(closed - brute), 0.0, closed == brute),
                   lambda: davies.measure_to_json(nu))
    for i in range(_count(trials, 100)):
        rng = make_rng(seed + 1, i)
        nu = random_measure(rng, unit=True) if i % 2 == 0 else random_density(rng)
        for m in (4, 16):
            res.record("discretization", davies.discretization_report(nu, m, slack),
                       lambda: davies.measure_to_json(nu))
    cap = _cap(max_n, 8)
    for i in range(_count(trials, 200)):
        rng = make_rng(seed + 2, i)
        nu = random_measure(rng, max_atoms=4)
        n = int(rng.integers(1, cap + 1))
        a = sample_gue(n, rng)
        b = hermitize(a + 10.0 ** rng.uniform(-2, 0) * sample_gue(n, rng))
        rep = davies.davies_bound_check(nu, a, b, slack)
        res.record("Davies-class Lipschitz bound", rep,
                   lambda: {"measure": davies.measure_to_json(nu), **_mats(A=a, B=b)})
        res.data["max_dv_ratio"] = max(res.data.get("max_dv_ratio", 0.0), rep.data["dv_ratio"])
    return res


# -- comm ------------------------------------------------------------------------

def run_comm(seed: int = 1, trials: int | None = None, max_n: int | None = None,
             slack: float = DEFAULT_SLACK) -> SuiteResult:
    res = SuiteResult("comm")
    cap = _cap(max_n, 32)
    max_ratio = 0.0
    for i in range(_count(trials, 500)):
        rng = make_rng(seed, i)
        n = int(rng.integers(1, cap + 1))
        a, b = sample_gue(n, rng), sample_gue(n, rng)
        rep = commutator.weak_commutator_check(a, b, slack)
        max_ratio = max(max_ratio, rep.data["ratio"])
        res.record("weak-L1 commutator bound", rep, lambda: _mats(A=a, B=b))
    res.data["max_commutator_ratio"] = max_ratio
    small = _cap(max_n, 16)
    for i in range(_count(trials, 100)):
        rng = make_rng(seed + 1, i)
        n = int(rng.integers(1, small + 1))
        a, b = sample_gue(n, rng), sample_gue(n, rng) * 10.0 ** rng.uniform(-1, 1)
        for eps in (0.1, 0.01):
            for k in (2, 20):
                res.record("exponential commutator series", commutator.exp_commutator_series_check(a, b, eps, k, slack),
                           lambda: _mats(A=a, B=b, eps=eps, K=k))
            res.record("conjugation step", commutator.conjugation_step_check(a, b, eps, slack),
                       lambda: _mats(A=a, B=b, eps=eps))
        gap = max(commutator.telescoping_gap(a, b, k) for k in range(1, 11))
        scale = float(np.linalg.norm(a)) * max(1.0, float(np.linalg.norm(b))) ** 10
        res.record("power commutator telescoping", leq("[B^k,A] telescoped, k<=10", gap, 1e-12 * scale),
                   lambda: _mats(A=a, B=b))
    for i in range(_count(trials, 50)):
        rng = make_rng(seed + 2, i)
        n = int(rng.integers(2, max(2, _cap(max_n, 8)) + 1))
        a, b = sample_gue(n, rng), sample_gue(n, rng)
        res.record("conjugation limit", commutator.conjugation_limit_check(a, b, 1e-3),
                   lambda: _mats(A=a, B=b))
    return res


RUNNERS = {"norms": run_norms, "schur": run_schur, "trunc": run_trunc,
           "absdiff": run_absdiff, "davies": run_davies, "comm": run_comm}


def run_suite(name: str, seed: int = 1, trials: int | None = None, max_n: int | None = None,
              slack: float = DEFAULT_SLACK) -> SuiteResult:
    t0 = time.perf_counter()
    res = RUNNERS[name](seed=seed, trials=trials, max_n=max_n, slack=slack)
    res.elapsed_s = time.perf_counter() - t0
    return res
