"""Random instances, sweeps and adversarial search for the absolute-value bound."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .absdiff import SymmetricPairSpec, certified_abs_diff_bound, synth_symmetric_pair
from .constants import CONSTANTS
from .errors import InputError
from .matcore import hermitian_eig, hermitize, matrix_to_json
from .norms import singular_values, trace_norm, weak_from_sv
from .report import DEFAULT_SLACK, safe_ratio
from .sampling import ginibre, haar_unitary, make_rng, sample_gue

STRUCTURES = ("generic", "commuting", "rank1_perturb", "identically_distributed", "symmetric_pair")
CSV_HEADER = ("trial", "seed", "n", "structure", "l1_diff", "weak_abs_diff", "ratio", "bound", "pass", "elapsed_ms")
MAX_N = 128
MU_FLOOR = 1e-3


@dataclass(frozen=True)
class TrialConfig:
    seed: int
    n: int
    trials: int = 1
    structure: str = "generic"
    perturb_scale: float = 0.1
    tol_slack: float = DEFAULT_SLACK

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise InputError(f"unknown structure {self.structure!r}; choose from {', '.join(STRUCTURES)}")
        if not 1 <= self.n <= MAX_N:
            raise InputError(f"n must lie in [1, {MAX_N}]")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    n: int
    structure: str
    l1_diff: float
    weak_abs_diff: float
    ratio: float
    bound: float
    passed: bool
    elapsed_ms: float = 0.0

    def row(self) -> list:
        return [self.trial, self.seed, self.n, self.structure, repr(self.l1_diff), repr(self.weak_abs_diff),
                repr(self.ratio), repr(self.bound), int(self.passed), f"{self.elapsed_ms:.3f}"]


def sample_hermitian(n: int, seed) -> np.ndarray:
    return sample_gue(n, seed)


def _unit_vector(n: int, rng) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _symmetric_mu(m: int, rng) -> np.ndarray:
    mu = rng.uniform(MU_FLOOR, 1.0, m)
    if m > 1 and rng.random() < 0.25:
        # repeated values exercise the basis-independence of the construction
        levels = rng.uniform(MU_FLOOR, 1.0, max(1, m // 3))
        mu = rng.choice(levels, m)
    return np.sort(mu)[::-1]


def sample_pair(config: TrialConfig, trial_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic ``(A, B)`` for ``(config.seed, trial_index)``.

    ``symmetric_pair`` returns matrices of size ``2 * max(1, n // 2)``.
    """
    rng = make_rng(config.seed, trial_index)
    n, s = config.n, config.perturb_scale
    kind = config.structure
    if kind == "generic":
        a = sample_gue(n, rng)
        return a, hermitize(a + s * sample_gue(n, rng))
    if kind == "commuting":
        w = haar_unitary(n, rng)
        la = rng.uniform(-1.0, 1.0, n)
        lb = la + s * rng.standard_normal(n)
        return hermitize((w * la) @ w.conj().T), hermitize((w * lb) @ w.conj().T)
    if kind == "rank1_perturb":
        a = sample_gue(n, rng)
        v = _unit_vector(n, rng)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        return a, hermitize(a + sign * s * np.outer(v, v.conj()))
    if kind == "identically_distributed":
        lam = rng.uniform(-1.0, 1.0, n)
        wa, wb = haar_unitary(n, rng), haar_unitary(n, rng)
        return hermitize((wa * lam) @ wa.conj().T), hermitize((wb * lam) @ wb.conj().T)
    m = max(1, n // 2)
    seeds = rng.integers(0, 2**63 - 1, 2)
    spec = SymmetricPairSpec(m, tuple(_symmetric_mu(m, rng)), int(seeds[0]), int(seeds[1]), MU_FLOOR)
    return synth_symmetric_pair(spec)


@dataclass
class SweepResult:
    records: list[TrialRecord]
    failures: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        ratios = [r.ratio for r in self.records]
        return {
            "trials": len(self.records),
            "passed": sum(r.passed for r in self.records),
            "max_ratio": max(ratios),
            "mean_ratio": float(np.mean(ratios)),
            "bound_constant": CONSTANTS.c_main,
        }

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in sorted(self.records, key=lambda r: r.trial):
            w.writerow(r.row())
        return buf.getvalue()


def run_trial(config: TrialConfig, trial_index: int, timing: bool = True):
    """One certified trial; returns ``(record, certificate, A, B)``."""
    a, b = sample_pair(config, trial_index)
    t0 = time.perf_counter()
    cert = certified_abs_diff_bound(a, b, config.tol_slack)
    elapsed = (time.perf_counter() - t0) * 1e3 if timing else 0.0
    rec = TrialRecord(trial_index, config.seed, a.shape[0], config.structure, cert.l1_diff, cert.lhs,
                      cert.ratio, cert.rhs, cert.passed, elapsed)
    return rec, cert, a, b


def run_sweep(config: TrialConfig, timing: bool = True) -> SweepResult:
    """Certify ``config.trials`` independent pairs."""
    result = SweepResult([])
    for i in range(config.trials):
        rec, cert, a, b = run_trial(config, i, timing)
        result.records.append(rec)
        if not rec.passed:
            result.failures.append({
                "trial": i,
                "violated": [c.name for c in cert.report.failures],
                "A": matrix_to_json(a),
                "B": matrix_to_json(b),
            })
    return result


# -- adversarial search --------------------------------------------------------

OBJECTIVES = ("weak_ratio", "l1_ratio")


def _objective(lam, w, direction, step, objective):
    abs_a = (w * np.abs(lam)) @ w.conj().T
    a = hermitize((w * lam) @ w.conj().T)
    b = hermitize(a + step * direction)
    eig_b = hermitian_eig(b)
    diff = hermitize(abs_a - eig_b.apply(np.abs))
    sv = singular_values(diff)
    l1 = trace_norm(a - b)
    top = weak_from_sv(sv) if objective == "weak_ratio" else float(sv.sum())
    return safe_ratio(top, l1), a, b


@dataclass
class SearchResult:
    objective: str
    best_value: float
    A: np.ndarray
    B: np.ndarray
    trace: list[tuple[int, float]]
    evaluations: int

    def record(self, seed: int, slack: float = DEFAULT_SLACK):
        cert = certified_abs_diff_bound(self.A, self.B, slack)
        rec = TrialRecord(0, seed, self.A.shape[0], "adversarial", cert.l1_diff, cert.lhs, cert.ratio,
                          cert.rhs, cert.passed, 0.0)
        return rec, cert


def adversarial_search(n: int, budget: int, restarts: int = 1, seed: int = 0,
                       objective: str = "weak_ratio") -> SearchResult:
    """Random-restart hill climbing over the spectrum of ``A`` and ``B - A``.

    ``A = W diag(lam) W*`` with ``W`` fixed per restart and
    ``B = A + step * E`` with ``E`` Hermitian of unit Frobenius norm. Each
    proposal nudges ``lam``, ``E`` and ``log(step)`` by Gaussian noise and is
    kept when the objective improves; the noise level grows after a success
    and shrinks after a rejection. ``budget`` counts objective
    evaluations over all restarts; the trace lists every improvement as
    ``(evaluation, best value)``.
    """
    if objective not in OBJECTIVES:
        raise InputError(f"objective must be one of {', '.join(OBJECTIVES)}")
    if budget < 1 or restarts < 1 or n < 1:
        raise InputError("n, budget and restarts must be positive")
    rng = make_rng(seed)
    per = [budget // restarts + (1 if r < budget % restarts else 0) for r in range(restarts)]
    best = None
    trace: list[tuple[int, float]] = []
    evals = 0
    for count in per:
        if count == 0:
            continue
        w = haar_unitary(n, rng)
        lam = rng.uniform(-1.0, 1.0, n)
        e = hermitize(ginibre(n, rng))
        e /= np.linalg.norm(e)
        step = 10.0 ** rng.uniform(-3, 0)
        cur, a, b = _objective(lam, w, e, step, objective)
        evals += 1
        if best is None or cur > best[0]:
            best = (cur, a, b)
            trace.append((evals, cur))
        sigma = 0.1
        for _ in range(count - 1):
            lam2 = lam + sigma * rng.standard_normal(n)
            e2 = e + sigma * hermitize(ginibre(n, rng)) / np.sqrt(n)
            e2 /= np.linalg.norm(e2)
            step2 = float(np.clip(step * np.exp(sigma * rng.standard_normal()), 1e-6, 10.0))
            val, a2, b2 = _objective(lam2, w, e2, step2, objective)
            evals += 1
            if val > cur:
                lam, e, step, cur = lam2, e2, step2, val
                sigma = min(1.0, sigma * 1.5)
            else:
                sigma = max(1e-3, sigma * 0.97)
                if val > best[0]:
                    best = (val, a2, b2)
                    trace.append((evals, val))
    return SearchResult(objective, best[0], best[1], best[2], trace, evals)


def search_to_json(result: SearchResult, seed: int, certificate=None) -> dict:
    out = {
        "objective": result.objective,
        "best_value": result.best_value,
        "evaluations": result.evaluations,
        "trace": [list(t) for t in result.trace],
        "A": matrix_to_json(result.A),
        "B": matrix_to_json(result.B),
        "seed": seed,
        "bound_constant": CONSTANTS.c_main,
    }
    if certificate is not None:
        out["certificate"] = certificate.to_dict()
    return out
