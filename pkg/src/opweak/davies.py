"""Davies-class functions ``f(t) = sum_k alpha_k |t - t_k|`` and their variation.

The distorted variation of a finitely atomic measure is

    DV(nu) = sup over partitions into intervals, inf over orderings of the
             blocks, of sum_j 2^j |nu(block_j)|.

For a fixed partition the infimum assigns the smallest powers to the largest
block masses. Splitting a block never lowers that cost. Take an optimal
ordering after the split, with the halves ``a, b`` at powers ``p < q``. Put
``a + b`` back at ``p`` and move every block above ``q`` down one place; since
``|a + b| 2^p <= |a| 2^p + |b| 2^q`` the unsplit cost is no larger. The
supremum is therefore attained by the singleton partition, which gives
:func:`dv_closed_form`. :func:`dv_brute_force` enumerates every composition
and is kept as an independent oracle.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .absdiff import certified_abs_diff_bound
from .constants import CONSTANTS
from .errors import InputError
from .matcore import as_hermitian, hermitian_eig, shifted_abs
from .norms import trace_norm, weak_l1_norm
from .report import DEFAULT_SLACK, Report, leq, safe_ratio

BRUTE_FORCE_CAP = 16
MAX_SUMMANDS = 30


@dataclass(frozen=True)
class DiscreteMeasure:
    """``nu = sum_k weights[k] * delta_{atoms[k]}``."""

    atoms: tuple
    weights: tuple

    def __post_init__(self):
        t = np.asarray(self.atoms, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size == 0:
            raise InputError("atoms and weights must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
            raise InputError("atoms and weights must be finite")
        if np.any(np.diff(t) <= 0):
            raise InputError("atoms must be strictly increasing")
        if np.any(w == 0):
            raise InputError("weights must be nonzero")
        object.__setattr__(self, "atoms", tuple(float(x) for x in t))
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.atoms)

    @property
    def alpha(self) -> np.ndarray:
        return np.asarray(self.weights)

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.alpha)))

    def shifted(self, c: float) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple(self.t + c), self.weights)


@dataclass(frozen=True)
class PiecewiseConstantMeasure:
    """Density ``densities[i]`` on ``[breaks[i], breaks[i+1])``, last cell ending at 1."""

    breaks: tuple
    densities: tuple

    def __post_init__(self):
        b = np.asarray(self.breaks, dtype=float)
        d = np.asarray(self.densities, dtype=float)
        if b.ndim != 1 or b.shape != d.shape or b.size == 0:
            raise InputError("breaks and densities must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(d))):
            raise InputError("breaks and densities must be finite")
        if b[0] < 0 or b[-1] >= 1 or np.any(np.diff(b) <= 0):
            raise InputError("breaks must be strictly increasing within [0, 1)")
        object.__setattr__(self, "breaks", tuple(float(x) for x in b))
        object.__setattr__(self, "densities", tuple(float(x) for x in d))

    def cells(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        left = np.asarray(self.breaks)
        right = np.append(left[1:], 1.0)
        return left, right, np.asarray(self.densities)

    @property
    def total_variation(self) -> float:
        left, right, d = self.cells()
        return float(np.sum(np.abs(d) * (right - left)))


def measure_from_json(d: dict):
    try:
        if "atoms" in d:
            return DiscreteMeasure(tuple(d["atoms"]), tuple(d["weights"]))
        if "breaks" in d:
            return PiecewiseConstantMeasure(tuple(d["breaks"]), tuple(d["densities"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed measure JSON: {exc}") from None
    raise InputError('measure JSON needs "atoms"/"weights" or "breaks"/"densities"')


def measure_to_json(nu) -> dict:
    if isinstance(nu, DiscreteMeasure):
        return {"atoms": list(nu.atoms), "weights": list(nu.weights)}
    return {"breaks": list(nu.breaks), "densities": list(nu.densities)}


def eval_function(nu, t):
    """``f(t) = integral |t - s| dnu(s)``, vectorized over ``t``."""
    t = np.asarray(t, dtype=float)
    if isinstance(nu, DiscreteMeasure):
        return np.sum(nu.alpha * np.abs(t[..., None] - nu.t), axis=-1)
    left, right, d = nu.cells()
    x = t[..., None]
    below = (right - left) * ((left + right) / 2 - x)
    above = (right - left) * (x - (left + right) / 2)
    inside = ((x - left) ** 2 + (right - x) ** 2) / 2
    val = np.where(x <= left, below, np.where(x >= right, above, inside))
    return np.sum(d * val, axis=-1)


def apply_function(nu: DiscreteMeasure, A) -> tuple[np.ndarray, float]:
    """``f(A)`` by spectral calculus, with the two-route gap.

    The second route is ``sum_k alpha_k |A - t_k|``. Returns ``(f(A), gap)``
    with ``gap`` the Frobenius distance between the routes.
    """
    a = as_hermitian(A, "A")
    eig = hermitian_eig(a)
    fa = eig.apply(lambda x: eval_function(nu, x))
    alt = sum(w * shifted_abs(a, t, eig) for t, w in zip(nu.atoms, nu.weights))
    return fa, float(np.linalg.norm(fa - alt))


def _function_scale(nu: DiscreteMeasure, a: np.ndarray) -> float:
    n = a.shape[0]
    fro = float(np.linalg.norm(a))
    return max(1.0, float(sum(abs(w) * (fro + abs(t) * math.sqrt(n)) for t, w in zip(nu.atoms, nu.weights))))


def block_cost(sums) -> float:
    """``sum_j 2^j v_(j)`` over the nonzero ``|sums|`` sorted nonincreasing."""
    v = np.sort(np.abs(np.asarray(sums, dtype=float)))[::-1]
    v = v[v > 0]
    return float(np.sum(v * np.exp2(np.arange(v.size))))


def dv_closed_form(nu: DiscreteMeasure) -> float:
    return block_cost(nu.alpha)


def dv_brute_force(nu: DiscreteMeasure) -> float:
    """Maximum of :func:`block_cost` over all splittings into consecutive blocks."""
    w = nu.alpha
    k = w.size
    if k > BRUTE_FORCE_CAP:
        raise InputError(f"brute force is capped at {BRUTE_FORCE_CAP} atoms, got {k}")
    best = 0.0
    for cuts in itertools.product((False, True), repeat=k - 1):
        edges = [0] + [i + 1 for i, c in enumerate(cuts) if c] + [k]
        sums = [w[edges[i]:edges[i + 1]].sum() for i in range(len(edges) - 1)]
        best = max(best, block_cost(sums))
    return best


def distorted_variation(nu) -> tuple[float, float | None]:
    """``(closed form, brute force or None)``; ``inf`` for densities.

    A measure with a nonzero density can be cut into arbitrarily many
    blocks of comparable mass, so its distorted variation is infinite.
    """
    if isinstance(nu, PiecewiseConstantMeasure):
        return (math.inf if nu.total_variation > 0 else 0.0), None
    closed = dv_closed_form(nu)
    brute = dv_brute_force(nu) if len(nu.atoms) <= BRUTE_FORCE_CAP else None
    return closed, brute


def _cell_index(t: np.ndarray, m: int) -> np.ndarray:
    k = np.floor(t * m).astype(int)
    k = np.where(k / m > t, k - 1, k)
    k = np.where((k + 1) / m <= t, k + 1, k)
    return k


def discretize(nu, m: int) -> DiscreteMeasure:
    """``nu_m = sum_k nu([k/m, (k+1)/m)) delta_{k/m}`` with empty cells dropped."""
    if m < 1:
        raise InputError("m must be at least 1")
    mass = np.zeros(m)
    if isinstance(nu, DiscreteMeasure):
        if nu.t[0] < 0 or nu.t[-1] >= 1:
            raise InputError("support must lie in [0, 1)")
        np.add.at(mass, _cell_index(nu.t, m), nu.alpha)
    else:
        left, right, d = nu.cells()
        grid = np.arange(m + 1) / m
        for a, b, dens in zip(left, right, d):
            overlap = np.clip(np.minimum(grid[1:], b) - np.maximum(grid[:-1], a), 0.0, None)
            mass += dens * overlap
    keep = np.flatnonzero(mass)
    if keep.size == 0:
        raise InputError("discretization has no mass")
    return DiscreteMeasure(tuple(keep / m), tuple(mass[keep]))


def discretization_report(nu, m: int, slack: float = DEFAULT_SLACK) -> Report:
    """``DV(nu_m) <= DV(nu)`` and ``sup |f_m - f| <= 2|nu|/m`` on a grid."""
    nu_m = discretize(nu, m)
    grid = np.linspace(-1.0, 2.0, 10 * m)
    gap = float(np.max(np.abs(eval_function(nu_m, grid) - eval_function(nu, grid))))
    tv = nu.total_variation
    dv, _ = distorted_variation(nu)
    dv_m = dv_closed_form(nu_m)
    rep = Report(f"discretization at m={m}")
    rep.add(leq("DV(nu_m) <= DV(nu)", dv_m, dv, slack))
    rep.add(leq("sup|f_m - f| <= 2|nu|/m", gap, 2.0 * tv / m, slack, 1e-12 * tv))
    rep.data.update(m=m, atoms=len(nu_m.atoms), sup_gap=gap)
    return rep


def weighted_weak_sum_bound(summands, slack: float = DEFAULT_SLACK) -> Report:
    """``||sum_k A_k||_w <= sum_k 2^(k+1) ||A_k||_w`` in the given order."""
    mats = [np.asarray(s, dtype=np.complex128) for s in summands]
    if not mats:
        raise InputError("need at least one summand")
    if len(mats) > MAX_SUMMANDS:
        raise InputError(f"at most {MAX_SUMMANDS} summands")
    if any(s.shape != mats[0].shape for s in mats):
        raise InputError("summands must have equal shapes")
    total = sum(mats)
    lhs = weak_l1_norm(total)
    weights = [weak_l1_norm(s) for s in mats]
    rhs = float(sum(2.0 ** (k + 1) * w for k, w in enumerate(weights)))
    scale = max(weights)
    rep = Report("weighted weak-L1 sum bound")
    rep.add(leq("||sum A_k||_w <= sum 2^(k+1)||A_k||_w", lhs, rhs, slack, mats[0].shape[0] * 1e-12 * scale))
    rep.data.update(lhs=lhs, rhs=rhs, ratio=safe_ratio(lhs, rhs))
    return rep


def davies_bound_check(nu: DiscreteMeasure, A, B, slack: float = DEFAULT_SLACK,
                       certify: bool = True) -> Report:
    """Weak-L1 Lipschitz bound for a Davies-class ``f``.

    Each summand ``alpha_k (|A - t_k| - |B - t_k|)`` is checked against the
    absolute-value bound (with its full certificate when ``certify``); the
    summands are then assembled by :func:`weighted_weak_sum_bound` in order of
    decreasing ``|alpha_k|``, giving
    ``||f(A) - f(B)||_w <= (sum_k 2^(k+1)|alpha_(k)|) * c * ||A - B||_1``.
    """
    c = CONSTANTS.c_main
    a = as_hermitian(A, "A")
    b = as_hermitian(B, "B")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    n = a.shape[0]
    eye = np.eye(n)
    fa, gap_a = apply_function(nu, a)
    fb, gap_b = apply_function(nu, b)
    diff = fa - fb
    lhs = weak_l1_norm(diff)
    l1 = trace_norm(a - b)
    scale = max(_function_scale(nu, a), _function_scale(nu, b))
    floor = n * 1e-12 * scale

    rep = Report("Davies-class weak-L1 Lipschitz bound")
    rep.add(leq("f(A) = sum alpha_k|A - t_k| (two routes)", gap_a, 1e-10 * scale))
    rep.add(leq("f(B) = sum alpha_k|B - t_k| (two routes)", gap_b, 1e-10 * scale))

    order = np.argsort(-np.abs(nu.alpha), kind="stable")
    summands = []
    term_ratios = []
    for k in order:
        t, w = nu.atoms[k], nu.weights[k]
        at, bt = a - t * eye, b - t * eye
        if certify:
            cert = certified_abs_diff_bound(at, bt, slack)
            for chk in cert.report.checks:
                rep.add(type(chk)(f"[t={t:.6g}] {chk.name}", chk.lhs, chk.rhs, chk.passed, chk.index, chk.note))
            term_weak, term_l1 = cert.lhs, cert.l1_diff
            summands.append(w * (shifted_abs(a, t) - shifted_abs(b, t)))
        else:
            s = shifted_abs(a, t) - shifted_abs(b, t)
            term_weak, term_l1 = weak_l1_norm(s), l1
            summands.append(w * s)
        term_ratios.append(safe_ratio(term_weak, term_l1))
        rep.add(leq(f"[t={t:.6g}] || |A-t|-|B-t| ||_w <= c*||A-B||_1", term_weak, c * term_l1, slack, floor))

    total_gap = float(np.linalg.norm(sum(summands) - diff))
    rep.add(leq("f(A)-f(B) = sum of shifted summands", total_gap, 1e-10 * scale))
    wrep = weighted_weak_sum_bound(summands, slack)
    rep.extend(wrep.checks)
    sorted_abs = np.abs(nu.alpha)[order]
    weight = float(np.sum(np.exp2(np.arange(1, sorted_abs.size + 1)) * sorted_abs))
    rep.add(leq("||f(A)-f(B)||_w <= (sum 2^(k+1)|alpha_(k)|)*c*||A-B||_1", lhs, weight * c * l1, slack, floor))
    dv, brute = distorted_variation(nu)
    rep.data.update(lhs=lhs, l1_diff=l1, dv=dv, dv_brute=brute, max_term_ratio=max(term_ratios),
                    dv_ratio=safe_ratio(lhs, dv * l1))
    return rep


def measure_dumps(nu) -> str:
    return json.dumps(measure_to_json(nu), sort_keys=True)
