"""Singular values, Schatten norms and the weak-L1 quasi-norm.

All sequences are finite: sup/series over ``k`` run to the matrix dimension,
with ``mu(k) = 0`` beyond the rank.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InputError
from .matcore import as_matrix, direct_sum, hermitian_eigvals, hermitize, is_hermitian
from .report import DEFAULT_SLACK, Report, close, leq, leq_vec

# Routing tolerance for the normal-matrix fast paths.
_NORMAL_TOL = 1e-13


def singular_values(M) -> np.ndarray:
    """Nonincreasing singular values ``mu(M)`` of length ``min(M.shape)``.

    Hermitian and skew-Hermitian inputs use ``|eigenvalues|`` directly, which
    keeps small singular values accurate to working precision. Other matrices
    use square roots of the eigenvalues of the smaller Gram matrix, clamped at
    zero.
    """
    a = as_matrix(M)
    r, c = a.shape
    if r == 0 or c == 0:
        return np.zeros(0)
    if r == c:
        if is_hermitian(a, _NORMAL_TOL):
            w = hermitian_eigvals(hermitize(a))
            return np.sort(np.abs(w))[::-1]
        ia = 1j * a
        if is_hermitian(ia, _NORMAL_TOL):
            w = hermitian_eigvals(hermitize(ia))
            return np.sort(np.abs(w))[::-1]
    gram = a.conj().T @ a if r >= c else a @ a.conj().T
    w = hermitian_eigvals(hermitize(gram))
    return np.sqrt(np.clip(w, 0.0, None))


def schatten_norm(M, p: float) -> float:
    if p < 1:
        raise InputError(f"Schatten exponent must be >= 1, got {p}")
    s = singular_values(M)
    if s.size == 0:
        return 0.0
    if math.isinf(p):
        return float(s[0])
    if p == 1:
        return float(s.sum())
    top = s[0]
    if top == 0.0:
        return 0.0
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def trace_norm(M) -> float:
    return schatten_norm(M, 1)


def operator_norm(M) -> float:
    s = singular_values(M)
    return float(s[0]) if s.size else 0.0


def weak_from_sv(s: np.ndarray) -> float:
    if len(s) == 0:
        return 0.0
    return float(np.max(np.arange(1, len(s) + 1) * s))


def weak_l1_norm(M) -> float:
    """``max_k (k + 1) * mu(k; M)``."""
    return weak_from_sv(singular_values(M))


def m1inf_norm(M) -> float:
    """``max_N (sum_{k<=N} mu(k; M)) / ln(N + 2)`` with the natural logarithm."""
    s = singular_values(M)
    if s.size == 0:
        return 0.0
    partial = np.cumsum(s)
    return float(np.max(partial / np.log(np.arange(s.size) + 2.0)))


def sigma2_dilate(s: Sequence[float]) -> np.ndarray:
    """``(a0, a1, ...) -> (a0, a0, a1, a1, ...)``."""
    return np.repeat(np.asarray(s, dtype=float), 2)


def check_singular_inequalities(A, B, slack: float = DEFAULT_SLACK) -> Report:
    """Evaluate the basic singular-value inequalities for the pair ``(A, B)``.

    Checks ``mu(AB) <= ||B|| mu(A)``, ``mu(BA) <= ||B|| mu(A)``,
    ``mu(A*) = mu(A)``, ``mu(A + B) <= sigma2(mu(A) + mu(B))`` (truncated to
    the dimension) and the weak-L1 quasi-triangle inequality with factor 2.
    Violations are report entries carrying the offending index.
    """
    a = as_matrix(A, "A")
    b = as_matrix(B, "B")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise InputError(f"need equal square shapes, got {a.shape} and {b.shape}")
    n = a.shape[0]
    mu_a = singular_values(a)
    mu_b = singular_values(b)
    b_inf = mu_b[0]
    scale = max(mu_a[0], b_inf, 1e-300)
    floor = n * 1e-12 * scale
    rep = Report("singular-value inequalities")
    rep.add(leq_vec("mu(AB) <= ||B||*mu(A)", singular_values(a @ b), b_inf * mu_a, slack, floor * b_inf))
    rep.add(leq_vec("mu(BA) <= ||B||*mu(A)", singular_values(b @ a), b_inf * mu_a, slack, floor * b_inf))
    mu_adj = singular_values(a.conj().T)
    rep.add(close("mu(A*) = mu(A)", float(np.max(np.abs(mu_adj - mu_a))), 0.0, slack * mu_a[0] + floor))
    mu_sum = singular_values(a + b)
    dil = sigma2_dilate(mu_a + mu_b)[:n]
    rep.add(leq_vec("mu(A+B) <= sigma2(mu(A)+mu(B))", mu_sum, dil, slack, floor))
    w_sum = weak_from_sv(mu_sum)
    w_a, w_b = weak_from_sv(mu_a), weak_from_sv(mu_b)
    rep.add(leq("||A+B||_w <= 2||A||_w + 2||B||_w", w_sum, 2 * w_a + 2 * w_b, slack, n * floor))
    rep.data["quasi_triangle_ratio"] = w_sum / (w_a + w_b) if w_a + w_b > 0 else 0.0
    return rep


def direct_sum_weak_bound(blocks: Sequence, slack: float = DEFAULT_SLACK) -> Report:
    """``||A_0 (+) A_1 (+) ...||_w <= sum_k ||A_k||_w`` (no quasi-triangle factor)."""
    total = direct_sum(blocks)
    lhs = weak_l1_norm(total)
    parts = [weak_l1_norm(b) for b in blocks]
    rhs = float(sum(parts))
    scale = max((operator_norm(b) for b in blocks), default=0.0)
    rep = Report("direct-sum weak-L1 triangle inequality")
    rep.add(leq("||(+)A_k||_w <= sum ||A_k||_w", lhs, rhs, slack, total.shape[0] * 1e-12 * scale))
    rep.data.update(lhs=lhs, rhs=rhs, blocks=len(parts))
    return rep
