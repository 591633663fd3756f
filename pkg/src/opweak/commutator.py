"""Commutator estimates for the absolute value.

For Hermitian ``A, B`` the checked statement is
``||[|A|, B]||_w <= (34 + 2560e/pi) ||[A, B]||_1``. It is reached through
the unitary ``U = exp(i eps B)``: ``[U, |A|] = (|C| - |A|) U`` with
``C = U A U*``, so the absolute-value bound applies to the pair ``(C, A)``,
and dividing by ``eps`` recovers ``i [B, |A|]`` as ``eps -> 0``.
"""
from __future__ import annotations

import math

import numpy as np

from .absdiff import certified_abs_diff_bound
from .constants import CONSTANTS
from .errors import InputError
from .matcore import abs_matrix, as_hermitian, as_square, hermitian_eig, hermitize, unitary_exp
from .norms import operator_norm, trace_norm, weak_l1_norm
from .report import DEFAULT_SLACK, Check, Report, leq, safe_ratio

ZERO_DEN = 1e-14
ZERO_LHS = 1e-12


def commutator(A, B) -> np.ndarray:
    a = as_square(A, "A")
    b = as_square(B, "B")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def _pair(A, B):
    a = as_hermitian(A, "A")
    b = as_hermitian(B, "B")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def weak_commutator_check(A, B, slack: float = DEFAULT_SLACK) -> Report:
    """``||[|A|, B]||_w <= c ||[A, B]||_1``.

    A vanishing denominator with a vanishing left side gives ratio 0; a
    vanishing denominator with a non-negligible left side is recorded as an
    inconclusive (failed) check rather than divided through.
    """
    a, b = _pair(A, B)
    n = a.shape[0]
    scale = max(float(np.linalg.norm(a)) * float(np.linalg.norm(b)), 1e-300)
    lhs = weak_l1_norm(commutator(abs_matrix(a), b))
    den = trace_norm(commutator(a, b))
    rep = Report("weak-L1 commutator bound for |A|")
    name = "||[|A|,B]||_w <= (34+2560e/pi)||[A,B]||_1"
    if den <= ZERO_DEN * scale:
        if lhs <= ZERO_LHS * scale:
            rep.add(Check(name, lhs, 0.0, True, note="both sides vanish"))
            ratio = 0.0
        else:
            rep.add(Check(name, lhs, den, False, note="inconclusive: vanishing denominator"))
            ratio = math.inf
    else:
        rep.add(leq(name, lhs, CONSTANTS.c_main * den, slack, n * 1e-12 * scale))
        ratio = lhs / den
    rep.data.update(weak_lhs=lhs, l1_commutator=den, ratio=ratio)
    return rep


def power_commutator_telescoped(A, B, k: int) -> np.ndarray:
    """``sum_{m<k} B^m [B, A] B^(k-1-m)``, which equals ``[B^k, A]``."""
    if k < 1:
        raise InputError("k must be at least 1")
    a = as_square(A, "A")
    b = as_square(B, "B")
    ba = commutator(b, a)
    powers = [np.eye(a.shape[0], dtype=np.complex128)]
    for _ in range(k - 1):
        powers.append(powers[-1] @ b)
    return sum(powers[m] @ ba @ powers[k - 1 - m] for m in range(k))


def telescoping_gap(A, B, k: int) -> float:
    """Max-entry gap between ``[B^k, A]`` and its telescoped form."""
    b = as_square(B, "B")
    direct = commutator(np.linalg.matrix_power(b, k), A)
    return float(np.max(np.abs(direct - power_commutator_telescoped(A, B, k))))


def series_tail(x: float, K: int) -> float:
    """``sum_{j >= K} x^j / j!`` for ``x >= 0`` by direct summation."""
    if x == 0.0:
        return 1.0 if K == 0 else 0.0
    term = math.exp(K * math.log(x) - math.lgamma(K + 1))
    total = 0.0
    j = K
    while term > 1e-18 * total or j < K + 2:
        total += term
        j += 1
        term *= x / j
        if j > K + 10000:
            break
    return total


def exp_commutator_series_check(A, B, eps: float, K: int, slack: float = DEFAULT_SLACK) -> Report:
    """Power series of ``[exp(i eps B), A]`` and its trace-norm bound.

    (i) The ``K``-term truncation of ``sum_k (i eps)^k / k! [B^k, A]`` is
    within ``eps * sum_{j>=K} x^j/j! * ||[B, A]||_1`` (``x = eps ||B||``) in
    trace norm. (ii) ``||[exp(i eps B), A]||_1 <= eps e^x ||[A, B]||_1``.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    if K < 1:
        raise InputError("K must be at least 1")
    a, b = _pair(A, B)
    n = a.shape[0]
    eig_b = hermitian_eig(b)
    b_inf = float(max(abs(eig_b.eigenvalues[0]), abs(eig_b.eigenvalues[-1])))
    u = unitary_exp(b, eps, eig_b)
    exact = commutator(u, a)
    partial = np.zeros_like(a)
    bk = np.eye(n, dtype=np.complex128)
    coef = 1.0 + 0.0j
    for k in range(1, K + 1):
        bk = bk @ b
        coef *= 1j * eps / k
        partial += coef * commutator(bk, a)
    ba_l1 = trace_norm(commutator(b, a))
    x = eps * b_inf
    tail = eps * series_tail(x, K) * ba_l1
    floor = n * 1e-13 * float(np.linalg.norm(a)) * max(1.0, math.exp(x))
    residual = trace_norm(exact - partial)
    lhs = trace_norm(exact)
    rep = Report(f"exponential commutator series at eps={eps:g}, K={K}")
    rep.add(leq("||[e^(ieB),A] - series_K||_1 <= tail bound", residual, tail, slack, floor))
    rep.add(leq("||[e^(ieB),A]||_1 <= eps e^(eps||B||)||[A,B]||_1", lhs, eps * math.exp(x) * ba_l1, slack, floor))
    rep.data.update(residual=residual, tail=tail, l1=lhs)
    return rep


def conjugation_step_check(A, B, eps: float, slack: float = DEFAULT_SLACK,
                           certify: bool = False) -> Report:
    """``|C| = U|A|U*`` for ``C = UAU*`` and the weak bound on ``[U, |A|]``."""
    a, b = _pair(A, B)
    n = a.shape[0]
    u = unitary_exp(b, eps)
    c = hermitize(u @ a @ u.conj().T)
    abs_a = abs_matrix(a)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    rep = Report(f"conjugation step at eps={eps:g}")
    gap = float(np.linalg.norm(abs_matrix(c) - u @ abs_a @ u.conj().T))
    rep.add(leq("|UAU*| = U|A|U*", gap, 1e-10 * scale))
    lhs = weak_l1_norm(commutator(u, abs_a))
    rhs = trace_norm(commutator(u, a))
    rep.add(leq("||[U,|A|]||_w <= (34+2560e/pi)||[U,A]||_1", lhs, CONSTANTS.c_main * rhs, slack, n * 1e-12 * scale))
    if certify:
        rep.extend(certified_abs_diff_bound(c, a, slack).report.checks)
    rep.data.update(ratio=safe_ratio(lhs, rhs))
    return rep


def conjugation_limit_check(A, B, eps: float) -> Report:
    """First-order convergence of ``eps^-1 [exp(i eps B), |A|]`` to ``i[B, |A|]``.

    ``err(e)`` is the operator-norm distance at ``e``; the check requires
    ``err(eps) / err(eps/2)`` in ``[1.5, 2.5]`` unless ``err(eps)`` is already
    at rounding level.
    """
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    a, b = _pair(A, B)
    eig_b = hermitian_eig(b)
    abs_a = abs_matrix(a)
    target = 1j * commutator(b, abs_a)

    def err(e):
        u = unitary_exp(b, e, eig_b)
        return operator_norm(commutator(u, abs_a) / e - target)

    e1, e2 = err(eps), err(eps / 2)
    b_fro = float(np.linalg.norm(b))
    scale = max(float(np.linalg.norm(a)) * max(1.0, b_fro) ** 2, 1e-300)
    rep = Report(f"conjugation limit at eps={eps:g}")
    if e1 <= ZERO_LHS * scale:
        rep.add(Check("eps^-1[e^(ieB),|A|] -> i[B,|A|] (halving ratio)", e1, ZERO_LHS * scale, True,
                      note="trivially convergent"))
        ratio = 0.0
    else:
        ratio = e1 / e2 if e2 > 0 else math.inf
        rep.add(Check("eps^-1[e^(ieB),|A|] -> i[B,|A|] (halving ratio)", ratio, 2.5, 1.5 <= ratio <= 2.5,
                      note="ratio must lie in [1.5, 2.5]"))
    rep.data.update(err=e1, err_half=e2, ratio=ratio)
    return rep
