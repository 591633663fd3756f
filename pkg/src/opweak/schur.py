"""Schur (Hadamard) multipliers, the Cauchy matrix and the min-ratio matrix.

The min-ratio matrix ``Phi[k, l] = alpha[max(k, l)] / (alpha[k] + alpha[l])``
is positive semidefinite for decreasing positive ``alpha``;
:func:`phi_decomposition` returns the explicit sum of positive
semidefinite terms that certifies it.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InputError
from .matcore import as_matrix, as_square, hermitian_eigvals, hermitize, is_hermitian
from .norms import trace_norm
from .report import DEFAULT_SLACK, Report, leq


def as_decreasing_positive(alpha) -> np.ndarray:
    """Validate a strictly positive, nonincreasing sequence (ties allowed)."""
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise InputError("alpha must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise InputError("alpha must be finite and strictly positive")
    if np.any(np.diff(a) > 0):
        raise InputError("alpha must be nonincreasing")
    return a


def hadamard(A, B) -> np.ndarray:
    a = as_matrix(A, "A")
    b = as_matrix(B, "B")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return a * b


def _validate_projections(projs: list[np.ndarray], tol: float) -> None:
    for i, p in enumerate(projs):
        scale = max(1.0, np.linalg.norm(p))
        if np.linalg.norm(p - p.conj().T) > tol * scale:
            raise InputError(f"projection {i} is not self-adjoint")
        if np.linalg.norm(p @ p - p) > tol * scale:
            raise InputError(f"projection {i} is not idempotent")
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            if np.linalg.norm(projs[i] @ projs[j]) > tol:
                raise InputError(f"projections {i} and {j} are not orthogonal")


def block_schur(Bmat, projections: Sequence, X, tol: float = 1e-10) -> np.ndarray:
    """Operator-valued Schur multiplier ``sum_{i,j} B[i, j] p_i X p_j``.

    With rank-one standard basis projections this is ``hadamard(B, X)``.
    """
    b = as_square(Bmat, "B")
    x = as_square(X, "X")
    projs = [as_square(p, f"projection {i}") for i, p in enumerate(projections)]
    if len(projs) != b.shape[0]:
        raise InputError(f"need {b.shape[0]} projections, got {len(projs)}")
    if any(p.shape != x.shape for p in projs):
        raise InputError("projections must match the shape of X")
    _validate_projections(projs, tol)
    left = [p @ x for p in projs]
    out = np.zeros_like(x)
    for i, px in enumerate(left):
        for j, pj in enumerate(projs):
            if b[i, j] != 0:
                out += b[i, j] * (px @ pj)
    return out


def cauchy_matrix(alpha) -> np.ndarray:
    """``1 / (alpha[k] + alpha[l])``."""
    a = as_decreasing_positive(alpha)
    return (1.0 / (a[:, None] + a[None, :])).astype(np.complex128)


def phi_matrix(alpha) -> np.ndarray:
    """``alpha[max(k, l)] / (alpha[k] + alpha[l])``; unit-half diagonal."""
    a = as_decreasing_positive(alpha)
    idx = np.arange(a.size)
    num = a[np.maximum(idx[:, None], idx[None, :])]
    return (num / (a[:, None] + a[None, :])).astype(np.complex128)


def phi_decomposition(alpha) -> list[tuple[float, np.ndarray]]:
    """Split ``phi_matrix(alpha)`` into ``n`` positive semidefinite terms.

    Term ``k < n - 1`` is ``(alpha[k] - alpha[k+1]) * P_k C P_k`` where ``C``
    is the Cauchy matrix and ``P_k`` projects onto the first ``k + 1``
    coordinates; the last term is ``alpha[n-1] * C``. Zero gaps are kept so
    the term index matches the coordinate index.
    """
    a = as_decreasing_positive(alpha)
    n = a.size
    cauchy = cauchy_matrix(a)
    terms = []
    for k in range(n - 1):
        corner = np.zeros_like(cauchy)
        corner[:k + 1, :k + 1] = cauchy[:k + 1, :k + 1]
        terms.append((float(a[k] - a[k + 1]), corner))
    terms.append((float(a[-1]), cauchy))
    return terms


def is_psd(A, tol: float = 1e-10) -> tuple[bool, float]:
    """``(lambda_min >= -tol * max(1, ||A||_inf), lambda_min)``."""
    w = hermitian_eigvals(A)
    lam_min = float(w[-1])
    scale = max(1.0, abs(w[0]), abs(w[-1]))
    return lam_min >= -tol * scale, lam_min


def schur_multiplier_trace_bound(B, A, slack: float = DEFAULT_SLACK) -> Report:
    """Trace-norm bound of a positive Schur multiplier.

    For positive semidefinite ``B``: ``||B o A||_1 <= 4 max_k B[k,k] ||A||_1``
    for every ``A``, and with factor 1 when ``A`` itself is positive
    semidefinite (then the trace norm is the trace).
    """
    b = as_square(B, "B")
    a = as_square(A, "A")
    d = float(np.max(np.abs(np.diag(b))))
    lhs = trace_norm(hadamard(b, a))
    rhs_a = trace_norm(a)
    n = a.shape[0]
    floor = n * 1e-12 * d * rhs_a
    rep = Report("Schur multiplier trace-norm bound")
    rep.add(leq("||B o A||_1 <= 4||diag B||*||A||_1", lhs, 4.0 * d * rhs_a, slack, floor))
    if is_hermitian(a) and is_psd(hermitize(a))[0]:
        rep.add(leq("||B o A||_1 <= ||diag B||*||A||_1 (A psd)", lhs, d * rhs_a, slack, floor))
    rep.data["ratio"] = lhs / (d * rhs_a) if d * rhs_a > 0 else 0.0
    return rep
