"""Triangular truncation and the divided-difference multiplier ``S``.

Convention: ``T`` keeps the lower triangle *including* the diagonal
(entries ``i >= j``) and zeroes the strict upper triangle. The opposite
convention differs by a diagonal term and breaks the factorization
``S = (2T - 1)(2 M_Phi - 1)``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .constants import CONSTANTS
from .errors import InputError
from .matcore import as_matrix, as_square, is_hermitian
from .norms import singular_values, trace_norm, weak_from_sv
from .report import DEFAULT_SLACK, Report, leq
from .schur import as_decreasing_positive, phi_matrix


def tri_trunc(A) -> np.ndarray:
    return np.tril(as_square(A))


def reflect_trunc(A) -> np.ndarray:
    """``(2T - 1)(A)``: keep ``i >= j``, negate the strict upper triangle."""
    a = as_square(A)
    return np.tril(a) - np.triu(a, 1)


def s_coefficients(alpha) -> np.ndarray:
    """``(alpha[k] - alpha[l]) / (alpha[k] + alpha[l])``.

    Entries with ``alpha[k] + alpha[l] == 0`` (only reachable through the
    zero-tolerant internal path) are set to 0; the multiplied block vanishes
    there anyway.
    """
    a = np.asarray(alpha, dtype=float)
    num = a[:, None] - a[None, :]
    den = a[:, None] + a[None, :]
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0)
    return out


def _basis_from_projections(projections: Sequence, n: int, tol: float) -> np.ndarray:
    vecs = []
    for i, p in enumerate(projections):
        p = as_square(p, f"projection {i}")
        if p.shape[0] != n:
            raise InputError(f"projection {i} has shape {p.shape}, expected {n}x{n}")
        scale = max(1.0, np.linalg.norm(p))
        if np.linalg.norm(p - p.conj().T) > tol * scale or np.linalg.norm(p @ p - p) > tol * scale:
            raise InputError(f"projection {i} is not an orthogonal projection")
        if abs(np.trace(p).real - 1.0) > tol:
            raise InputError(f"projection {i} is not rank one")
        j = int(np.argmax(np.diag(p).real))
        vecs.append(p[:, j] / np.sqrt(p[j, j].real))
    basis = np.column_stack(vecs)
    _check_basis(basis, tol)
    return basis


def _check_basis(basis: np.ndarray, tol: float) -> None:
    gram = basis.conj().T @ basis
    if np.linalg.norm(gram - np.eye(gram.shape[0])) > tol:
        raise InputError("projection family is not mutually orthogonal rank-one")


def s_operator(alpha, A, projections: Sequence | None = None, *,
               basis: np.ndarray | None = None, tol: float = 1e-10,
               _allow_zero: bool = False) -> np.ndarray:
    """``S(A) = sum_{k,l} (alpha_k - alpha_l)/(alpha_k + alpha_l) p_k A p_l``.

    Parameters
    ----------
    alpha : sequence of float
        Decreasing positive weights, one per projection.
    A : array_like
        Square matrix.
    projections : sequence of arrays, optional
        Mutually orthogonal rank-one projections ``p_k``. Defaults to the
        standard diagonal matrix units, in which case ``S`` is a Schur
        multiplier.
    basis : array, optional
        Alternative to ``projections``: a matrix whose orthonormal columns
        ``e_k`` span the ranges, ``p_k = e_k e_k*``.
    """
    a = as_square(A, "A")
    alpha = np.asarray(alpha, dtype=float) if _allow_zero else as_decreasing_positive(alpha)
    coef = s_coefficients(alpha)
    if projections is not None and basis is not None:
        raise InputError("pass either projections or basis, not both")
    if projections is None and basis is None:
        if a.shape[0] != alpha.size:
            raise InputError(f"alpha has length {alpha.size}, A is {a.shape[0]}x{a.shape[0]}")
        return coef * a
    if projections is not None:
        e = _basis_from_projections(projections, a.shape[0], tol)
    else:
        e = as_matrix(basis, "basis")
        if e.shape[0] != a.shape[0]:
            raise InputError("basis rows must match the size of A")
        _check_basis(e, tol)
    if e.shape[1] != alpha.size:
        raise InputError(f"alpha has length {alpha.size}, got {e.shape[1]} projections")
    core = e.conj().T @ a @ e
    return e @ (coef * core) @ e.conj().T


def verify_s_factorization(alpha, A) -> float:
    """Frobenius gap between ``S(A)`` and ``(2T - 1)(2 Phi o A - A)``."""
    a = as_square(A, "A")
    lhs = s_operator(alpha, a)
    rhs = reflect_trunc(2.0 * phi_matrix(alpha) * a - a)
    return float(np.linalg.norm(lhs - rhs))


def check_truncation_bounds(X, slack: float = DEFAULT_SLACK) -> Report:
    """Weak-L1 bounds of ``(2T - 1)`` on zero-diagonal ``X``.

    ``||(2T-1)X||_w <= (4e/pi)||X||_1`` is checked when ``X`` is Hermitian,
    ``(16e/pi)||X||_1`` always.
    """
    x = as_square(X, "X")
    d = np.abs(np.diag(x))
    if d.size and d.max() > 1e-14 * max(1.0, float(np.abs(x).max())):
        raise InputError("X must have zero diagonal")
    x = x - np.diag(np.diag(x))
    hermitian = is_hermitian(x)
    y = reflect_trunc(x)
    lhs = weak_from_sv(singular_values(y))
    l1 = trace_norm(x)
    floor = x.shape[0] * 1e-12 * l1
    rep = Report("reflected truncation weak-L1 bounds")
    if hermitian:
        rep.add(leq("||(2T-1)X||_w <= (4e/pi)||X||_1", lhs, CONSTANTS.c_trunc_sa * l1, slack, floor))
    rep.add(leq("||(2T-1)X||_w <= (16e/pi)||X||_1", lhs, CONSTANTS.c_trunc * l1, slack, floor))
    rep.data.update(weak=lhs, l1=l1, ratio=lhs / l1 if l1 > 0 else 0.0, hermitian=hermitian)
    return rep


def check_s_bound(alpha, A, slack: float = DEFAULT_SLACK) -> Report:
    """``||S(A)||_w <= (80e/pi)||A||_1`` and ``||2 Phi o A - A||_1 <= 5||A||_1``."""
    a = as_square(A, "A")
    l1 = trace_norm(a)
    s_weak = weak_from_sv(singular_values(s_operator(alpha, a)))
    mid = 2.0 * phi_matrix(alpha) * a - a
    mid_l1 = trace_norm(mid)
    floor = a.shape[0] * 1e-12 * l1
    rep = Report("divided-difference multiplier bounds")
    rep.add(leq("||(2M_Phi-1)A||_1 <= 5||A||_1", mid_l1, 5.0 * l1, slack, floor))
    rep.add(leq("||S(A)||_w <= (16e/pi)||(2M_Phi-1)A||_1", s_weak, CONSTANTS.c_trunc * mid_l1, slack, floor))
    rep.add(leq("||S(A)||_w <= (80e/pi)||A||_1", s_weak, CONSTANTS.c_s * l1, slack, floor))
    rep.data.update(ratio=s_weak / l1 if l1 > 0 else 0.0)
    return rep
