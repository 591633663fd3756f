"""Dense complex Hermitian linear algebra.

Everything spectral in the package goes through :func:`hermitian_eig`, a
cyclic complex Jacobi solver. Matrices are plain ``numpy`` arrays of dtype
``complex128``; :func:`as_matrix` and :func:`as_hermitian` validate inputs at
the public boundary.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numba
import numpy as np

from .errors import EigenConvergenceError, InputError

HERMITIAN_TOL = 1e-12
JACOBI_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 40
MAX_DIM = 4096


class SpectralDecomposition(NamedTuple):
    """``A = Q diag(eigenvalues) Q*`` with eigenvalues sorted nonincreasing."""

    eigenvalues: np.ndarray
    unitary: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Return ``Q f(diag) Q*`` as an exactly Hermitian array."""
        q = self.unitary
        vals = np.asarray(f(self.eigenvalues), dtype=float)
        out = (q * vals) @ q.conj().T
        return hermitize(out)

    def reconstruct(self) -> np.ndarray:
        return self.apply(lambda x: x)


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    a = np.asarray(M)
    if a.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {a.shape}")
    a = a.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} has non-finite entries")
    return a


def as_square(M, name: str = "matrix") -> np.ndarray:
    a = as_matrix(M, name)
    if a.shape[0] != a.shape[1]:
        raise InputError(f"{name} must be square, got shape {a.shape}")
    return a


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.linalg.norm(a - a.conj().T) <= tol * np.linalg.norm(a))


def as_hermitian(A, name: str = "matrix", tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``A`` as Hermitian and return its exact symmetrization."""
    a = as_square(A, name)
    if not is_hermitian(a, tol):
        gap = np.linalg.norm(a - a.conj().T) / max(np.linalg.norm(a), np.finfo(float).tiny)
        raise InputError(f"{name} is not Hermitian (relative skew part {gap:.3e})")
    return hermitize(a)


@numba.njit(cache=True)
def _jacobi_sweeps(a, threshold, max_sweeps, vectors):
    # a: Hermitian, modified in place until diagonal; rows of r are the
    # eigenvector columns (kept row-major so every update is contiguous).
    n = a.shape[0]
    r = np.eye(n if vectors else 1, dtype=np.complex128)
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j].real ** 2 + a[i, j].imag ** 2
        off = math.sqrt(2.0 * off)
        if off <= threshold:
            return r, sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                ph = b / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sph = s * ph
                sphc = s * np.conj(ph)
                # G = [[c, s*ph], [-s*conj(ph), c]];  A <- G* A G,  V <- V G
                for k in range(n):
                    if k == p or k == q:
                        continue
                    apk = a[p, k]
                    aqk = a[q, k]
                    npk = c * apk - sph * aqk
                    nqk = sphc * apk + c * aqk
                    a[p, k] = npk
                    a[q, k] = nqk
                    a[k, p] = np.conj(npk)
                    a[k, q] = np.conj(nqk)
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
                if not vectors:
                    continue
                for k in range(n):
                    rpk = r[p, k]
                    rqk = r[q, k]
                    r[p, k] = c * rpk - sphc * rqk
                    r[q, k] = sph * rpk + c * rqk
    return r, -1, off


def hermitian_eig(A, *, threshold: float = JACOBI_THRESHOLD,
                  max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Parameters
    ----------
    A : array_like
        Hermitian ``n x n`` matrix (``n >= 1``).
    threshold : float
        Sweeps stop once the off-diagonal Frobenius mass is at most
        ``threshold * ||A||_F``.
    max_sweeps : int
        Cap on the number of full cyclic sweeps.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues sorted nonincreasing (stable with respect to the Jacobi
        output order) and the unitary whose columns are eigenvectors.

    Raises
    ------
    InputError
        Non-square, non-Hermitian or non-finite input.
    EigenConvergenceError
        The sweep cap was hit first; carries the residual.
    """
    a = as_hermitian(A)
    w, r = _run_jacobi(a, threshold, max_sweeps, True)
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(w[order], np.ascontiguousarray(r.T[:, order]))


def hermitian_eigvals(A, *, threshold: float = JACOBI_THRESHOLD,
                      max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues only, sorted nonincreasing; same rotations as :func:`hermitian_eig`."""
    a = as_hermitian(A)
    w, _ = _run_jacobi(a, threshold, max_sweeps, False)
    return np.sort(w)[::-1]


def _run_jacobi(a, threshold, max_sweeps, vectors):
    n = a.shape[0]
    if n == 0:
        raise InputError("empty matrix")
    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return np.zeros(n), np.eye(n, dtype=np.complex128)
    work = np.array(a, dtype=np.complex128, order="C")
    r, sweeps, off = _jacobi_sweeps(work, threshold * fro, max_sweeps, vectors)
    if sweeps < 0:
        raise EigenConvergenceError("Jacobi eigensolver did not converge", off / fro, max_sweeps)
    return work.diagonal().real.copy(), r


def spectral_function(A, f: Callable[[np.ndarray], np.ndarray],
                      eig: SpectralDecomposition | None = None) -> np.ndarray:
    """``f(A) = Q f(Lambda) Q*`` for a real function ``f`` applied elementwise."""
    if eig is None:
        eig = hermitian_eig(A)
    return eig.apply(f)


def abs_matrix(A, eig: SpectralDecomposition | None = None) -> np.ndarray:
    return spectral_function(A, np.abs, eig)


def pos_part(A, eig: SpectralDecomposition | None = None) -> np.ndarray:
    return spectral_function(A, lambda x: np.maximum(x, 0.0), eig)


def neg_part(A, eig: SpectralDecomposition | None = None) -> np.ndarray:
    return spectral_function(A, lambda x: np.maximum(-x, 0.0), eig)


def shifted_abs(A, t: float, eig: SpectralDecomposition | None = None) -> np.ndarray:
    """``|A - t I|``."""
    return spectral_function(A, lambda x: np.abs(x - t), eig)


def support_projection(A, eps_supp: float | None = None,
                       eig: SpectralDecomposition | None = None) -> np.ndarray:
    """Spectral projection of ``A`` onto eigenvalues with ``|lambda| > eps_supp``.

    The default threshold is ``n * 1e-12 * ||A||_inf`` (operator norm), which
    classifies spectra bounded away from zero correctly.
    """
    a = as_hermitian(A)
    if eig is None:
        eig = hermitian_eig(a)
    if eps_supp is None:
        w = eig.eigenvalues
        eps_supp = a.shape[0] * 1e-12 * float(max(abs(w[0]), abs(w[-1])))
    if eps_supp < 0:
        raise InputError("eps_supp must be nonnegative")
    return eig.apply(lambda x: (np.abs(x) > eps_supp).astype(float))


def _check_dim(n: int) -> None:
    if n > MAX_DIM:
        raise InputError(f"result dimension {n} exceeds the limit {MAX_DIM}")


def kron(A, B) -> np.ndarray:
    a = as_matrix(A, "A")
    b = as_matrix(B, "B")
    _check_dim(a.shape[0] * b.shape[0])
    _check_dim(a.shape[1] * b.shape[1])
    return np.kron(a, b)


def direct_sum(blocks: Sequence) -> np.ndarray:
    """Block-diagonal embedding of ``blocks``."""
    mats = [as_matrix(b, f"block {i}") for i, b in enumerate(blocks)]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    _check_dim(rows)
    _check_dim(cols)
    out = np.zeros((rows, cols), dtype=np.complex128)
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def unitary_exp(B, eps: float, eig: SpectralDecomposition | None = None) -> np.ndarray:
    """``exp(i * eps * B)`` for Hermitian ``B`` via its eigendecomposition."""
    if eig is None:
        eig = hermitian_eig(B)
    q = eig.unitary
    return (q * np.exp(1j * eps * eig.eigenvalues)) @ q.conj().T


def op_norm_inf(A) -> float:
    """Operator norm of a Hermitian matrix (largest eigenvalue magnitude)."""
    w = hermitian_eigvals(A)
    return float(max(abs(w[0]), abs(w[-1])))


# -- matrix JSON --------------------------------------------------------------

def matrix_to_json(M) -> dict:
    a = as_square(M)
    d = {"n": int(a.shape[0]), "re": a.real.tolist()}
    if np.any(a.imag != 0):
        d["im"] = a.imag.tolist()
    return d


def matrix_from_json(d: dict) -> np.ndarray:
    """Parse ``{"n": int, "re": [[...]], "im": [[...]]}``; ``im`` is optional."""
    try:
        n = int(d["n"])
        re = np.asarray(d["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from None
    im = np.asarray(d.get("im", np.zeros((n, n))), dtype=float)
    if re.shape != (n, n) or im.shape != (n, n):
        raise InputError(f"matrix JSON arrays must be {n}x{n}")
    return as_matrix(re + 1j * im)
