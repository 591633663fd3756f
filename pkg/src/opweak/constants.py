"""Explicit constants of the weak-type estimates, kept in closed form."""
from __future__ import annotations

import math
from dataclasses import dataclass

E_OVER_PI = math.e / math.pi


@dataclass(frozen=True)
class BoundConstants:
    """Constants of the estimate chain.

    Attributes
    ----------
    c_trunc_sa : float
        Weak-L1 bound of the reflected triangular truncation on
        self-adjoint zero-diagonal matrices, ``4e/pi``.
    c_trunc : float
        Same bound for general zero-diagonal matrices, ``16e/pi``.
    c_s : float
        Bound for the divided-difference multiplier ``S``, ``80e/pi``.
    c_sym : float
        Bound for identically and symmetrically distributed pairs,
        ``8 + 640e/pi``.
    c_main : float
        Bound for arbitrary self-adjoint pairs, ``34 + 2560e/pi``.
    schur_factor : float
        Trace-norm factor of a positive Schur multiplier.
    quasi_tri : float
        Quasi-triangle constant of the weak-L1 quasi-norm.
    """

    c_trunc_sa: float = 4.0 * E_OVER_PI
    c_trunc: float = 16.0 * E_OVER_PI
    c_s: float = 80.0 * E_OVER_PI
    c_sym: float = 8.0 + 640.0 * E_OVER_PI
    c_main: float = 34.0 + 2560.0 * E_OVER_PI
    schur_factor: float = 4.0
    quasi_tri: float = 2.0

    def cross_check(self, rtol: float = 1e-14) -> dict[str, bool]:
        """Verify the algebraic relations tying the constants together."""
        def same(a, b):
            return abs(a - b) <= rtol * max(abs(a), abs(b))

        return {
            "c_trunc = 4 c_trunc_sa": same(self.c_trunc, 4.0 * self.c_trunc_sa),
            "c_s = 5 c_trunc": same(self.c_s, 5.0 * self.c_trunc),
            "c_sym = 8 + 8 c_s": same(self.c_sym, 8.0 + 8.0 * self.c_s),
            # four summands, each weighted by the quasi-triangle factor squared
            "c_sym = 4 (2 + 2 c_s)": same(self.c_sym, 4.0 * (2.0 + 2.0 * self.c_s)),
            "c_main = 34 + 32 c_s": same(self.c_main, 34.0 + 32.0 * self.c_s),
            "c_main = 4 c_sym + 2": same(self.c_main, 4.0 * self.c_sym + 2.0),
        }


CONSTANTS = BoundConstants()
