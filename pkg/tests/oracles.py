"""Independent brute-force oracles used by the tests.

Deliberately naive implementations: these double-check the package's
numerics through a different route and must stay free of package imports.
"""

import math

import numpy as np


def bisect_x_tan_x(target: float, iterations: int = 200) -> float:
    """Plain bisection for x tan(x) = target on (0, pi/2)."""
    lo, hi = 0.0, math.pi / 2.0 - 1e-9
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid * math.tan(mid) > target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def bose_occupation_series(x: float) -> float:
    """1/(e^x - 1) summed as a geometric series until underflow."""
    total = 0.0
    k = 1
    while True:
        term = math.exp(-k * x)
        if term < 1e-320 or total + term == total:
            return total
        total += term
        k += 1


def propagator_evolution(h: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """Closed-system rho(t) via dense eigendecomposition of a hermitian H."""
    vals, vecs = np.linalg.eigh(h)
    u = vecs @ np.diag(np.exp(-1j * vals * t)) @ vecs.conj().T
    return u @ rho0 @ u.conj().T
