"""Independent reference routes for the spectral calculus.

Gauss-Legendre quadrature evaluates the integral forms of the logarithmic
kernels, and central finite differences recompute Frechet derivatives from
matrix-function values alone.  None of these touch the divided-difference
path they are used to check.
"""

from __future__ import annotations

import numpy as np

from .calculus import ScalarFunction, matrix_function
from .errors import DomainError
from .linalg import check_hermitian


def gauss_legendre_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of n-point Gauss-Legendre quadrature on (0, 1)."""
    if n < 1:
        raise DomainError(f"node count must be positive, got {n}")
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def dd_log_quadrature(s: float, t: float, nodes: int = 64) -> float:
    """Integral form of the log divided difference.

    Evaluates integral_0^1 dl / (l*t + (1 - l)*s), which equals
    (log t - log s) / (t - s) for positive s, t.
    """
    s, t = float(s), float(t)
    if not (s > 0 and t > 0):
        raise DomainError(f"integral kernel needs positive arguments, got ({s}, {t})")
    x, w = gauss_legendre_unit(nodes)
    return float(np.sum(w / (x * t + (1.0 - x) * s)))


def log_quad_form_quadrature(a, h, nodes: int = 128) -> float:
    """Resolvent integral form of the log-kernel curvature form.

    Evaluates integral_0^inf tr[h (a + l)^-1 h (a + l)^-1] dl by
    Gauss-Legendre after the substitution l = u / (1 - u), under which the
    integrand becomes tr[h K_u^-1 h K_u^-1] with K_u = (1 - u) a + u I,
    smooth on [0, 1].  Batched linear solves keep this route independent of
    any eigendecomposition.
    """
    a = check_hermitian(a, "base point")
    h = check_hermitian(h, "direction")
    if h.shape != a.shape:
        raise DomainError(f"direction shape {h.shape} does not match base point {a.shape}")
    if float(np.linalg.eigvalsh(a).min()) <= 0:
        raise DomainError("resolvent integral needs a positive definite base point")
    x, w = gauss_legendre_unit(nodes)
    eye = np.eye(a.shape[0])
    pencil = (1.0 - x)[:, None, None] * a + x[:, None, None] * eye
    solved = np.linalg.solve(pencil, np.broadcast_to(h, pencil.shape).copy())
    values = np.einsum("nij,nji->n", solved, solved).real
    return float(np.sum(w * values))


def frechet_central_difference(func: ScalarFunction, a, h, step: float = 1e-5) -> np.ndarray:
    """Central difference (f(a + step*h) - f(a - step*h)) / (2*step)."""
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    plus = matrix_function(func, a + step * h)
    minus = matrix_function(func, a - step * h)
    return (plus - minus) / (2.0 * step)
