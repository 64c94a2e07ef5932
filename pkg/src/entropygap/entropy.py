"""Entropy-like functionals on bipartite spaces.

The central object is the gap functional

    G(rho) = tr f(d2 * rho) / d2 - tr f(tr_2 rho)

for a scalar function ``f`` on (0, inf).  Its second differential along a
Hermitian direction ``h`` has the closed spectral form

    d2 * Q(d2 * rho, h) - Q(tr_2 rho, tr_2 h),

where Q is the curvature form of ``f`` (:func:`entropygap.calculus.quad_form`),
and can independently be recomputed by a second difference quotient of G.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteSpace, partial_trace_2
from .calculus import ScalarFunction, quad_form
from .errors import DomainError
from .linalg import check_hermitian, eigh


@dataclass(frozen=True)
class EntropyGapSpec:
    """A gap functional: scalar function plus the bipartite split."""

    function: ScalarFunction
    space: BipartiteSpace


def von_neumann_entropy(rho) -> float:
    """Spectral entropy ``-sum_i lam_i log lam_i`` of a positive definite matrix."""
    vals = eigh(rho).eigenvalues
    smallest = float(vals.min())
    if smallest <= 0:
        raise DomainError(f"entropy needs a positive definite argument; "
                          f"smallest eigenvalue is {smallest:.6g}")
    return float(-np.sum(vals * np.log(vals)))


def _positive_spectrum(a, label: str) -> np.ndarray:
    vals = eigh(a).eigenvalues
    smallest = float(vals.min())
    if smallest <= 0:
        raise DomainError(f"{label} must be positive definite; "
                          f"smallest eigenvalue is {smallest:.6g}")
    return vals


def entropy_gap(rho, spec: EntropyGapSpec) -> float:
    """Evaluate ``tr f(d2 * rho) / d2 - tr f(tr_2 rho)``.

    Both traces are taken over the spectrum directly, ``sum_i f(lam_i)``,
    which is cheaper and better conditioned than tracing a reconstructed
    matrix; the first term uses the exact spectral mapping
    ``eig(d2 * rho) = d2 * eig(rho)``.
    """
    rho = check_hermitian(rho, "state")
    space = spec.space
    if rho.shape != (space.dim, space.dim):
        raise DomainError(f"state must have shape ({space.dim}, {space.dim}), got {rho.shape}")
    f = spec.function.f
    d2 = space.d2
    vals = _positive_spectrum(rho, "state")
    marginal_vals = _positive_spectrum(partial_trace_2(rho, space), "partial trace of the state")
    return float(np.sum(f(d2 * vals)) / d2 - np.sum(f(marginal_vals)))


def second_differential_spectral(rho, h, spec: EntropyGapSpec) -> float:
    """Second differential of the gap along ``h``, by the spectral formula.

    Returns ``d2 * Q(d2 * rho, h) - Q(tr_2 rho, tr_2 h)`` with Q the
    curvature form of ``spec.function``.
    """
    rho = check_hermitian(rho, "state")
    h = check_hermitian(h, "direction")
    space = spec.space
    if rho.shape != (space.dim, space.dim) or h.shape != rho.shape:
        raise DomainError("state and direction must both live on the composite space")
    d2 = space.d2
    composite = d2 * quad_form(spec.function, d2 * rho, h)
    marginal = quad_form(spec.function, partial_trace_2(rho, space), partial_trace_2(h, space))
    return float(composite - marginal)


def second_differential_fd(rho, h, spec: EntropyGapSpec, step: float) -> float:
    """Second difference quotient ``(G(rho+s*h) - 2 G(rho) + G(rho-s*h)) / s**2``."""
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    rho = check_hermitian(rho, "state")
    h = check_hermitian(h, "direction")
    for sign, label in ((1.0, "plus"), (-1.0, "minus")):
        shifted = rho + sign * step * h
        smallest = float(np.linalg.eigvalsh(shifted).min())
        if smallest <= 0:
            raise DomainError(
                f"state {label} step*direction leaves the positive definite cone "
                f"(smallest eigenvalue {smallest:.6g}); reduce the step from {step:g}"
            )
    plus = entropy_gap(rho + step * h, spec)
    center = entropy_gap(rho, spec)
    minus = entropy_gap(rho - step * h, spec)
    return float((plus - 2.0 * center + minus) / step**2)


def second_differential_fd_auto(rho, h, spec: EntropyGapSpec,
                                step: float = 1e-4, max_halvings: int = 10) -> float:
    """Like :func:`second_differential_fd`, halving the step when the
    perturbed state leaves the positive definite cone (at most
    ``max_halvings`` times)."""
    current = step
    for _ in range(max_halvings + 1):
        try:
            return second_differential_fd(rho, h, spec, current)
        except DomainError:
            current /= 2.0
    raise DomainError(
        f"perturbed state stayed outside the positive definite cone after "
        f"{max_halvings} halvings from step {step:g}"
    )
