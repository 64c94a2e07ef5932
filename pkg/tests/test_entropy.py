"""Entropy functionals and the second differential of the gap, both routes."""

import math

import numpy as np
import pytest

from entropygap import (
    T_LOG_T,
    BipartiteSpace,
    DomainError,
    EntropyGapSpec,
    RngStream,
    by_name,
    entropy_gap,
    kron,
    partial_trace_2,
    random_hermitian,
    random_pd,
    second_differential_fd,
    second_differential_fd_auto,
    second_differential_spectral,
    von_neumann_entropy,
)

SPACE = BipartiteSpace(2, 3)
GAP = EntropyGapSpec(T_LOG_T, SPACE)


def _draw(seed: int, index: int, dim: int = 6):
    rng = RngStream(seed, index)
    return random_pd(dim, rng), random_hermitian(dim, rng)


# -- von Neumann entropy ------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 7))
def test_entropy_of_maximally_mixed(n):
    assert von_neumann_entropy(np.eye(n, dtype=complex) / n) == pytest.approx(
        math.log(n), abs=1e-13
    )


def test_entropy_near_pure_state():
    rho = np.diag([1.0 - 1e-12, 1e-12]).astype(complex)
    assert abs(von_neumann_entropy(rho)) <= 1e-10


def test_entropy_additive_on_products():
    for index in range(10):
        rng = RngStream(211, index)
        sigma = random_pd(2, rng)
        tau = random_pd(3, rng)
        lhs = von_neumann_entropy(kron(sigma, tau))
        rhs = np.trace(tau).real * von_neumann_entropy(sigma) + np.trace(
            sigma
        ).real * von_neumann_entropy(tau)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))


def test_entropy_accepts_unnormalized_states():
    # No trace-1 assumption: S(c I_n) = -c log(c) * n.
    assert von_neumann_entropy(0.5 * np.eye(4, dtype=complex)) == pytest.approx(
        4 * 0.5 * math.log(2.0), abs=1e-13
    )


def test_entropy_rejects_nonpositive_spectrum():
    with pytest.raises(DomainError):
        von_neumann_entropy(np.diag([1.0, 0.0]).astype(complex))


# -- the gap functional -------------------------------------------------------


def test_gap_vanishes_for_identity_function():
    spec = EntropyGapSpec(by_name("identity"), SPACE)
    for index in range(5):
        rho, _ = _draw(223, index)
        assert abs(entropy_gap(rho, spec)) <= 1e-12


def test_gap_vanishes_on_maximally_mixed():
    rho = np.eye(6, dtype=complex) / 6.0
    assert abs(entropy_gap(rho, GAP)) <= 1e-13


def test_gap_entropy_closed_form():
    # For f = t log t the gap equals log(d2) tr(rho) - S(rho) + S(tr_2 rho).
    for index in range(20):
        rho, _ = _draw(227, index)
        lhs = entropy_gap(rho, GAP)
        rhs = (
            math.log(3.0) * np.trace(rho).real
            - von_neumann_entropy(rho)
            + von_neumann_entropy(partial_trace_2(rho, SPACE))
        )
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
def test_gap_power_closed_form(p):
    # For f = t^p the gap equals d2^(p-1) tr(rho^p) - tr(rho_1^p).
    spec = EntropyGapSpec(by_name("power", p=p), SPACE)
    for index in range(10):
        rho, _ = _draw(229, index)
        lhs = entropy_gap(rho, spec)
        vals = np.linalg.eigvalsh(rho)
        marginal = np.linalg.eigvalsh(partial_trace_2(rho, SPACE))
        rhs = 3.0 ** (p - 1.0) * float(np.sum(vals**p)) - float(np.sum(marginal**p))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_gap_rejects_wrong_dimension():
    with pytest.raises(DomainError):
        entropy_gap(np.eye(4, dtype=complex), GAP)


# -- second differential, spectral route --------------------------------------


def test_second_differential_identity_function_vanishes():
    spec = EntropyGapSpec(by_name("identity"), SPACE)
    rho, h = _draw(233, 0)
    assert second_differential_spectral(rho, h, spec) == 0.0


def test_second_differential_square_closed_form():
    spec = EntropyGapSpec(by_name("square"), SPACE)
    for index in range(10):
        rho, h = _draw(239, index)
        got = second_differential_spectral(rho, h, spec)
        h1 = partial_trace_2(h, SPACE)
        expected = 2.0 * 3.0 * np.trace(h @ h).real - 2.0 * np.trace(h1 @ h1).real
        assert abs(got - expected) <= 1e-10 * max(1.0, abs(expected))


def test_second_differential_square_with_identity_direction_is_zero():
    # h = I makes both terms equal: 2 d2 tr(I) - 2 tr((d2 I_{d1})^2)/... = 0.
    spec = EntropyGapSpec(by_name("square"), SPACE)
    rho, _ = _draw(241, 0)
    h = np.eye(6, dtype=complex)
    assert abs(second_differential_spectral(rho, h, spec)) <= 1e-10


@pytest.mark.parametrize("name,p", [("t_log_t", None), ("power", 1.5), ("power", 2.0)])
@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_second_differential_routes_agree(name, p, d1, d2):
    space = BipartiteSpace(d1, d2)
    spec = EntropyGapSpec(by_name(name, p=p), space)
    for index in range(9):
        rng = RngStream(251, (d1 * 10 + d2) * 100 + index)
        rho = random_pd(space.dim, rng)
        h = random_hermitian(space.dim, rng)
        spectral = second_differential_spectral(rho, h, spec)
        fd = second_differential_fd_auto(rho, h, spec)
        assert abs(spectral - fd) <= max(1e-5, 1e-4 * abs(spectral))


@pytest.mark.parametrize("name,p", [("t_log_t", None), ("power", 1.0), ("power", 1.5), ("power", 2.0)])
def test_second_differential_nonnegative_for_matrix_entropies(name, p):
    spec = EntropyGapSpec(by_name(name, p=p), SPACE)
    for index in range(25):
        rho, h = _draw(257, index)
        value = second_differential_spectral(rho, h, spec)
        assert value >= -1e-9 * (1.0 + np.linalg.norm(h) ** 2)


def test_second_differential_requires_matching_shapes():
    rho, _ = _draw(263, 0)
    with pytest.raises(DomainError):
        second_differential_spectral(rho, np.eye(4, dtype=complex), GAP)


# -- second differential, finite-difference route ------------------------------


def test_fd_identity_function_is_machine_zero():
    # Roundoff in G is amplified by 1/step**2, so a moderate step keeps the
    # quotient at the noise floor.
    spec = EntropyGapSpec(by_name("identity"), SPACE)
    rho, h = _draw(269, 0)
    assert abs(second_differential_fd(rho, h, spec, step=1e-2)) <= 1e-8


def test_fd_square_with_identity_direction():
    # G is quadratic for f = t^2, so the quotient is exact up to roundoff.
    spec = EntropyGapSpec(by_name("square"), BipartiteSpace(2, 2))
    rho = random_pd(4, RngStream(271, 0))
    got = second_differential_fd(rho, np.eye(4, dtype=complex), spec, step=1e-2)
    assert abs(got) <= 1e-8


def test_fd_rejects_step_leaving_the_cone():
    rho = np.diag([0.05, 1.0, 1.0, 1.0, 1.0, 1.0]).astype(complex)
    h = np.diag([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).astype(complex)
    with pytest.raises(DomainError, match="step"):
        second_differential_fd(rho, h, GAP, step=0.5)


def test_fd_auto_halves_until_inside_the_cone():
    # Smallest eigenvalue 0.05 admits the step only after four halvings of
    # 0.5; the automatic variant must return exactly that quotient.
    rho = np.diag([0.05, 1.0, 1.0, 1.0, 1.0, 1.0]).astype(complex)
    h = np.diag([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).astype(complex)
    got = second_differential_fd_auto(rho, h, GAP, step=0.5)
    assert got == second_differential_fd(rho, h, GAP, step=0.5 / 2**4)


def test_fd_auto_gives_up_after_max_halvings():
    rho = np.diag([0.05, 1.0, 1.0, 1.0, 1.0, 1.0]).astype(complex)
    h = np.diag([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).astype(complex)
    with pytest.raises(DomainError, match="halvings"):
        second_differential_fd_auto(rho, h, GAP, step=409.6, max_halvings=3)


def test_fd_rejects_nonpositive_step():
    rho, h = _draw(277, 0)
    with pytest.raises(DomainError):
        second_differential_fd(rho, h, GAP, step=0.0)
