"""Seeded randomized campaigns certifying convexity and monotonicity of the
entropy-gap calculus.

Each campaign draws ``samples`` independent test cases, evaluates the signed
slack ("margin") of one inequality per case, and reports the margins, the
violation count, and the inputs achieving the worst margin.  A sample passes
when its margin is at least ``-tolerance``.

=========  ===================================================================
campaign   margin (nonnegative in exact arithmetic except C9)
=========  ===================================================================
C1         segment convexity of the gap G:
           t G(rho) + (1-t) G(sigma) - G(t rho + (1-t) sigma), worst weight
C2         second differential of G along a random Hermitian direction
C3         monotonicity of the curvature form Q under mixed-unitary channels:
           Q(x, h) - Q(Phi(x), Phi(h))
C4         joint midpoint convexity of Q:
           (Q(x1, h1) + Q(x2, h2)) / 2 - Q(midpoint, midpoint)
C5         segment concavity of rho -> S(rho) - S(tr_2 rho): value - chord,
           worst weight; each sample also cross-checks the closed form of G
           for f = t log t against the entropy expression
C6         segment convexity of rho -> d2**(p-1) tr rho**p - tr (tr_2 rho)**p:
           chord - value, worst weight
C7         midpoint operator convexity of (A, B) -> B^H A^-1 B: smallest
           eigenvalue of the midpoint defect
C8         kernel identities: tolerance - |difference|, where the differences
           are the log divided difference against its integral form (absolute)
           and the t log t curvature form against the resolvent quadrature
           (relative)
C9         falsification search for f = t**3 on the C4 statement: random
           search, then greedy local descent from the worst draw (appended as
           one extra margin entry); finding a violation is the interesting
           outcome, absence of one is inconclusive
=========  ===================================================================

C1-C6 draw on the bipartite space (d1, d2); C7-C9 use the single dimension
d1 * d2.  Per-sample randomness comes from ``RngStream(seed, sample_index)``
(the C9 descent uses stream ``samples``), so dropping a sample never changes
the draws of the others and margin lists are reproducible bit-for-bit for a
fixed config.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from .bipartite import (
    BipartiteSpace,
    apply_channel,
    conditional_expectation_1_channel,
    partial_trace_2,
    random_mixed_unitary,
    random_pinching,
)
from .calculus import CUBE, LOG, T_LOG_T, by_name, divided_difference, quad_form
from .entropy import (
    EntropyGapSpec,
    entropy_gap,
    second_differential_spectral,
    von_neumann_entropy,
)
from .errors import DomainError, NumericError
from .linalg import RngStream, hermitize, random_hermitian, random_pd
from .oracles import dd_log_quadrature, log_quad_form_quadrature

CAMPAIGN_IDS = tuple(f"C{i}" for i in range(1, 10))
CHANNEL_FAMILIES = ("pinching", "expectation", "mixed", "uniform")

# C8 draws its scalar pairs from this interval regardless of the matrix
# spectrum range.
_C8_PAIR_RANGE = (0.1, 10.0)


@dataclass(frozen=True)
class CampaignConfig:
    """Configuration of one verification campaign.

    ``normalize`` rescales every positive definite draw to unit trace;
    ``relative`` divides each margin by 1 + the Frobenius norms of the drawn
    inputs; ``channel_family`` restricts the C3 channel draw ("uniform" picks
    among the three families per sample).
    """

    campaign: str
    d1: int = 2
    d2: int = 2
    samples: int = 200
    seed: int = 42
    tolerance: float = 1e-8
    function: str = "t_log_t"
    p: float = 1.5
    weights: tuple[float, ...] = (0.5, 0.25, 0.75)
    fd_step: float = 1e-4
    eig_low: float = 0.1
    eig_high: float = 3.0
    normalize: bool = False
    relative: bool = False
    channel_family: str = "uniform"
    threads: int = 1

    def validate(self) -> None:
        if self.campaign not in CAMPAIGN_IDS:
            raise ValueError(f"unknown campaign {self.campaign!r}; choose from {CAMPAIGN_IDS}")
        space = self.space()  # bounds d1, d2 and the product
        del space
        if self.samples < 1:
            raise ValueError(f"samples must be positive, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if not self.weights or any(not 0.0 < t < 1.0 for t in self.weights):
            raise ValueError(f"segment weights must lie strictly inside (0, 1), got {self.weights}")
        if not self.fd_step > 0:
            raise ValueError(f"fd_step must be positive, got {self.fd_step}")
        if not 0 < self.eig_low <= self.eig_high:
            raise ValueError(f"eigenvalue range ({self.eig_low}, {self.eig_high}) is invalid")
        if self.channel_family not in CHANNEL_FAMILIES:
            raise ValueError(
                f"unknown channel family {self.channel_family!r}; choose from {CHANNEL_FAMILIES}"
            )
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
        if self.campaign == "C6" and not 1.0 <= self.p <= 2.0:
            # C6 reads the exponent directly, bypassing the power builtin.
            raise ValueError(f"campaign C6 needs an exponent p in [1, 2], got {self.p}")
        self.scalar_function()  # validates the name and, for power, p

    def space(self) -> BipartiteSpace:
        return BipartiteSpace(self.d1, self.d2)

    def scalar_function(self):
        return by_name(self.function, p=self.p)


@dataclass
class CampaignReport:
    """Outcome of one campaign.

    ``margins`` is ordered by sample index (successful samples only; failed
    ones are listed under ``errors``), ``violations`` counts margins below
    ``-tolerance``, and ``witness`` carries the inputs achieving the worst
    margin plus the sample they came from.
    """

    config: CampaignConfig
    margins: list[float]
    violations: int
    worst_margin: float | None
    witness: dict | None
    errors: list[dict]
    wall_time: float


def _draw_pd(config: CampaignConfig, rng: RngStream, dim: int) -> np.ndarray:
    m = random_pd(dim, rng, (config.eig_low, config.eig_high))
    if config.normalize:
        m = m / np.trace(m).real
    return m


def _norms(*mats) -> float:
    return 1.0 + sum(float(np.linalg.norm(m)) for m in mats)


def _segment_min(left_value, right_value, mixture_value, orientation):
    """Worst signed slack over the segment weights.

    ``orientation`` +1 compares chord - value (convexity), -1 value - chord
    (concavity).
    """
    margin, worst = math.inf, None
    for t, mixed in mixture_value:
        chord = t * left_value + (1.0 - t) * right_value
        slack = orientation * (chord - mixed)
        if slack < margin:
            margin, worst = slack, t
    return margin, worst


def _sample_c1(config: CampaignConfig, rng: RngStream):
    space = config.space()
    gap = EntropyGapSpec(config.scalar_function(), space)
    rho = _draw_pd(config, rng, space.dim)
    sigma = _draw_pd(config, rng, space.dim)
    g_rho = entropy_gap(rho, gap)
    g_sigma = entropy_gap(sigma, gap)
    mixtures = [(t, entropy_gap(t * rho + (1.0 - t) * sigma, gap)) for t in config.weights]
    margin, worst = _segment_min(g_rho, g_sigma, mixtures, +1)
    return margin, _norms(rho, sigma), {"rho": rho, "sigma": sigma, "weight": worst}


def _sample_c2(config: CampaignConfig, rng: RngStream):
    space = config.space()
    gap = EntropyGapSpec(config.scalar_function(), space)
    rho = _draw_pd(config, rng, space.dim)
    h = random_hermitian(space.dim, rng, 1.0)
    margin = second_differential_spectral(rho, h, gap)
    return margin, _norms(rho, h), {"rho": rho, "h": h}


def _sample_c3(config: CampaignConfig, rng: RngStream):
    space = config.space()
    func = config.scalar_function()
    x = _draw_pd(config, rng, space.dim)
    h = random_hermitian(space.dim, rng, 1.0)
    family = config.channel_family
    if family == "uniform":
        family = ("pinching", "expectation", "mixed")[int(rng.gen.integers(0, 3))]
    if family == "pinching":
        channel = random_pinching(space.dim, rng)
    elif family == "expectation":
        channel = conditional_expectation_1_channel(space)
    else:
        channel = random_mixed_unitary(space.dim, rng, int(rng.gen.integers(2, 6)))
    margin = quad_form(func, x, h) - quad_form(
        func, apply_channel(channel, x), apply_channel(channel, h)
    )
    witness = {"x": x, "h": h, "family": family, "channel": channel}
    return margin, _norms(x, h), witness


def _q_midpoint_margin(func, x1, h1, x2, h2) -> float:
    average = 0.5 * quad_form(func, x1, h1) + 0.5 * quad_form(func, x2, h2)
    return average - quad_form(func, (x1 + x2) / 2.0, (h1 + h2) / 2.0)


def _sample_c4(config: CampaignConfig, rng: RngStream):
    dim = config.space().dim
    func = config.scalar_function()
    x1 = _draw_pd(config, rng, dim)
    h1 = random_hermitian(dim, rng, 1.0)
    x2 = _draw_pd(config, rng, dim)
    h2 = random_hermitian(dim, rng, 1.0)
    margin = _q_midpoint_margin(func, x1, h1, x2, h2)
    return margin, _norms(x1, h1, x2, h2), {"x1": x1, "h1": h1, "x2": x2, "h2": h2}


def _entropy_defect(rho, space: BipartiteSpace) -> float:
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace_2(rho, space))


def _sample_c5(config: CampaignConfig, rng: RngStream):
    space = config.space()
    gap = EntropyGapSpec(T_LOG_T, space)
    rho = _draw_pd(config, rng, space.dim)
    sigma = _draw_pd(config, rng, space.dim)
    # Closed-form cross-check: for f = t log t the gap equals
    # log(d2) tr(rho) - S(rho) + S(tr_2 rho).
    for state in (rho, sigma):
        lhs = entropy_gap(state, gap)
        rhs = (
            math.log(space.d2) * float(np.trace(state).real)
            - von_neumann_entropy(state)
            + von_neumann_entropy(partial_trace_2(state, space))
        )
        if abs(lhs - rhs) > 1e-9 * abs(rhs):
            raise NumericError(
                f"entropy closed form disagrees with the gap functional: {lhs!r} vs {rhs!r}"
            )
    v_rho = _entropy_defect(rho, space)
    v_sigma = _entropy_defect(sigma, space)
    mixtures = [
        (t, _entropy_defect(t * rho + (1.0 - t) * sigma, space)) for t in config.weights
    ]
    margin, worst = _segment_min(v_rho, v_sigma, mixtures, -1)
    return margin, _norms(rho, sigma), {"rho": rho, "sigma": sigma, "weight": worst}


def _power_trace_gap(rho, space: BipartiteSpace, p: float) -> float:
    vals = np.linalg.eigvalsh(rho)
    smallest = float(vals.min())
    if smallest <= 0:
        raise DomainError(f"power trace gap needs a positive definite state; "
                          f"smallest eigenvalue is {smallest:.6g}")
    marginal_vals = np.linalg.eigvalsh(partial_trace_2(rho, space))
    return float(space.d2 ** (p - 1.0) * np.sum(vals**p) - np.sum(marginal_vals**p))


def _sample_c6(config: CampaignConfig, rng: RngStream):
    space = config.space()
    p = float(config.p)
    rho = _draw_pd(config, rng, space.dim)
    sigma = _draw_pd(config, rng, space.dim)
    v_rho = _power_trace_gap(rho, space, p)
    v_sigma = _power_trace_gap(sigma, space, p)
    mixtures = [
        (t, _power_trace_gap(t * rho + (1.0 - t) * sigma, space, p)) for t in config.weights
    ]
    margin, worst = _segment_min(v_rho, v_sigma, mixtures, +1)
    return margin, _norms(rho, sigma), {"rho": rho, "sigma": sigma, "weight": worst}


def _congruence_inverse(a, b) -> np.ndarray:
    # (A, B) -> B^H A^-1 B, Hermitian positive semidefinite for any B.
    return hermitize(b.conj().T @ np.linalg.solve(a, b))


def _sample_c7(config: CampaignConfig, rng: RngStream):
    dim = config.space().dim
    a1 = _draw_pd(config, rng, dim)
    b1 = random_hermitian(dim, rng, 1.0) + 1j * random_hermitian(dim, rng, 1.0)
    a2 = _draw_pd(config, rng, dim)
    b2 = random_hermitian(dim, rng, 1.0) + 1j * random_hermitian(dim, rng, 1.0)
    defect = (
        0.5 * _congruence_inverse(a1, b1)
        + 0.5 * _congruence_inverse(a2, b2)
        - _congruence_inverse((a1 + a2) / 2.0, (b1 + b2) / 2.0)
    )
    margin = float(np.linalg.eigvalsh(defect).min())
    return margin, _norms(a1, b1, a2, b2), {"a1": a1, "b1": b1, "a2": a2, "b2": b2}


def _sample_c8(config: CampaignConfig, rng: RngStream):
    dim = config.space().dim
    lo, hi = _C8_PAIR_RANGE
    s, t = (float(v) for v in rng.gen.uniform(lo, hi, size=2))
    dd_gap = abs(divided_difference(LOG.f, LOG.f1, s, t) - dd_log_quadrature(s, t))
    a = _draw_pd(config, rng, dim)
    h = random_hermitian(dim, rng, 1.0)
    reference = log_quad_form_quadrature(a, h)
    qf_gap = abs(quad_form(T_LOG_T, a, h) - reference) / abs(reference)
    margin = config.tolerance - max(dd_gap, qf_gap)
    return margin, _norms(a, h), {"s": s, "t": t, "a": a, "h": h}


def _sample_c9(config: CampaignConfig, rng: RngStream):
    dim = config.space().dim
    x1 = _draw_pd(config, rng, dim)
    h1 = random_hermitian(dim, rng, 1.0)
    x2 = _draw_pd(config, rng, dim)
    h2 = random_hermitian(dim, rng, 1.0)
    margin = _q_midpoint_margin(CUBE, x1, h1, x2, h2)
    return margin, _norms(x1, h1, x2, h2), {"x1": x1, "h1": h1, "x2": x2, "h2": h2}


_SAMPLERS = {
    "C1": _sample_c1,
    "C2": _sample_c2,
    "C3": _sample_c3,
    "C4": _sample_c4,
    "C5": _sample_c5,
    "C6": _sample_c6,
    "C7": _sample_c7,
    "C8": _sample_c8,
    "C9": _sample_c9,
}

_C9_KEYS = ("x1", "h1", "x2", "h2")


def _c9_descent(config: CampaignConfig, witness: dict, start_margin: float):
    """Greedy local search pushing the worst C9 margin further down.

    Up to 200 proposals from stream ``(seed, samples)``: perturb all four
    inputs by ``step`` times a random Hermitian, keep proposals that lower the
    margin and leave both base points positive definite, halve the step on
    failure.
    """
    dim = config.space().dim
    rng = RngStream(config.seed, config.samples)
    mats = [np.array(witness[k]) for k in _C9_KEYS]
    margin = start_margin
    step = 1e-2
    for _ in range(200):
        if step < 1e-12:
            break
        candidate = [m + step * random_hermitian(dim, rng, 1.0) for m in mats]
        base_floor = min(
            float(np.linalg.eigvalsh(candidate[0]).min()),
            float(np.linalg.eigvalsh(candidate[2]).min()),
        )
        if base_floor <= 1e-8:
            step *= 0.5
            continue
        trial = _q_midpoint_margin(CUBE, *candidate)
        if trial < margin:
            mats, margin = candidate, trial
        else:
            step *= 0.5
    return margin, dict(zip(_C9_KEYS, mats))


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Run one campaign and assemble its report.

    Samples may be evaluated concurrently (``config.threads``); margins are
    recorded in sample order either way.  A sample whose evaluation raises a
    domain or numeric error is recorded under ``errors`` and the campaign
    continues.
    """
    config.validate()
    start = perf_counter()
    sampler = _SAMPLERS[config.campaign]

    def evaluate(index: int):
        rng = RngStream(config.seed, index)
        try:
            margin, scale, witness = sampler(config, rng)
        except (DomainError, NumericError, np.linalg.LinAlgError) as exc:
            return index, None, f"{type(exc).__name__}: {exc}"
        if config.relative:
            margin = margin / scale
        return index, (margin, witness), None

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            outcomes = list(pool.map(evaluate, range(config.samples)))
    else:
        outcomes = [evaluate(i) for i in range(config.samples)]

    records: list[tuple[object, float, dict]] = []
    errors: list[dict] = []
    for index, success, message in outcomes:
        if message is not None:
            errors.append({"sample": index, "message": message})
        else:
            margin, witness = success
            records.append((index, margin, witness))

    if config.campaign == "C9" and records:
        worst = min(records, key=lambda r: r[1])
        raw_start = _q_midpoint_margin(CUBE, *(worst[2][k] for k in _C9_KEYS))
        final_margin, final_witness = _c9_descent(config, worst[2], raw_start)
        if config.relative:
            final_margin = final_margin / _norms(*(final_witness[k] for k in _C9_KEYS))
        records.append(("descent", final_margin, final_witness))

    margins = [margin for _, margin, _ in records]
    violations = int(sum(1 for m in margins if m < -config.tolerance))
    worst_margin = min(margins) if margins else None
    witness = None
    if records:
        index, _, payload = min(records, key=lambda r: r[1])
        witness = dict(payload)
        witness["sample"] = index
    return CampaignReport(
        config=config,
        margins=margins,
        violations=violations,
        worst_margin=worst_margin,
        witness=witness,
        errors=errors,
        wall_time=perf_counter() - start,
    )
