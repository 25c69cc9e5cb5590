"""Error analysis: inner products between the finite-T and ideal circuits,
the good/poor estimate decomposition, expectation operators over the
|beta|^2 x |alpha|^2 distribution, and the three distance bounds.

Every inner product is computed twice — once from raw statevectors and once
from the closed form

    <Phi_f | Phi_ideal> = sum_{j,k} |beta_j|^2 |alpha_{k|j}|^2 <h_k | h(lambda_j)>

(with <h_k| the rotated flag state for k <= K and |nothing> beyond) — and the
two routes must agree to cross-route tolerance, otherwise FormulaMismatch
signals an implementation bug.  The headline distance bound uses the explicit
constant chain

    err_full <= sqrt(20/3) * pi * c * kappa / t0,   c = sqrt((6 pi^2 + 1)/12).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .amplitudes import TWO_PI, HHLConfig, alpha_abs_sq_matrix, approx_eigenvalue
from .circuit import (
    WELL,
    CircuitState,
    extract_solution,
    post_select_well,
    post_select_well_ill,
    run_ideal,
    run_practical,
)
from .errors import (
    BadParameter,
    BoundViolation,
    FormulaMismatch,
    IllConditionedInput,
    ZeroProbability,
)
from .filters import FilterParams, filter_f, filter_g, h_matrix, lipschitz_bound
from .linalg import HermitianSystem, as_state
from .tolerances import TOL


def lipschitz_c() -> float:
    """The explicit order-one constant c = sqrt((6 pi^2 + 1)/12)."""
    return lipschitz_bound(FilterParams(kappa_tilde=1.0))


def full_state_bound(kappa: float, t0: float) -> float:
    """sqrt(20/3) * pi * c * kappa / t0."""
    return float(np.sqrt(20.0 / 3.0) * np.pi * lipschitz_c() * kappa / t0)


@dataclass(frozen=True)
class ExpectationContext:
    """Weights of the joint (eigen-index, clock-value) distribution."""

    beta_sq: np.ndarray  # (N,)
    alpha_sq: np.ndarray  # (N, T)
    deltas: np.ndarray  # (N, T) scaled estimate errors
    cfg: HHLConfig = field(repr=False)

    def __post_init__(self) -> None:
        if abs(float(np.sum(self.beta_sq)) - 1.0) > TOL.arithmetic:
            raise BadParameter("beta weights must sum to 1")
        row = np.max(np.abs(np.sum(self.alpha_sq, axis=1) - 1.0))
        if row > TOL.structural:
            raise BadParameter(f"alpha weight rows must sum to 1, worst deviation {row:.3e}")


def expectation_context(system: HermitianSystem, beta, cfg: HHLConfig) -> ExpectationContext:
    beta = as_state(beta)
    lam = system.eigenvalues
    ks = np.arange(cfg.T)
    deltas = lam[:, None] * cfg.t0 - TWO_PI * ks[None, :]
    return ExpectationContext(
        beta_sq=np.abs(beta) ** 2,
        alpha_sq=alpha_abs_sq_matrix(lam, cfg),
        deltas=deltas,
        cfg=cfg,
    )


def expectation_j(ctx: ExpectationContext, payload) -> float:
    """E(X_j) = sum_j |beta_j|^2 X_j."""
    return float(np.sum(ctx.beta_sq * np.asarray(payload, dtype=float)))


def expectation_kj(ctx: ExpectationContext, payload) -> float:
    """E(X_{k,j}) = sum_j |beta_j|^2 sum_k |alpha_{k|j}|^2 X_{k,j}."""
    payload = np.asarray(payload, dtype=float)
    return float(np.sum(ctx.beta_sq[:, None] * ctx.alpha_sq * payload))


def _clock_filter_values(cfg: HHLConfig, filters: FilterParams) -> tuple[np.ndarray, np.ndarray]:
    """f, g at the clock estimates, zero beyond the filter window K."""
    f = np.zeros(cfg.T)
    g = np.zeros(cfg.T)
    ks = np.arange(cfg.clock_window + 1)
    lams = np.array([approx_eigenvalue(int(k), cfg.t0) for k in ks])
    f[ks] = filter_f(lams, filters)
    g[ks] = filter_g(lams, filters)
    return f, g


def h_overlap_matrix(
    system: HermitianSystem, filters: FilterParams, cfg: HHLConfig
) -> np.ndarray:
    """<h_k | h(lambda_j)> for every (j, k); rows j, columns k.

    For k <= K this is the overlap of two flag states; beyond the window the
    clock sector keeps |nothing>, so the overlap is the nothing-amplitude of
    h(lambda_j).
    """
    hj = h_matrix(system.eigenvalues, filters)  # (N, 3)
    ks = np.arange(cfg.clock_window + 1)
    hk = h_matrix(np.array([approx_eigenvalue(int(k), cfg.t0) for k in ks]), filters)  # (K+1, 3)
    out = np.empty((system.dim, cfg.T))
    out[:, : ks.size] = hj @ hk.T
    out[:, ks.size :] = hj[:, 0:1]  # <nothing | h(lambda_j)>
    return out


def inner_product_final(
    phi_f: CircuitState,
    phi_bar: CircuitState,
    system: HermitianSystem,
    beta,
    filters: FilterParams,
    cfg: HHLConfig,
) -> complex:
    """<Phi_f | Phi_ideal>, raw statevector route, checked against the closed form."""
    raw = complex(np.vdot(phi_f.flat(), phi_bar.flat()))
    ctx = expectation_context(system, beta, cfg)
    analytic = float(np.sum(ctx.beta_sq[:, None] * ctx.alpha_sq * h_overlap_matrix(system, filters, cfg)))
    if abs(raw - analytic) > TOL.cross_route:
        raise FormulaMismatch(
            f"inner product routes disagree: statevector {raw}, closed form {analytic}"
        )
    return raw


def term_decomposition(
    ctx: ExpectationContext, system: HermitianSystem, filters: FilterParams, cfg: HHLConfig
) -> tuple[float, float]:
    """Split the final-state overlap by estimate quality.

    term1 collects (j, k) pairs with |delta| <= 2 pi (the clock values
    adjacent to t0 lambda_j / 2 pi), term2 the rest; the two add up to
    Re<Phi_f|Phi_ideal>.
    """
    overlaps = h_overlap_matrix(system, filters, cfg)
    weights = ctx.beta_sq[:, None] * ctx.alpha_sq * overlaps
    near = np.abs(ctx.deltas) <= TWO_PI
    return float(np.sum(weights[near])), float(np.sum(weights[~near]))


@dataclass(frozen=True)
class DeltaMoments:
    e_abs_delta: float
    e_delta_sq: float


def delta_moment_check(ctx: ExpectationContext, cfg: HHLConfig) -> DeltaMoments:
    """First and second moments of |delta| under the joint weight.

    Swept over T at fixed kappa these stay bounded, which is the boundedness
    evidence the distance-bound argument leans on.
    """
    return DeltaMoments(
        e_abs_delta=expectation_kj(ctx, np.abs(ctx.deltas)),
        e_delta_sq=expectation_kj(ctx, ctx.deltas**2),
    )


@dataclass(frozen=True)
class ErrorReport:
    """All norms, probabilities, and bound comparisons for one configuration."""

    kappa: float
    t0: float
    T: int
    gamma: float
    err_full: float | None = None
    err_ps1: float | None = None
    err_ps2: float | None = None
    p: float | None = None
    p_bar: float | None = None
    p1: float | None = None
    p2: float | None = None
    inner_full: float | None = None
    inner_ps1: float | None = None
    term1: float | None = None
    term2: float | None = None
    bound_full: float | None = None
    clock_zero_probability: float | None = None
    # register-I distance after the additional clock-|0> projection; decays one
    # order faster than err_ps2 because the projection averages out the
    # first-order clock-entanglement error
    err_solution: float | None = None


def _distance_from_inner(inner: float) -> float:
    return float(np.sqrt(max(2.0 * (1.0 - inner), 0.0)))


def claim1_report(
    system: HermitianSystem, beta, filters: FilterParams, cfg: HHLConfig
) -> ErrorReport:
    """Distance between the finite-T and ideal final states, with its bound.

    Raises BoundViolation if the measured distance exceeds
    sqrt(20/3) pi c kappa / t0 — that would mean either an implementation bug
    or a genuine counterexample, and must never be clipped silently.
    """
    beta = as_state(beta)
    phi_f = run_practical(system, beta, filters, cfg)
    phi_bar = run_ideal(system, beta, filters, cfg)
    inner = inner_product_final(phi_f, phi_bar, system, beta, filters, cfg)
    if abs(inner.imag) > TOL.structural:
        raise FormulaMismatch(f"final-state inner product is not real: {inner}")
    ctx = expectation_context(system, beta, cfg)
    term1, term2 = term_decomposition(ctx, system, filters, cfg)
    if abs((term1 + term2) - inner.real) > TOL.structural:
        raise FormulaMismatch("term decomposition does not reproduce the inner product")
    err = _distance_from_inner(inner.real)
    bound = full_state_bound(cfg.kappa, cfg.t0)
    if err > bound:
        raise BoundViolation(f"err_full = {err:.6e} exceeds bound {bound:.6e}")
    return ErrorReport(
        kappa=cfg.kappa,
        t0=cfg.t0,
        T=cfg.T,
        gamma=cfg.gamma,
        err_full=err,
        inner_full=inner.real,
        term1=term1,
        term2=term2,
        bound_full=bound,
    )


def claim2_report(
    system: HermitianSystem, beta, filters: FilterParams, cfg: HHLConfig
) -> ErrorReport:
    """Distance between the two solution states after the first post-selection.

    The finite-T solution state keeps its clock register (the comparison lives
    in the full joint space); the expectation-form route
    <x|x_ideal> = E(f_k f_j + g_k g_j)/sqrt(p p_bar) must agree with the
    statevector route.
    """
    beta = as_state(beta)
    phi_f = run_practical(system, beta, filters, cfg)
    phi_bar = run_ideal(system, beta, filters, cfg)
    ps_f = post_select_well_ill(phi_f)
    ps_bar = post_select_well_ill(phi_bar)
    p, p_bar = ps_f.probability, ps_bar.probability

    inner = complex(np.vdot(ps_f.state.flat(), ps_bar.state.flat()))
    if abs(inner.imag) > TOL.structural:
        raise FormulaMismatch(f"post-selected inner product is not real: {inner}")

    ctx = expectation_context(system, beta, cfg)
    fk, gk = _clock_filter_values(cfg, filters)
    fj = np.asarray(filter_f(system.eigenvalues, filters))
    gj = np.asarray(filter_g(system.eigenvalues, filters))
    e_cross = expectation_kj(ctx, fk[None, :] * fj[:, None] + gk[None, :] * gj[:, None])
    analytic = e_cross / np.sqrt(p * p_bar)
    if abs(inner.real - analytic) > TOL.cross_route:
        raise FormulaMismatch(
            f"post-selected inner product routes disagree: statevector {inner.real}, "
            f"closed form {analytic}"
        )
    # probability cross-checks: p = E(f_k^2 + g_k^2), p_bar = E(f_j^2 + g_j^2)
    p_formula = expectation_kj(ctx, np.broadcast_to((fk**2 + gk**2)[None, :], ctx.alpha_sq.shape))
    p_bar_formula = expectation_j(ctx, fj**2 + gj**2)
    if abs(p - p_formula) > TOL.structural or abs(p_bar - p_bar_formula) > TOL.structural:
        raise FormulaMismatch("post-selection probabilities disagree with expectation forms")

    return ErrorReport(
        kappa=cfg.kappa,
        t0=cfg.t0,
        T=cfg.T,
        gamma=cfg.gamma,
        err_ps1=_distance_from_inner(inner.real),
        inner_ps1=inner.real,
        p=p,
        p_bar=p_bar,
        p1=p,
    )


def well_conditioned_projection(system: HermitianSystem, beta, kappa_tilde: float) -> np.ndarray:
    """Zero out components on eigenvalues below 1/kappa_tilde and renormalize."""
    beta = np.asarray(beta, dtype=complex)
    keep = system.eigenvalues >= 1.0 / kappa_tilde
    out = np.where(keep, beta, 0.0)
    norm = np.linalg.norm(out)
    if norm < TOL.probability_floor:
        raise ZeroProbability("input has no weight on the well-conditioned subspace")
    return out / norm


def claim3_report(
    system: HermitianSystem, beta_well, filters: FilterParams, cfg: HHLConfig
) -> ErrorReport:
    """Distances between the doubly post-selected state and the classical solution.

    Requires the input supported on the well-conditioned subspace
    (lambda_j >= 1/kappa_tilde).  Two distances are reported: ``err_ps2``
    compares the normalized |well>-projected state against the classical
    solution embedded at clock |0> (the joint-space norm — residual clock
    entanglement counts as error), and ``err_solution`` compares register I
    alone after additionally projecting the clock onto |0> (that projection
    probability is recorded too).
    """
    beta_well = as_state(beta_well)
    ill_weight = float(
        np.sum(np.abs(beta_well[system.eigenvalues < 1.0 / filters.kappa_tilde]) ** 2)
    )
    if ill_weight > TOL.probability_floor:
        raise IllConditionedInput(
            f"input carries weight {ill_weight:.3e} below the 1/kappa_tilde cutoff"
        )
    phi_f = run_practical(system, beta_well, filters, cfg)
    ps1 = post_select_well_ill(phi_f)
    ps2 = post_select_well(ps1)
    extracted = extract_solution(ps2.state)
    reference = system.solution_reference(beta_well)

    ref_joint = np.zeros_like(ps2.state.amps)
    ref_joint[:, 0, WELL] = reference
    inner_joint = complex(np.vdot(ps2.state.amps.reshape(-1), ref_joint.reshape(-1)))
    # the ill component of the singly post-selected state is orthogonal to the
    # reference, so <x|x_ref> must equal <x1|x_ref>/sqrt(p2)
    inner_via_ps1 = complex(np.vdot(ps1.state.amps.reshape(-1), ref_joint.reshape(-1)))
    if abs(inner_joint - inner_via_ps1 / np.sqrt(ps2.probability)) > TOL.structural:
        raise FormulaMismatch("chained post-selection inner-product identity failed")
    err_joint = _distance_from_inner(inner_joint.real)
    err_solution = float(np.linalg.norm(extracted.eigenbasis_vector - reference))
    return ErrorReport(
        kappa=cfg.kappa,
        t0=cfg.t0,
        T=cfg.T,
        gamma=cfg.gamma,
        err_ps2=err_joint,
        err_solution=err_solution,
        p1=ps1.probability,
        p2=ps2.probability,
        clock_zero_probability=extracted.clock_zero_probability,
    )


def full_report(
    system: HermitianSystem,
    beta,
    filters: FilterParams,
    cfg: HHLConfig,
    beta_well=None,
) -> ErrorReport:
    """Combine the three claim reports into one row (shared configuration)."""
    r1 = claim1_report(system, beta, filters, cfg)
    r2 = claim2_report(system, beta, filters, cfg)
    if beta_well is None:
        beta_well = well_conditioned_projection(system, beta, filters.kappa_tilde)
    r3 = claim3_report(system, beta_well, filters, cfg)
    return ErrorReport(
        kappa=cfg.kappa,
        t0=cfg.t0,
        T=cfg.T,
        gamma=cfg.gamma,
        err_full=r1.err_full,
        err_ps1=r2.err_ps1,
        err_ps2=r3.err_ps2,
        p=r2.p,
        p_bar=r2.p_bar,
        p1=r3.p1,
        p2=r3.p2,
        inner_full=r1.inner_full,
        inner_ps1=r2.inner_ps1,
        term1=r1.term1,
        term2=r1.term2,
        bound_full=r1.bound_full,
        clock_zero_probability=r3.clock_zero_probability,
        err_solution=r3.err_solution,
    )


def loglog_slope(t0s, errs) -> float:
    """Least-squares slope of log(err) against log(t0)."""
    t0s = np.asarray(t0s, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if t0s.size < 2:
        raise BadParameter("need at least two sweep points for a slope")
    return float(np.polyfit(np.log(t0s), np.log(errs), 1)[0])
