"""Clock-register amplitude engine.

After phase estimation with a sine-windowed clock register of dimension T and
evolution time t0, the amplitude of clock value k given an eigenvalue lam is

    alpha(k|lam) = (sqrt(2)/T) sum_tau sin(pi (tau+1/2)/T) exp(i delta tau / T),
    delta        = lam * t0 - 2 pi k.

This module evaluates alpha both by that direct sum and by its closed form

    alpha = -(sqrt(2)/T) e^{i (delta/2)(1 - 1/T)} sin(pi/(2T))
            * cos(delta/(2T)) cos(delta/2)
            / ( sin((delta+pi)/(2T)) sin((delta-pi)/(2T)) ),

handles the removable singularities at delta = +-pi (mod 2 pi T), and checks
the classic 8 pi / delta^2 decay envelope, the sextic inequality behind it,
and the tail sum of 1/delta^2.  Hyperparameter selection (t0 = gamma 2 pi T,
clock size versus condition number, filter cutoff K) lives in
:class:`HHLConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, InsufficientClockRegister
from .tolerances import TOL

TWO_PI = 2.0 * math.pi
# pi to extended precision, used only to reduce delta modulo 2*pi*T without
# losing the ~1e-13 that a float64 product m*2*pi*T would cost at T ~ 1024
_PI_LD = np.longdouble("3.14159265358979323846264338327950288")


@dataclass(frozen=True)
class HHLConfig:
    """Hyperparameters tying the clock register to the evolution time.

    T = 2**n_t is the clock dimension (n_t is None in analytic mode when T is
    not a power of two), t0 = gamma * 2 pi T the evolution time, and
    K = floor(t0 / 2 pi) the largest clock value whose eigenvalue estimate
    2 pi k / t0 still lies in [0, 1] and therefore receives a filter rotation.
    """

    n: int
    n_t: int | None
    T: int
    gamma: float
    t0: float
    kappa: float
    kappa_tilde: float
    K: int

    def __post_init__(self) -> None:
        if self.T < 2:
            raise BadParameter("T must be >= 2")
        if not 0.0 < self.gamma <= 1.0:
            raise BadParameter("gamma must lie in (0, 1]")
        if abs(self.t0 - self.gamma * TWO_PI * self.T) > TOL.arithmetic * max(1.0, self.t0):
            raise BadParameter("t0 must equal gamma * 2 pi T")

    @property
    def clock_window(self) -> int:
        """Largest clock index that receives a filter rotation: min(K, T-1)."""
        return min(self.K, self.T - 1)


def _build_config(n: int, T: int, gamma: float, kappa: float, kappa_tilde: float | None) -> HHLConfig:
    if not kappa > 1.0:
        raise BadParameter("kappa must be > 1")
    if T < kappa / gamma + 1.0:
        raise InsufficientClockRegister(
            f"T = {T} cannot resolve kappa = {kappa} at gamma = {gamma}: need T >= {kappa / gamma + 1:.6g}"
        )
    t0 = gamma * TWO_PI * T
    # +1e-12 absorbs a possible one-ulp dip of t0/(2 pi) below the integer gamma*T
    K = int(math.floor(t0 / TWO_PI + 1e-12))
    n_t = T.bit_length() - 1 if T & (T - 1) == 0 else None
    return HHLConfig(
        n=n,
        n_t=n_t,
        T=T,
        gamma=float(gamma),
        t0=float(t0),
        kappa=float(kappa),
        kappa_tilde=float(kappa if kappa_tilde is None else kappa_tilde),
        K=K,
    )


def make_config(
    n: int, n_t: int, gamma: float, kappa: float, kappa_tilde: float | None = None
) -> HHLConfig:
    """Strict circuit-mode configuration: T = 2**n_t and gamma in (0, 1/2]."""
    if n < 1 or n_t < 1:
        raise BadParameter("n and n_t must be >= 1")
    if not 0.0 < gamma <= 0.5:
        raise BadParameter("gamma must lie in (0, 1/2] for circuit configurations")
    return _build_config(n, 2**n_t, gamma, kappa, kappa_tilde)


def analytic_config(
    T: int, gamma: float, kappa: float, kappa_tilde: float | None = None, n: int = 1
) -> HHLConfig:
    """Analytic-mode configuration: any integer T >= 2 and gamma up to 1
    (t0 = 2 pi T is the hard ceiling for the estimable range)."""
    if not 0.0 < gamma <= 1.0:
        raise BadParameter("gamma must lie in (0, 1]")
    return _build_config(n, int(T), gamma, kappa, kappa_tilde)


def approx_eigenvalue(k: int, t0: float) -> float:
    """Eigenvalue estimate associated with clock value k: 2 pi k / t0."""
    if k < 0:
        raise BadParameter("k must be >= 0")
    if not t0 > 0:
        raise BadParameter("t0 must be positive")
    return TWO_PI * k / t0


def delta_of(lam, k, t0: float):
    """Scaled eigenvalue-estimate error delta = lam * t0 - 2 pi k."""
    return np.asarray(lam) * t0 - TWO_PI * np.asarray(k)


def alpha_direct(lambda_j: float, k: int, cfg: HHLConfig) -> complex:
    """Amplitude by direct summation over the T clock basis states."""
    tau = np.arange(cfg.T)
    window = np.sin(np.pi * (tau + 0.5) / cfg.T)
    phases = np.exp(1j * (lambda_j - TWO_PI * k / cfg.t0) * (cfg.t0 / cfg.T) * tau)
    return complex(np.sqrt(2.0) / cfg.T * np.sum(window * phases))


def _sin_half_ratio(u: np.ndarray, T: int) -> np.ndarray:
    """sin(u/2) / sin(u/(2T)) with the u -> 0 limit T filled in."""
    tiny = np.abs(u) < 1e-150
    safe = np.where(tiny, 1.0, u)
    with np.errstate(invalid="ignore"):
        r = np.sin(safe / 2.0) / np.sin(safe / (2.0 * T))
    return np.where(tiny, float(T), r)


def alpha_closed(delta, T: int):
    """Closed-form amplitude as a function of delta, exact at the removable
    singularities delta = +-pi + 2 pi T m.

    Near those points both cos(delta/2) and one denominator sine vanish; the
    quotient is rebuilt from the exact reductions
        cos(delta/2)          = -(-1)^(T m) sin(u/2),   delta = pi + 2 pi T m + u
        sin((delta-pi)/(2T))  =  (-1)^m     sin(u/(2T))
    (and the mirrored pair for delta = -pi + 2 pi T m), which stay fully
    accurate down to u = 0.  Accepts scalars or arrays; T >= 2.
    """
    if T < 2:
        raise BadParameter("T must be >= 2")
    scalar = np.ndim(delta) == 0
    d = np.atleast_1d(np.asarray(delta, dtype=float))

    period = np.longdouble(2) * np.longdouble(T) * _PI_LD
    d_ld = d.astype(np.longdouble)
    m_minus = np.rint((d_ld - _PI_LD) / period)
    u_minus = np.asarray(d_ld - _PI_LD - m_minus * period, dtype=float)
    m_plus = np.rint((d_ld + _PI_LD) / period)
    u_plus = np.asarray(d_ld + _PI_LD - m_plus * period, dtype=float)
    m_minus = m_minus.astype(np.int64)
    m_plus = m_plus.astype(np.int64)

    sign_m = 1.0 - 2.0 * (m_minus & 1)  # (-1)^m
    sign_p = 1.0 - 2.0 * (m_plus & 1)
    if (T - 1) % 2 == 0:  # (-1)^((T-1) m)
        sign_tm = np.ones_like(sign_m)
        sign_tp = np.ones_like(sign_p)
    else:
        sign_tm, sign_tp = sign_m, sign_p

    sin_minus = sign_m * np.sin(u_minus / (2.0 * T))
    sin_plus = sign_p * np.sin(u_plus / (2.0 * T))
    # cos(delta/2) paired against its own family's denominator
    cos_over_minus = -sign_tm * _sin_half_ratio(u_minus, T)
    cos_over_plus = sign_tp * _sin_half_ratio(u_plus, T)

    use_minus = np.abs(sin_minus) <= np.abs(sin_plus)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(use_minus, cos_over_minus / sin_plus, cos_over_plus / sin_minus)

    pref = -(np.sqrt(2.0) / T) * np.sin(np.pi / (2.0 * T))
    out = pref * np.exp(1j * (d / 2.0) * (1.0 - 1.0 / T)) * np.cos(d / (2.0 * T)) * val
    return complex(out[0]) if scalar else out


def alpha_abs_sq_matrix(lambdas, cfg: HHLConfig) -> np.ndarray:
    """|alpha(k|lam)|^2 for every (lam, k), shape (len(lambdas), T)."""
    lam = np.asarray(lambdas, dtype=float)
    deltas = delta_of(lam[:, None], np.arange(cfg.T)[None, :], cfg.t0)
    return np.abs(alpha_closed(deltas.ravel(), cfg.T).reshape(deltas.shape)) ** 2


def decay_envelope(delta) -> np.ndarray:
    """8 pi / delta^2 where |delta| > 2 pi, +inf elsewhere (no constraint)."""
    d = np.asarray(delta, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(np.abs(d) > TWO_PI, 8.0 * np.pi / d**2, np.inf)


@dataclass(frozen=True)
class AmplitudeTable:
    """Per-(eigen-index, clock-value) amplitude data.

    Rows cover every clock value k in [0, T); ``in_window`` marks k <= K, the
    clock values that feed the filter rotation (the used part of the register —
    decay-envelope violations are only meaningful there, since rows beyond the
    window alias the periodic peak at raw delta far outside (-pi T, pi T]).
    """

    j: np.ndarray
    k: np.ndarray
    delta: np.ndarray
    alpha: np.ndarray
    alpha_abs: np.ndarray
    bound: np.ndarray
    in_window: np.ndarray
    lambdas: np.ndarray
    cfg: HHLConfig = field(repr=False)

    def violation_rows(self) -> np.ndarray:
        """Indices of in-window tail rows where |alpha| exceeds the envelope."""
        tail = self.in_window & (np.abs(self.delta) > TWO_PI)
        return np.flatnonzero(tail & (self.alpha_abs > self.bound))


def amplitude_table(lambdas, cfg: HHLConfig) -> AmplitudeTable:
    """Build the amplitude table for the given eigenvalues under ``cfg``."""
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    ks = np.arange(cfg.T)
    deltas = delta_of(lam[:, None], ks[None, :], cfg.t0)
    alphas = alpha_closed(deltas.ravel(), cfg.T).reshape(deltas.shape)
    sums = np.sum(np.abs(alphas) ** 2, axis=1)
    if np.max(np.abs(sums - 1.0)) > TOL.structural:
        raise BadParameter(
            f"amplitude row not normalized: worst |sum-1| = {np.max(np.abs(sums - 1.0)):.3e}"
        )
    jj = np.repeat(np.arange(lam.size), cfg.T)
    kk = np.tile(ks, lam.size)
    flat_delta = deltas.ravel()
    flat_alpha = alphas.ravel()
    return AmplitudeTable(
        j=jj,
        k=kk,
        delta=flat_delta,
        alpha=flat_alpha,
        alpha_abs=np.abs(flat_alpha),
        bound=decay_envelope(flat_delta),
        in_window=kk <= cfg.clock_window,
        lambdas=lam,
        cfg=cfg,
    )


FIGURE_CHOICES = ("small", "moderate", "large")


def figure_lambda(cfg: HHLConfig, choice: str) -> float:
    """Representative eigenvalue: the bottom, middle, or top of the resolvable range."""
    T, kappa = cfg.T, cfg.kappa
    table = {
        "small": (T - 1) / (T * kappa),
        "moderate": (T - 1) / (2 * T),
        "large": (T - 1) / T,
    }
    try:
        return table[choice]
    except KeyError:
        raise BadParameter(f"lambda choice must be one of {FIGURE_CHOICES}, got {choice!r}") from None


def figure_sweep(cfg: HHLConfig, lambda_choice: str) -> AmplitudeTable:
    """Amplitude table for one representative eigenvalue (plot-ready)."""
    return amplitude_table([figure_lambda(cfg, lambda_choice)], cfg)


@dataclass(frozen=True)
class TailViolation:
    delta: float
    alpha_abs: float
    bound: float
    source: str


@dataclass(frozen=True)
class TailBoundReport:
    worst_margin: float
    ok: bool
    violations: tuple[TailViolation, ...]


def verify_alpha_tail_bound(cfg: HHLConfig, grid: int) -> TailBoundReport:
    """Check |alpha| < 8 pi / delta^2 on the tail.

    Samples a uniform grid over delta in (2 pi, pi T] plus every in-window
    lattice point delta(k | lam) with |delta| > 2 pi for the three
    representative eigenvalues; lattice points are where violations show up
    when t0 = 2 pi T pushes the periodic peak into the tail.
    """
    if grid < 100:
        raise BadParameter("grid must be >= 100")
    T = cfg.T
    deltas = [np.linspace(TWO_PI, np.pi * T, grid + 1)[1:]]
    sources = [np.full(grid, "grid", dtype=object)]
    ks = np.arange(cfg.clock_window + 1)
    for choice in FIGURE_CHOICES:
        lam = figure_lambda(cfg, choice)
        d = delta_of(lam, ks, cfg.t0)
        mask = np.abs(d) > TWO_PI
        deltas.append(d[mask])
        sources.append(np.array([f"lattice:{choice}:k={k}" for k in ks[mask]], dtype=object))
    d_all = np.concatenate(deltas)
    src_all = np.concatenate(sources)
    alpha_abs = np.abs(alpha_closed(d_all, T))
    bound = 8.0 * np.pi / d_all**2
    margin = bound - alpha_abs
    bad = np.flatnonzero(alpha_abs >= bound)
    violations = tuple(
        TailViolation(float(d_all[i]), float(alpha_abs[i]), float(bound[i]), str(src_all[i]))
        for i in bad
    )
    return TailBoundReport(
        worst_margin=float(np.min(margin)), ok=bad.size == 0, violations=violations
    )


def sextic_envelope_rhs(a):
    """-(pi^4/384) a^6 + (1/8 - sqrt(2)/12) pi^2 a^4 + (sqrt(2) - 1) a^2."""
    a = np.asarray(a, dtype=float)
    return (
        -(np.pi**4 / 384.0) * a**6
        + (0.125 - np.sqrt(2.0) / 12.0) * np.pi**2 * a**4
        + (np.sqrt(2.0) - 1.0) * a**2
    )


@dataclass(frozen=True)
class PolynomialCounterexample:
    a: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class PolynomialReport:
    T: int
    ok: bool
    worst_slack: float
    worst_a: float
    violation_count: int
    counterexamples: tuple[PolynomialCounterexample, ...]
    # same scan with sqrt(2)/T^2 - sqrt(2) pi^2/(12 T^4) on the left: that is
    # the inequality the tail envelope actually needs the sextic to dominate
    quadratic_ok: bool
    quadratic_worst_slack: float


def verify_polynomial_inequality(T: int, grid: int) -> PolynomialReport:
    """Scan sqrt(2)/T <= sextic_envelope_rhs(a) for a in [2/T, 1].

    A negative ``worst_slack`` means the stated inequality fails at
    ``worst_a``; up to ten counterexamples are recorded verbatim.  The report
    also carries the scan of the 1/T^2 variant of the left-hand side, which is
    what re-deriving the envelope bound actually requires.
    """
    if T < 4:
        raise BadParameter("T must be >= 4")
    if grid < 2:
        raise BadParameter("grid must be >= 2")
    a = np.linspace(2.0 / T, 1.0, grid)
    rhs = sextic_envelope_rhs(a)
    lhs = np.sqrt(2.0) / T
    slack = rhs - lhs
    worst = int(np.argmin(slack))
    bad = np.flatnonzero(slack < 0.0)
    counterexamples = tuple(
        PolynomialCounterexample(float(a[i]), float(lhs), float(rhs[i])) for i in bad[:10]
    )
    lhs_quad = np.sqrt(2.0) / T**2 - np.sqrt(2.0) * np.pi**2 / (12.0 * T**4)
    slack_quad = rhs - lhs_quad
    return PolynomialReport(
        T=T,
        ok=bad.size == 0,
        worst_slack=float(slack[worst]),
        worst_a=float(a[worst]),
        violation_count=int(bad.size),
        counterexamples=counterexamples,
        quadratic_ok=bool(np.all(slack_quad >= 0.0)),
        quadratic_worst_slack=float(np.min(slack_quad)),
    )


def tail_sum_bound(lambda_j: float, cfg: HHLConfig) -> float:
    """Sum of 1/delta^2 over all clock values k in [0, T) with |delta| > 2 pi.

    Each side of the eigenvalue contributes at most (1/4 pi^2) * pi^2/6, so
    the two-sided sum is bounded by 1/12.
    """
    d = delta_of(lambda_j, np.arange(cfg.T), cfg.t0)
    mask = np.abs(d) > TWO_PI
    return float(np.sum(1.0 / d[mask] ** 2))
