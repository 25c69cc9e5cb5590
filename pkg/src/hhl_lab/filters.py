"""Eigenvalue-inversion filter functions and the flag-qutrit state.

``filter_f`` carries the 1/lambda inversion on the well-conditioned part of
the spectrum, ``filter_g`` flags the ill-conditioned part, and a smooth
transition zone joins them:

    f(x) = 1/(2k x)        on [1/k, 1]
         = -cos(pi k x)/2  on [1/(2k), 1/k]
         = 0               on [0, 1/(2k)]
    g(x) = 0               on [1/k, 1]
         = sin(pi k x)/2   on [1/(2k), 1/k]
         = 1/2             on [0, 1/(2k)]

with k the condition-number estimate ``kappa_tilde``.  At x = 0 the values
are the continuous extensions f = 0, g = 1/2.  Both functions take scalars or
arrays.  The flag state |h(x)> = (sqrt(1-f^2-g^2), f, g) in the basis
(nothing, well, ill) is real and unit-norm by construction, and the map
x -> |h(x)> is Lipschitz with the explicit constant
sqrt((6 pi^2 + 1)/12) * kappa_tilde (root-sum of the per-component maximum
slopes kappa_tilde/(2 sqrt(3)), pi kappa_tilde/2, pi kappa_tilde/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DomainError
from .tolerances import TOL

# |x| within this of the domain boundary is clipped rather than rejected,
# so clock eigenvalue estimates that land on 1.0 up to rounding stay legal.
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class FilterParams:
    """Filter shape parameter: the condition-number estimate kappa_tilde >= 1."""

    kappa_tilde: float

    def __post_init__(self) -> None:
        if not self.kappa_tilde >= 1.0:
            raise BadParameter(f"kappa_tilde must be >= 1, got {self.kappa_tilde}")


@dataclass(frozen=True)
class FlagState:
    """Real amplitudes of the flag qutrit in basis order (nothing, well, ill)."""

    nothing_amp: float
    well_amp: float
    ill_amp: float

    def vector(self) -> np.ndarray:
        return np.array([self.nothing_amp, self.well_amp, self.ill_amp])


def _checked_domain(lam):
    x = np.asarray(lam, dtype=float)
    if np.any(x < -_EDGE_SLACK) or np.any(x > 1.0 + _EDGE_SLACK):
        raise DomainError("lambda must lie in [0, 1]")
    return np.clip(x, 0.0, 1.0)


def filter_f(lam, params: FilterParams):
    """Well-conditioned inversion filter; range [0, 1/2]."""
    kt = params.kappa_tilde
    x = _checked_domain(lam)
    with np.errstate(divide="ignore"):
        well = 1.0 / (2.0 * kt * np.where(x > 0, x, 1.0))
    mid = -0.5 * np.cos(np.pi * kt * x)
    out = np.where(x >= 1.0 / kt, well, np.where(x >= 1.0 / (2.0 * kt), mid, 0.0))
    return float(out) if np.isscalar(lam) or np.ndim(lam) == 0 else out


def filter_g(lam, params: FilterParams):
    """Ill-conditioned flag filter; range [0, 1/2]."""
    kt = params.kappa_tilde
    x = _checked_domain(lam)
    mid = 0.5 * np.sin(np.pi * kt * x)
    out = np.where(x >= 1.0 / kt, 0.0, np.where(x >= 1.0 / (2.0 * kt), mid, 0.5))
    return float(out) if np.isscalar(lam) or np.ndim(lam) == 0 else out


def h_components(lam, params: FilterParams):
    """(nothing, well, ill) amplitude arrays for scalar or array ``lam``."""
    f = filter_f(lam, params)
    g = filter_g(lam, params)
    nothing = np.sqrt(np.maximum(1.0 - np.asarray(f) ** 2 - np.asarray(g) ** 2, 0.0))
    return nothing, f, g


def h_state(lam: float, params: FilterParams) -> FlagState:
    """Flag-qutrit state for a single eigenvalue estimate."""
    nothing, f, g = h_components(float(lam), params)
    return FlagState(nothing_amp=float(nothing), well_amp=float(f), ill_amp=float(g))


def h_matrix(lams, params: FilterParams) -> np.ndarray:
    """Stack of flag states, shape (len(lams), 3)."""
    nothing, f, g = h_components(np.asarray(lams, dtype=float), params)
    return np.stack([nothing, np.asarray(f, dtype=float), np.asarray(g, dtype=float)], axis=-1)


def lipschitz_bound(params: FilterParams) -> float:
    """Explicit Lipschitz constant of x -> |h(x)|: sqrt((6 pi^2 + 1)/12) * kappa_tilde."""
    return float(np.sqrt((6.0 * np.pi**2 + 1.0) / 12.0) * params.kappa_tilde)


@dataclass(frozen=True)
class LipschitzReport:
    max_ratio: float
    bound: float
    ok: bool


def verify_lipschitz(params: FilterParams, samples: int, seed: int) -> LipschitzReport:
    """Scan ||h(x1)-h(x2)|| / |x1-x2| over random and breakpoint-straddling pairs.

    ``ok`` iff the sampled maximum stays below :func:`lipschitz_bound` up to a
    1e-9 relative slack.
    """
    if samples < 2:
        raise BadParameter("samples must be >= 2")
    rng = np.random.default_rng(seed)
    kt = params.kappa_tilde

    n_random = samples
    x1 = rng.uniform(0.0, 1.0, n_random)
    x2 = rng.uniform(0.0, 1.0, n_random)

    # pairs hugging the two breakpoints from both sides, at shrinking gaps
    straddle = []
    n_bp = max(samples // 10, 8)
    for bp in (1.0 / (2.0 * kt), 1.0 / kt):
        eps = 10.0 ** rng.uniform(-9, -1, n_bp)
        lo = np.clip(bp - eps * rng.uniform(0.0, 1.0, n_bp), 0.0, 1.0)
        hi = np.clip(bp + eps, 0.0, 1.0)
        straddle.append((lo, hi))
    x1 = np.concatenate([x1] + [s[0] for s in straddle])
    x2 = np.concatenate([x2] + [s[1] for s in straddle])

    keep = x1 != x2
    x1, x2 = x1[keep], x2[keep]
    d = np.linalg.norm(h_matrix(x1, params) - h_matrix(x2, params), axis=1)
    ratios = d / np.abs(x1 - x2)
    max_ratio = float(np.max(ratios))
    bound = lipschitz_bound(params)
    return LipschitzReport(max_ratio=max_ratio, bound=bound, ok=max_ratio <= bound * (1.0 + 1e-9))


@dataclass(frozen=True)
class FilterDifferenceReport:
    lhs: float
    rhs_scale: float
    ratio: float


def filter_difference_bound_check(
    lambda_j: float, lambda_k: float, params: FilterParams, t0: float
) -> FilterDifferenceReport:
    """Relate the squared filter difference to its expected scale.

    lhs  = (f(lk)-f(lj))^2 + (g(lk)-g(lj))^2
    rhs  = (kappa_tilde/t0)^2 * delta^2 * (f(lj)^2 + g(lj)^2),  delta = t0 (lj - lk)

    The ratio lhs/rhs is finite whenever lj > 0 (f^2+g^2 > 0 there) and is the
    empirical constant of the filter-difference bound.  Coincident inputs are
    the 0/0 case and return ratio 0 by convention.
    """
    if t0 <= 0:
        raise BadParameter("t0 must be positive")
    fj, gj = filter_f(lambda_j, params), filter_g(lambda_j, params)
    if lambda_j == lambda_k:
        return FilterDifferenceReport(lhs=0.0, rhs_scale=0.0, ratio=0.0)
    fk, gk = filter_f(lambda_k, params), filter_g(lambda_k, params)
    lhs = (fk - fj) ** 2 + (gk - gj) ** 2
    delta = t0 * (lambda_j - lambda_k)
    rhs = (params.kappa_tilde / t0) ** 2 * delta**2 * (fj**2 + gj**2)
    ratio = lhs / rhs if rhs > 0 else np.inf
    return FilterDifferenceReport(lhs=float(lhs), rhs_scale=float(rhs), ratio=float(ratio))


def filter_difference_grid_ratio(params: FilterParams, t0: float, grid: int = 200) -> float:
    """Max filter-difference ratio over a grid of pairs in [1/(4 kt), 1]^2."""
    lo = 1.0 / (4.0 * params.kappa_tilde)
    xs = np.linspace(lo, 1.0, grid)
    f = np.asarray(filter_f(xs, params))
    g = np.asarray(filter_g(xs, params))
    fj, fk = f[:, None], f[None, :]
    gj, gk = g[:, None], g[None, :]
    lhs = (fk - fj) ** 2 + (gk - gj) ** 2
    dl = xs[:, None] - xs[None, :]
    rhs = params.kappa_tilde**2 * dl**2 * (fj**2 + gj**2)
    mask = rhs > 0
    return float(np.max(lhs[mask] / rhs[mask]))
