"""Exact statevector simulation of the eigenvalue-inversion circuit.

The joint state lives on three registers: the input register I (dimension
N = 2**n, stored in the eigenbasis of the system matrix), the clock register
C (dimension T = 2**n_t), and a flag qutrit S with basis order
(nothing, well, ill).  Amplitudes are a dense complex array of shape
(N, T, 3); flattening in C order gives index ((i*T) + c)*3 + s.

Keeping register I in the eigenbasis makes the conditioned time evolution an
exact diagonal phase multiply (no operator splitting error); conversion to
the computational basis happens only when encoding b or decoding the
solution.  Every step returns a fresh state and preserves the 2-norm to
machine precision.  The two unitaries that are only pinned down on one input
column (clock sine preparation on |0>, flag rotation on |nothing>) are
completed to Householder reflections, which are deterministic, involutory,
and unobservable beyond the pinned column.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .amplitudes import HHLConfig, approx_eigenvalue
from .errors import (
    ClockNotZero,
    DimensionMismatch,
    FlagNotClean,
    NotNormalized,
    ZeroProbability,
)
from .filters import FilterParams, h_matrix
from .linalg import HermitianSystem, as_state
from .tolerances import TOL

NOTHING, WELL, ILL = 0, 1, 2


@dataclass(frozen=True)
class CircuitState:
    """Dense joint state over I (eigenbasis) x C x S."""

    amps: np.ndarray  # complex, shape (N, T, 3)
    cfg: HHLConfig = field(repr=False)

    @property
    def N(self) -> int:
        return self.amps.shape[0]

    @property
    def T(self) -> int:
        return self.amps.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def flat(self) -> np.ndarray:
        """Flattened amplitudes, index ((i*T) + c)*3 + s."""
        return self.amps.reshape(-1)

    def clock_weight(self, c: int) -> float:
        """Probability of clock value c."""
        return float(np.sum(np.abs(self.amps[:, c, :]) ** 2))

    def flag_weight(self, s: int) -> float:
        """Probability of flag basis state s."""
        return float(np.sum(np.abs(self.amps[:, :, s]) ** 2))


def _fresh(amps: np.ndarray, cfg: HHLConfig) -> CircuitState:
    return CircuitState(amps=amps, cfg=cfg)


def _check_norm(state: CircuitState) -> CircuitState:
    if abs(state.norm() - 1.0) > TOL.structural:
        raise NotNormalized(f"state norm drifted to {state.norm():.15f}")
    return state


def sine_window(T: int) -> np.ndarray:
    """Clock preparation amplitudes sqrt(2/T) sin(pi (tau+1/2)/T); unit norm."""
    tau = np.arange(T)
    return np.sqrt(2.0 / T) * np.sin(np.pi * (tau + 0.5) / T)


def _householder_to(target: np.ndarray) -> np.ndarray:
    """Real reflection H with H e0 = target (target real, unit norm)."""
    dim = target.shape[0]
    v = -np.array(target, dtype=float)
    v[0] += 1.0  # e0 - target
    nsq = float(v @ v)
    if nsq < 1e-30:
        return np.eye(dim)
    return np.eye(dim) - (2.0 / nsq) * np.outer(v, v)


def init_state(beta, cfg: HHLConfig) -> CircuitState:
    """|b>_I |0>_C |nothing>_S with eigenbasis coefficients beta."""
    b = as_state(beta, tol=1e-9)
    if b.shape[0] != 2**cfg.n:
        raise DimensionMismatch(f"beta has length {b.shape[0]}, config expects {2 ** cfg.n}")
    amps = np.zeros((b.shape[0], cfg.T, 3), dtype=complex)
    amps[:, 0, NOTHING] = b
    return _fresh(amps, cfg)


def _apply_clock_matrix(state: CircuitState, mat: np.ndarray) -> CircuitState:
    amps = np.tensordot(mat, state.amps, axes=([1], [1])).transpose(1, 0, 2)
    return _fresh(np.ascontiguousarray(amps), state.cfg)


def clock_sine_prepare(state: CircuitState, cfg: HHLConfig) -> CircuitState:
    """Load the sine window onto the clock register (requires clock in |0>)."""
    off = np.linalg.norm(state.amps[:, 1:, :])
    if off > TOL.arithmetic:
        raise ClockNotZero(f"clock register carries weight {off:.3e} outside |0>")
    w = sine_window(cfg.T)
    amps = np.zeros_like(state.amps)
    amps[:, :, :] = state.amps[:, 0, None, :] * w[None, :, None]
    return _check_norm(_fresh(amps, cfg))


def clock_sine_unprepare(state: CircuitState, cfg: HHLConfig) -> CircuitState:
    """Adjoint of the sine preparation, completed to a Householder reflection."""
    return _check_norm(_apply_clock_matrix(state, _householder_to(sine_window(cfg.T))))


def conditioned_hamiltonian(
    state: CircuitState, system: HermitianSystem, cfg: HHLConfig, inverse: bool = False
) -> CircuitState:
    """Multiply amplitude (j, tau, s) by exp(i lambda_j (t0/T) tau)."""
    if system.dim != state.N:
        raise DimensionMismatch("system dimension does not match the state")
    sign = -1.0 if inverse else 1.0
    phases = np.exp(
        1j * sign * system.eigenvalues[:, None] * (cfg.t0 / cfg.T) * np.arange(cfg.T)[None, :]
    )
    return _check_norm(_fresh(state.amps * phases[:, :, None], cfg))


def clock_qft(state: CircuitState, cfg: HHLConfig, inverse: bool = False) -> CircuitState:
    """Clock transform |tau> -> (1/sqrt(T)) sum_k exp(-i 2 pi k tau / T) |k>.

    The forward kernel exp(-i 2 pi k tau / T) is exactly numpy's ortho-norm
    FFT; ``inverse`` applies the adjoint.
    """
    fn = np.fft.ifft if inverse else np.fft.fft
    amps = fn(state.amps, axis=1, norm="ortho")
    return _check_norm(_fresh(amps, cfg))


def _flag_targets(cfg: HHLConfig, filters: FilterParams) -> np.ndarray:
    """h(2 pi k / t0) for every in-window clock value k, shape (K+1, 3)."""
    ks = np.arange(cfg.clock_window + 1)
    lams = np.array([approx_eigenvalue(int(k), cfg.t0) for k in ks])
    return h_matrix(lams, filters)


def flag_rotation(state: CircuitState, filters: FilterParams, cfg: HHLConfig) -> CircuitState:
    """Rotate |nothing> -> |h(lambda_k)> on every clock sector k <= K.

    Sectors k > K are left untouched.  Requires the flag register to be clean
    (all weight on |nothing>).
    """
    dirty = np.max(np.abs(state.amps[:, :, (WELL, ILL)])) if state.amps.size else 0.0
    if dirty > TOL.arithmetic:
        raise FlagNotClean(f"flag register carries weight {dirty:.3e} outside |nothing>")
    targets = _flag_targets(cfg, filters)
    amps = state.amps.copy()
    w = cfg.clock_window + 1
    # flag starts in e0, so the rotated sector is amplitude * h(lambda_k)
    amps[:, :w, :] = state.amps[:, :w, NOTHING, None] * targets[None, :, :]
    return _check_norm(_fresh(amps, cfg))


def qpe(state: CircuitState, system: HermitianSystem, cfg: HHLConfig) -> CircuitState:
    """Sine preparation, conditioned evolution, clock transform."""
    state = clock_sine_prepare(state, cfg)
    state = conditioned_hamiltonian(state, system, cfg)
    return clock_qft(state, cfg)


def qpe_inverse(state: CircuitState, system: HermitianSystem, cfg: HHLConfig) -> CircuitState:
    """Adjoint of :func:`qpe` (steps inverted in reverse order)."""
    state = clock_qft(state, cfg, inverse=True)
    state = conditioned_hamiltonian(state, system, cfg, inverse=True)
    return clock_sine_unprepare(state, cfg)


def run_practical(
    system: HermitianSystem, beta, filters: FilterParams, cfg: HHLConfig
) -> CircuitState:
    """Full finite-T circuit: QPE, filter rotation, inverse QPE."""
    state = init_state(beta, cfg)
    state = qpe(state, system, cfg)
    state = flag_rotation(state, filters, cfg)
    return qpe_inverse(state, system, cfg)


def run_ideal(system: HermitianSystem, beta, filters: FilterParams, cfg: HHLConfig) -> CircuitState:
    """Reference circuit with exact eigenvalue readout:
    sum_j beta_j |u_j>_I |0>_C |h(lambda_j)>_S."""
    state = init_state(beta, cfg)
    targets = h_matrix(system.eigenvalues, filters)
    amps = np.zeros_like(state.amps)
    amps[:, 0, :] = state.amps[:, 0, NOTHING, None] * targets
    return _check_norm(_fresh(amps, cfg))


@dataclass(frozen=True)
class PostSelectionResult:
    """Renormalized projection together with its success probability."""

    state: CircuitState
    probability: float


def _project(state: CircuitState, keep: tuple[int, ...]) -> PostSelectionResult:
    amps = np.zeros_like(state.amps)
    amps[:, :, list(keep)] = state.amps[:, :, list(keep)]
    prob = float(np.linalg.norm(amps) ** 2)
    if prob < TOL.probability_floor:
        raise ZeroProbability(f"projection onto flag states {keep} has weight {prob:.3e}")
    return PostSelectionResult(state=_fresh(amps / np.sqrt(prob), state.cfg), probability=prob)


def post_select_well_ill(state: CircuitState) -> PostSelectionResult:
    """First post-selection: flag in span{|well>, |ill>}."""
    return _project(state, (WELL, ILL))


def post_select_well(result: PostSelectionResult) -> PostSelectionResult:
    """Second post-selection: flag on |well> (applied after the first)."""
    return _project(result.state, (WELL,))


@dataclass(frozen=True)
class ExtractedSolution:
    """Register-I solution after the clock-|0> projection.

    ``clock_zero_probability`` records how much weight the post-selected state
    kept on clock |0>; residual clock entanglement of the finite-T circuit
    shows up as this probability falling below 1.
    """

    eigenbasis_vector: np.ndarray
    clock_zero_probability: float

    def computational_vector(self, system: HermitianSystem) -> np.ndarray:
        return system.eigenvectors @ self.eigenbasis_vector


def extract_solution(state: CircuitState) -> ExtractedSolution:
    """Project the clock onto |0> and return the normalized register-I vector.

    Expects the flag already projected onto |well> (weight elsewhere below
    tolerance)."""
    stray = np.sum(np.abs(state.amps[:, :, (NOTHING, ILL)]) ** 2)
    if stray > TOL.structural:
        raise FlagNotClean(f"flag register carries weight {stray:.3e} outside |well>")
    vec = state.amps[:, 0, WELL]
    p0 = float(np.sum(np.abs(vec) ** 2))
    if p0 < TOL.probability_floor:
        raise ZeroProbability(f"clock-|0> weight {p0:.3e} is empty")
    return ExtractedSolution(eigenbasis_vector=vec / np.sqrt(p0), clock_zero_probability=p0)
