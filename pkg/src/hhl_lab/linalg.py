"""Dense complex linear algebra: Hermitian eigendecomposition, seeded random
test systems, and the state-distance identity.

Vectors and matrices are plain ``numpy`` arrays (complex128).  A
:class:`HermitianSystem` bundles a matrix with its spectral data; its
eigenvalues are scaled into ``[(T-1)/(T*kappa), (T-1)/T]`` so that every
eigenvalue is resolvable by a clock register of dimension ``T``.

All functions are pure: inputs are never mutated, and the arrays stored on a
``HermitianSystem`` are marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DimensionMismatch, NoConvergence, NotHermitian, NotNormalized
from .tolerances import TOL


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def as_state(v, *, tol: float = TOL.arithmetic) -> np.ndarray:
    """Validate ``v`` as a normalized complex state vector and return it."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise NotNormalized("state vector has non-finite entries")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tol:
        raise NotNormalized(f"|norm - 1| = {abs(n - 1.0):.3e} exceeds {tol:.1e}")
    return v


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """(A + A†)/2."""
    return (a + a.conj().T) / 2


def check_hermitian(a: np.ndarray, *, tol: float = TOL.arithmetic) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |A - A†| entry = {dev:.3e} exceeds {tol:.1e}")
    return a


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as unitary columns.  Column phases are fixed by making the
    largest-modulus entry of each column real and positive, so repeated calls
    on equal inputs reproduce identical output.
    """
    m = check_hermitian(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NoConvergence(str(exc)) from exc
    v = fix_column_phases(v)
    return w, v


def fix_column_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive."""
    v = np.array(v, dtype=complex)
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    mags = np.abs(pivots)
    safe = np.where(mags > 0, mags, 1.0)
    phases = np.where(mags > 0, pivots / safe, 1.0)
    return v / phases[np.newaxis, :]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like random unitary: QR of a complex Gaussian matrix with the
    R-diagonal phases absorbed.  Deterministic given the generator state
    (``numpy`` PCG64, so output is reproducible across platforms)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True)
class HermitianSystem:
    """A Hermitian matrix together with its exact spectral data.

    eigenvalues are ascending; ``eigenvectors[:, j]`` is the unit eigenvector
    for ``eigenvalues[j]``; ``kappa`` is the realized condition number
    ``lambda_max / lambda_min``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kappa: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def validate(self, *, tol: float = TOL.structural) -> None:
        """Check the eigenpair, unitarity, and condition-number invariants."""
        a, w, u = self.matrix, self.eigenvalues, self.eigenvectors
        resid = np.max(np.abs(a @ u - u * w[np.newaxis, :]))
        if resid > tol:
            raise NotHermitian(f"eigenpair residual {resid:.3e} exceeds {tol:.1e}")
        unit = np.max(np.abs(u.conj().T @ u - np.eye(self.dim)))
        if unit > tol:
            raise NotHermitian(f"U†U deviates from identity by {unit:.3e}")
        if abs(self.kappa - w[-1] / w[0]) > tol:
            raise BadParameter("stored kappa disagrees with lambda_max/lambda_min")

    def solution_reference(self, beta: np.ndarray) -> np.ndarray:
        """Normalized classical solution A⁻¹b in the eigenbasis: beta_j / lambda_j."""
        x = np.asarray(beta, dtype=complex) / self.eigenvalues
        return x / np.linalg.norm(x)


def _finish_system(eigenvalues: np.ndarray, u: np.ndarray) -> HermitianSystem:
    a = hermitian_part((u * eigenvalues[np.newaxis, :]) @ u.conj().T)
    return HermitianSystem(
        matrix=_readonly(a),
        eigenvalues=_readonly(eigenvalues),
        eigenvectors=_readonly(u),
        kappa=float(eigenvalues[-1] / eigenvalues[0]),
    )


def eigenvalue_range(kappa: float, T: int) -> tuple[float, float]:
    """Allowed eigenvalue interval ``[(T-1)/(T*kappa), (T-1)/T]``."""
    return (T - 1) / (T * kappa), (T - 1) / T


def random_system(n: int, kappa: float, T: int, seed: int) -> HermitianSystem:
    """Random Hermitian system with 2**n eigenvalues in the resolvable range.

    Eigenvalues are uniform on ``[(T-1)/(T*kappa), (T-1)/T]`` with the extreme
    draws replaced by the interval endpoints, so the realized condition number
    is exactly ``kappa``.  Eigenvectors come from :func:`haar_unitary`.
    Deterministic for a fixed 64-bit ``seed``.
    """
    if n < 1:
        raise BadParameter("n must be >= 1")
    if not kappa > 1:
        raise BadParameter("kappa must be > 1")
    if T < 2:
        raise BadParameter("T must be >= 2")
    dim = 2**n
    lo, hi = eigenvalue_range(kappa, T)
    rng = np.random.default_rng(seed)
    w = np.sort(rng.uniform(lo, hi, size=dim))
    w[0], w[-1] = lo, hi
    u = haar_unitary(dim, rng)
    return _finish_system(w, u)


def system_from_spectrum(eigenvalues, seed: int) -> HermitianSystem:
    """System with prescribed eigenvalues and a seeded random eigenbasis."""
    w = np.sort(np.asarray(eigenvalues, dtype=float))
    if w.ndim != 1 or w.size < 2:
        raise BadParameter("need at least two eigenvalues")
    if w[0] <= 0:
        raise BadParameter("eigenvalues must be positive")
    u = haar_unitary(w.size, np.random.default_rng(seed))
    return _finish_system(w, u)


def state_distance(a, b) -> float:
    """sqrt(2 (1 - Re<a|b>)) for normalized states; equals the 2-norm ||a-b||."""
    a = as_state(a)
    b = as_state(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")
    val = 2.0 * (1.0 - float(np.real(np.vdot(a, b))))
    return float(np.sqrt(max(val, 0.0)))
