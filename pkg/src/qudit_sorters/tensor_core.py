"""Dense complex linear algebra shared by every gate and sorter.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Joint states of
a system register and a port register use the system-major index convention
``index(s, k) = s * d_port + k``, so ``np.kron(system_op, port_op)`` acts on
them with the system factor first.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-10
LOOSEST_TOL = 1e-6
MAX_DIM = 64


class DimensionError(ValueError):
    """Raised when operand dimensions do not match."""


class NotUnitaryError(ValueError):
    """Raised when a matrix expected to be unitary is not."""


def check_tol(tol: float) -> float:
    if not (0.0 < tol <= LOOSEST_TOL):
        raise ValueError(f"tolerance must lie in (0, {LOOSEST_TOL}], got {tol!r}")
    return float(tol)


def check_qudit_dim(D: int) -> int:
    """Validate a single-quDit dimension ``2 <= D <= MAX_DIM``."""
    if isinstance(D, bool) or int(D) != D:
        raise ValueError(f"dimension must be an integer, got {D!r}")
    D = int(D)
    if D < 2:
        raise ValueError(f"dimension must be >= 2, got {D}")
    if D > MAX_DIM:
        raise ValueError(f"dimension must be <= {MAX_DIM}, got {D}")
    return D


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.flags.writeable = False
    return m


def max_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Largest entrywise modulus of ``a - b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def unitarity_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    return max_residual(m.conj().T @ m, np.eye(m.shape[0]))


def assert_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Return True iff ``max |m^dagger m - I| <= tol``.

    Despite the name this is a predicate; use :func:`as_unitary` to raise.
    """
    check_tol(tol)
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        return False
    return unitarity_residual(m) <= tol


def as_unitary(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return a read-only complex copy of ``m``, raising if it is not unitary."""
    m = np.asarray(m, dtype=complex)
    if not assert_unitary(m, tol):
        raise NotUnitaryError(
            f"matrix of dim {m.shape[0]} is not unitary "
            f"(residual {unitarity_residual(m):.3e} > {tol:g})"
        )
    return _frozen(m)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the slow (system) index."""
    return _frozen(np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def dagger(m: np.ndarray) -> np.ndarray:
    return _frozen(np.asarray(m).conj().T)


def _optimal_phase(a: np.ndarray, b: np.ndarray, tol: float) -> complex:
    # unit scalar p minimising max |p*a - b|
    overlap = a.conj().T @ b
    tr = np.trace(overlap)
    if abs(tr) > tol:
        return tr / abs(tr)
    flat = overlap.ravel()
    big = flat[np.argmax(np.abs(flat))]
    if abs(big) == 0.0:
        return 1.0 + 0.0j
    return big / abs(big)


def phase_distance(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Entrywise distance between ``a`` and ``b`` after removing the global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return max_residual(_optimal_phase(a, b, tol) * a, b)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    check_tol(tol)
    return phase_distance(a, b, tol) <= tol


@dataclass(frozen=True)
class JointState:
    """Pure state of a system register tensored with a port register.

    Attributes:
        d_system: Dimension of the particle's internal state.
        d_port: Number of spatial modes.
        amplitudes: Length ``d_system * d_port`` vector, system-major.
    """

    d_system: int
    d_port: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] != self.d_system * self.d_port:
            raise DimensionError(
                f"expected {self.d_system * self.d_port} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if abs(np.vdot(amps, amps).real - 1.0) > DEFAULT_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {np.vdot(amps, amps).real!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def index(s: int, k: int, d_port: int) -> int:
        return s * d_port + k

    @classmethod
    def basis(cls, s: int, k: int, d_system: int, d_port: int | None = None) -> "JointState":
        d_port = d_system if d_port is None else d_port
        if not (0 <= s < d_system and 0 <= k < d_port):
            raise ValueError(f"basis label ({s}, {k}) out of range")
        amps = np.zeros(d_system * d_port, dtype=complex)
        amps[cls.index(s, k, d_port)] = 1.0
        return cls(d_system, d_port, amps)

    @classmethod
    def product(cls, system_amplitudes, port: int, d_port: int | None = None) -> "JointState":
        """``|psi>|port>`` for a system state ``psi``."""
        system = np.asarray(system_amplitudes, dtype=complex).ravel()
        d_port = system.shape[0] if d_port is None else d_port
        if not 0 <= port < d_port:
            raise ValueError(f"port {port} out of range for {d_port} ports")
        port_vec = np.zeros(d_port, dtype=complex)
        port_vec[port] = 1.0
        return cls(system.shape[0], d_port, np.kron(system, port_vec))

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``(d_system, d_port)``."""
        return self.amplitudes.reshape(self.d_system, self.d_port)

    def port_probabilities(self) -> np.ndarray:
        return np.sum(np.abs(self.as_matrix()) ** 2, axis=0)

    def system_probabilities(self) -> np.ndarray:
        return np.sum(np.abs(self.as_matrix()) ** 2, axis=1)

    def joint_probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply(u: np.ndarray, psi: JointState) -> JointState:
    u = np.asarray(u)
    n = psi.amplitudes.shape[0]
    if u.shape != (n, n):
        raise DimensionError(f"operator of shape {u.shape} cannot act on a state of length {n}")
    return JointState(psi.d_system, psi.d_port, u @ psi.amplitudes)
