"""Elementary quDit gates: generalized Paulis, the QFT, and controlled gates.

Two-quDit gates act on ``system (x) port`` with the system-major index
``s * D + k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tensor_core import DimensionError, _frozen, check_qudit_dim


def omega_powers(D: int, exponents) -> np.ndarray:
    """``omega**e`` with ``omega = exp(2 pi i / D)``, reducing ``e`` mod D first."""
    e = np.mod(np.asarray(exponents, dtype=np.int64), D)
    return np.exp(2j * np.pi * e / D)


def identity(D: int) -> np.ndarray:
    return _frozen(np.eye(D))


def pauli_x(D: int, power: int = 1) -> np.ndarray:
    """Cyclic shift ``|s> -> |s + power mod D>``; negative powers shift down."""
    D = check_qudit_dim(D)
    p = int(power) % D
    m = np.zeros((D, D), dtype=complex)
    s = np.arange(D)
    m[(s + p) % D, s] = 1.0
    return _frozen(m)


def pauli_z(D: int, power: int = 1) -> np.ndarray:
    D = check_qudit_dim(D)
    j = np.arange(D)
    return _frozen(np.diag(omega_powers(D, j * int(power))))


def fourier(D: int) -> np.ndarray:
    """QFT with ``F[j, k] = omega**(j k) / sqrt(D)``."""
    D = check_qudit_dim(D)
    j = np.arange(D)
    return _frozen(omega_powers(D, np.outer(j, j)) / np.sqrt(D))


def fourier_dagger(D: int) -> np.ndarray:
    return _frozen(fourier(D).conj().T)


def controlled(u: np.ndarray, D: int) -> np.ndarray:
    """``C(U)|s>|k> = |s> U**s |k>``: the system register controls the port.

    Args:
        u: ``D x D`` unitary applied to the port register.
        D: Dimension of both registers.

    Returns:
        Block-diagonal ``D**2 x D**2`` matrix whose ``s``-th block is ``u**s``.
    """
    D = check_qudit_dim(D)
    u = np.asarray(u, dtype=complex)
    if u.shape != (D, D):
        raise DimensionError(f"controlled target must be {D}x{D}, got {u.shape}")
    out = np.zeros((D * D, D * D), dtype=complex)
    block = np.eye(D, dtype=complex)
    for s in range(D):
        out[s * D:(s + 1) * D, s * D:(s + 1) * D] = block
        block = u @ block
    return _frozen(out)


def port_conditioned(gates: Sequence[np.ndarray], D: int) -> np.ndarray:
    """``sum_k gates[k] (x) |k><k|``: apply ``gates[k]`` to the system on path ``k``."""
    D = check_qudit_dim(D)
    if len(gates) != D:
        raise DimensionError(f"need one gate per port ({D}), got {len(gates)}")
    out = np.zeros((D * D, D * D), dtype=complex)
    for k, g in enumerate(gates):
        g = np.asarray(g, dtype=complex)
        if g.shape != (D, D):
            raise DimensionError(f"gate on port {k} must be {D}x{D}, got {g.shape}")
        proj = np.zeros((D, D), dtype=complex)
        proj[k, k] = 1.0
        out += np.kron(g, proj)
    return _frozen(out)


def port_controlled_x_dagger(D: int) -> np.ndarray:
    """``|s>|k> -> |s - k mod D>|k>``, i.e. ``(X_D^dagger)**k`` on the system for port ``k``."""
    D = check_qudit_dim(D)
    return port_conditioned([pauli_x(D, -k) for k in range(D)], D)


class GateKind(str, enum.Enum):
    X = "X"
    Z = "Z"
    F = "F"
    F_DAGGER = "F_dagger"
    CONTROLLED_X = "controlled_X"
    CONTROLLED_Z = "controlled_Z"
    PORT_CONTROLLED_X_DAGGER = "port_controlled_X_dagger"
    DOVE_PHASE = "dove_phase"


@dataclass(frozen=True)
class GateSpec:
    """Declarative gate description.

    ``power`` is reduced mod ``dim`` for the Pauli kinds and the controlled
    Paulis. For ``dove_phase`` it names the path, with the prism at its
    canonical angle ``path * pi / dim``.
    """

    kind: GateKind
    dim: int
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "dim", check_qudit_dim(self.dim))
        if self.kind in (GateKind.X, GateKind.Z, GateKind.CONTROLLED_X, GateKind.CONTROLLED_Z):
            object.__setattr__(self, "power", int(self.power) % self.dim)

    def matrix(self) -> np.ndarray:
        D, p = self.dim, self.power
        if self.kind is GateKind.X:
            return pauli_x(D, p)
        if self.kind is GateKind.Z:
            return pauli_z(D, p)
        if self.kind is GateKind.F:
            return fourier(D)
        if self.kind is GateKind.F_DAGGER:
            return fourier_dagger(D)
        if self.kind is GateKind.CONTROLLED_X:
            return controlled(pauli_x(D, p), D)
        if self.kind is GateKind.CONTROLLED_Z:
            return controlled(pauli_z(D, p), D)
        if self.kind is GateKind.PORT_CONTROLLED_X_DAGGER:
            return port_controlled_x_dagger(D)
        from .photonic_oam import canonical_angle, dove_phase

        return dove_phase(D, p, canonical_angle(D, p))
