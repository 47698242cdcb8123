"""Gate-level model of path-encoded photonic sorters.

The OAM layout for D = 4 puts a shift gate on each input path ``k > 0``
(``X^dagger``, ``X^2``, ``X`` for k = 1, 2, 3), a QFT across the paths, a
Dove prism at angle ``k pi / D`` in path ``k``, and an inverse QFT. The
shift gates are opaque unitaries here; their interferometric construction
is not modelled.

A Dove prism rotated by ``alpha`` is modelled as the pure phase
``exp(2 i s alpha)`` on OAM value ``s``. The transverse flip a real prism
also applies is ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qudit_gates import fourier, fourier_dagger, identity, pauli_x, port_conditioned
from .sorters import build_sqs
from .tensor_core import _frozen, as_unitary, check_qudit_dim, tensor_product

OAM_LAYOUT_DIM = 4
SHIFT_GATE_INTERNALS = "Mach-Zehnder interferometer, two parity splitters, spiral phase plate"


def canonical_angle(D: int, path_k: int) -> float:
    return path_k * np.pi / D


def dove_phase(D: int, path_k: int, angle: float) -> np.ndarray:
    """Diagonal gate: phase ``exp(2 i s angle)`` on ``|s>|path_k>``, identity elsewhere."""
    D = check_qudit_dim(D)
    if not 0 <= path_k < D:
        raise ValueError(f"path {path_k} out of range for {D} paths")
    diag = np.ones(D * D, dtype=complex)
    s = np.arange(D)
    diag[s * D + path_k] = np.exp(2j * s * angle)
    return _frozen(np.diag(diag))


@dataclass(frozen=True)
class DovePrism:
    path_index: int
    angle: float

    def phase(self, s: int) -> complex:
        return complex(np.exp(2j * s * self.angle))

    def gate(self, D: int) -> np.ndarray:
        return dove_phase(D, self.path_index, self.angle)


def assemble_dove_prisms(D: int, angles: Sequence[float] | None = None) -> np.ndarray:
    """Product of one prism per path; ``angles[k]`` is the angle in path ``k``.

    With the default angles ``k pi / D`` this is exactly ``controlled(pauli_z(D, 1), D)``.
    """
    D = check_qudit_dim(D)
    if angles is None:
        angles = [canonical_angle(D, k) for k in range(D)]
    if len(angles) != D:
        raise ValueError(f"need {D} angles, got {len(angles)}")
    out = np.eye(D * D, dtype=complex)
    for k, a in enumerate(angles):
        out = dove_phase(D, k, a) @ out
    return _frozen(out)


def _shift_label(D: int, power: int) -> str:
    power %= D
    if power == 0:
        return "I"
    if power == 1:
        return f"X_{D}"
    if power == D - 1:
        return f"X_{D}^dagger"
    return f"X_{D}^{power}"


@dataclass(frozen=True)
class PhotonicLayout:
    """Element list of a path-encoded multi-input-port sorter.

    Attributes:
        D: Number of paths, equal to the OAM dimension.
        input_gates: Power of ``X_D`` placed on each input path.
        prism_angles: Dove prism angle on each path after the QFT.
        with_fourier: Whether the QFT / inverse QFT pair surrounds the prisms.
    """

    D: int
    input_gates: tuple[int, ...]
    prism_angles: tuple[float, ...]
    with_fourier: bool = True
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        D = check_qudit_dim(self.D)
        if len(self.input_gates) != D or len(self.prism_angles) != D:
            raise ValueError("need one input gate and one prism angle per path")
        if self.input_gates[0] % D != 0 or self.prism_angles[0] != 0:
            raise ValueError("path 0 carries no input gate and no prism")
        object.__setattr__(self, "input_gates", tuple(int(p) % D for p in self.input_gates))
        object.__setattr__(self, "prism_angles", tuple(float(a) for a in self.prism_angles))
        object.__setattr__(self, "labels", tuple(_shift_label(D, p) for p in self.input_gates))

    @classmethod
    def standard(cls, D: int = OAM_LAYOUT_DIM) -> "PhotonicLayout":
        """Shift ``(X_D^dagger)**k`` written as ``X_D**(-k mod D)``, prism at ``k pi / D``."""
        D = check_qudit_dim(D)
        return cls(
            D,
            tuple((-k) % D for k in range(D)),
            tuple(canonical_angle(D, k) for k in range(D)),
        )

    def with_angles(self, angles: Sequence[float]) -> "PhotonicLayout":
        return PhotonicLayout(self.D, self.input_gates, tuple(angles), self.with_fourier)

    def unitary(self) -> np.ndarray:
        D = self.D
        shifts = port_conditioned([pauli_x(D, p) for p in self.input_gates], D)
        prisms = assemble_dove_prisms(D, self.prism_angles)
        if self.with_fourier:
            eye = identity(D)
            middle = tensor_product(eye, fourier_dagger(D)) @ prisms @ tensor_product(eye, fourier(D))
        else:
            middle = prisms
        return as_unitary(middle @ shifts)

    def elements(self) -> list[dict]:
        """Ordered optical elements, first to last along the beam."""
        out = []
        for k in range(1, self.D):
            if self.input_gates[k]:
                out.append({
                    "element": "shift_gate",
                    "path": k,
                    "label": self.labels[k],
                    "power": self.input_gates[k],
                    "internals": SHIFT_GATE_INTERNALS,
                })
        if self.with_fourier:
            out.append({"element": "qft", "paths": list(range(self.D)), "label": "F"})
        for k in range(1, self.D):
            out.append({
                "element": "dove_prism",
                "path": k,
                "angle_rad": round(self.prism_angles[k], 8),
            })
        if self.with_fourier:
            out.append({"element": "inverse_qft", "paths": list(range(self.D)), "label": "F^dagger"})
        return out


def build_photonic_sorter(D: int = OAM_LAYOUT_DIM, *, allow_other_dims: bool = True) -> np.ndarray:
    """Unitary of the standard photonic layout; equals the MQS up to global phase."""
    D = check_qudit_dim(D)
    if D != OAM_LAYOUT_DIM and not allow_other_dims:
        raise ValueError(f"photonic layout is defined for D = {OAM_LAYOUT_DIM}, got {D}")
    return PhotonicLayout.standard(D).unitary()


def build_polarization_sorter() -> np.ndarray:
    """Half-wave plate on input path 1, then a polarizing beam splitter (H = 0, V = 1)."""
    hwp = port_conditioned([identity(2), pauli_x(2, 1)], 2)
    return as_unitary(build_sqs(2) @ hwp)
