"""Invariant checks run by ``qudit-sorters verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .photonic_oam import assemble_dove_prisms, build_photonic_sorter, build_polarization_sorter
from .qudit_gates import (
    controlled,
    fourier,
    omega_powers,
    pauli_x,
    pauli_z,
    port_controlled_x_dagger,
)
from .sorters import (
    Classification,
    attempt_perfect_sorter,
    build_mqs,
    build_mqs_via_theorem,
    build_sqs,
    build_sqs_via_fourier,
    classify,
    mqs_mapping,
    sqs_mapping,
)
from .tensor_core import (
    DEFAULT_TOL,
    JointState,
    apply,
    max_residual,
    phase_distance,
    unitarity_residual,
)

# (input (s, k), expected output (s', k')) with H = 0, V = 1
POLARIZATION_ROWS = {
    "H0->H0": ((0, 0), (0, 0)),
    "H1->V0": ((0, 1), (1, 0)),
    "V0->V1": ((1, 0), (1, 1)),
    "V1->H1": ((1, 1), (0, 1)),
}


@dataclass(frozen=True)
class CheckResult:
    dimension: int
    name: str
    max_residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "check": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
        }


def basis_map_residual(u: np.ndarray, D: int, inp, out) -> float:
    got = apply(u, JointState.basis(*inp, D)).amplitudes
    return max_residual(got, JointState.basis(*out, D).amplitudes)


def run_checks(D: int, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    results = []

    def add(name, residual, ok=None):
        residual = float(residual)
        results.append(CheckResult(D, name, residual, residual <= tol if ok is None else ok))

    X, Z, F = pauli_x(D, 1), pauli_z(D, 1), fourier(D)
    eye = np.eye(D)
    sqs, mqs = build_sqs(D), build_mqs(D)
    photonic = build_photonic_sorter(D)

    gates = [X, Z, F, controlled(X, D), controlled(Z, D), port_controlled_x_dagger(D),
             sqs, mqs, build_mqs_via_theorem(D), photonic]
    add("unitarity", max(unitarity_residual(g) for g in gates))
    add("weyl_commutation", max_residual(Z @ X, omega_powers(D, 1) * (X @ Z)))
    add("pauli_cycle", max(
        max_residual(np.linalg.matrix_power(X, D), eye),
        max_residual(np.linalg.matrix_power(Z, D), eye),
    ))
    add("fourier_conjugation", max_residual(F.conj().T @ Z @ F, X))
    add("sqs_decomposition", max_residual(sqs, build_sqs_via_fourier(D)))
    add("mqs_theorem", max_residual(build_mqs_via_theorem(D), mqs))

    perfect = attempt_perfect_sorter(D)
    overlap = perfect.witness_overlap or 0.0
    add("perfect_sorter_infeasible", 1.0 - overlap,
        perfect.classification is Classification.NOT_UNITARY and 1.0 - overlap <= tol)

    mqs_ok = classify(mqs_mapping(D)).classification is Classification.MULTI_INPUT_PORT
    sqs_ok = classify(sqs_mapping(D)).classification is Classification.SINGLE_INPUT_PORT
    add("sorter_classes", 0.0, mqs_ok and sqs_ok)

    add("dove_prisms", max_residual(assemble_dove_prisms(D), controlled(Z, D)))
    add("photonic_equivalence", phase_distance(photonic, mqs))

    if D == 4:
        add("x4_power_shortcuts", max(
            max_residual(np.linalg.matrix_power(X.conj().T, 2), X @ X),
            max_residual(np.linalg.matrix_power(X.conj().T, 3), X),
        ))
    if D == 2:
        pol = build_polarization_sorter()
        for label, (inp, out) in POLARIZATION_ROWS.items():
            add(f"polarization_{label}", basis_map_residual(pol, 2, inp, out))
    return results
