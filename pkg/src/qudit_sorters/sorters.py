"""Sorter unitaries and a classifier for candidate basis mappings.

Three constructions are provided: the single-input-port sorter
``|s>|k> -> |s>|s+k>`` (SQS), the multi-input-port sorter
``|s>|k> -> |s-k>|s>`` (MQS), and the MQS assembled as
``SQS @ port_controlled_x_dagger``. The perfect map ``|s>|k> -> |s>|s>`` is
not unitary; :func:`attempt_perfect_sorter` shows this mechanically.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .qudit_gates import (
    controlled,
    fourier,
    fourier_dagger,
    identity,
    pauli_x,
    pauli_z,
    port_controlled_x_dagger,
)
from .tensor_core import DEFAULT_TOL, as_unitary, check_qudit_dim, check_tol, tensor_product


class MalformedMappingError(ValueError):
    pass


class Classification(str, enum.Enum):
    PERFECT = "perfect"
    SINGLE_INPUT_PORT = "single_input_port"
    MULTI_INPUT_PORT = "multi_input_port"
    GENERAL_SORTER = "general_sorter"
    NOT_A_SORTER = "not_a_sorter"
    NOT_UNITARY = "not_unitary"


def _permutation(D: int, target) -> np.ndarray:
    """Permutation matrix sending basis ``(s, k)`` to ``target(s, k)``."""
    m = np.zeros((D * D, D * D), dtype=complex)
    for s, k in itertools.product(range(D), repeat=2):
        t_s, t_k = target(s, k)
        m[t_s * D + t_k, s * D + k] = 1.0
    return m


def build_sqs(D: int) -> np.ndarray:
    """Single-input-port sorter, equal to ``controlled(pauli_x(D, 1), D)``."""
    D = check_qudit_dim(D)
    return as_unitary(controlled(pauli_x(D, 1), D))


def build_sqs_via_fourier(D: int) -> np.ndarray:
    """``(I (x) F^dagger) C(Z_D) (I (x) F)``."""
    D = check_qudit_dim(D)
    eye = identity(D)
    return as_unitary(
        tensor_product(eye, fourier_dagger(D))
        @ controlled(pauli_z(D, 1), D)
        @ tensor_product(eye, fourier(D))
    )


def build_mqs(D: int) -> np.ndarray:
    """Multi-input-port sorter as the permutation ``(s, k) -> (s - k, s)``."""
    D = check_qudit_dim(D)
    return as_unitary(_permutation(D, lambda s, k: ((s - k) % D, s)))


def build_mqs_via_theorem(D: int) -> np.ndarray:
    """MQS built from gates: undo ``k`` shifts on port ``k``, then run the SQS."""
    D = check_qudit_dim(D)
    return as_unitary(build_sqs(D) @ port_controlled_x_dagger(D))


@dataclass(frozen=True)
class CandidateMapping:
    """Images of all ``D**2`` basis inputs ``|s>|k>`` of a would-be sorter."""

    D: int
    outputs: Mapping[tuple[int, int], np.ndarray] = field(repr=False)

    def __post_init__(self):
        D = check_qudit_dim(self.D)
        expected = set(itertools.product(range(D), repeat=2))
        keys = {(int(s), int(k)) for s, k in self.outputs}
        if len(self.outputs) != D * D or keys != expected:
            raise MalformedMappingError(
                f"mapping must list each of the {D * D} inputs (s, k) exactly once"
            )
        clean = {}
        for (s, k), vec in self.outputs.items():
            v = np.array(vec, dtype=complex).ravel()
            if v.shape != (D * D,):
                raise MalformedMappingError(f"output for ({s}, {k}) has length {v.shape[0]}, want {D * D}")
            if not np.all(np.isfinite(v)):
                raise MalformedMappingError(f"output for ({s}, {k}) is not finite")
            if abs(np.linalg.norm(v) - 1.0) > DEFAULT_TOL:
                raise MalformedMappingError(
                    f"output for ({s}, {k}) has norm {np.linalg.norm(v):.12g}, want 1"
                )
            v.flags.writeable = False
            clean[(int(s), int(k))] = v
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "outputs", clean)

    def columns(self) -> np.ndarray:
        """Outputs stacked as columns in input order ``s * D + k``."""
        D = self.D
        return np.stack(
            [self.outputs[(s, k)] for s, k in itertools.product(range(D), repeat=2)], axis=1
        )

    @classmethod
    def from_unitary(cls, u: np.ndarray, D: int) -> "CandidateMapping":
        u = np.asarray(u, dtype=complex)
        if u.shape != (D * D, D * D):
            raise MalformedMappingError(f"expected a {D * D}x{D * D} matrix, got {u.shape}")
        return cls(D, {(s, k): u[:, s * D + k] for s, k in itertools.product(range(D), repeat=2)})

    @classmethod
    def from_basis_rule(cls, D: int, rule) -> "CandidateMapping":
        """Mapping sending ``|s>|k>`` to the basis state ``|rule(s, k)>``."""
        outputs = {}
        for s, k in itertools.product(range(D), repeat=2):
            t_s, t_k = rule(s, k)
            v = np.zeros(D * D, dtype=complex)
            v[t_s * D + t_k] = 1.0
            outputs[(s, k)] = v
        return cls(D, outputs)

    @classmethod
    def from_json(cls, obj: dict) -> "CandidateMapping":
        try:
            D = int(obj["dimension"])
            outputs = {}
            for row in obj["map"]:
                key = (int(row["s"]), int(row["k"]))
                if key in outputs:
                    raise MalformedMappingError(f"duplicate entry for input {key}")
                outputs[key] = np.array([complex(re, im) for re, im in row["out"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedMappingError):
                raise
            raise MalformedMappingError(f"bad mapping JSON: {exc}") from exc
        return cls(D, outputs)

    def to_json(self) -> dict:
        rows = []
        for s, k in itertools.product(range(self.D), repeat=2):
            v = self.outputs[(s, k)]
            rows.append({"s": s, "k": k, "out": [[float(z.real), float(z.imag)] for z in v]})
        return {"dimension": self.D, "map": rows}


def sqs_mapping(D: int) -> CandidateMapping:
    return CandidateMapping.from_basis_rule(D, lambda s, k: (s, (s + k) % D))


def mqs_mapping(D: int) -> CandidateMapping:
    return CandidateMapping.from_basis_rule(D, lambda s, k: ((s - k) % D, s))


def perfect_mapping(D: int) -> CandidateMapping:
    return CandidateMapping.from_basis_rule(D, lambda s, k: (s, s))


@dataclass(frozen=True)
class SorterReport:
    is_unitary: bool
    satisfies_definition1_ports: tuple[int, ...]
    classification: Classification
    witness: tuple[tuple[int, int], tuple[int, int]] | None = None
    witness_overlap: float | None = None

    def to_json(self) -> dict:
        return {
            "is_unitary": self.is_unitary,
            "satisfies_definition1_ports": list(self.satisfies_definition1_ports),
            "classification": self.classification.value,
            "witness": None if self.witness is None else [list(p) for p in self.witness],
            "witness_overlap": self.witness_overlap,
        }


def _deterministic_index(probs: np.ndarray, tol: float) -> int | None:
    """Index carrying probability ``>= 1 - tol``, or None if the outcome is spread."""
    hits = np.flatnonzero(probs >= 1.0 - tol)
    if len(hits) > 1:
        raise MalformedMappingError("output is within tolerance of two basis states")
    return int(hits[0]) if len(hits) == 1 else None


def classify(mapping: CandidateMapping, tol: float = DEFAULT_TOL) -> SorterReport:
    """Classify a basis mapping against the sorter taxonomy.

    A unitary extension exists iff the ``D**2`` images are orthonormal. Port
    ``k`` satisfies the sorter condition when every ``|s>|k>`` lands on output
    port ``|s>`` with certainty; the system factor may be anything, including
    a superposition.

    Returns:
        A :class:`SorterReport`. For non-unitary mappings the witness is the
        first pair of inputs, in ``s * D + k`` order, with overlapping images.
    """
    check_tol(tol)
    D = mapping.D
    cols = mapping.columns()
    gram = cols.conj().T @ cols
    off = np.abs(gram - np.eye(D * D))
    is_unitary = bool(np.max(off) <= tol)

    witness = overlap = None
    if not is_unitary:
        rows, cols_idx = np.nonzero(np.triu(off, k=1) > tol)
        i, j = int(rows[0]), int(cols_idx[0])
        witness = (divmod(i, D), divmod(j, D))
        overlap = float(abs(gram[i, j]))

    passing = []
    keeps_system = True
    for k in range(D):
        ok = True
        for s in range(D):
            amps = mapping.outputs[(s, k)].reshape(D, D)
            port = _deterministic_index(np.sum(np.abs(amps) ** 2, axis=0), tol)
            if port != s:
                ok = False
                continue
            if _deterministic_index(np.sum(np.abs(amps) ** 2, axis=1), tol) != s:
                keeps_system = False
        if ok:
            passing.append(k)

    if not is_unitary:
        cls = Classification.NOT_UNITARY
    elif len(passing) == D:
        cls = Classification.PERFECT if keeps_system else Classification.MULTI_INPUT_PORT
    elif passing == [0]:
        cls = Classification.SINGLE_INPUT_PORT
    elif passing:
        cls = Classification.GENERAL_SORTER
    else:
        cls = Classification.NOT_A_SORTER
    return SorterReport(is_unitary, tuple(passing), cls, witness, overlap)


def attempt_perfect_sorter(D: int) -> SorterReport:
    """Try to realise ``|s>|k> -> |s>|s>``; always reports ``not_unitary``."""
    return classify(perfect_mapping(check_qudit_dim(D)))
