"""Independent particles pushed through a sorter, with detector click statistics.

Particles are distinguishable and never interact: each one evolves through
the same single-particle unitary on ``system (x) port``. Shot ``j`` of
particle ``i`` draws from its own generator keyed by ``(seed, i, j)``, so any
evaluation order gives the same histogram. Keying on the tuple rather than
on ``seed + i * shots + j`` keeps runs with neighbouring seeds independent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .photonic_oam import build_photonic_sorter, build_polarization_sorter
from .sorters import build_mqs, build_sqs
from .tensor_core import DEFAULT_TOL, DimensionError, JointState, apply, check_qudit_dim

BASIS_THRESHOLD = 1.0 - 1e-9


class NonBasisParticleError(ValueError):
    pass


SORTERS: dict[str, Callable[[int], np.ndarray]] = {
    "sqs": build_sqs,
    "mqs": build_mqs,
    "photonic4": lambda D: build_photonic_sorter(D, allow_other_dims=False),
    "polarization": lambda D: _only_dim(D, 2, build_polarization_sorter),
}


def _only_dim(D, want, build):
    if D != want:
        raise ValueError(f"this sorter exists only for D = {want}, got {D}")
    return build()


def get_sorter(name: str, D: int) -> np.ndarray:
    try:
        build = SORTERS[name]
    except KeyError:
        raise ValueError(f"unknown sorter {name!r}; choose from {sorted(SORTERS)}") from None
    return build(check_qudit_dim(D))


def _basis_index(amps: np.ndarray) -> int | None:
    hits = np.flatnonzero(np.abs(amps) ** 2 >= BASIS_THRESHOLD)
    return int(hits[0]) if len(hits) == 1 else None


@dataclass(frozen=True)
class Particle:
    amplitudes: np.ndarray = field(repr=False)
    input_port: int

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] < 2:
            raise ValueError("a particle needs at least two levels")
        if abs(np.linalg.norm(amps) - 1.0) > DEFAULT_TOL:
            raise ValueError(f"particle state is not normalised (norm {np.linalg.norm(amps)!r})")
        if not 0 <= self.input_port < amps.shape[0]:
            raise ValueError(f"input port {self.input_port} out of range for D = {amps.shape[0]}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "input_port", int(self.input_port))

    @classmethod
    def basis(cls, s: int, port: int, D: int) -> "Particle":
        amps = np.zeros(D, dtype=complex)
        amps[s] = 1.0
        return cls(amps, port)

    @property
    def D(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def basis_state(self) -> int | None:
        """Index of the system basis state, or None for a superposition."""
        return _basis_index(self.amplitudes)

    def joint_state(self) -> JointState:
        return JointState.product(self.amplitudes, self.input_port)


@dataclass(frozen=True)
class SortOutcomeRecord:
    particle_index: int
    output_port: int
    output_system_state: int | None = None

    def to_json(self) -> dict:
        return {
            "particle_index": self.particle_index,
            "output_port": self.output_port,
            "output_system_state": self.output_system_state,
        }


@dataclass(frozen=True)
class ClickHistogram:
    """Detector counts per output port.

    ``joint`` holds counts indexed ``[system, port]`` when the system
    register was measured as well.
    """

    D: int
    counts: tuple[int, ...]
    shots_per_particle: int
    total: int
    joint: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if len(self.counts) != self.D:
            raise ValueError(f"need {self.D} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts) or sum(self.counts) != self.total:
            raise ValueError("counts must be non-negative and sum to total")
        if self.shots_per_particle < 1 or self.total % self.shots_per_particle:
            raise ValueError("total must be a positive multiple of shots_per_particle")

    @property
    def n_particles(self) -> int:
        return self.total // self.shots_per_particle

    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.total

    def merge(self, other: "ClickHistogram") -> "ClickHistogram":
        """Pool two histograms taken with the same shots per particle."""
        if other.D != self.D or other.shots_per_particle != self.shots_per_particle:
            raise ValueError("histograms are not compatible")
        joint = None
        if self.joint is not None and other.joint is not None:
            joint = tuple(
                tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.joint, other.joint)
            )
        return ClickHistogram(
            self.D,
            tuple(a + b for a, b in zip(self.counts, other.counts)),
            self.shots_per_particle,
            self.total + other.total,
            joint,
        )


def _check_sorter(sorter: np.ndarray, D: int) -> np.ndarray:
    sorter = np.asarray(sorter)
    if sorter.shape != (D * D, D * D):
        raise DimensionError(f"sorter must be {D * D}x{D * D} for D = {D}, got {sorter.shape}")
    return sorter


def _check_particle(p: Particle, D: int) -> None:
    if p.D != D:
        raise DimensionError(f"particle has {p.D} levels, sorter expects {D}")


def sort_deterministic(
    particles: Sequence[Particle], sorter: np.ndarray, D: int
) -> list[SortOutcomeRecord]:
    """Read off the output port and system state of each basis-state particle.

    Raises:
        NonBasisParticleError: if a particle is in a superposition, or the
            sorter does not send it to a definite port.
    """
    D = check_qudit_dim(D)
    sorter = _check_sorter(sorter, D)
    records = []
    for i, p in enumerate(particles):
        _check_particle(p, D)
        if p.basis_state is None:
            raise NonBasisParticleError(
                f"particle {i} is not a basis state; use sample_clicks instead"
            )
        out = apply(sorter, p.joint_state())
        idx = _basis_index(out.amplitudes)
        if idx is not None:
            system, port = divmod(idx, D)
            records.append(SortOutcomeRecord(i, port, system))
            continue
        port = _basis_index(np.sqrt(out.port_probabilities()))
        if port is None:
            raise NonBasisParticleError(f"particle {i} leaves through no definite port")
        records.append(SortOutcomeRecord(i, port, None))
    return records


def sample_clicks(
    particles: Sequence[Particle],
    sorter: np.ndarray,
    D: int,
    shots: int,
    seed: int,
    measure_system: bool = False,
    particle_offset: int = 0,
) -> ClickHistogram:
    """Born-rule sampling of the output port for every particle and shot.

    Args:
        particles: Incident particles, each on its own input port.
        sorter: ``D**2 x D**2`` unitary.
        D: QuDit dimension.
        shots: Repetitions per particle.
        seed: Non-negative base seed.
        measure_system: Also measure the system register and fill ``joint``.
        particle_offset: Global index of ``particles[0]``; lets a shard of a
            larger particle list reproduce its part of the full run.
    """
    D = check_qudit_dim(D)
    sorter = _check_sorter(sorter, D)
    if int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    if int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    shots, seed = int(shots), int(seed)

    joint_counts = np.zeros(D * D, dtype=np.int64)
    for i, p in enumerate(particles):
        _check_particle(p, D)
        probs = apply(sorter, p.joint_state()).joint_probabilities()
        cdf = np.cumsum(probs)
        cdf /= cdf[-1]
        key = (seed, particle_offset + i)
        u = np.fromiter(
            (np.random.default_rng((*key, j)).random() for j in range(shots)),
            dtype=float,
            count=shots,
        )
        outcomes = np.minimum(np.searchsorted(cdf, u, side="right"), D * D - 1)
        joint_counts += np.bincount(outcomes, minlength=D * D)

    grid = joint_counts.reshape(D, D)
    counts = tuple(int(c) for c in grid.sum(axis=0))
    joint = tuple(tuple(int(c) for c in row) for row in grid) if measure_system else None
    return ClickHistogram(D, counts, shots, len(particles) * shots, joint)


def infer_input_histogram(histogram: ClickHistogram) -> list[Fraction]:
    """Estimated number of incident particles in each system basis state."""
    return [Fraction(c, histogram.shots_per_particle) for c in histogram.counts]


def histogram_from_records(records: Sequence[SortOutcomeRecord], D: int) -> ClickHistogram:
    counts = [0] * D
    for r in records:
        counts[r.output_port] += 1
    return ClickHistogram(D, tuple(counts), 1, len(records))


def particle_from_json(obj: dict, D: int) -> Particle:
    """Parse ``{"state": int | {"amplitudes": [[re, im], ...]}, "port": int}``."""
    state = obj["state"]
    port = int(obj["port"])
    if isinstance(state, dict):
        amps = np.array([complex(re, im) for re, im in state["amplitudes"]])
        if amps.shape[0] != D:
            raise DimensionError(f"particle has {amps.shape[0]} amplitudes, expected {D}")
        return Particle(amps, port)
    if isinstance(state, bool) or int(state) != state or not 0 <= int(state) < D:
        raise ValueError(f"basis state {state!r} out of range for D = {D}")
    return Particle.basis(int(state), port, D)


def particles_per_use(sorter_name: str, D: int) -> int:
    """How many particles one use of the device sorts correctly (one per working input port)."""
    return 1 if sorter_name == "sqs" else D
