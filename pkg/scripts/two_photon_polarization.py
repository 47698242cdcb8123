"""Two H photons on both inputs of the PBS + HWP sorter, then on a bare PBS."""
from qudit_sorters.multiparticle_sim import Particle, histogram_from_records, sort_deterministic
from qudit_sorters.photonic_oam import build_polarization_sorter
from qudit_sorters.sorters import build_sqs

LABEL = "HV"

photons = [Particle.basis(0, 0, 2), Particle.basis(0, 1, 2)]
for name, U in [("PBS + HWP", build_polarization_sorter()), ("bare PBS", build_sqs(2))]:
    records = sort_deterministic(photons, U, 2)
    print(f"{name}:")
    for p, r in zip(photons, records):
        print(f"  H on input {p.input_port} -> output {r.output_port}, leaves {LABEL[r.output_system_state]}")
    print(f"  clicks per output port: {list(histogram_from_records(records, 2).counts)}")
