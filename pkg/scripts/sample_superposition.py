"""Click statistics for a random qudit state sent through the MQS on a random port."""
import argparse

import numpy as np

from qudit_sorters.multiparticle_sim import Particle, infer_input_histogram, sample_clicks
from qudit_sorters.sorters import build_mqs

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--dimension", type=int, default=4)
parser.add_argument("--shots", type=int, default=20_000)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

rng = np.random.default_rng(args.seed)
D = args.dimension
a = rng.standard_normal(D) + 1j * rng.standard_normal(D)
a /= np.linalg.norm(a)
port = int(rng.integers(D))
hist = sample_clicks([Particle(a, port)], build_mqs(D), D, args.shots, args.seed)
est = [float(x) for x in infer_input_histogram(hist)]
print(f"input port {port}")
print(" s   |a_s|^2   estimate")
for s in range(D):
    print(f"{s:2d}  {abs(a[s]) ** 2:8.4f}  {est[s]:9.4f}")
