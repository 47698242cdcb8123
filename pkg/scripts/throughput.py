"""One particle per input port, all in the same state: how many reach the right detector.

The MQS collects all D of them on port s; the SQS only the one from port 0.
"""
import argparse

from qudit_sorters.multiparticle_sim import Particle, sample_clicks
from qudit_sorters.sorters import build_mqs, build_sqs

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--dmax", type=int, default=8)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

print(" D  state  MQS-correct  SQS-correct")
for D in range(2, args.dmax + 1):
    s = D // 2
    particles = [Particle.basis(s, k, D) for k in range(D)]
    mqs = sample_clicks(particles, build_mqs(D), D, 1, args.seed).counts[s]
    sqs = sample_clicks(particles, build_sqs(D), D, 1, args.seed).counts[s]
    print(f"{D:2d}  {s:5d}  {mqs:11d}  {sqs:11d}")
