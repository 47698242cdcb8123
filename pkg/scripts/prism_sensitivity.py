"""Distance of the photonic D=4 sorter from the MQS when one Dove prism is mis-rotated."""
import argparse

import numpy as np

from qudit_sorters.photonic_oam import PhotonicLayout
from qudit_sorters.sorters import build_mqs
from qudit_sorters.tensor_core import phase_distance

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--dmax", type=float, default=0.1, help="largest angle error in radians")
parser.add_argument("--steps", type=int, default=11)
args = parser.parse_args()

layout = PhotonicLayout.standard(4)
mqs = build_mqs(4)
print("delta_rad  " + "  ".join(f"path{k:<7d}" for k in range(1, 4)))
for delta in np.linspace(0, args.dmax, args.steps):
    row = []
    for k in range(1, 4):
        angles = list(layout.prism_angles)
        angles[k] += delta
        row.append(phase_distance(layout.with_angles(angles).unitary(), mqs))
    print(f"{delta:9.4f}  " + "  ".join(f"{d:11.3e}" for d in row))
