"""
Center twists and the vanishing of trace integrals
==================================================

Multiplying generators by n-th roots of unity preserves the sampled set. A
trace function whose loops have nonzero total homology class picks up a
nontrivial phase, so its integral vanishes.
"""
import numpy as np

from charvar.observables import LoopTuple, mc_mean, twist_averaged_mean
from charvar.representations import CenterCharacter, twist
from charvar.sampling import sample_batch
from charvar.words import Presentation

p = Presentation.surface(2)
batch = sample_batch(p, 2, 1000, seed=3, epsilon=0.2)

rho = batch[0]
u = CenterCharacter((1, 0, 0, 0), 2)
print("twist negates a1:", np.allclose(twist(rho, u)[1], -rho[1]))

for text in ("a1", "a1 b2", "a1 b1 A1 B1", "a1, a1"):
    g = LoopTuple.parse(text, p)
    plain, avg = mc_mean(batch, g), twist_averaged_mean(batch, g)
    print(f"{text:<14} class zero={g.homology_class(2).is_zero()!s:<5} "
          f"mean={plain.value.real:+.3f} +- {plain.std_error:.3f}   "
          f"twist-averaged={avg.value.real:+.3f}")
