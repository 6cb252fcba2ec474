"""
Mapping classes acting on representations
=========================================

An automorphism phi acts by rho -> rho o phi^-1. Trace functions are carried
along exactly, and the sampled distribution is unchanged.
"""
import numpy as np
import scipy.stats

from charvar.observables import LoopTuple, trace_values
from charvar.sampling import sample_batch
from charvar.words import Presentation, mcg_generators, parse_word

p = Presentation.surface(2)
batch = sample_batch(p, 2, 2000, seed=5, epsilon=0.2)
fresh = sample_batch(p, 2, 2000, seed=6, epsilon=0.2)
a1 = LoopTuple.parse("a1", p)
gamma = LoopTuple.parse("a1 b2 A2, b1", p)

for phi in mcg_generators(2):
    acted = batch.acted(phi)
    inv = phi.inverse()
    pulled = LoopTuple(tuple(inv(w) for w in gamma.loops), p)
    err = np.max(abs(trace_values(acted, gamma) - trace_values(batch, pulled)))
    ks = scipy.stats.ks_2samp(trace_values(acted, a1).real, trace_values(fresh, a1).real)
    print(f"{phi.label:<10} defect drift {np.max(abs(acted.defects - batch.defects)):.1e}  "
          f"functoriality {err:.1e}  KS p={ks.pvalue:.2f}")

print("T_a1^-1(b1) =", mcg_generators(2)[0].inverse()(parse_word("b1", p)).format(p))
