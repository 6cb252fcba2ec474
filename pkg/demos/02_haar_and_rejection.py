"""
Haar unitaries and the relator level set
========================================

Proposals are independent Haar tuples; a tuple is kept when the relator
evaluates within epsilon of the identity.
"""
import numpy as np

from charvar.sampling import acceptance_counts, sample_batch
from charvar.unitary import haar_sample
from charvar.words import Presentation

rng = np.random.default_rng(0)

# character orthogonality: E tr U = 0 and E |tr U|^2 = 1
u = haar_sample(2, rng, size=200000)
t = np.trace(u, axis1=1, axis2=2)
print("mean tr U     :", np.round(t.mean(), 4))
print("mean |tr U|^2 :", np.round((abs(t) ** 2).mean(), 4))

# how the acceptance rate falls with epsilon, on one shared proposal stream
p = Presentation.surface(2)
counts = acceptance_counts(p, 2, [0.5, 0.2, 0.1], 400000, seed=1)
for eps, k in counts.items():
    print(f"eps={eps}: {k} accepted of 400000")

# a batch; the same seed gives the same batch for any thread count
batch = sample_batch(p, 2, 200, seed=1, epsilon=0.2, threads=2)
print(len(batch), "samples, acceptance", round(batch.acceptance_rate, 5),
      "max defect", batch.defects.max().round(3))
