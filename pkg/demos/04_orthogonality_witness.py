"""
A trace function orthogonal to every generator trace
====================================================

The commutator loop [a1, b1] has zero homology class, so after centering its
trace pairs to zero against t_alpha for every generator alpha, while being a
nonconstant function.
"""
from charvar.observables import LoopTuple, inner_product, variance
from charvar.sampling import sample_batch
from charvar.words import Presentation

p = Presentation.surface(2)
batch = sample_batch(p, 2, 2000, seed=4, epsilon=0.2)

for text in ("a1 b1 A1 B1", "a1, a1"):
    g = LoopTuple.parse(text, p)
    v = variance(batch, g)
    print(f"gamma = ({text}): variance {v.value.real:.3f} +- {v.std_error:.3f}")
    for alpha in p.generators():
        ta = inner_product(batch, g, alpha, use_normalized=True, estimator="twist_averaged")
        plain = inner_product(batch, g, alpha, use_normalized=True)
        print(f"   <t^, t_{alpha.format(p)}>  twist-averaged {abs(ta.value):.1e}   "
              f"plain {plain.value.real:+.3f} +- {plain.std_error:.3f}")

for alpha in p.generators():
    e = inner_product(batch, LoopTuple((alpha,), p), alpha)
    print(f"<t_{alpha.format(p)}, t_{alpha.format(p)}> = {e.value.real:.3f} +- {e.std_error:.3f}")
