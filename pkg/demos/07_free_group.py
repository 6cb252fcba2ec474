"""
Free groups: exact Haar sampling
================================

With no relator the invariant measure is the Haar product measure, sampled
exactly. The same orthogonality statements hold.
"""
from charvar.observables import LoopTuple, inner_product, mc_mean, variance
from charvar.sampling import sample_batch
from charvar.words import Presentation, parse_word

p = Presentation.free(2)
batch = sample_batch(p, 2, 200000, seed=7)
print("acceptance", batch.acceptance_rate)

x1, x2 = parse_word("x1", p), parse_word("x2", p)
m = mc_mean(batch, LoopTuple.parse("x1", p))
print(f"mean t_x1       {m.value.real:+.4f} +- {m.std_error:.4f}")
e = inner_product(batch, LoopTuple.parse("x1", p), x2)
print(f"<t_x1, t_x2>    {e.value.real:+.4f} +- {e.std_error:.4f}")
comm = LoopTuple.parse("x1 x2 X1 X2", p)
print(f"var t_[x1,x2]   {variance(batch, comm).value.real:.4f}")
for a in (x1, x2):
    e = inner_product(batch, comm, a, use_normalized=True, estimator="twist_averaged")
    print(f"<t^_[x1,x2], t_{a.format(p)}> = {abs(e.value):.1e}")
