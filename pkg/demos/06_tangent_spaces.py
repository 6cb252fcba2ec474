"""
Tangent spaces and the cup-product form
=======================================

At a sampled point pushed onto the relator (polish), the cocycles Z^1,
coboundaries B^1 and the quotient H^1 have dimensions (2g-1)d, d and
(2g-2)d with d = n^2 - 1. The cup product pairs H^1 nondegenerately.
"""
import numpy as np

from charvar.cohomology import dimension_report, relator_gradient_check, symplectic_matrix
from charvar.representations import commutant_dimension, polish, relator_defect
from charvar.sampling import sample_representation
from charvar.words import Presentation

rng = np.random.default_rng(6)
for genus, n, eps in ((2, 2, 0.2), (2, 3, 1.0), (3, 2, 0.2)):
    rho = sample_representation(Presentation.surface(genus), n, eps, rng)
    q = polish(rho, max_start_defect=max(0.5, eps))
    print(f"g={genus} n={n}: defect {relator_defect(rho):.3f} -> {relator_defect(q):.1e}, "
          f"commutant dim {commutant_dimension(q)}")
    rec = dimension_report(q)
    sm = symplectic_matrix(q)
    print("   dims", rec["dims"], f"skew {sm.skew_residual:.1e}",
          f"sv ratio {sm.conditioning:.3f}")
    e3, e4 = relator_gradient_check(q, 1, rng.standard_normal(n * n - 1))
    print(f"   first-order residual at t=1e-3, 1e-4: {e3:.2e}, {e4:.2e} (ratio {e3 / e4:.0f})")
