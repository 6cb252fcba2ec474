"""Numerical laboratory for SU(n) character varieties of closed surface groups.

Haar-rejection sampling near Hom(pi, SU(n)), center twists, trace functions,
mapping class group actions, and the cup-product symplectic form on H^1.
"""
from .cohomology import (TangentCocycle, coboundary_space, cocycle_space, cup_symplectic,
                         h1_representatives, symplectic_matrix)
from .observables import (Estimate, LoopTuple, inner_product, mc_mean, normalized_trace,
                          trace_function, twist_averaged_mean, variance)
from .representations import (CenterCharacter, Representation, commutant_dimension,
                              evaluate_word, mcg_act, polish, relator_defect, twist)
from .sampling import SampleBatch, sample_batch, sample_free, sample_representation
from .unitary import (adjoint_action, center_root, frobenius_distance, haar_sample, su_basis)
from .words import (Automorphism, HomologyClass, Presentation, Word, apply_automorphism,
                    free_reduce, mcg_generators, nielsen_generators, pair_character,
                    parse_word, surface_relator, total_homology_class, verify_automorphism)

__version__ = "0.1.0"
