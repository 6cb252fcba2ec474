"""
Words, homology classes and surface automorphisms
=================================================

Loops on a closed genus-2 surface are words in a1, b1, a2, b2. Uppercase
letters are inverses.
"""
from charvar.words import (Presentation, abelianization_matrix, mcg_generators, parse_word,
                           total_homology_class, verify_automorphism)

p = Presentation.surface(2)
print("relator:", p.relator.format(p))

# free reduction happens on parse
w = parse_word("a1 b1 B1 a2 A2 b2", p)
print("reduced:", w.format(p))

# mod-n homology classes decide how trace functions react to center twists
for text in ("a1", "a1 b1 A1 B1", "a1 a1"):
    c = total_homology_class([parse_word(text, p)], 2, p.rank)
    print(f"[{text}] mod 2 = {c.coords}  zero={c.is_zero()}")

# the shipped handle twists fix the relator letter for letter
for phi in mcg_generators(2):
    report = verify_automorphism(phi, p)
    print(phi.label, "b1 ->", phi(parse_word("b1", p)).format(p), "ok" if report.ok else report)

# on homology they act by integer matrices of determinant one
print(abelianization_matrix(mcg_generators(2)[0]))
