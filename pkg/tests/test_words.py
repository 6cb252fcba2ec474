import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.words import (Automorphism, HomologyClass, Presentation, Word, WordError,
                           abelianization_matrix, apply_automorphism, commutator, cyclic_reduce,
                           free_reduce, identity_automorphism, mcg_generators, nielsen_generators,
                           pair_character, parse_word, surface_relator, total_homology_class,
                           verify_automorphism)

G2 = Presentation.surface(2)
F2 = Presentation.free(2)


def w(text, p=G2):
    return parse_word(text, p)


def letters(rank=4, max_size=20):
    return st.lists(st.integers(1, rank).flatmap(lambda j: st.sampled_from([j, -j])),
                    max_size=max_size)


class TestFreeReduce:
    def test_cancellation(self):
        assert w("a1 A1") == Word()

    def test_inner_cancellation(self):
        assert w("a1 b1 B1 a1").format() == "a1 a1"

    def test_reduced_unchanged(self):
        assert w("a1 b2").format() == "a1 b2"

    def test_out_of_range(self):
        with pytest.raises(WordError):
            free_reduce([1, 5], G2)
        with pytest.raises(WordError):
            parse_word("a3", G2)
        with pytest.raises(WordError):
            parse_word("x1", G2)

    @given(letters())
    def test_idempotent_and_shrinking(self, ls):
        r = free_reduce(ls)
        assert free_reduce(r.letters) == r
        assert len(r) <= len(ls)
        assert all(a != -b for a, b in zip(r.letters, r.letters[1:]))

    @given(letters())
    def test_round_trip_text(self, ls):
        r = free_reduce(ls)
        assert parse_word(r.format(G2), G2) == r

    def test_identity_text(self):
        assert Word().format() == "1"
        assert parse_word("1", G2) == Word()
        assert parse_word("", G2) == Word()

    def test_free_names(self):
        assert parse_word("x1 X2", F2).format(F2) == "x1 X2"


class TestRelator:
    def test_genus_two(self):
        R = surface_relator(2)
        assert R.format() == "a1 b1 A1 B1 a2 b2 A2 B2"
        assert len(R) == 8

    def test_genus_three(self):
        assert len(surface_relator(3)) == 12

    def test_genus_one_rejected(self):
        with pytest.raises(WordError):
            surface_relator(1)
        with pytest.raises(WordError):
            Presentation.surface(1)

    def test_reduced(self):
        R = surface_relator(4)
        assert free_reduce(R.letters) == R


class TestHomology:
    def test_single_generator(self):
        assert total_homology_class([w("a1")], 2, 4).coords == (1, 0, 0, 0)

    def test_commutator_vanishes(self):
        c = total_homology_class([commutator(w("a1"), w("b1"))], 5, 4)
        assert c.is_zero()

    def test_double_generator_mod_two(self):
        assert total_homology_class([w("a1"), w("a1")], 2, 4).is_zero()

    @given(st.lists(letters(), min_size=1, max_size=3), st.lists(letters(), min_size=1, max_size=3),
           st.integers(2, 6))
    def test_additive(self, gs, ds, n):
        gamma = [free_reduce(x) for x in gs]
        delta = [free_reduce(x) for x in ds]
        lhs = total_homology_class(gamma + delta, n, 4)
        rhs = total_homology_class(gamma, n, 4) + total_homology_class(delta, n, 4)
        assert lhs == rhs

    @given(letters(), letters(), st.integers(2, 5))
    def test_commutators_and_powers_vanish(self, v, u, n):
        a, b = free_reduce(v), free_reduce(u)
        assert total_homology_class([commutator(a, b), a ** n], n, 4).is_zero()

    def test_pairing(self):
        e1 = HomologyClass((1, 0, 0, 0), 2)
        assert pair_character((1, 0, 0, 0), e1) == 1
        assert pair_character((1, 1, 0, 1), HomologyClass((0, 0, 0, 0), 2)) == 0
        assert pair_character((1, 1), HomologyClass((1, 1), 2)) == 0

    def test_pairing_modulus_mismatch(self):
        class U:
            coords, n = (1, 0), 3
        with pytest.raises(WordError):
            pair_character(U(), HomologyClass((1, 1), 2))

    def test_entries_reduced(self):
        assert HomologyClass((5, -1), 3).coords == (2, 2)


class TestAutomorphisms:
    def test_mcg_count(self):
        assert len(mcg_generators(2)) == 4
        assert len(mcg_generators(3)) == 6
        with pytest.raises(WordError):
            mcg_generators(1)

    def test_twist_on_b1(self):
        ta1 = mcg_generators(2)[0]
        assert ta1.label == "twist-a1"
        assert apply_automorphism(ta1, w("b1")).format() == "b1 a1"
        assert apply_automorphism(ta1, w("B1")).format() == "A1 B1"

    def test_twist_fixes_relator_letterwise(self):
        # oracle: expand [a1, b1 a1][a2, b2] symbolically and reduce
        R = surface_relator(2)
        a1, b1 = w("a1"), w("b1")
        expanded = free_reduce(commutator(a1, free_reduce(b1.letters + a1.letters)).letters
                               + commutator(w("a2"), w("b2")).letters)
        assert expanded == R
        for phi in mcg_generators(2):
            assert apply_automorphism(phi, R) == R

    @pytest.mark.parametrize("genus", [2, 3])
    def test_shipped_verify(self, genus):
        p = Presentation.surface(genus)
        for phi in mcg_generators(genus):
            report = verify_automorphism(phi, p)
            assert report.relator_ok and report.invertible_ok

    def test_identity_ok(self):
        report = verify_automorphism(identity_automorphism(4), G2)
        assert report.relator_ok and report.invertible_ok
        for text in ("a1 b2", "B1 a2 a2"):
            assert apply_automorphism(identity_automorphism(4), w(text)) == w(text)

    def test_square_map_not_invertible(self):
        images = (w("a1 a1"), w("b1"), w("a2"), w("b2"))
        report = verify_automorphism(Automorphism(images, "square"), G2)
        assert not report.invertible_ok
        wrong_inverse = Automorphism(images, "square", images)
        assert not verify_automorphism(wrong_inverse, G2).invertible_ok

    def test_relator_check_rejects(self):
        swap = Automorphism((w("b1"), w("a1"), w("a2"), w("b2")), "swap",
                            (w("b1"), w("a1"), w("a2"), w("b2")))
        report = verify_automorphism(swap, G2)
        assert report.invertible_ok and not report.relator_ok

    def test_relator_conjugate_accepted(self):
        # inner automorphism by a1 sends R to a1 R A1
        c = w("a1")
        images = tuple(c * x * c.inverse() for x in G2.generators())
        inv = tuple(c.inverse() * x * c for x in G2.generators())
        assert verify_automorphism(Automorphism(images, "inn", inv), G2).ok

    def test_nielsen(self):
        gens = nielsen_generators(2)
        assert len(gens) >= 5
        labels = [g.label for g in gens]
        shear = gens[labels.index("nielsen-12")]
        assert apply_automorphism(shear, parse_word("x1", F2)).format(F2) == "x1 x2"
        inv = gens[labels.index("invert-1")]
        for x in F2.generators():
            assert apply_automorphism(inv, apply_automorphism(inv, x)) == x
        for phi in gens:
            assert verify_automorphism(phi, F2).ok
        with pytest.raises(WordError):
            nielsen_generators(1)

    @settings(max_examples=50)
    @given(letters(), letters())
    def test_composition_and_inverses(self, v, u):
        a, b = free_reduce(v), free_reduce(u)
        phis = mcg_generators(2)
        for phi in phis:
            assert phi(a.inverse()) == phi(a).inverse()
            assert phi(a * b) == phi(a) * phi(b)
            psi = phis[1]
            assert phi.compose(psi)(a) == phi(psi(a))

    @pytest.mark.parametrize("p", [G2, Presentation.surface(3), F2, Presentation.free(3)])
    def test_abelianized_action_invertible(self, p):
        gens = mcg_generators(p.genus) if p.is_surface else nielsen_generators(p.rank)
        rng = np.random.default_rng(0)
        for phi in gens:
            m = abelianization_matrix(phi)
            assert round(abs(np.linalg.det(m))) == 1
            for _ in range(20):
                word = free_reduce(rng.integers(1, p.rank + 1, 10) * rng.choice([-1, 1], 10))
                for n in (2, 3):
                    c = total_homology_class([word], n, p.rank).array()
                    c_img = total_homology_class([phi(word)], n, p.rank).array()
                    assert np.array_equal((m @ c) % n, c_img)

    def test_cyclic_reduce(self):
        assert cyclic_reduce(w("a1 b1 a2 A1")).format() == "b1 a2"

    def test_serialization_round_trip(self):
        for phi in mcg_generators(2):
            again = Automorphism.from_dict(phi.to_dict(G2), G2)
            assert again == phi
