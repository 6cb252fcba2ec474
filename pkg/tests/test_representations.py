import numpy as np
import pytest
import scipy.linalg

from charvar.representations import (CenterCharacter, PolishError, Representation,
                                     RepresentationError, all_characters, commutant_dimension,
                                     evaluate_word, mcg_act, polish, polish_displacement,
                                     relator_defect, twist, word_class)
from charvar.sampling import sample_representation
from charvar.unitary import center_phase, dagger, haar_sample, is_special_unitary
from charvar.words import (Automorphism, Presentation, Word, free_reduce, mcg_generators,
                           parse_word, surface_relator)

G2 = Presentation.surface(2)


def random_rep(p, n, rng):
    return Representation(p, haar_sample(n, rng, size=p.rank))


def product_oracle(rho, letters):
    """Independent word product: explicit loop with matrix inverses."""
    out = np.eye(rho.n, dtype=complex)
    for x in letters:
        m = rho.matrices[abs(x) - 1]
        out = out @ (m if x > 0 else np.linalg.inv(m))
    return out


class TestEvaluate:
    def test_empty(self, rng):
        rho = random_rep(G2, 3, rng)
        assert np.array_equal(evaluate_word(rho, Word()), np.eye(3))

    def test_unreduced(self, rng):
        rho = random_rep(G2, 2, rng)
        assert np.max(np.abs(evaluate_word(rho, (1, -1)) - np.eye(2))) <= 1e-14

    def test_commutator_with_identity(self, rng):
        m = haar_sample(2, rng, size=4)
        m[1] = np.eye(2)
        rho = Representation(G2, m)
        w = parse_word("a1 b1 A1 B1", G2)
        assert np.max(np.abs(evaluate_word(rho, w) - np.eye(2))) <= 1e-14

    def test_homomorphism(self, rng):
        rho = random_rep(G2, 3, rng)
        for _ in range(20):
            v = free_reduce(rng.integers(1, 5, 8) * rng.choice([-1, 1], 8))
            u = free_reduce(rng.integers(1, 5, 8) * rng.choice([-1, 1], 8))
            lhs = evaluate_word(rho, v * u)
            rhs = evaluate_word(rho, v) @ evaluate_word(rho, u)
            assert np.max(np.abs(lhs - rhs)) <= 1e-13


class TestDefect:
    def test_trivial(self):
        assert relator_defect(Representation.trivial(G2, 2)) == 0

    def test_b_identity(self, rng):
        m = haar_sample(3, rng, size=4)
        m[1] = m[3] = np.eye(3)
        assert relator_defect(Representation(G2, m)) <= 1e-15

    @pytest.mark.parametrize("genus,n", [(2, 2), (2, 3), (3, 2)])
    def test_matches_oracle(self, genus, n, rng):
        p = Presentation.surface(genus)
        for _ in range(10):
            rho = random_rep(p, n, rng)
            R = product_oracle(rho, surface_relator(genus).letters)
            oracle = np.sqrt(np.sum(np.abs(R - np.eye(n)) ** 2))
            assert abs(relator_defect(rho) - oracle) <= 1e-14

    def test_free_rejected(self, rng):
        with pytest.raises(RepresentationError):
            relator_defect(random_rep(Presentation.free(2), 2, rng))


class TestTwist:
    def test_zero(self, rng):
        rho = random_rep(G2, 2, rng)
        assert np.array_equal(twist(rho, CenterCharacter((0, 0, 0, 0), 2)).matrices, rho.matrices)

    def test_negates_a1(self, rng):
        rho = random_rep(G2, 2, rng)
        tw = twist(rho, CenterCharacter((1, 0, 0, 0), 2))
        assert np.array_equal(tw[1], -rho[1])
        assert np.array_equal(tw.matrices[1:], rho.matrices[1:])

    @pytest.mark.parametrize("n", [2, 3])
    def test_defect_invariant(self, n, rng):
        rho = random_rep(G2, n, rng)
        d0 = relator_defect(rho)
        for u in all_characters(G2, n):
            assert abs(relator_defect(twist(rho, u)) - d0) <= 1e-15

    def test_group_action_exact_n2(self, rng):
        rho = random_rep(G2, 2, rng)
        chars = list(all_characters(G2, 2))
        for u in chars:
            for v in chars:
                assert np.array_equal(twist(twist(rho, u), v).matrices, twist(rho, u + v).matrices)

    def test_word_law(self, rng):
        rho = random_rep(G2, 3, rng)
        u = CenterCharacter((1, 2, 0, 1), 3)
        for _ in range(10):
            w = free_reduce(rng.integers(1, 5, 9) * rng.choice([-1, 1], 9))
            phase = center_phase(3, u.pair(word_class(w, G2, 3)))
            assert np.max(np.abs(evaluate_word(twist(rho, u), w)
                                 - phase * evaluate_word(rho, w))) <= 1e-13

    def test_modulus_mismatch(self, rng):
        with pytest.raises(RepresentationError):
            CenterCharacter((1, 0, 0, 0), 2) + CenterCharacter((1, 0, 0, 0), 3)
        with pytest.raises(RepresentationError):
            twist(random_rep(G2, 2, rng), CenterCharacter((1, 0), 2))


class TestMcgAction:
    def test_identity(self, rng):
        rho = random_rep(G2, 2, rng)
        ids = tuple(G2.generators())
        assert np.array_equal(mcg_act(rho, Automorphism(ids, "id", ids)).matrices, rho.matrices)

    def test_twist_a1_definition(self, rng):
        rho = random_rep(G2, 2, rng)
        acted = mcg_act(rho, mcg_generators(2)[0])
        assert np.max(np.abs(acted[2] - rho[2] @ dagger(rho[1]))) <= 1e-15
        assert np.array_equal(acted[1], rho[1])

    @pytest.mark.parametrize("genus,n", [(2, 2), (2, 3), (3, 2)])
    def test_defect_preserved(self, genus, n, rng):
        p = Presentation.surface(genus)
        for _ in range(20):
            rho = random_rep(p, n, rng)
            for phi in mcg_generators(genus):
                assert abs(relator_defect(mcg_act(rho, phi)) - relator_defect(rho)) <= 1e-14

    def test_functoriality(self, rng):
        rho = random_rep(G2, 2, rng)
        for phi in mcg_generators(2):
            acted = mcg_act(rho, phi)
            for _ in range(10):
                L = int(rng.integers(1, 21))
                w = free_reduce(rng.integers(1, 5, L) * rng.choice([-1, 1], L))
                assert np.max(np.abs(evaluate_word(acted, w)
                                     - evaluate_word(rho, phi.inverse()(w)))) <= 1e-12

    def test_unverified_rejected(self, rng):
        bad = Automorphism(tuple(parse_word(t, G2) for t in ("a1 a1", "b1", "a2", "b2")), "sq")
        with pytest.raises(RepresentationError):
            mcg_act(random_rep(G2, 2, rng), bad)


def commutant_oracle(rho):
    """Null space of X -> (X M_j - M_j X)_j over the elementary basis E_ab."""
    n = rho.n
    cols = []
    for a in range(n):
        for b in range(n):
            e = np.zeros((n, n), complex)
            e[a, b] = 1
            cols.append(np.concatenate([(e @ m - m @ e).ravel() for m in rho.matrices]))
    return scipy.linalg.null_space(np.array(cols).T, rcond=1e-8).shape[1]


class TestCommutant:
    def test_trivial(self):
        assert commutant_dimension(Representation.trivial(G2, 3)) == 9

    def test_generic_irreducible(self, rng):
        p = G2
        for _ in range(5):
            rho = sample_representation(p, 2, 0.3, rng)
            assert commutant_dimension(rho) == 1 == commutant_oracle(rho)

    def test_diagonal(self, rng):
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 4))
        mats = np.array([np.diag([z, np.conj(z)]) for z in phases])
        rho = Representation(G2, mats)
        assert commutant_dimension(rho) >= 2
        assert commutant_dimension(rho) == commutant_oracle(rho)

    def test_block_reducible(self, rng):
        mats = np.zeros((4, 3, 3), complex)
        mats[:, :2, :2] = haar_sample(2, rng, size=4)
        mats[:, 2, 2] = 1
        rho = Representation(G2, mats)
        assert commutant_dimension(rho) == commutant_oracle(rho) == 2


class TestPolish:
    @pytest.mark.parametrize("genus,n,eps", [(2, 2, 0.2), (2, 3, 0.5), (3, 2, 0.2)])
    def test_converges(self, genus, n, eps, rng):
        p = Presentation.surface(genus)
        rho = sample_representation(p, n, eps, rng)
        q = polish(rho)
        assert relator_defect(q) <= 1e-12
        assert is_special_unitary(q.matrices)
        assert np.array_equal(q.matrices[:-2], rho.matrices[:-2])

    def test_fixed_point(self, rng):
        q = polish(sample_representation(G2, 2, 0.2, rng))
        again = polish(q)
        assert np.max(np.abs(again.matrices - q.matrices)) <= 1e-14

    def test_radius(self, rng):
        rho = random_rep(G2, 2, rng)
        while relator_defect(rho) <= 0.5:
            rho = random_rep(G2, 2, rng)
        with pytest.raises(PolishError):
            polish(rho)

    def test_displacement_bounded(self, rng):
        worst = 0.0
        for _ in range(20):
            rho = sample_representation(G2, 2, 0.2, rng)
            q = polish(rho)
            worst = max(worst, polish_displacement(rho, q) / relator_defect(rho))
        # empirical constant; logged by the harness, loose guard here
        assert worst < 20
