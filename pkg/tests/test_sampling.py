import numpy as np
import pytest

from charvar.representations import relator_defect
from charvar.sampling import (SampleBatch, SamplingError, acceptance_counts, read_batch,
                              sample_batch, sample_free, sample_representation, write_batch)
from charvar.unitary import is_special_unitary
from charvar.words import Presentation

from conftest import SEED, surface_batch

G2 = Presentation.surface(2)
F2 = Presentation.free(2)


def test_sample_representation_postcondition(rng):
    for eps in (0.5, 0.2):
        rho = sample_representation(G2, 2, eps, rng)
        assert relator_defect(rho) <= eps
        assert is_special_unitary(rho.matrices)


def test_sample_representation_errors(rng):
    with pytest.raises(SamplingError):
        sample_representation(G2, 2, 0.0, rng)
    with pytest.raises(SamplingError):
        sample_representation(F2, 2, 0.2, rng)
    with pytest.raises(SamplingError, match="acceptance rate"):
        sample_representation(G2, 3, 1e-6, rng, chunk_size=1000, proposal_cap=2000)


def test_batch_postconditions():
    b = surface_batch(2, 2, 200, 0.2)
    assert len(b) == 200
    assert np.all(b.defects <= 0.2)
    assert 0 < b.acceptance_rate <= 1
    recomputed = np.array([relator_defect(r) for r in b])
    assert np.array_equal(recomputed, b.defects)


def test_batch_reproducible():
    a = sample_batch(G2, 2, 50, 7, epsilon=0.2, chunk_size=4096)
    b = sample_batch(G2, 2, 50, 7, epsilon=0.2, chunk_size=4096)
    assert np.array_equal(a.matrices, b.matrices)
    assert a.proposals == b.proposals
    c = sample_batch(G2, 2, 50, 8, epsilon=0.2, chunk_size=4096)
    assert not np.array_equal(a.matrices, c.matrices)


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_thread_independent(threads):
    ref = sample_batch(G2, 2, 60, 11, epsilon=0.3, chunk_size=2048)
    other = sample_batch(G2, 2, 60, 11, epsilon=0.3, threads=threads, chunk_size=2048)
    assert np.array_equal(ref.matrices, other.matrices)
    assert np.array_equal(ref.indices, other.indices)
    assert ref.proposals == other.proposals


def test_head_prefix():
    b = surface_batch(2, 2, 200, 0.2)
    h = b.head(50)
    assert np.array_equal(h.matrices, b.matrices[:50])
    assert h.proposals == h.indices[-1] + 1
    small = sample_batch(G2, 2, 50, SEED, epsilon=0.2)
    assert np.array_equal(small.matrices, h.matrices)
    assert small.proposals == h.proposals


def test_proposal_cap():
    with pytest.raises(SamplingError, match="acceptance rate"):
        sample_batch(G2, 3, 10, 1, epsilon=0.05, chunk_size=1024, proposal_cap=4096)


def test_free_batch():
    b = sample_batch(F2, 2, 500, 3)
    assert b.acceptance_rate == 1.0
    assert np.all(np.isnan(b.defects))
    assert is_special_unitary(b.matrices)


def test_free_single(rng):
    rho = sample_free(F2, 3, rng)
    assert rho.matrices.shape == (2, 3, 3)
    with pytest.raises(SamplingError):
        sample_free(G2, 2, rng)


def test_free_trace_mean():
    # Haar character oracle: E tr U = 0; 4e-3 is ~4 standard errors at 1e6
    b = sample_batch(F2, 2, 10 ** 6, SEED, chunk_size=1 << 16)
    t = np.trace(b.matrices[:, 0], axis1=-2, axis2=-1)
    assert abs(t.mean()) <= 4e-3


def test_free_batch_bit_identical():
    a = sample_batch(F2, 2, 1000, 5)
    b = sample_batch(F2, 2, 1000, 5)
    assert np.array_equal(a.matrices, b.matrices)


def test_acceptance_counts_shared_stream():
    counts = acceptance_counts(G2, 2, [0.5, 0.2, 0.1], 50000, seed=9)
    assert counts[0.5] >= counts[0.2] >= counts[0.1]
    b = sample_batch(G2, 2, counts[0.2], 9, epsilon=0.2)
    assert b.proposals <= 50000


@pytest.mark.slow
def test_half_epsilon_strictly_smaller():
    # Monte Carlo comparison over 1e7 proposals from one stream
    proposals = 10 ** 7
    counts = acceptance_counts(G2, 2, [0.2, 0.1], proposals, seed=SEED)
    assert 0 < counts[0.1] < counts[0.2]
    p1, p2 = counts[0.2] / proposals, counts[0.1] / proposals
    se = np.sqrt(p1 / proposals)
    assert p1 - p2 > 4 * se


def test_json_round_trip(tmp_path):
    b = surface_batch(2, 2, 200, 0.2).head(20)
    path = write_batch(b, tmp_path / "batch.jsonl")
    again = read_batch(path)
    assert np.array_equal(again.matrices, b.matrices)
    assert np.array_equal(again.defects, b.defects)
    assert np.array_equal(again.indices, b.indices)
    assert (again.presentation, again.n, again.epsilon, again.seed, again.proposals) == \
        (b.presentation, b.n, b.epsilon, b.seed, b.proposals)
    assert path.read_text() == write_batch(again, tmp_path / "b2.jsonl").read_text()


def test_json_free_round_trip(tmp_path):
    b = sample_batch(F2, 2, 5, 1)
    again = read_batch(write_batch(b, tmp_path / "f.jsonl"))
    assert np.array_equal(again.matrices, b.matrices)
    assert np.all(np.isnan(again.defects))


def test_read_rejects_foreign(tmp_path):
    p = tmp_path / "x.jsonl"
    p.write_text('{"format": "other"}\n')
    with pytest.raises(SamplingError):
        read_batch(p)


def test_twisted_and_acted_batches():
    from charvar.representations import CenterCharacter
    from charvar.words import mcg_generators

    b = surface_batch(2, 2, 200, 0.2)
    tw = b.twisted(CenterCharacter((1, 1, 0, 1), 2))
    assert np.max(np.abs(tw.defects - b.defects)) <= 1e-15
    for phi in mcg_generators(2):
        assert np.max(np.abs(b.acted(phi).defects - b.defects)) <= 1e-14
    assert isinstance(tw, SampleBatch)
