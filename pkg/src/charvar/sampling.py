"""Haar-rejection sampler for the relator level set, exact free-group sampling, batch I/O.

Randomness is split by proposal chunk, not by worker: chunk ``c`` always draws
from ``Philox(key=seed).jumped(c)``. Workers only decide which chunks are
computed concurrently, so a fixed ``(seed, chunk_size)`` yields the same
samples for any thread count.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .representations import (CenterCharacter, Representation, mcg_act_stack,
                              relator_defect_stack, twist_stack)
from .unitary import haar_sample
from .words import Automorphism, Presentation, verify_automorphism

FORMAT = "charvar-batch/1"
DEFAULT_CHUNK = 1 << 14


class SamplingError(RuntimeError):
    pass


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for proposal chunk ``chunk`` of master ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)).jumped(chunk))


@dataclass(frozen=True, eq=False)
class SampleBatch:
    presentation: Presentation
    n: int
    epsilon: float | None
    seed: int
    matrices: np.ndarray  # (N, k, n, n)
    defects: np.ndarray  # (N,), NaN for free presentations
    proposals: int
    indices: np.ndarray | None = None  # global proposal index of each sample

    def __len__(self):
        return self.matrices.shape[0]

    def __getitem__(self, i: int) -> Representation:
        return Representation(self.presentation, self.matrices[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def acceptance_rate(self) -> float:
        return len(self) / self.proposals if self.proposals else float("nan")

    def replace(self, matrices: np.ndarray) -> "SampleBatch":
        if self.presentation.is_surface:
            defects = relator_defect_stack(matrices, self.presentation)
        else:
            defects = np.full(matrices.shape[0], np.nan)
        return SampleBatch(self.presentation, self.n, self.epsilon, self.seed,
                           matrices, defects, self.proposals, self.indices)

    def twisted(self, u: CenterCharacter) -> "SampleBatch":
        return self.replace(twist_stack(self.matrices, u))

    def acted(self, phi: Automorphism) -> "SampleBatch":
        return self.replace(mcg_act_stack(self.matrices, phi, self.presentation))

    def head(self, count: int) -> "SampleBatch":
        if count >= len(self):
            return self
        idx = None if self.indices is None else self.indices[:count]
        proposals = self.proposals if idx is None else int(idx[-1]) + 1
        return SampleBatch(self.presentation, self.n, self.epsilon, self.seed,
                           self.matrices[:count], self.defects[:count], proposals, idx)


def propose(presentation: Presentation, n: int, count: int, rng: np.random.Generator):
    """``count`` independent Haar tuples and their relator defects (NaN for free groups)."""
    mats = haar_sample(n, rng, size=(count, presentation.rank))
    if presentation.is_surface:
        return mats, relator_defect_stack(mats, presentation)
    return mats, np.full(count, np.nan)


def _chunk(presentation, n, epsilon, seed, chunk, chunk_size):
    mats, defects = propose(presentation, n, chunk_size, chunk_generator(seed, chunk))
    if epsilon is None:
        keep = np.arange(chunk_size)
    else:
        keep = np.flatnonzero(defects <= epsilon)
    return keep, mats[keep], defects[keep]


def sample_batch(presentation: Presentation, n: int, samples: int, seed: int,
                 epsilon: float | None = None, threads: int = 1,
                 chunk_size: int = DEFAULT_CHUNK, proposal_cap: int | None = None) -> SampleBatch:
    """Accept Haar proposals with relator defect <= epsilon until ``samples`` are collected.

    ``proposals`` counts proposals up to and including the last accepted one.
    Free presentations take every proposal (exact product Haar measure).
    """
    if samples < 1:
        raise SamplingError("samples must be >= 1")
    if presentation.is_surface:
        if epsilon is None or epsilon <= 0:
            raise SamplingError("surface sampling needs epsilon > 0")
    else:
        epsilon = None
    kept_idx, kept_mats, kept_def = [], [], []
    found = 0
    next_chunk = 0
    threads = max(1, int(threads))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while found < samples:
            if proposal_cap is not None and next_chunk * chunk_size >= proposal_cap:
                tried = next_chunk * chunk_size
                raise SamplingError(
                    f"proposal cap {proposal_cap} exhausted with {found}/{samples} accepted; "
                    f"estimated acceptance rate {found / tried:.3g}")
            chunks = range(next_chunk, next_chunk + threads)
            results = pool.map(lambda c: _chunk(presentation, n, epsilon, seed, c, chunk_size),
                               chunks)
            for c, (keep, mats, defects) in zip(chunks, results):
                if found >= samples:
                    break
                kept_idx.append(keep + c * chunk_size)
                kept_mats.append(mats)
                kept_def.append(defects)
                found += len(keep)
            next_chunk += threads
    idx = np.concatenate(kept_idx)[:samples]
    mats = np.concatenate(kept_mats)[:samples]
    defects = np.concatenate(kept_def)[:samples]
    return SampleBatch(presentation, n, epsilon, int(seed), mats, defects, int(idx[-1]) + 1,
                       idx)


def sample_representation(presentation: Presentation, n: int, epsilon: float,
                          rng: np.random.Generator, chunk_size: int = 4096,
                          proposal_cap: int = 10 ** 8) -> Representation:
    """First accepted Haar tuple with relator defect <= epsilon."""
    if not presentation.is_surface:
        raise SamplingError("use sample_free for free presentations")
    if epsilon <= 0:
        raise SamplingError("epsilon must be positive")
    tried = 0
    while tried < proposal_cap:
        count = min(chunk_size, proposal_cap - tried)
        mats, defects = propose(presentation, n, count, rng)
        hits = np.flatnonzero(defects <= epsilon)
        if hits.size:
            return Representation(presentation, mats[hits[0]])
        tried += count
    raise SamplingError(f"proposal cap {proposal_cap} exhausted; estimated acceptance rate "
                        f"below {1 / proposal_cap:.3g}")


def sample_free(presentation: Presentation, n: int, rng: np.random.Generator) -> Representation:
    if presentation.is_surface:
        raise SamplingError("sample_free needs a free presentation")
    return Representation(presentation, haar_sample(n, rng, size=presentation.rank))


def acceptance_counts(presentation: Presentation, n: int, epsilons, proposals: int, seed: int,
                      chunk_size: int = DEFAULT_CHUNK) -> dict[float, int]:
    """Accepted counts at several tolerances over one shared proposal stream."""
    counts = {float(e): 0 for e in epsilons}
    done, chunk = 0, 0
    while done < proposals:
        size = min(chunk_size, proposals - done)
        _, defects = propose(presentation, n, size, chunk_generator(seed, chunk))
        for e in counts:
            counts[e] += int(np.count_nonzero(defects <= e))
        done += size
        chunk += 1
    return counts


def verified(phis: list[Automorphism], presentation: Presentation) -> list[Automorphism]:
    for phi in phis:
        report = verify_automorphism(phi, presentation)
        if not report.ok:
            raise SamplingError(f"automorphism {phi.label!r} failed verification: {report}")
    return phis


# ---------------------------------------------------------------------------
# JSON-lines persistence


def _matrix_json(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def write_batch(batch: SampleBatch, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"format": FORMAT, "presentation": batch.presentation.to_dict(), "n": batch.n,
              "epsilon": batch.epsilon, "seed": batch.seed, "proposals": batch.proposals,
              "count": len(batch)}
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for i in range(len(batch)):
            d = batch.defects[i]
            index = i if batch.indices is None else int(batch.indices[i])
            rec = {"index": index, "defect": None if math.isnan(d) else float(d),
                   "matrices": [_matrix_json(m) for m in batch.matrices[i]]}
            fh.write(json.dumps(rec) + "\n")
    return path


def read_batch(path) -> SampleBatch:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != FORMAT:
            raise SamplingError(f"{path}: not a {FORMAT} file")
        presentation = Presentation.from_dict(header["presentation"])
        mats, defects, indices = [], [], []
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            a = np.array(rec["matrices"], dtype=float)
            mats.append(a[..., 0] + 1j * a[..., 1])
            defects.append(np.nan if rec["defect"] is None else rec["defect"])
            indices.append(rec["index"])
    n = header["n"]
    mats = np.array(mats).reshape(-1, presentation.rank, n, n)
    return SampleBatch(presentation, n, header["epsilon"], header["seed"], mats,
                       np.array(defects, dtype=float), header["proposals"],
                       np.array(indices, dtype=np.int64))
