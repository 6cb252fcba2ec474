"""Verification suites over sample batches, and RunReport emission (JSON + CSV)."""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.stats

from .. import cohomology
from ..observables import (Estimate, LoopTuple, inner_product, mc_mean, trace_values,
                           twist_averaged_mean, variance)
from ..representations import (CenterCharacter, PolishError, all_characters, commutant_dimension,
                               polish, polish_displacement, relator_defect, twist)
from ..sampling import SampleBatch, read_batch, sample_batch, verified, write_batch
from ..unitary import lie_dimension
from ..words import Word, apply_automorphism, free_reduce
from .config import ExperimentConfig

log = logging.getLogger(__name__)

SCHEMA = "charvar-report/1"
SUITES = ("lemma", "orthogonality", "symplectic", "mcg", "twist", "free")
CSV_COLUMNS = ("suite", "test", "observable", "estimator", "re", "im", "std_error", "count",
               "threshold", "status")
FRESH_SEED_OFFSET = 1


@dataclass
class TestRecord:
    name: str
    status: str  # pass | fail | flag
    measured: float
    threshold: float | None
    observable: str = ""
    estimate: Estimate | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "measured": self.measured,
             "threshold": self.threshold}
        if self.observable:
            d["observable"] = self.observable
        if self.estimate is not None:
            d["estimate"] = self.estimate.to_dict(self.observable)
        return d


@dataclass
class RunReport:
    suite: str
    config: dict
    acceptance_rate: float
    tests: list[TestRecord] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(t.status == "fail" for t in self.tests)

    def add(self, name, ok, measured, threshold, observable="", estimate=None, flag_only=False):
        status = "pass" if ok else ("flag" if flag_only else "fail")
        if any(t.name == name and t.observable == observable for t in self.tests):
            raise ValueError(f"duplicate test record {name}/{observable}")
        self.tests.append(TestRecord(name, status, float(measured),
                                     None if threshold is None else float(threshold),
                                     observable, estimate))
        return ok

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "suite": self.suite, "config": self.config,
                "acceptance_rate": self.acceptance_rate,
                "tests": [t.to_dict() for t in self.tests],
                "timing": self.timing, "extra": self.extra}

    def csv_rows(self) -> list[list[str]]:
        rows = []
        for t in self.tests:
            e = t.estimate
            if e is None:
                re, im, se, count, est = _fmt(t.measured), "", "", "", ""
            else:
                re, im, se = _fmt(e.value.real), _fmt(e.value.imag), _fmt(e.std_error)
                count, est = str(e.count), e.estimator
            rows.append([self.suite, t.name, t.observable, est, re, im, se, count,
                         "" if t.threshold is None else _fmt(t.threshold), t.status])
        return rows

    def write(self, directory) -> tuple[Path, Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        jpath, cpath = directory / "report.json", directory / "estimates.csv"
        with open(jpath, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)
        with open(cpath, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            w.writerows(self.csv_rows())
        return jpath, cpath


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Sampling


def run_sample(config: ExperimentConfig, path=None) -> Path:
    batch = draw_batch(config)
    return write_batch(batch, path or config.batch_path)


def draw_batch(config: ExperimentConfig, seed: int | None = None) -> SampleBatch:
    return sample_batch(config.presentation, config.n, config.samples,
                        config.seed if seed is None else seed, epsilon=config.epsilon,
                        threads=config.threads, chunk_size=config.chunk_size,
                        proposal_cap=config.proposal_cap)


def load_or_sample(config: ExperimentConfig) -> SampleBatch:
    path = config.batch_path
    if path.exists():
        batch = read_batch(path)
        same = (batch.presentation == config.presentation and batch.n == config.n
                and batch.seed == config.seed and batch.epsilon == config.epsilon
                and len(batch) >= config.samples)
        if same:
            return batch.head(config.samples)
        log.info("batch at %s does not match the config; resampling", path)
    batch = draw_batch(config)
    write_batch(batch, path)
    return batch


# ---------------------------------------------------------------------------
# Loop families


def random_words(presentation, count: int, max_length: int, rng: np.random.Generator,
                 nonzero_class_mod: int | None = None) -> list[Word]:
    out = []
    rank = presentation.rank
    while len(out) < count:
        length = int(rng.integers(1, max_length + 1))
        letters = rng.integers(1, rank + 1, size=length) * rng.choice([-1, 1], size=length)
        w = free_reduce(letters.tolist())
        if w.is_identity():
            continue
        if nonzero_class_mod is not None:
            c = LoopTuple((w,), presentation).homology_class(nonzero_class_mod)
            if c.is_zero():
                continue
        out.append(w)
    return out


def random_loop_tuples(config: ExperimentConfig, salt: int) -> list[LoopTuple]:
    """Deterministic in (seed, salt): 1 to 3 loops of word length <= random_loop_length."""
    rng = np.random.default_rng([config.seed, salt])
    out = []
    for _ in range(config.random_loops):
        s = int(rng.integers(1, 4))
        words = random_words(config.presentation, s, config.random_loop_length, rng)
        out.append(LoopTuple(tuple(words), config.presentation))
    return out


def _loop_family(config: ExperimentConfig, salt: int) -> list[tuple[str, LoopTuple]]:
    named = list(config.loop_tuples().items())
    rand = [(f"random{i}", g) for i, g in enumerate(random_loop_tuples(config, salt))]
    return [(name, g) for name, g in named + rand if g.loops]


# ---------------------------------------------------------------------------
# Suites


def suite_twist(batch: SampleBatch, config: ExperimentConfig, report: RunReport):
    p, n = config.presentation, config.n
    chars = list(all_characters(p, n))
    loops = _loop_family(config, salt=1)
    base_traces = {name: trace_values(batch, g) for name, g in loops}
    classes = {name: g.homology_class(n) for name, g in loops}
    defect_diff, law_err = 0.0, 0.0
    surface = p.is_surface
    for u in chars:
        tw = batch.twisted(u)
        if surface:
            defect_diff = max(defect_diff, float(np.max(np.abs(tw.defects - batch.defects))))
        for name, g in loops:
            zeta = np.exp(2j * np.pi * u.pair(classes[name]) / n)
            err = np.max(np.abs(trace_values(tw, g) - zeta * base_traces[name]))
            law_err = max(law_err, float(err))
    if surface:
        report.add("twist_defect_invariance", defect_diff <= config.tol("twist_defect"),
                   defect_diff, config.tol("twist_defect"))
    report.add("transformation_law", law_err <= config.tol("transformation_law"), law_err,
               config.tol("transformation_law"))
    rng = np.random.default_rng([config.seed, 2])
    partners = [chars[i] for i in rng.choice(len(chars), size=min(8, len(chars)), replace=False)]
    compose_err = 0.0
    for u in chars:
        once = batch.twisted(u)
        for v in partners:
            diff = once.twisted(v).matrices - batch.twisted(u + v).matrices
            compose_err = max(compose_err, float(np.max(np.abs(diff))))
    report.add("twist_composition", compose_err <= config.tol("twist_compose"), compose_err,
               config.tol("twist_compose"))
    report.extra["characters"] = len(chars)


def suite_lemma(batch: SampleBatch, config: ExperimentConfig, report: RunReport):
    p, n = config.presentation, config.n
    rng = np.random.default_rng([config.seed, 3])
    named = [(name, g) for name, g in config.loop_tuples().items()
             if g.loops and not g.homology_class(n).is_zero()]
    seen = {g.format() for _, g in named}
    rand = []
    for w in random_words(p, 4 * config.random_loops, config.random_loop_length, rng, n):
        g = LoopTuple((w,), p)
        if g.format() not in seen and len(rand) < config.random_loops:
            seen.add(g.format())
            rand.append((f"random{len(rand)}", g))
    sigma = config.tol("lemma_sigma")
    exact_tol = config.tol("lemma_exact")
    for name, g in named + rand:
        obs = g.format()
        ta = twist_averaged_mean(batch, g)
        report.add("lemma_exact", abs(ta.value) <= exact_tol, abs(ta.value), exact_tol, obs, ta)
        plain = mc_mean(batch, g)
        report.add("lemma_sampled", abs(plain.value) <= sigma * plain.std_error,
                   plain.zscore(), sigma, obs, plain)


def _trivial_class_loops(config: ExperimentConfig):
    return [(name, g) for name, g in config.loop_tuples().items()
            if g.loops and g.homology_class(config.n).is_zero()]


def suite_orthogonality(batch: SampleBatch, config: ExperimentConfig, report: RunReport):
    p = config.presentation
    sigma = config.tol("positivity_sigma")
    exact_tol = config.tol("orthogonality_exact")
    alphas = p.generators()
    for alpha in alphas:
        obs = alpha.format(p)
        norm = inner_product(batch, LoopTuple((alpha,), p), alpha)
        report.add("alpha_norm_positive", norm.value.real > sigma * norm.std_error,
                   norm.zscore(), sigma, obs, norm)
    for name, g in _trivial_class_loops(config):
        obs = g.format()
        var = variance(batch, g)
        report.add("witness_variance_positive", var.value.real > sigma * var.std_error,
                   var.zscore(), sigma, obs, var)
        centered = inner_product(batch, g, None, use_normalized=True)
        report.add("centering", abs(centered.value) <= config.tol("centering"),
                   abs(centered.value), config.tol("centering"), obs, centered)
        for alpha in alphas:
            pair_obs = f"{obs} | {alpha.format(p)}"
            ta = inner_product(batch, g, alpha, use_normalized=True, estimator="twist_averaged")
            report.add("orthogonality_exact", abs(ta.value) <= exact_tol, abs(ta.value),
                       exact_tol, pair_obs, ta)
            plain = inner_product(batch, g, alpha, use_normalized=True)
            report.add("orthogonality_sampled", plain.zscore() <= sigma, plain.zscore(), sigma,
                       pair_obs, plain, flag_only=True)


def ks_critical_value(n1: int, n2: int, alpha: float) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical value."""
    c = math.sqrt(-0.5 * math.log(alpha / 2))
    return c * math.sqrt((n1 + n2) / (n1 * n2))


def suite_mcg(batch: SampleBatch, config: ExperimentConfig, report: RunReport,
              fresh: SampleBatch | None = None):
    p = config.presentation
    phis = verified(config.automorphism_list(), p)
    loops = _loop_family(config, salt=4)
    if fresh is None:
        fresh = draw_batch(config, seed=config.seed + FRESH_SEED_OFFSET)
    probe = LoopTuple((p.generators()[0],), p)
    fresh_probe = trace_values(fresh, probe).real
    alpha_crit = config.tol("ks_alpha")
    sigma = config.tol("mcg_equivariance_sigma")
    for phi in phis:
        acted = batch.acted(phi)
        inv = phi.inverse()
        if p.is_surface:
            dd = float(np.max(np.abs(acted.defects - batch.defects)))
            report.add("mcg_defect", dd <= config.tol("mcg_defect"), dd, config.tol("mcg_defect"),
                       phi.label)
        err = 0.0
        for _, g in loops:
            pulled = LoopTuple(tuple(apply_automorphism(inv, w) for w in g.loops), p)
            err = max(err, float(np.max(np.abs(trace_values(acted, g)
                                                - trace_values(batch, pulled)))))
        report.add("mcg_functoriality", err <= config.tol("mcg_functoriality"), err,
                   config.tol("mcg_functoriality"), phi.label)
        acted_probe = trace_values(acted, probe).real
        stat = scipy.stats.ks_2samp(acted_probe, fresh_probe).statistic
        crit = ks_critical_value(len(acted_probe), len(fresh_probe), alpha_crit)
        report.add("mcg_ks", stat < crit, stat, crit, f"{phi.label} | Re {probe}")
        worst = 0.0
        named = [(name, g) for name, g in loops if not name.startswith("random")] or loops
        for _, g in named:
            e1, e2 = mc_mean(batch, g), mc_mean(acted, g)
            scale = math.hypot(e1.std_error, e2.std_error)
            z = abs(e1.value - e2.value) / scale if scale else (0.0 if e1.value == e2.value
                                                                 else math.inf)
            worst = max(worst, z)
        report.add("mcg_equivariance", worst <= sigma, worst, sigma, phi.label)


def suite_symplectic(batch: SampleBatch, config: ExperimentConfig, report: RunReport):
    p, n = config.presentation, config.n
    g, d = p.genus, lie_dimension(n)
    expected = ((2 * g - 1) * d, d, (2 * g - 2) * d)
    rel = config.tol("rank")
    polished, failures, worst_c = [], 0, 0.0
    for rho in list(batch)[:config.symplectic_samples]:
        try:
            q = polish(rho, tol=config.tol("polish"), max_start_defect=config.polish_radius)
        except PolishError:
            failures += 1
            continue
        start = relator_defect(rho)
        if start > 0:
            worst_c = max(worst_c, polish_displacement(rho, q) / start)
        polished.append(q)
    report.add("polished_count", len(polished) >= config.symplectic_samples, len(polished),
               config.symplectic_samples)
    report.add("polish_constant", worst_c <= config.tol("polish_constant"), worst_c,
               config.tol("polish_constant"), flag_only=True)
    mismatches, reducible = 0, 0
    skew, cob, ratio, transport = 0.0, 0.0, math.inf, 0.0
    spectra = []
    for i, q in enumerate(polished):
        if commutant_dimension(q, config.tol("irreducible")) != 1:
            reducible += 1
            continue
        z = cohomology.cocycle_space(q, rel).shape[0]
        b = cohomology.coboundary_space(q, rel).shape[0]
        sm = cohomology.symplectic_matrix(q, rel, config.tol("irreducible"))
        if (z, b, sm.dimension) != expected:
            mismatches += 1
        skew = max(skew, sm.skew_residual)
        cob = max(cob, cohomology.coboundary_pairing_residual(q, rel))
        ratio = min(ratio, sm.conditioning)
        if i < 10:
            spectra.append(sm.singular_values.tolist())
            u = CenterCharacter(tuple(range(1, p.rank + 1)), n)
            moved = sm.basis @ cohomology.cup_form(twist(q, u)) @ sm.basis.T
            transport = max(transport, float(np.max(np.abs(moved - sm.entries))))
    report.add("irreducible", reducible == 0, reducible, 0)
    report.add("cohomology_dimensions", mismatches == 0 and len(polished) > 0, mismatches, 0,
               "z1={} b1={} h1={}".format(*expected))
    report.add("skew_residual", skew <= config.tol("skew"), skew, config.tol("skew"))
    report.add("coboundary_pairing", cob <= config.tol("coboundary_pairing"), cob,
               config.tol("coboundary_pairing"))
    report.add("min_sv_ratio", ratio >= config.tol("min_sv_ratio"), ratio,
               config.tol("min_sv_ratio"))
    report.add("twist_transport", transport <= config.tol("skew"), transport, config.tol("skew"))
    if polished:
        rng = np.random.default_rng([config.seed, 5])
        errs = cohomology.relator_gradient_check(polished[0], 1, rng.standard_normal(d))
        decay = errs[0] / errs[1]
        lo, hi = config.tol("gradient_decay_low"), config.tol("gradient_decay_high")
        report.add("gradient_quadratic_decay", lo <= decay <= hi, decay, lo)
    report.extra["singular_values"] = spectra
    report.extra["polish_failures"] = failures


def suite_free(batch: SampleBatch, config: ExperimentConfig, report: RunReport):
    p = config.presentation
    suite_lemma(batch, config, report)
    suite_orthogonality(batch, config, report)
    gens = p.generators()
    sigma = config.tol("positivity_sigma")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            e = inner_product(batch, LoopTuple((gens[i],), p), gens[j])
            report.add("generator_cross_orthogonality", e.zscore() <= sigma, e.zscore(), sigma,
                       f"{gens[i].format(p)} | {gens[j].format(p)}", e)
    suite_mcg(batch, config, report)


_SUITE_FUNCS = {"twist": suite_twist, "lemma": suite_lemma, "orthogonality": suite_orthogonality,
                "mcg": suite_mcg, "symplectic": suite_symplectic, "free": suite_free}


def run_verify(config: ExperimentConfig, suite: str, batch: SampleBatch | None = None,
               write: bool = True) -> RunReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    if suite == "free" and config.presentation.is_surface:
        raise ValueError("the free suite needs a free presentation")
    if suite == "symplectic" and not config.presentation.is_surface:
        raise ValueError("the symplectic suite needs a surface presentation")
    t0 = time.perf_counter()
    if batch is None:
        batch = load_or_sample(config)
    t1 = time.perf_counter()
    report = RunReport(suite, config.to_dict(), batch.acceptance_rate)
    _SUITE_FUNCS[suite](batch, config, report)
    t2 = time.perf_counter()
    report.timing = {"sampling_s": t1 - t0, "verify_s": t2 - t1}
    if write:
        report.write(config.output_dir / suite)
    return report
