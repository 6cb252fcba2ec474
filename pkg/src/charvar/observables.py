"""Trace functions and Monte Carlo estimators of integrals against the sampled measure.

The measure is normalized to total mass one, so integrals are batch means.
Twist-averaged estimators replace each sample's value by its average over
the full center-twist orbit. For a product of traces that average is the
sample value times n^{-k} sum_u zeta^{u.[gamma]}, which is 1 when the total
homology class vanishes and 0 otherwise; the estimators use that closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .representations import Representation, evaluate_word_stack
from .words import HomologyClass, Presentation, Word, parse_word, total_homology_class


@dataclass(frozen=True)
class LoopTuple:
    """gamma = (gamma_1, ..., gamma_s); the empty tuple is the constant function 1."""

    loops: tuple[Word, ...]
    presentation: Presentation

    @classmethod
    def parse(cls, text: str, presentation: Presentation) -> "LoopTuple":
        """Comma-separated loops, e.g. ``"a1 b1 A1 B1, a2"``; ``""`` is the constant 1."""
        parts = [t for t in text.split(",")] if text.strip() else []
        return cls(tuple(parse_word(t, presentation) for t in parts), presentation)

    @classmethod
    def of(cls, presentation: Presentation, *loops: Word) -> "LoopTuple":
        return cls(tuple(loops), presentation)

    def homology_class(self, n: int) -> HomologyClass:
        return total_homology_class(self.loops, n, self.presentation.rank)

    def format(self) -> str:
        return ", ".join(w.format(self.presentation) for w in self.loops)

    def __str__(self):
        return self.format()

    def __add__(self, other: "LoopTuple") -> "LoopTuple":
        return LoopTuple(self.loops + other.loops, self.presentation)


def _stack(data) -> np.ndarray:
    if isinstance(data, Representation):
        return data.matrices
    return getattr(data, "matrices", data)


def trace_values(data, gamma: LoopTuple) -> np.ndarray:
    """t_gamma on a representation (scalar) or on every sample of a batch / stack."""
    mats = _stack(data)
    out = np.ones(mats.shape[:-3], dtype=complex)
    for w in gamma.loops:
        out = out * np.trace(evaluate_word_stack(mats, w), axis1=-2, axis2=-1)
    return out


def trace_function(rho: Representation, gamma: LoopTuple) -> complex:
    return complex(trace_values(rho, gamma))


@dataclass(frozen=True)
class Estimate:
    value: complex
    std_error: float
    count: int
    estimator: str = "plain"

    def to_dict(self, observable: str = "") -> dict:
        return {"observable": observable, "value": [self.value.real, self.value.imag],
                "std_error": self.std_error, "count": self.count, "estimator": self.estimator}

    def zscore(self) -> float:
        """|value| / std_error (inf when the error vanishes on a nonzero value)."""
        if self.std_error == 0:
            return 0.0 if self.value == 0 else math.inf
        return abs(self.value) / self.std_error


def estimate(values: np.ndarray, estimator: str = "plain") -> Estimate:
    """Sample mean with componentwise standard errors combined in quadrature."""
    values = np.asarray(values, dtype=complex)
    count = values.size
    if count == 0:
        raise ValueError("empty batch")
    mean = complex(values.mean())
    if count == 1:
        return Estimate(mean, 0.0, 1, estimator)
    var = values.real.var(ddof=1) + values.imag.var(ddof=1)
    return Estimate(mean, float(math.sqrt(var / count)), count, estimator)


def class_indicator(c: HomologyClass) -> int:
    """n^{-k} sum_u zeta^{u.c}: 1 on the zero class, 0 otherwise."""
    return 1 if c.is_zero() else 0


def _n_of(batch) -> int:
    return _stack(batch).shape[-1]


def mc_mean(batch, gamma: LoopTuple) -> Estimate:
    return estimate(trace_values(batch, gamma))


def twist_averaged_mean(batch, gamma: LoopTuple) -> Estimate:
    plain = mc_mean(batch, gamma)
    w = class_indicator(gamma.homology_class(_n_of(batch)))
    return Estimate(w * plain.value, w * plain.std_error, plain.count, "twist_averaged")


@dataclass(frozen=True)
class NormalizedTrace:
    """rho -> t_gamma(rho) - center."""

    gamma: LoopTuple
    center: complex

    def __call__(self, rho: Representation) -> complex:
        return trace_function(rho, self.gamma) - self.center

    def values(self, data) -> np.ndarray:
        return trace_values(data, self.gamma) - self.center


def normalized_trace(batch, gamma: LoopTuple, centering: str = "twist_averaged") -> NormalizedTrace:
    """Subtract the estimated integral; with twist averaging a nonzero class is centered at 0 exactly."""
    if centering == "twist_averaged":
        m = twist_averaged_mean(batch, gamma).value
    elif centering == "plain":
        m = mc_mean(batch, gamma).value
    else:
        raise ValueError(f"unknown centering {centering!r}")
    return NormalizedTrace(gamma, m)


def _conjugate_trace(batch, alpha: Word | None, presentation: Presentation) -> np.ndarray:
    if alpha is None:
        return np.ones(_stack(batch).shape[:-3], dtype=complex)
    # conj t_alpha = t_{alpha^-1} for unitary images
    return trace_values(batch, LoopTuple((alpha.inverse(),), presentation))


def inner_product(batch, gamma: LoopTuple, alpha: Word | None, use_normalized: bool = False,
                  estimator: str = "plain", centering: str = "twist_averaged") -> Estimate:
    """<f, t_alpha> with f = t_gamma or its normalization; ``alpha=None`` is the constant 1.

    The twist-averaged variant averages f * conj(t_alpha) over every twist orbit,
    which multiplies t_gamma conj(t_alpha) by the indicator of [gamma] - [alpha] = 0
    and the centering term by the indicator of [alpha] = 0.
    """
    p = gamma.presentation
    n = _n_of(batch)
    t_gamma = trace_values(batch, gamma)
    t_alpha_bar = _conjugate_trace(batch, alpha, p)
    center = normalized_trace(batch, gamma, centering).center if use_normalized else 0j
    if estimator == "plain":
        return estimate((t_gamma - center) * t_alpha_bar)
    if estimator != "twist_averaged":
        raise ValueError(f"unknown estimator {estimator!r}")
    c_alpha = total_homology_class((alpha,) if alpha is not None else (), n, p.rank)
    w_product = class_indicator(gamma.homology_class(n) - c_alpha)
    w_center = class_indicator(c_alpha)
    return estimate(w_product * t_gamma * t_alpha_bar - w_center * center * t_alpha_bar,
                    "twist_averaged")


def variance(batch, gamma: LoopTuple) -> Estimate:
    """Sample variance E|t - E t|^2, with the standard error of that mean."""
    t = trace_values(batch, gamma)
    count = t.size
    if count == 0:
        raise ValueError("empty batch")
    dev = np.abs(t - t.mean()) ** 2
    if count == 1:
        return Estimate(0j, 0.0, 1)
    value = dev.sum() / (count - 1)
    return Estimate(complex(value), float(dev.std(ddof=1) / math.sqrt(count)), count)
