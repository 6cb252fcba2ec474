"""Experiment configuration: one JSON document, overridable from the command line."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from ..observables import LoopTuple
from ..words import Automorphism, Presentation, WordError, shipped_automorphisms

DEFAULT_TOLERANCES = {
    "twist_defect": 1e-15,
    "twist_compose": 1e-15,
    "transformation_law": 1e-12,
    "lemma_exact": 1e-15,
    "lemma_sigma": 4.0,
    "orthogonality_exact": 1e-14,
    "positivity_sigma": 4.0,
    "centering": 1e-12,
    "mcg_functoriality": 1e-12,
    "mcg_defect": 1e-14,
    "mcg_equivariance_sigma": 4.0,
    "ks_alpha": 0.01,
    "skew": 1e-10,
    "coboundary_pairing": 1e-8,
    "min_sv_ratio": 1e-6,
    "rank": 1e-8,
    "irreducible": 1e-8,
    "polish": 1e-12,
    "polish_constant": 10.0,
    "gradient_decay_low": 50.0,
    "gradient_decay_high": 200.0,
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    presentation: Presentation
    n: int = 2
    epsilon: float | None = 0.2
    samples: int = 1000
    proposal_cap: int | None = 10 ** 9
    seed: int = 20240501
    threads: int = 1
    chunk_size: int = 1 << 14
    loops: dict[str, str] = field(default_factory=dict)
    automorphisms: list = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    output: str = "runs/default"
    random_loops: int = 10
    random_loop_length: int = 12
    symplectic_samples: int = 100
    max_polish_start: float | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        if self.presentation.is_surface and (self.epsilon is None or self.epsilon <= 0):
            raise ConfigError("epsilon must be positive for surface presentations")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        try:
            self.loop_tuples()
            self.automorphism_list()
        except WordError as exc:
            raise ConfigError(str(exc)) from exc

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    @property
    def polish_radius(self) -> float:
        if self.max_polish_start is not None:
            return self.max_polish_start
        return max(0.5, self.epsilon or 0.0)

    def loop_tuples(self) -> dict[str, LoopTuple]:
        return {name: LoopTuple.parse(text, self.presentation) for name, text in self.loops.items()}

    def automorphism_list(self) -> list[Automorphism]:
        """Shipped generators when none are configured; strings name shipped generators."""
        shipped = {phi.label: phi for phi in shipped_automorphisms(self.presentation)}
        if not self.automorphisms:
            return list(shipped.values())
        out = []
        for item in self.automorphisms:
            if isinstance(item, str):
                if item not in shipped:
                    raise WordError(f"unknown automorphism {item!r}; shipped: {sorted(shipped)}")
                out.append(shipped[item])
            else:
                out.append(Automorphism.from_dict(item, self.presentation))
        return out

    @property
    def output_dir(self) -> Path:
        return Path(self.output)

    @property
    def batch_path(self) -> Path:
        return self.output_dir / "batch.jsonl"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["presentation"] = self.presentation.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        try:
            d["presentation"] = Presentation.from_dict(d["presentation"])
        except (KeyError, WordError) as exc:
            raise ConfigError(f"bad presentation: {exc}") from exc
        if not d["presentation"].is_surface:
            d["epsilon"] = None
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_dict(json.load(fh))


def default_loops(presentation: Presentation, n: int) -> dict[str, str]:
    """Generators, a separating commutator loop, and an n-fold repeated generator."""
    names = presentation.generator_names()
    loops = {name: name for name in names}
    if presentation.is_surface:
        loops["sep"] = "a1 b1 A1 B1"
    else:
        loops["comm"] = f"{names[0]} {names[1]} {names[0].upper()} {names[1].upper()}"
    loops["rep"] = ", ".join([names[0]] * n)
    loops["power"] = " ".join([names[0]] * n)
    return loops


def default_matrix() -> dict[str, ExperimentConfig]:
    """The shipped experiment matrix."""
    out = {}
    for key, pres, n, eps in (("g2n2", Presentation.surface(2), 2, 0.2),
                              ("g2n3", Presentation.surface(2), 3, 1.0),
                              ("g3n2", Presentation.surface(3), 2, 0.2),
                              ("free2n2", Presentation.free(2), 2, None)):
        out[key] = ExperimentConfig(pres, n=n, epsilon=eps, loops=default_loops(pres, n),
                                    output=f"runs/{key}")
    return out
