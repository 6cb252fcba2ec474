"""Static plots (PNG) with the CSV data behind each one."""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..observables import mc_mean, trace_values  # noqa: E402
from ..sampling import SampleBatch  # noqa: E402
from .config import ExperimentConfig  # noqa: E402
from .verify import _fmt, draw_batch, load_or_sample  # noqa: E402

log = logging.getLogger(__name__)


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def trace_histograms(batch: SampleBatch, config: ExperimentConfig, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, g in config.loop_tuples().items():
        if not g.loops:
            continue
        t = trace_values(batch, g)
        fig, axes = plt.subplots(1, 2, figsize=(8, 3))
        for ax, part, label in ((axes[0], t.real, "Re"), (axes[1], t.imag, "Im")):
            ax.hist(part, bins=60, density=True, color="0.4")
            ax.axvline(0.0, color="k", lw=0.8)
            ax.axvline(part.mean(), color="C3", lw=1.2, ls="--")
            ax.set_xlabel(f"{label} t[{g.format()}]")
        fig.suptitle(f"{name}: N={len(batch)}")
        fig.tight_layout()
        png = directory / f"hist_{name}.png"
        fig.savefig(png, dpi=100)
        plt.close(fig)
        _write_csv(directory / f"hist_{name}.csv", ("re", "im"),
                   ([_fmt(z.real), _fmt(z.imag)] for z in t))
        out.append(png)
    return out


def singular_value_plot(report_path, directory) -> Path | None:
    report_path = Path(report_path)
    if not report_path.exists():
        log.warning("no symplectic report at %s; skipping spectra plot", report_path)
        return None
    spectra = json.loads(report_path.read_text()).get("extra", {}).get("singular_values", [])
    if not spectra:
        log.warning("symplectic report has no spectra; skipping")
        return None
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for s in spectra:
        ax.semilogy(range(1, len(s) + 1), s, marker="o", lw=0.8)
    ax.set_xlabel("index")
    ax.set_ylabel("singular value of the H^1 pairing")
    fig.tight_layout()
    png = directory / "symplectic_spectra.png"
    fig.savefig(png, dpi=100)
    plt.close(fig)
    _write_csv(directory / "symplectic_spectra.csv", ("sample", "index", "value"),
               ([i, j, _fmt(v)] for i, s in enumerate(spectra) for j, v in enumerate(s)))
    return png


def epsilon_sweep(config: ExperimentConfig, epsilons, directory) -> Path | None:
    """Plain Monte Carlo means of every configured loop at each tolerance."""
    if not config.presentation.is_surface:
        log.warning("epsilon sweep only applies to surface presentations")
        return None
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    loops = {k: g for k, g in config.loop_tuples().items() if g.loops}
    rows, series = [], {k: [] for k in loops}
    for eps in epsilons:
        batch = draw_batch(replace(config, epsilon=float(eps)))
        for k, g in loops.items():
            e = mc_mean(batch, g)
            series[k].append((eps, e))
            rows.append([_fmt(eps), g.format(), _fmt(e.value.real), _fmt(e.value.imag),
                         _fmt(e.std_error), e.count, _fmt(batch.acceptance_rate)])
    _write_csv(directory / "epsilon_sweep.csv",
               ("epsilon", "observable", "re", "im", "std_error", "count", "acceptance"), rows)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for k, pts in series.items():
        x = np.array([p[0] for p in pts])
        y = np.array([p[1].value.real for p in pts])
        err = np.array([p[1].std_error for p in pts])
        ax.errorbar(x, y, yerr=err, marker="o", capsize=3, label=k)
    ax.set_xlabel("epsilon")
    ax.set_ylabel("Re mean t")
    ax.legend(fontsize=7)
    fig.tight_layout()
    png = directory / "epsilon_sweep.png"
    fig.savefig(png, dpi=100)
    plt.close(fig)
    return png


def emit_plots(config: ExperimentConfig, sweep=None, batch: SampleBatch | None = None) -> list[Path]:
    directory = config.output_dir / "plots"
    if batch is None:
        batch = load_or_sample(config)
    if len(batch) == 0:
        log.warning("empty batch; no plots written")
        return []
    out = trace_histograms(batch, config, directory)
    png = singular_value_plot(config.output_dir / "symplectic" / "report.json", directory)
    if png is not None:
        out.append(png)
    if sweep:
        png = epsilon_sweep(config, sweep, directory)
        if png is not None:
            out.append(png)
    return out
