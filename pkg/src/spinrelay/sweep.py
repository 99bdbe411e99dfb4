"""Batch Monte Carlo driver: analytic-vs-MC sweeps with statistical contracts.

Each sweep cell (mode, N, k) gets its own content-derived substream, so the
output is byte-identical for a fixed (config, seed) no matter how many
workers run the cells.  Records carry the analytic value, the MC mean and
standard error, the z-score between them, and provenance fields.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

from .encoding import (
    chain_dots_nspin,
    delta_k_parallel_start,
    jacobi_matrix,
    optimal_tilde_delta,
    parallel_tilde_delta,
    principal_eigenpair,
)
from .qubit import QubitKrausFamily, chain_dots_single, disturbance_constant, eta_from_c
from .records import McEstimate
from .rng import RandomStream

MODES = ("single_qubit", "nspin_parallel", "nspin_optimal", "parallel_start")
FORMATS = ("csv", "jsonl")

RECORD_FIELDS = ("mode", "N", "k", "phi", "analytic", "mc_mean", "mc_stderr",
                 "z", "trials", "seed", "build")


@lru_cache(maxsize=1)
def build_id() -> str:
    """git-describe-style provenance string; package version off-checkout."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent, capture_output=True,
            text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    from . import __version__
    return f"spinrelay-{__version__}"


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: a mode crossed with N and k ranges at fixed trial count."""

    mode: str
    n_values: tuple = (1,)
    k_values: tuple = (1,)
    phi: float = 0.0
    trials: int = 100_000
    seed: int = 42
    fmt: str = "csv"
    z_max: float = 4.0
    workers: int = 1

    def validate(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.n_values or not self.k_values:
            raise ValueError("N and k ranges must be non-empty")
        if any(k < 1 for k in self.k_values):
            raise ValueError("every k must be >= 1")
        if self.mode == "single_qubit":
            if any(n != 1 for n in self.n_values):
                raise ValueError("single_qubit mode runs at N = 1 only")
            if not 0.0 <= self.phi <= math.pi:
                raise ValueError("phi must lie in [0, pi]")
        elif self.mode == "nspin_parallel":
            if any(n < 1 for n in self.n_values):
                raise ValueError("parallel mode needs N >= 1")
        else:
            if any(n < 2 or n % 2 for n in self.n_values):
                raise ValueError(f"{self.mode} mode needs even N >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.z_max <= 0:
            raise ValueError("z_max must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def analytic_delta(mode: str, n_spins: int, k: int, phi: float = 0.0) -> float:
    """Closed-form shrink factor of observer k for the given mode."""
    if mode == "single_qubit":
        eta = eta_from_c(disturbance_constant(QubitKrausFamily(phi)))
        return eta ** k
    if mode == "nspin_parallel":
        return parallel_tilde_delta(n_spins) ** k
    if mode == "nspin_optimal":
        return optimal_tilde_delta(n_spins) ** k
    if mode == "parallel_start":
        return delta_k_parallel_start(n_spins, k)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def mc_estimate_delta(mode: str, n_spins: int, k: int, phi: float,
                      trials: int, rng: RandomStream) -> McEstimate:
    """Monte Carlo estimate of observer k's shrink factor for one cell."""
    if mode == "single_qubit":
        dots = chain_dots_single(k, QubitKrausFamily(phi), "covariant", rng, trials)
    else:
        protocol = {"nspin_parallel": "parallel",
                    "nspin_optimal": "optimal",
                    "parallel_start": "parallel_start"}[mode]
        dots = chain_dots_nspin(n_spins, k, protocol, rng, trials)
    return McEstimate.from_samples(dots[:, k - 1], seed=rng.seed)


def _cell_stream(cfg: SweepConfig, n_spins: int, k: int) -> RandomStream:
    # content-derived: the same cell gets the same stream in any config
    return RandomStream(cfg.seed).child(MODES.index(cfg.mode)).child(n_spins).child(k)


def run_sweep(cfg: SweepConfig) -> list[dict]:
    """All records of a sweep, in deterministic (N, k) order.

    Cells are independent, so they may run on any number of workers; the
    assembled record list never depends on scheduling.
    """
    cfg.validate()
    cells = [(n, k) for n in cfg.n_values for k in cfg.k_values]

    def run_cell(cell):
        n, k = cell
        est = mc_estimate_delta(cfg.mode, n, k, cfg.phi, cfg.trials,
                                _cell_stream(cfg, n, k))
        return est

    if cfg.workers == 1:
        estimates = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            estimates = list(pool.map(run_cell, cells))

    bid = build_id()
    records = []
    for (n, k), est in zip(cells, estimates):
        if est.stderr is None:
            print(f"warning: trials=1 leaves mc_stderr undefined for cell "
                  f"(mode={cfg.mode}, N={n}, k={k})", file=sys.stderr)
        ref = analytic_delta(cfg.mode, n, k, cfg.phi)
        records.append({
            "mode": cfg.mode,
            "N": n,
            "k": k,
            "phi": cfg.phi if cfg.mode == "single_qubit" else None,
            "analytic": ref,
            "mc_mean": est.mean,
            "mc_stderr": est.stderr,
            "z": est.z_score(ref),
            "trials": est.trials,
            "seed": cfg.seed,
            "build": bid,
        })
    return records


def max_abs_z(records: list[dict]) -> float:
    zs = [abs(r["z"]) for r in records if r["z"] is not None]
    return max(zs) if zs else 0.0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_records(records: list[dict], fmt: str, fh) -> None:
    """Serialize records as RFC-4180 CSV (17 significant digits) or JSONL."""
    if fmt == "csv":
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for rec in records:
            writer.writerow([_fmt(rec[f]) for f in RECORD_FIELDS])
    elif fmt == "jsonl":
        for rec in records:
            fh.write(json.dumps({f: rec[f] for f in RECORD_FIELDS}) + "\n")
    else:
        raise ValueError(f"format must be one of {FORMATS}")


def records_to_bytes(records: list[dict], fmt: str) -> bytes:
    buf = io.StringIO(newline="")
    write_records(records, fmt, buf)
    return buf.getvalue().encode()


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot MC shrink factors against the closed forms from a sweep CSV."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

CSV_PATH = {csv_path!r}

rows = list(csv.DictReader(open(CSV_PATH, newline="")))
by_n = defaultdict(list)
for row in rows:
    by_n[int(row["N"])].append(row)

fig, ax = plt.subplots()
for n, group in sorted(by_n.items()):
    ks = [int(r["k"]) for r in group]
    ax.plot(ks, [float(r["analytic"]) for r in group], "-", label=f"N={{n}} analytic")
    means = [float(r["mc_mean"]) for r in group]
    errs = [3 * float(r["mc_stderr"]) if r["mc_stderr"] else 0.0 for r in group]
    ax.errorbar(ks, means, yerr=errs, fmt="o", capsize=3, label=f"N={{n}} MC (3 s.e.)")
ax.set_xlabel("observer k")
ax.set_ylabel("shrink factor")
ax.set_title(rows[0]["mode"] if rows else "sweep")
ax.legend()
fig.savefig(CSV_PATH + ".png", dpi=150)
print("wrote", CSV_PATH + ".png")
'''


def write_plot_script(csv_path: str, script_path: str) -> None:
    """Emit a standalone plotting script referencing ``csv_path``.

    The harness never renders images itself; this script is the delegated
    way to visualize a sweep.
    """
    Path(script_path).write_text(_PLOT_TEMPLATE.format(csv_path=csv_path))


def emit_encoding(n_spins: int) -> dict:
    """Serializable description of the optimal encoding for ``n_spins``."""
    lam, vec = principal_eigenpair(jacobi_matrix(n_spins))
    return {
        "N": n_spins,
        "lambda_max": lam,
        "phi": [float(c) for c in vec],
        "parallel_tilde_delta": parallel_tilde_delta(n_spins),
        "optimal_tilde_delta": optimal_tilde_delta(n_spins),
        "build": build_id(),
    }


def write_encoding(payload: dict, fmt: str, fh) -> None:
    """Encoding output: one JSON object, or CSV with one row per coefficient."""
    if fmt == "jsonl":
        fh.write(json.dumps(payload) + "\n")
    elif fmt == "csv":
        writer = csv.writer(fh)
        writer.writerow(["N", "lambda_max", "J", "phi_J",
                         "parallel_tilde_delta", "optimal_tilde_delta", "build"])
        for j, coeff in enumerate(payload["phi"]):
            writer.writerow([
                payload["N"], _fmt(payload["lambda_max"]), j, _fmt(coeff),
                _fmt(payload["parallel_tilde_delta"]),
                _fmt(payload["optimal_tilde_delta"]), payload["build"],
            ])
    else:
        raise ValueError(f"format must be one of {FORMATS}")
