"""Batch experiment runner.

Usage::

    discrete-adiabatic run --config cfg.json [--out PREFIX]
    discrete-adiabatic validate --config cfg.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .errors import AdiabaticError
from .hermitian import HermitianMatrix, matrix_from_json, matrix_to_json
from .path import DIVERGENT, PathSpec, footnote_distance, gap_distance, gap_profile
from .perturbation import exact_overlap, first_order, first_order_errors, overlap_order_check, predicted_overlap
from .protocol import RNG_ALGORITHM, THREADS_ENV, run_exact, run_monte_carlo, scaling_sweep

KINDS = ("gap-profile", "run-exact", "monte-carlo", "scaling", "perturb-check", "metric")
REQUIRED = {
    "gap-profile": ("N",),
    "run-exact": ("N",),
    "monte-carlo": ("N", "seed"),
    "scaling": ("N_values",),
    "perturb-check": (),
    "metric": (),
}
CSV_COLUMNS = {
    "scaling": ("N", "ideal_survival", "exact_ground_probability", "failure", "min_gap"),
    "gap-profile": ("j", "s", "gap", "degenerate"),
    "run-exact": ("N", "ideal_survival", "exact_ground_probability", "min_gap"),
}
_KNOWN = {"kind", "X", "Z", "N", "N_values", "trials", "seed", "bridge_amplitude",
          "bridge_seed", "tolerance", "epsilon", "output"}


class ConfigError(AdiabaticError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    X: HermitianMatrix
    Z: HermitianMatrix
    N: Optional[int] = None
    N_values: Optional[tuple[int, ...]] = None
    trials: int = 10_000
    seed: Optional[int] = None
    bridge_amplitude: float = 0.0
    bridge_seed: int = 0
    tolerance: float = 1e-8
    epsilon: float = 1e-2
    output: str = "result"

    def path(self, N: Optional[int] = None) -> PathSpec:
        return PathSpec(self.X, self.Z, N if N is not None else self.N,
                        self.bridge_amplitude, self.bridge_seed)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "kind": self.kind,
            "X": matrix_to_json(self.X),
            "Z": matrix_to_json(self.Z),
            "trials": self.trials,
            "bridge_amplitude": self.bridge_amplitude,
            "bridge_seed": self.bridge_seed,
            "tolerance": self.tolerance,
            "epsilon": self.epsilon,
            "output": self.output,
        }
        if self.N is not None:
            d["N"] = self.N
        if self.N_values is not None:
            d["N_values"] = list(self.N_values)
        if self.seed is not None:
            d["seed"] = self.seed
        return d


def _int(raw: dict, key: str, minimum: int = 0) -> Optional[int]:
    if key not in raw:
        return None
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"field {key!r}: expected an integer >= {minimum}, got {v!r}")
    return v


def _float(raw: dict, key: str, default: float, positive: bool = False) -> float:
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"field {key!r}: expected a number, got {v!r}")
    if (positive and not v > 0) or v < 0:
        raise ConfigError(f"field {key!r}: must be {'positive' if positive else 'non-negative'}, got {v!r}")
    return float(v)


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - _KNOWN)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")

    kind = raw.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"field 'kind': expected one of {', '.join(KINDS)}, got {kind!r}")
    for key in ("X", "Z", *REQUIRED[kind]):
        if key not in raw:
            raise ConfigError(f"missing field {key!r} required for kind {kind!r}")

    mats = {}
    for key in ("X", "Z"):
        try:
            mats[key] = matrix_from_json(raw[key], key)
        except (ValueError, AdiabaticError) as exc:
            raise ConfigError(f"field {key!r}: {exc}") from None
    if mats["X"].dim != mats["Z"].dim:
        raise ConfigError(f"dimension mismatch: X is {mats['X'].dim}x{mats['X'].dim}, "
                          f"Z is {mats['Z'].dim}x{mats['Z'].dim}")

    N_values = None
    if "N_values" in raw:
        nv = raw["N_values"]
        if (not isinstance(nv, list) or not nv
                or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in nv)):
            raise ConfigError(f"field 'N_values': expected a non-empty list of positive integers, got {nv!r}")
        N_values = tuple(nv)
    output = raw.get("output", "result")
    if not isinstance(output, str) or not output:
        raise ConfigError(f"field 'output': expected a non-empty string, got {output!r}")
    seed = _int(raw, "seed")
    bridge_seed = _int(raw, "bridge_seed")
    for key, v in (("seed", seed), ("bridge_seed", bridge_seed)):
        if v is not None and v >= 2**64:
            raise ConfigError(f"field {key!r}: must fit in 64 bits, got {v}")

    return ExperimentConfig(
        kind=kind,
        X=mats["X"],
        Z=mats["Z"],
        N=_int(raw, "N", 1),
        N_values=N_values,
        trials=_int(raw, "trials", 1) or 10_000,
        seed=seed,
        bridge_amplitude=_float(raw, "bridge_amplitude", 0.0),
        bridge_seed=bridge_seed or 0,
        tolerance=_float(raw, "tolerance", 1e-8, positive=True),
        epsilon=_float(raw, "epsilon", 1e-2),
        output=output,
    )


# Each runner returns (result payload, csv rows or None, summary line).

def _gap_profile(cfg: ExperimentConfig):
    path = cfg.path()
    prof = gap_profile(path, cfg.tolerance)
    rows = [(j, j / path.N, r.gap, int(r.degenerate)) for j, r in enumerate(prof.reports)]
    result = {
        "min_gap": prof.min_gap,
        "argmin_step": prof.argmin_step,
        "degenerate": prof.degenerate,
        "degenerate_steps": prof.degenerate_steps,
        "steps": [r.to_dict() for r in prof.reports],
    }
    summary = f"min_gap={prof.min_gap:.6g} at step {prof.argmin_step}"
    if prof.degenerate:
        summary += f"; DEGENERATE at step(s) {prof.degenerate_steps}"
    return result, rows, summary


def _run_exact(cfg: ExperimentConfig):
    res = run_exact(cfg.path(), cfg.tolerance)
    rows = [(res.N, res.ideal_survival, res.exact_ground_probability, res.min_gap_encountered)]
    summary = (f"N={res.N} ground_probability={res.exact_ground_probability:.10g} "
               f"ideal_survival={res.ideal_survival:.10g}")
    return res.to_dict(), rows, summary


def _monte_carlo(cfg: ExperimentConfig):
    path = cfg.path()
    mc = run_monte_carlo(path, cfg.trials, cfg.seed, cfg.tolerance)
    exact = run_exact(path, cfg.tolerance)
    result = mc.to_dict() | {"exact_ground_probability": exact.exact_ground_probability}
    summary = (f"estimate={mc.estimate:.6g} +/- {mc.std_error:.2g} "
               f"(exact {exact.exact_ground_probability:.6g}, trials={mc.trials})")
    return result, None, summary


def _scaling(cfg: ExperimentConfig):
    fit = scaling_sweep(cfg.X, cfg.Z, cfg.N_values, cfg.tolerance)
    rows = [(int(n), float(ps), float(pg), float(f), float(g))
            for n, ps, pg, f, g in zip(fit.N_values, fit.ideal_survivals, fit.ground_probabilities,
                                       fit.failures, fit.min_gaps)]
    summary = f"slope={fit.slope:.6g} r_squared={fit.r_squared:.6g} over {len(rows)} N values"
    return fit.to_dict(), rows, summary


def _perturb_check(cfg: ExperimentConfig):
    A, B, eps = cfg.X, cfg.Z - cfg.X, cfg.epsilon
    corr = first_order(A, B, 0, cfg.tolerance)
    err, err_half = overlap_order_check(A, B, eps, 0, cfg.tolerance)
    result: dict[str, Any] = {
        "epsilon": eps,
        "base_eigenvalue": corr.base_eigenvalue,
        "eigenvalue_shift": corr.eigenvalue_shift,
        "correction_vector": [[float(z.real), float(z.imag)] for z in corr.correction_vector],
        "gauge": corr.gauge,
        "predicted_overlap": predicted_overlap(corr, eps),
        "exact_overlap": exact_overlap(A, B, eps),
        "overlap_error": err,
        "overlap_error_half": err_half,
        "overlap_error_ratio": err / err_half if err_half > 0 else None,
    }
    if eps > 0:
        (v1, w1), (v2, w2) = first_order_errors(A, B, eps), first_order_errors(A, B, eps / 2)
        result |= {
            "eigenvalue_error": [v1, v2],
            "eigenvector_error": [w1, w2],
            "eigenvalue_error_ratio": v1 / v2 if v2 > 0 else None,
            "eigenvector_error_ratio": w1 / w2 if w2 > 0 else None,
        }
    ratio = result["overlap_error_ratio"]
    summary = f"overlap error ratio err(eps)/err(eps/2) = {ratio:.6g}" if ratio else "overlap expansion exact"
    return result, None, summary


def _dist(d) -> Any:
    return "divergent" if d is DIVERGENT else d


def _metric(cfg: ExperimentConfig):
    fd = footnote_distance(cfg.X, cfg.Z) if cfg.X.dim == 2 else None
    gd = gap_distance(cfg.X, cfg.Z)
    result = {"footnote_distance": _dist(fd), "gap_distance": _dist(gd)}
    return result, None, f"footnote_distance={_dist(fd)} gap_distance={_dist(gd)}"


RUNNERS = {
    "gap-profile": _gap_profile,
    "run-exact": _run_exact,
    "monte-carlo": _monte_carlo,
    "scaling": _scaling,
    "perturb-check": _perturb_check,
    "metric": _metric,
}


def render_json(cfg: ExperimentConfig, result: dict[str, Any]) -> str:
    doc = {
        "kind": cfg.kind,
        "config": cfg.to_dict(),
        "result": result,
        "metadata": {"package": "discrete_adiabatic", "version": __version__, "rng": RNG_ALGORITHM},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(kind: str, rows: list[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS[kind])
    w.writerows([[repr(x) if isinstance(x, float) else x for x in row] for row in rows])
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, prefix: Optional[str] = None) -> tuple[int, str]:
    """Run, write ``<prefix>.json`` (and ``<prefix>.csv`` when tabular); returns (status, message)."""
    prefix = prefix or cfg.output
    try:
        result, rows, summary = RUNNERS[cfg.kind](cfg)
    except AdiabaticError as exc:
        return 1, f"error: {cfg.kind} failed: {exc}"
    out = Path(prefix)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        Path(f"{prefix}.json").write_text(render_json(cfg, result))
        if rows is not None:
            Path(f"{prefix}.csv").write_text(render_csv(cfg.kind, rows))
    except OSError as exc:
        return 1, f"error: cannot write output {prefix!r}: {exc}"
    return 0, f"{cfg.kind}: {summary}"


EPILOG = f"""\
experiment kinds: {', '.join(KINDS)}

CSV columns:
  scaling      N, ideal_survival, exact_ground_probability, failure, min_gap
  gap-profile  j, s, gap, degenerate
  run-exact    N, ideal_survival, exact_ground_probability, min_gap

environment:
  {THREADS_ENV}  number of Monte Carlo worker threads (results do not depend on it)
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discrete-adiabatic",
        description="Measurement-driven discrete adiabatic protocol experiments.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment config", epilog=EPILOG,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", help="output path prefix (overrides the config's 'output')")
    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("--config", required=True, type=Path)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config.read_text())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return 2
    if args.command == "validate":
        print(f"ok: {cfg.kind} config, dimension {cfg.X.dim}")
        return 0
    status, message = run_experiment(cfg, args.out)
    print(message, file=sys.stderr if status else sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
