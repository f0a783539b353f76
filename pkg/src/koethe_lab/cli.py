"""Command-line front end.

Exit codes: 0 on a completed run, 1 on input errors, 2 when a symbolic
verdict is contradicted by its numeric probe or an internal check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .construct import KINDS, construct
from .growth_dsl import (DSLSyntaxError, KoetheMatrixSpec, TabulatedMatrix, evaluate_grid, load_tabulated,
                         parse_file, validate_koethe)
from .matrix_calculus import check_tabulated, classify, probe_classification

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    J: int | None = None
    Q: int | None = None
    N: int = 20
    K: int = 6
    seed: int = 0
    format: str = "json"
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("J", "Q", "N", "K"):
            val = getattr(self, name)
            if val is not None and val < 1:
                raise InputError(f"{name} must be positive, got {val}")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be an unsigned 64-bit integer")
        if self.format not in ("json", "text"):
            raise InputError(f"unknown format {self.format!r}")


def _threads() -> int:
    raw = os.environ.get("KOETHE_LAB_THREADS", "")
    try:
        return max(1, int(raw)) if raw else min(4, os.cpu_count() or 1)
    except ValueError:
        raise InputError(f"KOETHE_LAB_THREADS must be an integer, got {raw!r}") from None


def _load_inputs(path: str) -> list[KoetheMatrixSpec | TabulatedMatrix]:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    try:
        if p.suffix.lower() in (".csv", ".json"):
            tab = load_tabulated(p)
            return [TabulatedMatrix(tab.log_entries, tab.provenance, tab.name or p.stem, tab.meta)]
        return parse_file(p)
    except DSLSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from None
    except (ValueError, OSError, LookupError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _grid_for(m, cfg: RunConfig) -> TabulatedMatrix:
    if isinstance(m, TabulatedMatrix):
        return m.truncate(cfg.J, cfg.Q)
    return evaluate_grid(m, cfg.J or 10_000, cfg.Q or 8)


# -- commands -------------------------------------------------------------------

def _cmd_check(cfg: RunConfig) -> tuple[dict, int]:
    items = []
    for path in cfg.inputs:
        for m in _load_inputs(path):
            entry = {"matrix": m.name, "koethe": validate_koethe(m).to_json()}
            if cfg.J is not None and isinstance(m, KoetheMatrixSpec):
                try:
                    grid = _grid_for(m, cfg)
                    entry["grid"] = validate_koethe(grid).to_json()
                    if validate_koethe(m).is_proved and not validate_koethe(grid).is_proved:
                        entry["inconsistent"] = True
                except LookupError as exc:
                    entry["grid"] = {"skipped": str(exc)}
            items.append(entry)
    code = EXIT_INCONSISTENT if any(e.get("inconsistent") for e in items) else EXIT_OK
    return {"command": "check", "matrices": items}, code


def _classify_one(m, cfg: RunConfig) -> tuple[dict, bool]:
    if isinstance(m, TabulatedMatrix):
        grid = _grid_for(m, cfg)
        return {"matrix": m.name, "verdicts": {"koethe": validate_koethe(grid).to_json()},
                "consistency": True, "probe": check_tabulated(grid)}, True
    try:
        report = classify(m)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = report.to_json()
    ok = report.consistency
    if cfg.J is not None:
        probe, probe_ok = probe_classification(m, report.verdicts, cfg.J, cfg.Q or 8)
        out["probe"] = probe
        ok &= probe_ok
    return out, ok


def _cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    mats = [m for path in cfg.inputs for m in _load_inputs(path)]
    with ThreadPoolExecutor(max_workers=max(1, min(_threads(), len(mats)))) as pool:
        results = list(pool.map(lambda m: _classify_one(m, cfg), mats))
    reports = [r for r, _ in results]
    code = EXIT_OK if all(ok for _, ok in results) else EXIT_INCONSISTENT
    if len(reports) == 1:
        return reports[0], code
    return {"command": "classify", "reports": reports}, code


def _cmd_probe(cfg: RunConfig) -> tuple[dict, int]:
    items = []
    for path in cfg.inputs:
        for m in _load_inputs(path):
            try:
                grid = _grid_for(m, cfg)
            except LookupError as exc:
                raise InputError(str(exc)) from None
            if grid.Q < 2:
                raise InputError("probing needs at least two columns")
            items.append({"matrix": m.name, "probe": check_tabulated(grid)})
    return {"command": "probe", "matrices": items}, EXIT_OK


def _cmd_construct(cfg: RunConfig) -> tuple[dict, int]:
    o = cfg.options
    try:
        c = construct(o["kind"], cfg.out or ".", alpha=o.get("alpha") or "j", J=o.get("truncate") or cfg.J or 64,
                      Q=cfg.Q or 8, N=cfg.N, blocks=o.get("blocks") or 8, n=o.get("n") or 100,
                      seed=cfg.seed, write_profile=o.get("profile", False))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    bad = [k for k, v in c.summary.items() if k.endswith("koethe") and v == "Refuted"]
    return c.to_json(), EXIT_INCONSISTENT if bad else EXIT_OK


def _cmd_match(cfg: RunConfig) -> tuple[dict, int]:
    from .quasi_equiv import match

    if len(cfg.inputs) != 2:
        raise InputError("match needs exactly two grid files")
    tabs = []
    for path in cfg.inputs:
        loaded = _load_inputs(path)
        if len(loaded) != 1 or not isinstance(loaded[0], TabulatedMatrix):
            raise InputError(f"{path}: expected a tabulated grid (CSV or JSON)")
        tabs.append(loaded[0])
    try:
        result = match(*tabs, max_distortion=cfg.options.get("max_distortion") or 1.0)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return result.to_json(), EXIT_OK


def _cmd_normlab(cfg: RunConfig) -> tuple[dict, int]:
    from . import norm_lab as nl

    rng = np.random.default_rng(cfg.seed)
    n_models = cfg.options.get("models") or 20
    samples = cfg.options.get("samples") or 1000
    out: dict = {"command": "normlab", "seed": cfg.seed}
    failures = 0
    if cfg.inputs:
        model, ladder = nl.load_model(cfg.inputs[0])
        models = [model]
    else:
        models = []
        for _ in range(n_models):
            N = int(rng.integers(2, cfg.N + 1))
            models.append(nl.SubspaceModel.random(N, int(rng.integers(1, N)), rng))

    inf_conv = {"models": len(models), "worst_ratio": 0.0, "best_ratio": np.inf, "worst_quotient": 0.0}
    dom = {"models": len(models), "observed": 0.0, "restriction_error": 0.0}
    for i, model in enumerate(models):
        GE, GG = nl.random_pd(model.k, rng), nl.random_pd(model.N - model.k, rng)
        n1, n2 = nl.canonical_norms(model, GE, GG)
        nF = nl.inf_convolution_norm(model, GE, n1, n2)
        rep = nl.verify_inf_convolution(nF, model, GE, GG, samples, seed=int(rng.integers(2 ** 32)))
        failures += not rep.passed
        inf_conv["worst_ratio"] = max(inf_conv["worst_ratio"], rep.exact_ratio_max)
        inf_conv["best_ratio"] = min(inf_conv["best_ratio"], rep.exact_ratio_min)
        inf_conv["worst_quotient"] = max(inf_conv["worst_quotient"], rep.exact_quotient_max)
        _, drep = nl.dominating_extension(model, nl.NormLadder(model.k), nl.NormLadder(model.N - model.k),
                                          samples, seed=int(rng.integers(2 ** 32)), levels=cfg.K)
        failures += not drep.passed
        dom["observed"] = max(dom["observed"], drep.observed)
        dom["restriction_error"] = max(dom["restriction_error"], drep.restriction_error)
    inf_conv["bound"] = nl.SQRT3
    dom["bound"] = nl.DOMINATION_CONSTANT
    out.update(inf_convolution=inf_conv, dominating_extension=dom, failures=failures)
    return out, EXIT_INCONSISTENT if failures else EXIT_OK


COMMANDS = {"check": _cmd_check, "classify": _cmd_classify, "probe": _cmd_probe,
            "construct": _cmd_construct, "match": _cmd_match, "normlab": _cmd_normlab}


def run(cfg: RunConfig) -> tuple[int, dict | None]:
    try:
        report, code = COMMANDS[cfg.command](cfg)
    except InputError as exc:
        return EXIT_INPUT, {"error": str(exc)}
    return code, report


# -- argument parsing -------------------------------------------------------------

def _probe_arg(tokens: list[str]) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("J", "Q"):
            raise argparse.ArgumentTypeError(f"expected J=<int> or Q=<int>, got {tok!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{key} must be an integer, got {val!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--probe", nargs="+", metavar="J=<int> Q=<int>", help="grid size for numeric probes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report (or constructed files) here")

    parser = argparse.ArgumentParser(prog="koethe-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate the Köthe axioms")
    p.add_argument("inputs", nargs="+")
    p = sub.add_parser("classify", parents=[common], help="decide every condition and cross-check")
    p.add_argument("inputs", nargs="+")
    p = sub.add_parser("probe", parents=[common], help="numeric trends on a finite grid")
    p.add_argument("inputs", nargs="+")
    p = sub.add_parser("construct", parents=[common], help="write a named example family")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--alpha", default="j")
    p.add_argument("--truncate", type=int)
    p.add_argument("--profile", action="store_true")
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--blocks", type=int)
    p.add_argument("--n", type=int)
    p = sub.add_parser("match", parents=[common], help="quasi-equivalence matching of two grids")
    p.add_argument("inputs", nargs=2)
    p.add_argument("--max-distortion", type=float)
    p = sub.add_parser("normlab", parents=[common], help="norm extension suites")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--K", type=int, default=6)
    p.add_argument("--models", type=int)
    p.add_argument("--samples", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    probe = _probe_arg(args.probe) if args.probe else {}
    options = {k: getattr(args, k) for k in ("kind", "alpha", "truncate", "profile", "blocks", "n",
                                              "max_distortion", "models", "samples") if hasattr(args, k)}
    return RunConfig(args.command, list(getattr(args, "inputs", []) or []), probe.get("J"), probe.get("Q"),
                     getattr(args, "N", 20), getattr(args, "K", 6), args.seed, args.format, args.out, options)


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(report)) + "\n"
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _finite(obj):
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
    except argparse.ArgumentTypeError as exc:
        print(f"koethe-lab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"koethe-lab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    code, report = run(cfg)
    if code == EXIT_INPUT:
        print(f"koethe-lab: {report['error']}", file=sys.stderr)
        return code
    text = render(_finite(report), cfg.format)
    if cfg.out and cfg.command != "construct":
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INCONSISTENT:
        print("koethe-lab: inconsistency detected (see report)", file=sys.stderr)
    return code


__all__ = ["EXIT_INCONSISTENT", "EXIT_INPUT", "EXIT_OK", "RunConfig", "build_parser", "main", "run"]
