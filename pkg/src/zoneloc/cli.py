"""Command-line entry point: ``zoneloc {fit,localize,evaluate,simulate}``.

Machine-readable output goes to stdout or ``--out``; diagnostics go to
stderr. Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import belief, simulator
from .errors import ConflictError, DomainError, NoEvidenceError, ValidationError, ZonelocError
from .fingerprints import FingerprintDatabase, load_fingerprint_db, load_observation, save_fingerprint_db
from .statfit import Family, FitConfig, ObservationModel, fit_observation_model
from .zonesets import zone_set

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

PLOT_STEP_DBM = 0.5
PLOT_MARGIN_DBM = 10.0

_LOGGER = logging.getLogger("zoneloc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _families(text: str) -> tuple[Family, ...]:
    try:
        return tuple(Family.parse(t) for t in text.split(",") if t.strip())
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zoneloc", description="Zone-level WiFi localization with belief-function fusion.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="fit an observation model from fingerprints")
    fit.add_argument("--fingerprints", required=True, type=Path)
    fit.add_argument("--out", required=True, type=Path)
    fit.add_argument("--alpha", type=float, default=0.05)
    fit.add_argument("--families", type=_families, default=(Family.NORMAL, Family.LOGISTIC))
    fit.add_argument("--min-samples", type=int, default=10)
    fit.add_argument("--plot-data", type=Path, help="also write per-zone fitted densities as CSV")

    loc = sub.add_parser("localize", help="assign zone confidences to one observation")
    loc.add_argument("--model", required=True, type=Path)
    loc.add_argument("--observation", required=True, type=Path)
    loc.add_argument("--trace", action="store_true", help="include per-AP and fused mass functions")

    ev = sub.add_parser("evaluate", help="score a model on simulated observations")
    ev.add_argument("--model", required=True, type=Path)
    ev.add_argument("--scenario", required=True, type=Path)
    ev.add_argument("--trials", type=int, default=1000)
    ev.add_argument("--seed", type=int, default=7)

    sim = sub.add_parser("simulate", help="write a synthetic fingerprint CSV")
    sim.add_argument("--scenario", required=True, type=Path)
    sim.add_argument("--out", required=True, type=Path)
    return parser


def write_plot_data(db: FingerprintDatabase, model: ObservationModel, path: Path) -> None:
    """Fitted single-zone densities on a per-AP RSS grid, one row per point."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("ap_id", "zone_id", "x_dbm", "pdf"))
        for n, ap_id in enumerate(db.aps):
            values = [v for k in range(db.n_zones) for v in db.cell(k, n)]
            if not values:
                continue
            lo = np.floor(min(values) - PLOT_MARGIN_DBM)
            hi = np.ceil(max(values) + PLOT_MARGIN_DBM)
            grid = np.arange(lo, hi + PLOT_STEP_DBM / 2, PLOT_STEP_DBM)
            for k, zone_id in enumerate(db.zones):
                fit = model.cell(n, zone_set([k]))
                if fit.degenerate:
                    continue
                for x in grid:
                    writer.writerow((ap_id, zone_id, f"{x:.1f}", repr(fit.density(float(x)))))


def _cmd_fit(args) -> None:
    db = load_fingerprint_db(args.fingerprints)
    config = FitConfig(alpha=args.alpha, families=args.families, min_samples=args.min_samples)
    model = fit_observation_model(db, config)
    model.save(args.out)
    n_degenerate = sum(c.degenerate for c in model.table.values())
    n_rejected = sum(not c.accepted and not c.degenerate for c in model.table.values())
    _LOGGER.info("wrote %d cells (%d degenerate, %d rejected by K-S) to %s",
                 len(model.table), n_degenerate, n_rejected, args.out)
    if args.plot_data is not None:
        write_plot_data(db, model, args.plot_data)


def _cmd_localize(args) -> None:
    model = ObservationModel.load(args.model)
    obs = load_observation(args.observation)
    if args.trace:
        trace = belief.localize_trace(model, obs)
        print(json.dumps(trace.to_dict(), indent=1))
    else:
        print(belief.localize(model, obs).to_json())


def _cmd_evaluate(args) -> None:
    model = ObservationModel.load(args.model)
    scenario = simulator.Scenario.load(args.scenario)
    if args.trials < 0:
        raise ValidationError(f"--trials must be >= 0, got {args.trials}")
    print(simulator.evaluate(model, scenario, args.trials, args.seed).to_json())


def _cmd_simulate(args) -> None:
    scenario = simulator.Scenario.load(args.scenario)
    save_fingerprint_db(simulator.generate_db(scenario), args.out)


COMMANDS = {
    "fit": _cmd_fit,
    "localize": _cmd_localize,
    "evaluate": _cmd_evaluate,
    "simulate": _cmd_simulate,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (NoEvidenceError, ConflictError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ZonelocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main() -> None:
    sys.exit(run())
