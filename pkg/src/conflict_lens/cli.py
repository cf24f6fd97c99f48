"""Command-line entry point: ``conflict-lens <command> ...``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from datetime import date

from . import reporting, storage
from .config import format_sensors, load_settings
from .engine import detect, overlap_groups
from .errors import ConflictLensError
from .evaluation import evaluate, scale_residents, sweep_threshold
from .logs import SensorInfo, format_log, parse_log
from .pipeline import build_habits
from .scenarios import SCENARIOS, household_profile
from .synthetic import generate_synthetic, load_profile, profile_to_dict

log = logging.getLogger("conflict_lens")

DEFAULT_MUS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


def _write(args, text, default_name=None):
    out = args.out
    if out and os.path.isdir(out) and default_name:
        out = os.path.join(out, default_name)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _settings(args):
    s = load_settings(getattr(args, "config", None))
    return s.override(mu=getattr(args, "mu", None))


def _load_events(path, settings):
    text = _read(path)
    if text.lstrip().startswith("{"):
        return storage.load_events(text)
    parsed = parse_log(text, settings.sensors, settings.resident, settings.max_duration)
    for issue in parsed.issues:
        log.warning("%s line %d: %s %s", path, issue.line_no, issue.kind, issue.text)
    return parsed.events


def _date(text):
    return date.fromisoformat(text) if text else None


def _figure_path(args, name):
    if not args.figures:
        return None
    os.makedirs(args.figures, exist_ok=True)
    return os.path.join(args.figures, name)


def cmd_ingest(args):
    settings = _settings(args)
    parsed = parse_log(_read(args.log), settings.sensors, args.resident or settings.resident,
                       settings.max_duration)
    for issue in parsed.issues:
        print("warning: line %d: %s: %s" % (issue.line_no, issue.kind, issue.text), file=sys.stderr)
    if args.format == "tsv":
        _write(args, format_log(parsed.events, settings.sensors))
    else:
        _write(args, storage.save_events(parsed.events))


def cmd_mine(args):
    settings = _settings(args)
    events = _load_events(args.events, settings)
    since, until = _date(args.since), _date(args.until)
    events = [e for e in events
              if (since is None or e.start.date() >= since)
              and (until is None or e.start.date() < until)]
    _, _, habits = build_habits(events, settings)
    _write(args, storage.save_habits(habits))


def cmd_detect(args):
    settings = _settings(args)
    habits = storage.load_habits(_read(args.habits))
    reports = detect(overlap_groups(habits), settings.mu)
    if args.format == "tsv":
        _write(args, storage.reports_tsv(reports))
    else:
        _write(args, storage.save_reports(reports, settings.mu))


def cmd_generate(args):
    if args.profile:
        profile = load_profile(_read(args.profile))
    else:
        profile = SCENARIOS[args.scenario]()
    if args.seed is not None:
        profile = dataclasses.replace(profile, seed=args.seed)
    events, truth = generate_synthetic(profile)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)

    def put(name, text):
        with open(os.path.join(out, name), "w", encoding="utf-8") as fh:
            fh.write(text)

    put("events.json", storage.save_events(events))
    put("truth.json", storage.save_truth(truth))
    put("profile.json", json.dumps(profile_to_dict(profile), indent=2, sort_keys=True) + "\n")
    sensors = {}
    for t in profile.templates:
        if len(t.distributions) == 1:
            name = "%s_%s" % (t.location, t.service_id)
            sensors[name] = SensorInfo(t.service_id, t.location, next(iter(t.distributions)))
    if len(sensors) == len({(t.location, t.service_id) for t in profile.templates}):
        put("events.log", format_log(events, sensors))
        put("sensors.conf", format_sensors(sensors))
    else:
        print("note: multi-attribute templates; events.log not written", file=sys.stderr)
    print("%d events, %d planted conflicts -> %s" % (len(events), len(truth), out), file=sys.stderr)


def _emit_metrics(args, metrics):
    if args.format == "tsv":
        _write(args, reporting.metrics_tsv(metrics))
    else:
        _write(args, reporting.metrics_json(metrics))
    path = _figure_path(args, "metrics.png")
    if path:
        from .plotting import plot_metrics
        plot_metrics(metrics, path)


def cmd_evaluate(args):
    reports = storage.load_reports(_read(args.reports))
    truth = storage.load_truth(_read(args.truth))
    _emit_metrics(args, evaluate(reports, truth))


def _parse_mus(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("--mus expects comma-separated floats") from None


def cmd_sweep(args):
    settings = _settings(args)
    _, _, habits = build_habits(_load_events(args.events, settings), settings)
    truth = storage.load_truth(_read(args.truth))
    rows = sweep_threshold(habits, truth, args.mus)
    _write(args, reporting.sweep_tsv(rows) if args.format == "tsv" else reporting.sweep_json(rows))
    path = _figure_path(args, "sweep.png")
    if path:
        from .plotting import plot_sweep
        plot_sweep(rows, path)


def cmd_scale(args):
    settings = _settings(args)
    full = load_profile(_read(args.profile)) if args.profile else household_profile()
    if args.seed is not None:
        full = dataclasses.replace(full, seed=args.seed)
    sets = []
    for k in range(1, len(full.residents) + 1):
        events, _ = generate_synthetic(full.restricted_to(full.residents[:k]))
        sets.append((k, build_habits(events, settings)[2]))
    rows = scale_residents(sets, settings.mu)
    _write(args, reporting.scale_tsv(rows) if args.format == "tsv" else reporting.scale_json(rows))
    path = _figure_path(args, "scale.png")
    if path:
        from .plotting import plot_scale
        plot_scale(rows, path)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key-value settings file (default: $CONFLICT_LENS_CONFIG)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="conflict-lens",
                                description="A-priori detection of IoT service conflicts "
                                            "between residents' usage habits.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="parse an ON/OFF log into events")
    s.add_argument("log")
    s.add_argument("--resident", help="user id for lines without a user column")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("mine", parents=[common], help="mine a habit database from events")
    s.add_argument("events", help="events JSON or raw log")
    s.add_argument("--since", help="first date to include (YYYY-MM-DD)")
    s.add_argument("--until", help="first date to exclude (YYYY-MM-DD)")
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("detect", parents=[common], help="detect conflicts in a habit database")
    s.add_argument("habits")
    s.add_argument("--mu", type=float, help="temporal proximity threshold in [0, 1]")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("generate", parents=[common], help="write a synthetic dataset with truth")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--scenario", choices=sorted(SCENARIOS), default="planted")
    g.add_argument("--profile", help="profile JSON file")
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("evaluate", parents=[common], help="score reports against truth")
    s.add_argument("reports")
    s.add_argument("truth")
    s.add_argument("--figures", help="directory for PNG figures")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("sweep", parents=[common], help="recall per class across thresholds")
    s.add_argument("events")
    s.add_argument("truth")
    s.add_argument("--mus", type=_parse_mus, default=list(DEFAULT_MUS))
    s.add_argument("--figures", help="directory for PNG figures")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("scale", parents=[common], help="conflict counts for 1..N residents")
    s.add_argument("--profile", help="profile JSON (default: built-in household)")
    s.add_argument("--seed", type=int)
    s.add_argument("--mu", type=float)
    s.add_argument("--figures", help="directory for PNG figures")
    s.set_defaults(func=cmd_scale)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (ConflictLensError, ValueError, OSError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
