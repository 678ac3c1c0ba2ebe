"""Command-line front end: ``run``, ``sweep``, ``compare`` and ``validate``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from pathlib import Path

from . import engine
from .config import ConfigError, ScenarioConfig, parse_config
from .metrics import REPORT_METRICS, MetricsReport
from .spectrum import ScenarioId

log = logging.getLogger("stinshare")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

CSV_COLUMNS = ("swept_param", "scenario") + REPORT_METRICS + tuple(f"{m}_ci" for m in REPORT_METRICS)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".9g")


def csv_text(results) -> str:
    """CSV for a sequence of ``(swept_value, scenario, MetricsReport)`` rows."""
    results = list(results)
    if not results:
        raise ValueError("no results to write")
    buf = io.StringIO(newline="")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for value, scenario, report in results:
        token = scenario.token if isinstance(scenario, ScenarioId) else str(scenario)
        row = report.as_row()
        fields = [_fmt(value), token] + [_fmt(row[c]) for c in CSV_COLUMNS[2:]]
        buf.write(",".join(fields) + "\n")
    return buf.getvalue()


def emit_csv(results, destination) -> None:
    """Write results to a path or a text sink; empty results create no file."""
    text = csv_text(results)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    data = text.encode("utf-8")
    written = 0
    try:
        with open(path, "wb") as fh:
            written = fh.write(data)
    except OSError:
        log.warning("partial write to %s: %d of %d bytes", path, written, len(data))
        raise


def _parse_values(text: str) -> list[float]:
    """``a:b:step`` (inclusive of b when on the grid) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] == 0:
            raise ConfigError([f"--values: expected start:stop:step with nonzero step (got {text!r})"])
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ConfigError([f"--values: empty range (got {text!r})"])
        return [start + i * step for i in range(n)]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError([f"--values: not a number list (got {text!r})"]) from None


def _parse_scenarios(text: str) -> list[ScenarioId]:
    try:
        return [ScenarioId.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError([f"--scenarios: {exc}"]) from None


def load_config(args) -> ScenarioConfig:
    text = ""
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError([f"--config: cannot read {args.config} ({exc.strerror})"]) from None
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides.append(f"run.seed={args.seed}")
    return parse_config(text, overrides)


def _summary(label: str, report: MetricsReport, out) -> None:
    print(f"[{label}] replications={report.replication_count}", file=out)
    for name in REPORT_METRICS:
        est = getattr(report, name)
        print(f"  {name:24s} {_fmt(est.mean):>16s} +/- {_fmt(est.half_width)}", file=out)
    print(f"  mean nodes: bs={report.mean_bs_count:.2f} satellites={report.mean_satellite_count:.1f} "
          f"visible={report.mean_visible_count:.2f}", file=out)
    if report.near_field_clamps:
        print(f"  near-field clamps: {report.near_field_clamps}", file=out)


def _write(results, args) -> None:
    if args.out:
        emit_csv(results, args.out)
    else:
        emit_csv(results, sys.stdout)


def cmd_validate(args) -> int:
    load_config(args)
    print("config OK", file=sys.stderr)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = load_config(args)
    report = engine.run(cfg, workers=args.workers)
    _summary(cfg.scenario.id.token, report, sys.stderr)
    _write([(cfg.spectrum.reserved, cfg.scenario.id, report)], args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    values = _parse_values(args.values)
    scenarios = _parse_scenarios(args.scenarios)
    per_scenario = []
    for sc in scenarios:
        spec = engine.SweepSpec(args.param, tuple(values), cfg.with_values(**{"scenario.id": sc}))
        per_scenario.append((sc, engine.sweep(spec, workers=args.workers)))
    rows = []
    for i, v in enumerate(values):
        for sc, res in per_scenario:
            rows.append((v, sc, res[i][1]))
    for sc, res in per_scenario:
        mid = res[len(res) // 2]
        _summary(f"{sc.token} {args.param}={_fmt(mid[0])}", mid[1], sys.stderr)
    _write(rows, args)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = load_config(args)
    scenarios = _parse_scenarios(args.scenarios)
    configs = [cfg.with_values(**{"scenario.id": sc}) for sc in scenarios]
    table = engine.compare(configs, workers=args.workers)
    for label, report in zip(table.labels, table.reports):
        _summary(label, report, sys.stderr)
    for row in table.rows:
        d = row.difference
        print(f"  {row.other} - {row.baseline} {row.metric:24s} {_fmt(d.mean):>16s} +/- {_fmt(d.half_width)}",
              file=sys.stderr)
    _write([(c.spectrum.reserved, c.scenario.id, r) for c, r in zip(configs, table.reports)], args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="sectioned key=value or JSON config file")
    common.add_argument("--out", help="CSV destination (default stdout)")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, help="master seed (overrides run.seed)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")

    p = argparse.ArgumentParser(prog="stinshare", description="Satellite-terrestrial spectrum sharing simulator")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="parse and validate a config only")
    sub.add_parser("run", parents=[common], help="run one scenario")
    sw = sub.add_parser("sweep", parents=[common], help="sweep one parameter across scenarios")
    sw.add_argument("--param", default="spectrum.reserved")
    sw.add_argument("--values", default="0:280:20", help="start:stop:step or comma list")
    sw.add_argument("--scenarios", default="S1,S2,S3")
    cp = sub.add_parser("compare", parents=[common], help="paired comparison of scenarios")
    cp.add_argument("--scenarios", default="S1,S2,S3")
    return p


COMMANDS = {"validate": cmd_validate, "run": cmd_run, "sweep": cmd_sweep, "compare": cmd_compare}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.workers < 1:
            raise ConfigError([f"--workers: must be >= 1 (got {args.workers})"])
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        for line in exc.problems:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_CONFIG
    except (engine.InvalidComparisonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, engine.InvalidComparisonError) else EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
