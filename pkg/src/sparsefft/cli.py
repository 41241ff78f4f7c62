"""Command-line front end: ``sfft {exact,general,reduce,sweep,selftest}``.

Settings come from (lowest to highest precedence) built-in defaults, a
``key = value`` config file given with --config, and command-line flags.
Constants are overridden with ``--const.<name> VALUE`` or ``const.<name> = VALUE``.

Exit codes: 0 success, 1 below threshold, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .bench import TrialConfig, report_csv, report_json, run_trials, scaling_sweep

EXIT_OK, EXIT_BELOW, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_SUBCOMMAND_ALGO = {"exact": "exact", "general": "general", "reduce": "reduction"}

# flag name -> (TrialConfig field, parser)
_FIELDS = {
    "n": ("n", int),
    "k": ("k", int),
    "l": ("L", int),
    "eps": ("eps", float),
    "delta": ("delta", float),
    "noise": ("noise", float),
    "head": ("head", float),
    "trials": ("trials", int),
    "seed": ("seed", int),
    "threshold": ("threshold", float),
}


SWEEP_DEFAULTS = {"ns": "4096,8192,16384,32768,65536", "ks": "4,16,64,256", "algorithms": "exact,general"}


class UsageError(Exception):
    pass


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-")] = value
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sfft", description="Sparse FFT trials and benchmarks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value settings file (flags override it)")
        for name, (_, typ) in _FIELDS.items():
            sp.add_argument(f"--{name}", type=typ, default=None)
        sp.add_argument("--out", help="report path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--no-timing", action="store_true", help="write wall_ns as 0 for reproducible files")

    for name in ("exact", "general", "reduce"):
        common(sub.add_parser(name, help=f"run {name} trials"))
    sw = sub.add_parser("sweep", help="sample-complexity sweep over an (n, k) grid")
    common(sw)
    sw.add_argument("--ns", default=None, help=f"comma list (default {SWEEP_DEFAULTS['ns']})")
    sw.add_argument("--ks", default=None, help=f"comma list (default {SWEEP_DEFAULTS['ks']})")
    sw.add_argument("--algorithms", default=None, help="comma list (default exact,general)")
    sub.add_parser("selftest", help="quick end-to-end check of every algorithm")
    return p


def _split_consts(argv: list[str]) -> tuple[list[str], dict[str, str]]:
    rest, consts = [], {}
    i = 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--const."):
            name = a[len("--const.") :]
            if "=" in name:
                name, value = name.split("=", 1)
            else:
                if i + 1 >= len(argv):
                    raise UsageError(f"{a} needs a value")
                i += 1
                value = argv[i]
            consts[name] = value
        else:
            rest.append(a)
        i += 1
    return rest, consts


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def build_config(args: argparse.Namespace, flag_consts: dict[str, str]) -> tuple[TrialConfig, dict]:
    """Merge defaults, config file and flags into a TrialConfig plus output options."""
    settings: dict[str, str] = {}
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    fields = {}
    consts = {}
    for key, value in settings.items():
        if key.startswith("const."):
            consts[key[len("const.") :]] = value
        elif key in _FIELDS:
            fname, typ = _FIELDS[key]
            fields[fname] = typ(value)
        elif key not in ("out", "format", "no-timing", "ns", "ks", "algorithms"):
            raise UsageError(f"unknown setting {key!r} in config file")
    for key, (fname, _) in _FIELDS.items():
        v = getattr(args, key, None)
        if v is not None:
            fields[fname] = v
    consts.update(flag_consts)
    consts = {k: _number(v) for k, v in consts.items()}
    algorithm = _SUBCOMMAND_ALGO.get(args.command, "exact")
    timing = not (args.no_timing or settings.get("no-timing", "").lower() in ("1", "true", "yes"))
    try:
        cfg = TrialConfig(algorithm=algorithm, consts=consts, timing=timing, **fields)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    out = {
        "out": args.out or settings.get("out"),
        "format": args.format or settings.get("format", "csv"),
    }
    for key, default in SWEEP_DEFAULTS.items():
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else settings.get(key, default)
    return cfg, out


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_trials(cfg: TrialConfig, out: dict) -> int:
    report = run_trials(cfg)
    text = report_csv(report) if out["format"] == "csv" else report_json(report)
    _emit(text, out["out"])
    s = report.summary()
    print(
        f"{cfg.algorithm}: n={cfg.n} k={cfg.k} success {s['success_rate']:.3f} "
        f"(threshold {cfg.threshold:.3f}), median samples {s['median_samples']:.0f}",
        file=sys.stderr,
    )
    return EXIT_OK if report.passed else EXIT_BELOW


def _cmd_sweep(cfg: TrialConfig, out: dict) -> int:
    try:
        ns = [int(v) for v in str(out["ns"]).split(",")]
        ks = [int(v) for v in str(out["ks"]).split(",")]
    except ValueError as exc:
        raise UsageError(f"bad grid: {exc}") from exc
    algorithms = [a.strip() for a in str(out["algorithms"]).split(",")]
    grid = [(n, k) for n in ns for k in ks if k < n]
    if cfg.trials == TrialConfig.trials:
        cfg = replace(cfg, trials=3)
    try:
        rep = scaling_sweep(grid, cfg, algorithms)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = rep.rows()
    if out["format"] == "json":
        doc = {"points": rows, "spread": {a: rep.spread(a) for a in algorithms}}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        cols = list(rows[0]) if rows else []
        lines = [",".join(cols)] + [",".join(repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols) for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, out["out"])
    ok = True
    for a in algorithms:
        print(f"{a}: samples/shape spread {rep.spread(a):.2f} (limit {rep.max_spread})", file=sys.stderr)
        ok &= rep.passed(a)
    return EXIT_OK if ok else EXIT_BELOW


def _cmd_selftest() -> int:
    checks = [
        TrialConfig(algorithm="exact", n=1024, k=8, L=100, trials=6, seed=1, timing=False),
        TrialConfig(algorithm="general", n=1024, k=4, eps=1.0, delta=0.01, trials=6, seed=2, timing=False),
        TrialConfig(algorithm="reduction", n=64, k=4, L=100, trials=6, seed=3, timing=False),
    ]
    ok = True
    for cfg in checks:
        rep = run_trials(cfg)
        print(f"{cfg.algorithm:9s} n={cfg.n:5d} k={cfg.k:2d}  success {rep.success_rate:.2f}  "
              f"{'PASS' if rep.passed else 'FAIL'}")
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_BELOW


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rest, flag_consts = _split_consts(argv)
        args = _parser().parse_args(rest)
    except UsageError as exc:
        print(f"sfft: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "selftest":
            return _cmd_selftest()
        cfg, out = build_config(args, flag_consts)
        if args.command == "sweep":
            return _cmd_sweep(cfg, out)
        return _cmd_trials(cfg, out)
    except UsageError as exc:
        print(f"sfft: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sfft: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
