"""Command-line front end: ``garnier list | verify | integrate | dump``.

Exit codes: 0 all checks pass (ledgered failures count as warnings),
1 some check fails, 2 invalid configuration or arguments, 3 runtime error.

Settings come from flags and, optionally, from a flat ``key = value`` file
given with ``--config``; flags win over the file.  Recognized keys are
``systems``, ``checks``, ``use-constraint``, ``jobs``, ``out`` and ``ledger``.
"""

from __future__ import annotations

import argparse
import sys as _sys
from dataclasses import dataclass
from typing import Sequence

from .catalog import registry_filter, registry_get, registry_keys
from .catalog import dump as dump_system
from .transforms import base_system, get_transform, transform_ids
from .verify import CHECK_KINDS, load_ledger, report_lines, run_suite, summarize

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

CONFIG_KEYS = ("systems", "checks", "use-constraint", "jobs", "out", "ledger")


class ConfigError(ValueError):
    """Invalid configuration; reported with exit code 2."""


@dataclass(frozen=True)
class SuiteConfig:
    systems: tuple[str, ...]
    checks: tuple[str, ...]
    use_constraint: bool = True
    jobs: int = 1
    out: str | None = None
    ledger: str | None = None


def read_config(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment line."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out: dict[str, str] = {}
    for n, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{n}: expected key = value")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{path}:{n}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _split(value: str) -> list[str]:
    return [v for v in (x.strip() for x in value.replace(",", " ").split()) if v]


def _bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


def resolve_systems(items: Sequence[str]) -> tuple[str, ...]:
    """Expand ``all`` and glob patterns; unknown names are config errors."""
    out: list[str] = []
    for item in items:
        if item == "all":
            hits = registry_keys(amended=True)
        elif any(c in item for c in "*?["):
            hits = registry_filter(item, amended=True)
            if not hits:
                raise ConfigError(f"pattern {item!r} matches no system")
        elif item in registry_keys(amended=True):
            hits = [item]
        else:
            raise ConfigError(f"unknown system {item!r}")
        out.extend(h for h in hits if h not in out)
    return tuple(out)


def resolve_checks(items: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    for item in items:
        hits = list(CHECK_KINDS) if item == "all" else [item]
        for h in hits:
            if h not in CHECK_KINDS:
                raise ConfigError(f"unknown check kind {h!r}; known: {', '.join(CHECK_KINDS)}")
            if h not in out:
                out.append(h)
    return tuple(out)


def build_config(args: argparse.Namespace) -> SuiteConfig:
    """Merge the config file and flags, validating everything up front."""
    file_cfg = read_config(args.config) if args.config else {}
    systems = args.systems if args.systems is not None else file_cfg.get("systems", "all")
    checks = args.checks if args.checks is not None else file_cfg.get("checks", "all")
    if args.use_constraint is not None:
        uc = args.use_constraint
    else:
        uc = _bool(file_cfg.get("use-constraint", "true"))
    jobs_text = str(args.jobs) if args.jobs is not None else file_cfg.get("jobs", "1")
    try:
        jobs = int(jobs_text)
    except ValueError:
        raise ConfigError(f"jobs must be an integer, got {jobs_text!r}") from None
    if jobs < 1:
        raise ConfigError("jobs must be at least 1")
    return SuiteConfig(
        systems=resolve_systems(_split(systems)),
        checks=resolve_checks(_split(checks)),
        use_constraint=uc,
        jobs=jobs,
        out=args.out if args.out is not None else file_cfg.get("out"),
        ledger=args.ledger if args.ledger is not None else file_cfg.get("ledger"),
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_list(pattern: str = "*", keys: Sequence[str] | None = None) -> str:
    """One line per registered system matching ``pattern``."""
    keys = registry_keys(amended=True) if keys is None else list(keys)
    matched = set(registry_filter(pattern, amended=True))
    lines = []
    for key in keys:
        if key not in matched:
            continue
        s = registry_get(key)
        base = base_system(key)
        lines.append(f"{key}\ttimes={len(s.times)}\tpairs={len(s.pairs)}\t"
                     f"params={len(s.params)}\tcharts={len(transform_ids(base, 'chart'))}\t"
                     f"symmetries={len(transform_ids(base, 'symmetry'))}")
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_verify(cfg: SuiteConfig, stream=None) -> int:
    stream = stream or _sys.stdout
    try:
        ledger = load_ledger(cfg.ledger)
    except OSError as exc:
        raise ConfigError(f"cannot read ledger: {exc}") from None
    reports = run_suite(cfg.systems, cfg.checks, cfg.use_constraint, cfg.jobs, ledger)
    for r in reports:
        line = f"{r.verdict.upper():5s} {r.id}"
        if r.verdict != "pass":
            line += f"  -- {r.note or r.witness[:200]}"
        print(line, file=stream)
    counts = summarize(reports)
    print(" ".join(f"{k}={v}" for k, v in counts.items()), file=stream)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(report_lines(reports)) + ("\n" if reports else ""))
    if counts["fail"]:
        return EXIT_FAIL
    if counts["error"]:
        return EXIT_RUNTIME
    return EXIT_PASS


def read_state(path: str) -> dict[str, float]:
    """Initial values as ``name = number`` lines."""
    out: dict[str, float] = {}
    for key, value in read_kv(path).items():
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"{path}: {key} is not a number: {value!r}") from None
    return out


def read_kv(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    out = {}
    for n, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected name = value")
        out[key.strip()] = value.strip()
    return out


def cmd_integrate(key: str, state_path: str, step: float, horizon: float,
                  time_name: str | None, out: str | None, use_constraint: bool,
                  stream=None) -> int:
    from .numerics import NumericError, NumericState, SingularityError, drift_report, \
        integrate_flow, write_csv

    stream = stream or _sys.stdout
    if key not in registry_keys(amended=True):
        raise ConfigError(f"unknown system {key!r}")
    s = registry_get(key)
    values = read_state(state_path)
    tname = time_name or s.times[0]
    if tname not in s.times:
        raise ConfigError(f"{key} has no time {tname!r}")
    if not step > 0:
        raise ConfigError("step must be positive")
    extra = sorted(set(values) - set(s.phase) - set(s.times) - set(s.params))
    if extra:
        raise ConfigError(f"{state_path}: {key} has no variables {extra}")
    try:
        start = NumericState.for_system(
            s,
            {x: values[x] for x in s.phase if x in values},
            {t: values.get(t, 0.0) for t in s.times},
            {a: values[a] for a in s.params if a in values},
            check_constraint=use_constraint)
    except NumericError as exc:
        raise ConfigError(str(exc)) from None
    ti = list(s.times).index(tname)
    try:
        traj = integrate_flow(s, ti, start, horizon, step)
    except SingularityError as exc:
        print(f"aborted: {exc}", file=stream)
        if exc.trajectory is not None and len(exc.trajectory):
            last = exc.trajectory.end
            print("last good state: " + ", ".join(f"{k}={v!r}" for k, v in last.phase.items()),
                  file=stream)
        return EXIT_RUNTIME
    except NumericError as exc:
        print(f"error: {exc}", file=stream)
        return EXIT_RUNTIME
    labels = [f"H[{t}]" for t in s.times]
    drift = drift_report(s, s.hamiltonians, traj)
    if out:
        write_csv(out, s, traj, dict(zip(labels, s.hamiltonians)))
    print(f"{key}: {len(traj) - 1} steps of {step} along {tname} to {horizon}", file=stream)
    for lab, d in zip(labels, drift):
        print(f"drift {lab} {d:.3e}", file=stream)
    return EXIT_PASS


def cmd_dump(key: str, with_transforms: bool = False) -> str:
    if key not in registry_keys(amended=True):
        raise ConfigError(f"unknown system {key!r}")
    text = dump_system(registry_get(key))
    if with_transforms:
        s = registry_get(key)
        for tid in transform_ids(base_system(key)):
            try:
                text += get_transform(tid, s).to_text() + "\n"
            except Exception as exc:  # printed tuples of the wrong length
                text += f"{tid}: {exc}\n"
    return text


# ---------------------------------------------------------------------------
# entry point


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="garnier", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pl = sub.add_parser("list", help="list registered systems")
    pl.add_argument("pattern", nargs="?", default="*", help="glob on system keys")

    pv = sub.add_parser("verify", help="run check suites")
    pv.add_argument("--config", help="flat key = value file")
    pv.add_argument("--systems", help="comma-separated keys or globs, or 'all'")
    pv.add_argument("--checks", help=f"comma-separated kinds or 'all' ({', '.join(CHECK_KINDS)})")
    g = pv.add_mutually_exclusive_group()
    g.add_argument("--use-constraint", dest="use_constraint", action="store_true", default=None,
                   help="retry failing checks on the parameter constraint (default)")
    g.add_argument("--no-constraint", dest="use_constraint", action="store_false",
                   help="free parameters only")
    pv.add_argument("--jobs", type=int, help="worker processes")
    pv.add_argument("--out", help="write JSON Lines report here")
    pv.add_argument("--ledger", help="discrepancy ledger file (default: bundled)")

    pi = sub.add_parser("integrate", help="RK4 integration with drift summary")
    pi.add_argument("system")
    pi.add_argument("--state", required=True, help="initial values as name = number lines")
    pi.add_argument("--step", type=float, default=1e-3)
    pi.add_argument("--horizon", type=float, default=1.0, help="final value of the time")
    pi.add_argument("--time", help="time variable to flow along (default: first)")
    pi.add_argument("--out", help="trajectory CSV")
    pi.add_argument("--use-constraint", action="store_true",
                    help="reject parameters violating the constraint")

    pd = sub.add_parser("dump", help="print a system, optionally with its maps")
    pd.add_argument("system")
    pd.add_argument("--transforms", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_CONFIG
    try:
        if args.command == "list":
            _sys.stdout.write(cmd_list(args.pattern))
            return EXIT_PASS
        if args.command == "verify":
            return cmd_verify(build_config(args))
        if args.command == "integrate":
            return cmd_integrate(args.system, args.state, args.step, args.horizon, args.time,
                                 args.out, args.use_constraint)
        if args.command == "dump":
            _sys.stdout.write(cmd_dump(args.system, args.transforms))
            return EXIT_PASS
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"runtime error: {exc}", file=_sys.stderr)
        return EXIT_RUNTIME
    return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
