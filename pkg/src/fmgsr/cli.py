"""Command-line front end for convergence studies.

Any of the configuration axes (--nsr, --halo, --ns) left unset sweeps its
full study set, so a bare invocation runs the whole 24-configuration grid.
Values can also come from a plain config file of ``key = value`` lines
(``#`` starts a comment); command-line flags win over file values.

Exit codes: 0 success, 1 configuration error, 2 failed --seed-check.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .cycles import SolverConfig
from .harness import (
    HALO_ORDER,
    NS_VALUES,
    NSR_VALUES,
    emit_csv,
    memory_report,
    observed_order,
    run_full_study,
    seed_check,
)
from .mesh import HaloMode, build_hierarchy
from .plotting import emit_plot
from .smoothers import SmootherConfig

logger = logging.getLogger(__name__)

_HALO_CHOICES = ("2", "4", "global")

_INT_KEYS = ("m_min", "m_max", "m0", "nsr", "ns", "nmodes_div")
_STR_KEYS = ("halo", "csv", "svg")
_DEFAULTS = {"m_min": 4, "m_max": 8, "m0": 2, "nmodes_div": 16}


class ConfigError(Exception):
    """Invalid command line or config file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fmgsr",
        description="Convergence studies for the multigrid Poisson solver.",
    )
    parser.add_argument("--config", metavar="FILE", help="key = value config file")
    parser.add_argument("--m-min", type=int, help="smallest finest-level exponent")
    parser.add_argument("--m-max", type=int, help="largest finest-level exponent")
    parser.add_argument("--m0", type=int, help="coarsest-level exponent")
    parser.add_argument(
        "--nsr", type=int, help="SR depth 0-3 (default: sweep all four)"
    )
    parser.add_argument(
        "--halo", choices=_HALO_CHOICES, help="halo mode (default: sweep all three)"
    )
    parser.add_argument(
        "--ns", type=int, help="smoother sweeps per application (default: sweep 1, 2)"
    )
    parser.add_argument(
        "--nmodes-div",
        type=int,
        help="nmodes = max(1, N / NMODES_DIV) for the manufactured problem",
    )
    parser.add_argument("--csv", metavar="PATH", help="write study records as CSV")
    parser.add_argument("--svg", metavar="PATH", help="write study charts as SVG")
    parser.add_argument(
        "--seed-check",
        action="store_true",
        help="run the built-in oracle checks and exit",
    )
    parser.add_argument(
        "--memory-report",
        action="store_true",
        help="print the SR memory model for the selection and exit",
    )
    return parser


def parse_config_file(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; '#' comments and blank lines are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    known = set(_INT_KEYS) | set(_STR_KEYS)
    options: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        options[key] = value
    return options


def _resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over defaults, with coercion."""
    from_file = parse_config_file(args.config) if args.config else {}
    settings: dict = {}
    for key in _INT_KEYS + _STR_KEYS:
        cli_value = getattr(args, key)
        if cli_value is not None:
            settings[key] = cli_value
        elif key in from_file:
            raw = from_file[key]
            if key in _INT_KEYS:
                try:
                    settings[key] = int(raw)
                except ValueError:
                    raise ConfigError(f"config key {key!r}: not an integer: {raw!r}")
            else:
                settings[key] = raw
        else:
            settings[key] = _DEFAULTS.get(key)

    if settings["halo"] is not None and settings["halo"] not in _HALO_CHOICES:
        raise ConfigError(
            f"halo must be one of {', '.join(_HALO_CHOICES)}, got {settings['halo']!r}"
        )
    if settings["nsr"] is not None and not 0 <= settings["nsr"] <= 3:
        raise ConfigError(f"nsr must be in 0..3, got {settings['nsr']}")
    if settings["ns"] is not None and settings["ns"] < 1:
        raise ConfigError(f"ns must be >= 1, got {settings['ns']}")
    return settings


def _selected_configs(settings: dict) -> list[tuple[int, HaloMode, int]]:
    halos = (
        (HaloMode(settings["halo"]),) if settings["halo"] is not None else HALO_ORDER
    )
    ns_values = (settings["ns"],) if settings["ns"] is not None else NS_VALUES
    nsr_values = (settings["nsr"],) if settings["nsr"] is not None else NSR_VALUES
    return [
        (n_sr, halo, ns) for halo in halos for ns in ns_values for n_sr in nsr_values
    ]


def _run_seed_check() -> int:
    results = seed_check()
    failed = 0
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        print(f"{status} {name}: {detail}")
        failed += not passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 2 if failed else 0


def _print_memory_report(settings: dict) -> None:
    m0, m = settings["m0"], settings["m_max"]
    halos = (
        (HaloMode(settings["halo"]),) if settings["halo"] is not None else HALO_ORDER
    )
    nsr_values = (settings["nsr"],) if settings["nsr"] is not None else NSR_VALUES
    print(f"memory model for m0={m0}, m={m} (cells)")
    print(f"{'halo':>8} {'n_sr':>4} {'full':>10} {'sr_window':>9} "
          f"{'total':>10} {'ratio':>7}")
    for halo in halos:
        base = None
        for n_sr in nsr_values:
            try:
                cfg = SolverConfig(
                    hierarchy=build_hierarchy(m0, m),
                    n_sr=n_sr,
                    smoother=SmootherConfig(halo_mode=halo),
                )
            except ValueError as exc:
                print(f"{halo.label:>8} {n_sr:>4}  skipped ({exc})")
                continue
            model = memory_report(cfg)
            if base is None:
                full_cfg = SolverConfig(
                    hierarchy=build_hierarchy(m0, m),
                    n_sr=0,
                    smoother=SmootherConfig(halo_mode=halo),
                )
                base = memory_report(full_cfg).total_modeled
            ratio = base / model.total_modeled
            print(
                f"{halo.label:>8} {n_sr:>4} {model.cells_stored_full:>10} "
                f"{model.sr_working_set:>9} {model.total_modeled:>10} "
                f"{ratio:>6.2f}x"
            )


def _print_summary(records) -> None:
    groups: dict[tuple, list] = {}
    for r in records:
        groups.setdefault((r.halo_mode, r.ns, r.n_sr), []).append(r)
    for (halo, ns, n_sr), recs in groups.items():
        recs = sorted(recs, key=lambda r: r.n)
        order = f"{observed_order(recs):.3f}" if len(recs) >= 3 else "n/a"
        last = recs[-1]
        print(
            f"halo={halo.label:<6} ns={ns} n_sr={n_sr}: "
            f"order={order}  err(N={last.n})={last.rel_error:.3e}"
        )


def main(argv: list[str] | None = None) -> int:
    """Run the CLI; returns the process exit code."""
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed_check:
            return _run_seed_check()
        settings = _resolve(args)
        if args.memory_report:
            _print_memory_report(settings)
            return 0
        records = run_full_study(
            m_min=settings["m_min"],
            m_max=settings["m_max"],
            m0=settings["m0"],
            nmodes_div=settings["nmodes_div"],
            configs=_selected_configs(settings),
        )
        if not records:
            raise ConfigError(
                "selection produced no study cells (m range too small for nsr)"
            )
        _print_summary(records)
        if settings["csv"]:
            emit_csv(records, settings["csv"])
            print(f"wrote {settings['csv']}")
        if settings["svg"]:
            for written in emit_plot(records, settings["svg"]):
                print(f"wrote {written}")
        return 0
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
