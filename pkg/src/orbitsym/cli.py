"""Command-line verification runner.

``orbitsym verify <suite>`` runs seeded suites for a chamber element
given as a comma-separated list (decimals or simple fractions) and
prints one summary line per suite; ``--json`` additionally writes the
full report list.  ``orbitsym info`` prints the block structure and the
derived dimensions.  Exit codes: 0 all suites pass, 1 any failure,
2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .model import NotInChamber, SpecialLinearModel
from .suites import (
    DEFAULT_FD_STEP,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    SUITE_NAMES,
    VerificationReport,
    run_suite,
)

SUITE_CHOICES = SUITE_NAMES + ("all",)


@dataclass(frozen=True)
class RunConfig:
    n: int
    entries: tuple
    suite: str
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    fd_step: float = DEFAULT_FD_STEP
    tol_exact: float | None = None
    tol_fd: float | None = None
    json_path: str | None = None
    quiet: bool = False


def parse_entries(text: str) -> list:
    """Parse a comma-separated chamber element.

    Tokens parse as exact rationals when possible ("1", "0.25", "1/3"),
    so equal entries stay equal; otherwise they fall back to floats and
    block detection compares bit for bit.
    """
    tokens = [t.strip() for t in text.split(",")]
    if any(not t for t in tokens):
        raise ValueError("empty entry in H")
    values: list = []
    all_rational = True
    for tok in tokens:
        try:
            values.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            values.append(float(tok))
            all_rational = False
    if all_rational:
        return values
    return [float(v) for v in values]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitsym",
        description="Verification suites for hyperbolic adjoint orbits of SL(n,R).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("suite_pos", nargs="?", choices=SUITE_CHOICES, metavar="SUITE",
                        help=f"one of {', '.join(SUITE_CHOICES)}")
    verify.add_argument("--suite", choices=SUITE_CHOICES, help="alternative to the positional suite")
    verify.add_argument("--n", type=int, help="matrix size (2..8); inferred from --H when omitted")
    verify.add_argument("--H", required=True, help='chamber element, e.g. "1,0,-1" or "1/2,0,-1/2"')
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--fd-step", type=float, default=DEFAULT_FD_STEP)
    verify.add_argument("--tol-exact", type=float, default=None,
                        help="override every exact-formula tolerance")
    verify.add_argument("--tol-fd", type=float, default=None,
                        help="override every finite-difference tolerance")
    verify.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                        help="write the full report list as a JSON array")
    verify.add_argument("--quiet", action="store_true", help="suppress per-suite lines")

    info = sub.add_parser("info", help="print chamber block structure and dimensions")
    info.add_argument("--n", type=int, help="matrix size; inferred from --H when omitted")
    info.add_argument("--H", required=True)
    return parser


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _resolve_chamber(n_arg, h_text: str):
    entries = parse_entries(h_text)
    n = n_arg if n_arg is not None else len(entries)
    if not 2 <= n <= 8:
        raise ValueError(f"matrix size must be between 2 and 8, got {n}")
    if len(entries) != n:
        raise ValueError(f"expected {n} entries in H, got {len(entries)}")
    model = SpecialLinearModel(n)
    return model, model.chamber_element(entries)


def _print_suite_line(name: str, samples: int, reports: list[VerificationReport]) -> None:
    def ratio(r: VerificationReport) -> float:
        return r.max_error / r.tolerance if r.tolerance > 0 else float("inf")

    binding = max(reports, key=ratio)
    status = "PASS" if all(r.passed for r in reports) else "FAIL"
    print(
        f"{name:<22} samples={samples:<4d} max_error={binding.max_error:10.3e} "
        f"tol={binding.tolerance:8.1e} {status}"
    )


def _run_verify(args) -> int:
    suite = args.suite_pos or args.suite
    if suite is None:
        return _usage_error("no suite given (positional SUITE or --suite)")
    if args.suite_pos and args.suite and args.suite_pos != args.suite:
        return _usage_error("positional suite and --suite disagree")
    if args.samples < 1:
        return _usage_error("--samples must be positive")
    try:
        _, chamber = _resolve_chamber(args.n, args.H)
    except (ValueError, NotInChamber) as exc:
        return _usage_error(str(exc))
    config = RunConfig(
        n=chamber.model.n,
        entries=chamber.entries,
        suite=suite,
        samples=args.samples,
        seed=args.seed,
        fd_step=args.fd_step,
        tol_exact=args.tol_exact,
        tol_fd=args.tol_fd,
        json_path=args.json_path,
        quiet=args.quiet,
    )
    return run(config, chamber)


def run(config: RunConfig, chamber) -> int:
    """Execute the configured suites; print summaries and write JSON."""
    names = SUITE_NAMES if config.suite == "all" else (config.suite,)
    all_reports: list[VerificationReport] = []
    ok = True
    for name in names:
        reports = run_suite(
            chamber,
            name,
            samples=config.samples,
            seed=config.seed,
            fd_step=config.fd_step,
            tol_exact=config.tol_exact,
            tol_fd=config.tol_fd,
        )
        all_reports.extend(reports)
        ok = ok and all(r.passed for r in reports)
        if not config.quiet:
            _print_suite_line(name, config.samples, reports)

    if config.json_path:
        payload = [r.as_dict() for r in all_reports]
        with open(config.json_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0 if ok else 1


def _run_info(args) -> int:
    try:
        _, chamber = _resolve_chamber(args.n, args.H)
    except (ValueError, NotInChamber) as exc:
        return _usage_error(str(exc))
    blocks = ", ".join(f"{value:g} (x{mult})" for value, mult in chamber.blocks)
    print(f"n: {chamber.model.n}")
    print(f"H: {', '.join(f'{e:g}' for e in chamber.entries)}")
    print(f"blocks: {blocks}")
    print(f"dim n(H): {chamber.dim_n}")
    print(f"dim z(H): {chamber.dim_z}")
    print(f"dim z_K(H): {chamber.dim_zk}")
    print(f"dim m(H): {chamber.dim_m}")
    print(f"orbit dimension: {chamber.orbit_dim}")
    print(f"flag dimension: {chamber.flag_dim}")
    return 0


def _merge_value_flags(argv: list[str]) -> list[str]:
    """Join ``--H -1,1`` into ``--H=-1,1`` so entries with a leading
    minus sign survive argparse's option scanning."""
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--H" and i + 1 < len(argv):
            merged.append(f"--H={argv[i + 1]}")
            skip = True
        else:
            merged.append(tok)
    return merged


def main(argv=None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_merge_value_flags(raw))
    if args.command == "verify":
        return _run_verify(args)
    return _run_info(args)


if __name__ == "__main__":
    raise SystemExit(main())
