"""Command-line harness: ``evosieve {gen,run,oracle,estimate}``.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
basis), 3 runtime error (sampler starvation, enumeration limit, I/O).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    BasisError,
    DimensionTooLarge,
    InvalidDelta,
    InvalidParams,
    SamplerStarvation,
)
from .io import RunManifest, generate_random_basis, read_basis, result_summary, write_basis
from .oracle import enumerate_svp, estimate_complexity, gaussian_heuristic
from .reduction import lll_reduce
from .sampling import SamplerParams
from .sieve import SieveConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3

VARIANTS = {"local": "local", "global": "global", "local-mut": "local_mut", "global-mut": "global_mut"}


class UsageError(Exception):
    pass


class MissingInput(Exception):
    pass


def _require_input(path: Optional[Path]) -> None:
    if path is not None and not path.is_file():
        raise MissingInput(f"no such basis file: {path}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="evosieve", description="Evolutionary lattice sieving for SVP.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random knapsack-style basis")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--bits", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)

    r = sub.add_parser("run", help="LLL-reduce, sieve and report")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--basis", type=Path)
    src.add_argument(
        "--generate",
        metavar="DIM,BITS,SEED",
        help="sieve a generated basis instead of reading one",
    )
    r.add_argument("--variant", choices=sorted(VARIANTS), default="local")
    r.add_argument("--pop-size", type=int, default=None)
    r.add_argument("--mutation-rate", type=float, default=0.1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-generations", type=int, default=1000)
    r.add_argument("--stale", type=int, default=3)
    r.add_argument("--sigma", type=float, default=None, help="Klein width (default: automatic)")
    r.add_argument("--sampler", choices=("klein", "naive"), default="klein")
    r.add_argument("--delta", default="99/100", help="LLL parameter, e.g. 0.99 or 99/100")
    r.add_argument(
        "--duplicates",
        choices=("collapse", "skip"),
        default="collapse",
        help="local pass: merge a parent into an existing copy of its child, or skip the pair",
    )
    r.add_argument("--stats-out", type=Path, default=None)
    r.add_argument("--summary-out", type=Path, default=None)

    o = sub.add_parser("oracle", help="exact shortest vector by enumeration")
    o.add_argument("--basis", type=Path, required=True)
    o.add_argument("--allow-large", action="store_true", help="lift the d <= 30 limit")

    e = sub.add_parser("estimate", help="heuristic sieve cost for a dimension")
    e.add_argument("--dim", type=int, required=True)
    return p


def _parse_generator(text: str) -> tuple[int, int, int]:
    try:
        dim, bits, seed = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--generate expects DIM,BITS,SEED, got {text!r}") from None
    return dim, bits, seed


def _cmd_gen(args) -> int:
    write_basis(generate_random_basis(args.dim, args.bits, args.seed), args.out)
    print(f"wrote {args.dim}x{args.dim} basis to {args.out}")
    return EXIT_OK


def _cmd_run(args) -> int:
    _require_input(args.basis)
    config = SieveConfig(
        variant=VARIANTS[args.variant],
        pop_size=args.pop_size,
        mutation_rate=args.mutation_rate,
        seed=args.seed,
        max_generations=args.max_generations,
        stale_generations=args.stale,
        sampler=SamplerParams(sigma=args.sigma, kind=args.sampler),
        lll_delta=Fraction(args.delta),
        duplicate_policy=args.duplicates,
    )
    manifest = RunManifest(
        config=config,
        basis_path=args.basis,
        generator=_parse_generator(args.generate) if args.generate else None,
        stats_out=args.stats_out,
        summary_out=args.summary_out,
    )
    result = manifest.execute()
    summary = result_summary(result)
    gh = gaussian_heuristic(result.basis)
    print(f"variant: {summary['variant']}")
    print(f"seed: {summary['seed']}")
    print(f"generations: {summary['generations']} ({summary['terminated_by']})")
    print(f"final population: {summary['final_pop_size']}")
    print(f"best norm: {summary['best_norm']:.6f} (squared {summary['best_norm_sq']})")
    print(f"best / gaussian heuristic: {summary['best_norm'] / gh:.6f}")
    print("best coefficients: " + " ".join(map(str, summary["best_coeffs"])))
    print("best vector: " + " ".join(map(str, summary["best_coords"])))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    _require_input(args.basis)
    basis = lll_reduce(read_basis(args.basis))
    p = enumerate_svp(basis, allow_large=args.allow_large)
    print(f"shortest norm: {p.norm:.6f} (squared {p.norm_sq})")
    print("coefficients (LLL-reduced basis): " + " ".join(map(str, p.coeffs)))
    print("vector: " + " ".join(map(str, p.coords)))
    return EXIT_OK


def _cmd_estimate(args) -> int:
    est = estimate_complexity(args.dim)
    for f in dataclasses.fields(est):
        print(f"{f.name}: {getattr(est, f.name)}")
    return EXIT_OK


_COMMANDS = {"gen": _cmd_gen, "run": _cmd_run, "oracle": _cmd_oracle, "estimate": _cmd_estimate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "delta", None) is not None:
            try:
                Fraction(args.delta)
            except ValueError:
                raise UsageError(f"invalid --delta {args.delta!r}") from None
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParams, InvalidDelta) as exc:
        print(f"evosieve: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BasisError as exc:
        print(f"evosieve: bad basis: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MissingInput as exc:
        print(f"evosieve: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SamplerStarvation, DimensionTooLarge, OSError) as exc:
        print(f"evosieve: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
