"""Basis files, random instances and per-generation statistics."""

from __future__ import annotations

import csv
import json
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO, Union

from .errors import InvalidParams, ParseError
from .lattice import BasisMatrix, build_basis
from .sieve import SieveConfig, SieveResult, run_sieve

__all__ = [
    "parse_basis",
    "format_basis",
    "read_basis",
    "write_basis",
    "generate_random_basis",
    "write_stats_csv",
    "STATS_HEADER",
    "RunManifest",
    "result_summary",
]

STATS_HEADER = (
    "generation",
    "pop_size",
    "avg_norm",
    "min_norm",
    "replacements",
    "cumulative_replacements",
    "wall_ms",
)

_INT = re.compile(r"[+-]?\d+\Z")
_ROW = re.compile(r"\[([^\[\]]*)\]")


def _ints(tokens, where):
    out = []
    for tok in tokens:
        if not _INT.match(tok):
            raise ParseError(f"malformed integer {tok!r} in {where}")
        out.append(int(tok))
    return out


def parse_basis(text: str) -> BasisMatrix:
    """Parse a basis in SVP-challenge bracket format or as a plain integer grid.

    Bracket format: ``[[1 0 0][0 1 0][0 0 1]]``, rows possibly on separate
    lines and the outer brackets optional.  Plain format: one row per line,
    entries separated by whitespace.
    """
    if "[" in text or "]" in text:
        body = text.strip()
        if re.match(r"\[\s*\[", body) and re.search(r"\]\s*\]\Z", body):
            body = body[1:-1]
        rows_text = _ROW.findall(body)
        leftover = _ROW.sub(" ", body)
        if leftover.strip():
            raise ParseError(f"unexpected text outside rows: {leftover.strip()[:40]!r}")
        if not rows_text:
            raise ParseError("no rows found")
        rows = [_ints(r.replace(",", " ").split(), f"row {i}") for i, r in enumerate(rows_text)]
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty basis")
        rows = [_ints(ln.split(), f"line {i + 1}") for i, ln in enumerate(lines)]
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"ragged rows with lengths {sorted(widths)}")
    return build_basis(rows)


def format_basis(basis: BasisMatrix) -> str:
    """SVP-challenge style text, one bracketed row per line."""
    lines = ["[" + " ".join(str(x) for x in row) + "]" for row in basis.rows]
    return "[" + "\n".join(lines) + "\n]\n"


def read_basis(path: Union[str, Path]) -> BasisMatrix:
    return parse_basis(Path(path).read_text(encoding="utf-8"))


def write_basis(basis: BasisMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(format_basis(basis), encoding="utf-8")


def generate_random_basis(dim: int, bits: int, seed: int) -> BasisMatrix:
    """Knapsack-style lower-triangular basis.

    ``B[0][0]`` is uniform in ``[2^(bits-1), 2^bits)``, ``B[i][0]`` uniform
    in ``[0, B[0][0])`` for ``i > 0``, ones on the remaining diagonal and
    zeros elsewhere.  The Gram determinant is ``B[0][0]^2``.
    """
    if dim < 2 or bits < 2:
        raise InvalidParams(f"need dim >= 2 and bits >= 2, got dim={dim}, bits={bits}")
    rng = random.Random(seed)
    a = rng.randrange(1 << (bits - 1), 1 << bits)
    rows = [[a] + [0] * (dim - 1)]
    for i in range(1, dim):
        rows.append([rng.randrange(a)] + [int(i == j) for j in range(1, dim)])
    return build_basis(rows)


def _write_stats(result: SieveResult, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(STATS_HEADER)
    for s in result.trail:
        w.writerow(
            [
                s.generation,
                s.pop_size,
                f"{s.avg_norm:.6f}",
                f"{s.min_norm:.6f}",
                s.replacements,
                s.cumulative_replacements,
                s.wall_ms,
            ]
        )
    fh.write(
        f"# best_norm={result.best.norm:.6f} best_norm_sq={result.best.norm_sq} "
        f"variant={result.variant.value} seed={result.seed} "
        f"terminated_by={result.terminated_by}\n"
    )


def write_stats_csv(result: SieveResult, path: Union[str, Path]) -> None:
    """Write the generation trail as CSV followed by a ``#`` summary line."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_stats(result, fh)


def result_summary(result: SieveResult) -> dict:
    last = result.trail[-1] if result.trail else None
    return {
        "variant": result.variant.value,
        "seed": result.seed,
        "best_norm": result.best.norm,
        "best_norm_sq": result.best.norm_sq,
        "best_coeffs": list(result.best.coeffs),
        "best_coords": list(result.best.coords),
        "generations": len(result.trail),
        "terminated_by": result.terminated_by,
        "final_pop_size": len(result.final_population),
        "final_avg_norm": last.avg_norm if last else None,
        "cumulative_replacements": last.cumulative_replacements if last else 0,
    }


@dataclass
class RunManifest:
    """Everything needed to replay one sieve run.

    Exactly one of ``basis_path`` and ``generator`` (``(dim, bits, seed)``)
    must be given.
    """

    config: SieveConfig
    basis_path: Optional[Path] = None
    generator: Optional[tuple[int, int, int]] = None
    stats_out: Optional[Path] = None
    summary_out: Optional[Path] = None

    def __post_init__(self):
        if (self.basis_path is None) == (self.generator is None):
            raise InvalidParams("give exactly one of basis_path and generator")

    def load_basis(self) -> BasisMatrix:
        if self.basis_path is not None:
            return read_basis(self.basis_path)
        return generate_random_basis(*self.generator)

    def execute(self, callback=None) -> SieveResult:
        result = run_sieve(self.load_basis(), self.config, callback=callback)
        if self.stats_out is not None:
            write_stats_csv(result, self.stats_out)
        if self.summary_out is not None:
            Path(self.summary_out).write_text(
                json.dumps(result_summary(result), indent=2) + "\n", encoding="utf-8"
            )
        return result
