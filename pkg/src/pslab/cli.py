"""Experiment orchestration: reproducible runs, sweeps, CSV/JSON reports.

Config files are line-oriented ``key=value`` text; a key may repeat to form
a list.  Every run emits a manifest (config hash, version, timing, per-check
pass/fail, artifact list); in sequential mode re-running an identical config
reproduces identical CSV bytes.

Exit codes: 0 success, 2 precondition failure, 3 acceptance-check failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import math
import struct
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, diophantine, exponents, expsum, wtrick
from .ps_core import PSExponent, pnt_ratio, ps_primes

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_CHECK = 3

GRID_MAGIC = b"PSGRID01"
MAX_SWEEP_CELLS = 10_000

CONFIG_KEYS = {
    "experiment", "x", "d", "s", "c", "toy_w", "samples", "grid_m",
    "seed", "format", "out_dir", "coeffs",
}


class CheckFailure(RuntimeError):
    """A manifest check came out false."""


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


# --- config ----------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Ordered key=value pairs; repeated keys encode lists."""

    pairs: List[Tuple[str, str]] = field(default_factory=list)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            pairs.append((key, value))
        return cls(pairs=pairs)

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.pairs)

    def sha256(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        found = default
        for k, v in self.pairs:
            if k == key:
                found = v
        return found

    def get_list(self, key: str) -> List[str]:
        return [v for k, v in self.pairs if k == key]

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc


def derive_seed(seed: int, label: str) -> int:
    """Splittable stream seed: a 64-bit digest of (seed, label)."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


# --- value formatting -------------------------------------------------------

def _fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return str(int(v))
    return str(v)


def emit_rows(rows: Sequence[Dict], columns: Sequence[str], fmt: str,
              stream) -> None:
    if fmt == "json":
        json.dump([{c: _fmt_value(r.get(c)) for c in columns} for r in rows],
                  stream, indent=2)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_value(row.get(c)) for c in columns])


def write_rows(rows, columns, fmt, path: Optional[Path]) -> None:
    if path is None:
        emit_rows(rows, columns, fmt, sys.stdout)
    else:
        with open(path, "w") as fh:
            emit_rows(rows, columns, fmt, fh)


# --- binary grid dump -------------------------------------------------------

def dump_grid(grid: expsum.FourierGrid, path) -> None:
    """32-byte header (magic, M, N, flags) + little-endian complex64 body."""
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(struct.pack("<QQQ", grid.M, grid.N, 0))
        fh.write(grid.values.astype("<c8").tobytes())


def load_grid(path) -> expsum.FourierGrid:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != GRID_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        M, N, _flags = struct.unpack("<QQQ", fh.read(24))
        values = np.frombuffer(fh.read(), dtype="<c8").astype(complex)
    if len(values) != M:
        raise ValueError(f"expected {M} samples, found {len(values)}")
    return expsum.FourierGrid(M=int(M), N=int(N), values=values,
                              norm1=float(values[0].real), source=str(path))


# --- pipeline ----------------------------------------------------------------

PIPELINE_COLUMNS = [
    "x", "d", "s", "c", "W", "b", "sigma", "prime_count", "mass",
    "decay", "u", "restrict_moment", "restrict_ratio",
    "ktrivial_left", "ktrivial_right", "ktrivial_ratio",
    "density_bound", "avoider_size", "avoider_nontrivial", "warnings",
]


@dataclass
class RunManifest:
    config_hash: str
    version: str
    elapsed: float = 0.0
    checks: Dict[str, bool] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    rows: List[Dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "config_hash": self.config_hash,
            "version": self.version,
            "elapsed": self.elapsed,
            "checks": self.checks,
            "warnings": self.warnings,
            "artifacts": self.artifacts,
            "rows": [{k: _fmt_value(v) for k, v in row.items()}
                     for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def all_passed(self) -> bool:
        return all(self.checks.values())


def _zero_row(x: int, d: int, s: int, c: PSExponent) -> Dict:
    row = {col: 0 for col in PIPELINE_COLUMNS}
    row.update(x=x, d=d, s=s, c=str(c), warnings="")
    return row


def pipeline_cell(x: int, d: int, c: PSExponent, toy_w: Optional[int],
                  s: Optional[int] = None, samples: int = 4096,
                  run_avoider: bool = True) -> Tuple[Dict, List[str]]:
    """One end-to-end run; returns the report row and any warnings.

    Stages: sequence primes, residue choice and majorant, sampled Fourier
    decay, sampled restriction moment at the threshold exponent plus 1/2,
    the diagonal structured weighted sum, the density envelope, and the
    greedy avoiding-set experiment with independent verification.
    """
    warnings_out: List[str] = []
    params_d = exponents.degree_params(d)
    s = s if s is not None else params_d.s_bar
    primes = ps_primes(x, c) if x >= 2 else None
    if primes is None or len(primes) == 0 or x < 16:
        return _zero_row(x, d, s, c), warnings_out

    radius = exponents.c_of(d, s)
    if not (1 < c.c < 1 + radius):
        warnings_out.append(
            f"c = {c} outside the admissible range (1, 1 + {radius})"
        )

    params = wtrick.w_params(x, d, toy_w=toy_w)
    b, _ = wtrick.choose_b(primes.members, params, c)
    nu = wtrick.build_majorant(primes.members, b, params, c)

    decay = expsum.fourier_decay_sampled(nu, samples=samples)
    try:
        thr, _ = exponents.u_threshold(d, c.c)
        u = float(thr) + 0.5
    except exponents.InadmissibleCError:
        warnings_out.append("restriction threshold undefined; using S + 1/2")
        u = params_d.S + 0.5
    moment, ratio = expsum.restriction_moment_sampled(nu, u, samples=samples)

    # s-variable zero-sum system for the structured weighted sum
    sys_s = diophantine.validate_system((1,) * (s - 1) + (1 - s,), d)
    try:
        eta_val = float(exponents.eta(d, s, c.c))
    except exponents.InadmissibleCError:
        warnings_out.append("saving exponent negative; evaluated at 0")
        eta_val = 0.0
    left, right = diophantine.k_trivial_weighted_sum(
        nu, sys_s, diophantine.diagonal_union(sys_s), eta_val)

    # three-variable Roth form for the avoiding-set experiment
    sys_ = diophantine.validate_system((1, -2, 1), d)
    K = diophantine.diagonal_union(sys_)

    bound = exponents.density_bound(x, d, s, c.c)
    if bound.guarded:
        warnings_out.append("density envelope quad-log guarded")

    if run_avoider:
        avoider, report, _ = diophantine.greedy_avoider(x, c, sys_, K)
        avoider_size, avoider_nontrivial = len(avoider), report.nontrivial
    else:
        avoider_size = avoider_nontrivial = 0

    row = {
        "x": x, "d": d, "s": s, "c": str(c), "W": params.W, "b": b,
        "sigma": nu.sigma_b, "prime_count": len(primes), "mass": nu.mass(),
        "decay": decay, "u": u, "restrict_moment": moment,
        "restrict_ratio": ratio, "ktrivial_left": left,
        "ktrivial_right": right,
        "ktrivial_ratio": left / right if right > 0 else float("inf"),
        "density_bound": bound.value, "avoider_size": avoider_size,
        "avoider_nontrivial": avoider_nontrivial,
        "warnings": ";".join(warnings_out),
    }
    return row, warnings_out


def run_pipeline(config: ExperimentConfig,
                 run_avoider: bool = True) -> RunManifest:
    start = time.time()
    x = config.get_int("x")
    d = config.get_int("d", 2)
    if x is None:
        raise ConfigError("pipeline needs x")
    c = PSExponent.parse(config.get("c", "21/20"))
    toy_w = config.get_int("toy_w")
    s = config.get_int("s")
    samples = config.get_int("samples", 4096)
    manifest = RunManifest(config_hash=config.sha256(), version=__version__)
    row, warns = pipeline_cell(x, d, c, toy_w, s=s, samples=samples,
                               run_avoider=run_avoider)
    manifest.rows.append(row)
    manifest.warnings.extend(warns)
    manifest.checks["decay_finite"] = math.isfinite(float(row["decay"]))
    manifest.checks["restriction_finite"] = math.isfinite(
        float(row["restrict_moment"]))
    manifest.checks["ktrivial_finite"] = math.isfinite(
        float(row["ktrivial_left"]))
    manifest.checks["avoider_clean"] = int(row["avoider_nontrivial"]) == 0
    manifest.elapsed = time.time() - start
    return manifest


SWEEP_KEYS = ["x", "d", "s", "c", "toy_w"]


def sweep_cells(config: ExperimentConfig) -> List[Dict[str, str]]:
    """Cartesian product of all listed parameters, in file order."""
    axes = []
    for key in SWEEP_KEYS:
        values = config.get_list(key)
        axes.append([(key, v) for v in values] if values else [(key, None)])
    n_cells = 1
    for axis in axes:
        n_cells *= len(axis)
    if n_cells > MAX_SWEEP_CELLS:
        raise ConfigError(f"sweep has {n_cells} cells > {MAX_SWEEP_CELLS}")
    return [dict(cell) for cell in itertools.product(*axes)]


def run_sweep(config: ExperimentConfig,
              run_avoider: bool = False) -> RunManifest:
    """One pipeline row per sweep cell, deterministic order.

    Cells are always evaluated sequentially and buffered in cell order, so
    the emitted CSV is byte-identical across runs.
    """
    start = time.time()
    samples = config.get_int("samples", 4096)
    manifest = RunManifest(config_hash=config.sha256(), version=__version__)
    for cell in sweep_cells(config):
        if cell["x"] is None:
            raise ConfigError("sweep needs at least one x")
        x = int(cell["x"])
        d = int(cell["d"]) if cell["d"] is not None else 2
        c = PSExponent.parse(cell["c"] if cell["c"] is not None else "21/20")
        s = int(cell["s"]) if cell["s"] is not None else None
        toy_w = int(cell["toy_w"]) if cell["toy_w"] is not None else None
        row, warns = pipeline_cell(x, d, c, toy_w, s=s, samples=samples,
                                   run_avoider=run_avoider)
        manifest.rows.append(row)
        manifest.warnings.extend(warns)
    manifest.checks["all_cells_finite"] = all(
        math.isfinite(float(r["decay"])) for r in manifest.rows)
    manifest.elapsed = time.time() - start
    return manifest


# --- subcommand handlers -----------------------------------------------------

def _out_path(args, name: str) -> Optional[Path]:
    if args.out_dir is None:
        return None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def cmd_exponents_table(args) -> int:
    rows = [exponents.format_row(r)
            for r in exponents.table_rows(args.d_min, args.d_max,
                                          s_count=args.s_count)]
    write_rows(rows, exponents.TABLE_COLUMNS, args.format,
               _out_path(args, "exponents.csv"))
    return EXIT_OK


def cmd_ps_count(args) -> int:
    c = PSExponent.parse(args.c)
    xs = [args.x // 10 ** j for j in range(args.decades, -1, -1)]
    rows = []
    for x in xs:
        rep = pnt_ratio(x, c)
        rows.append({"x": rep.x, "count": rep.count, "ratio": rep.ratio})
    write_rows(rows, ["x", "count", "ratio"], args.format,
               _out_path(args, "ps_count.csv"))
    return EXIT_OK


def cmd_ps_list(args) -> int:
    c = PSExponent.parse(args.c)
    for p in ps_primes(args.x, c).members:
        print(int(p))
    return EXIT_OK


def cmd_wtrick_majorant(args) -> int:
    c = PSExponent.parse(args.c)
    params = wtrick.w_params(args.x, args.d, toy_w=args.toy_w)
    primes = ps_primes(args.x, c)
    b, _ = wtrick.choose_b(primes.members, params, c)
    nu = wtrick.build_majorant(primes.members, b, params, c)
    with open(args.out, "w") as fh:
        fh.write(f"# x={args.x},d={args.d},c={c},W={params.W},"
                 f"b={b},sigma={nu.sigma_b},N={params.N}\n")
        for n in nu.support():
            fh.write(f"{n},{nu.weights[n]!r}\n")
    print(f"wrote {len(nu)} weights to {args.out}")
    return EXIT_OK


def cmd_expsum_weyl(args) -> int:
    val = expsum.weyl_sum(args.x, args.d, Fraction(args.alpha))
    rows = [{"x": args.x, "d": args.d, "alpha": args.alpha,
             "re": val.real, "im": val.imag, "abs": abs(val)}]
    if args.dump is not None:
        if args.grid_m is None:
            raise ConfigError("--dump needs --grid-m")
        values = expsum.weyl_power_grid(args.x, args.d, args.grid_m)
        dump_grid(expsum.FourierGrid(M=args.grid_m, N=args.x, values=values,
                                     norm1=float(args.x)), args.dump)
    write_rows(rows, ["x", "d", "alpha", "re", "im", "abs"], args.format,
               _out_path(args, "weyl.csv"))
    return EXIT_OK


def cmd_expsum_meanvalue(args) -> int:
    count = expsum.mean_value_count(args.x, args.d, args.S)
    norm = count / (args.x ** (args.S - args.d) * math.log(max(args.x, 2)))
    rows = [{"x": args.x, "d": args.d, "S": args.S, "count": count,
             "normalized": norm}]
    write_rows(rows, ["x", "d", "S", "count", "normalized"], args.format,
               _out_path(args, "meanvalue.csv"))
    return EXIT_OK


def _majorant_from_args(args) -> wtrick.Majorant:
    c = PSExponent.parse(args.c)
    params = wtrick.w_params(args.x, args.d, toy_w=args.toy_w)
    primes = ps_primes(args.x, c)
    b, _ = wtrick.choose_b(primes.members, params, c)
    return wtrick.build_majorant(primes.members, b, params, c)


def cmd_expsum_decay(args) -> int:
    nu = _majorant_from_args(args)
    value = expsum.fourier_decay_sampled(nu, samples=args.samples)
    rows = [{"x": args.x, "d": args.d, "c": args.c, "samples": args.samples,
             "decay": value}]
    write_rows(rows, ["x", "d", "c", "samples", "decay"], args.format,
               _out_path(args, "decay.csv"))
    return EXIT_OK


def cmd_expsum_restrict(args) -> int:
    nu = _majorant_from_args(args)
    moment, ratio = expsum.restriction_moment_sampled(nu, args.u,
                                                      samples=args.samples)
    rows = [{"x": args.x, "d": args.d, "c": args.c, "u": args.u,
             "moment": moment, "ratio": ratio}]
    write_rows(rows, ["x", "d", "c", "u", "moment", "ratio"], args.format,
               _out_path(args, "restrict.csv"))
    return EXIT_OK


def cmd_expsum_arcs(args) -> int:
    params = wtrick.w_params(args.x, args.d, toy_w=args.toy_w)
    adm = wtrick.admissible_residues(params.W, args.d)
    if not adm:
        raise wtrick.EmptyResidueSetError(f"no admissible b mod {params.W}")
    mu = wtrick.build_mu(args.x, args.d, adm[0], params)
    rows = []
    for alpha in args.alpha:
        lab = expsum.classify_arc(float(Fraction(alpha)), mu, args.x, args.d,
                                  Q=args.Q)
        rows.append({"alpha": alpha, "kind": lab.kind, "witness": lab.witness,
                     "threshold": lab.threshold, "a": lab.a, "q": lab.q,
                     "envelope": lab.envelope})
    write_rows(rows, ["alpha", "kind", "witness", "threshold", "a", "q",
                      "envelope"], args.format, _out_path(args, "arcs.csv"))
    return EXIT_OK


def _load_set(spec: str) -> List[int]:
    """Element set from 'ps:x,c' or a file of one integer per line."""
    if spec.startswith("ps:"):
        x_str, c_str = spec[3:].split(",", 1)
        return [int(p) for p in ps_primes(int(x_str),
                                          PSExponent.parse(c_str)).members]
    with open(spec) as fh:
        return [int(line) for line in fh if line.strip()]


def cmd_dioph_count(args) -> int:
    coeffs = [int(tok) for tok in args.coeffs.split(",")]
    sys_ = diophantine.validate_system(coeffs, args.d)
    elems = _load_set(args.set)
    if args.K is not None:
        with open(args.K) as fh:
            K = diophantine.parse_subspace_file(fh.read(), sys_)
    else:
        K = diophantine.diagonal_union(sys_)
    report = diophantine.enumerate_solutions(elems, sys_, K, cap=args.cap)
    rows = [{"coeffs": args.coeffs, "d": args.d, "set_size": len(elems),
             "total": report.total, "trivial": report.trivial,
             "nontrivial": report.nontrivial,
             "truncated": report.truncated}]
    write_rows(rows, ["coeffs", "d", "set_size", "total", "trivial",
                      "nontrivial", "truncated"], args.format,
               _out_path(args, "dioph.csv"))
    return EXIT_OK


def _config_from_args(args) -> ExperimentConfig:
    if args.config is not None:
        with open(args.config) as fh:
            return ExperimentConfig.from_text(fh.read())
    pairs = []
    for key in ("x", "d", "s", "c", "toy_w", "samples"):
        val = getattr(args, key, None)
        if val is not None:
            pairs.append((key, str(val)))
    if args.seed is not None:
        pairs.append(("seed", str(args.seed)))
    return ExperimentConfig(pairs=pairs)


def cmd_pipeline(args) -> int:
    config = _config_from_args(args)
    manifest = run_pipeline(config, run_avoider=not args.no_avoider)
    write_rows(manifest.rows, PIPELINE_COLUMNS, args.format,
               _out_path(args, "pipeline.csv"))
    man_path = _out_path(args, "manifest.json")
    if man_path is not None:
        man_path.write_text(manifest.to_json())
        manifest.artifacts.append(str(man_path))
    else:
        sys.stderr.write(manifest.to_json())
    if not manifest.all_passed():
        raise CheckFailure(
            "failed checks: "
            + ", ".join(k for k, v in manifest.checks.items() if not v)
        )
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    manifest = run_sweep(config, run_avoider=args.avoider)
    write_rows(manifest.rows, PIPELINE_COLUMNS, args.format,
               _out_path(args, "sweep.csv"))
    man_path = _out_path(args, "manifest.json")
    if man_path is not None:
        man_path.write_text(manifest.to_json())
    if not manifest.all_passed():
        raise CheckFailure("sweep checks failed")
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pslab",
        description="Experiments on floor-power primes, exponential sums, "
                    "and power-system solution counts.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed; streams derive from it by label")
    parser.add_argument("--threads", type=int, default=1,
                        help="reserved; cells are evaluated sequentially")
    parser.add_argument("--sequential", action="store_true",
                        help="force sequential evaluation (the default)")
    parser.add_argument("--out-dir", default=None,
                        help="write artifacts here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents")
    ps_sub = p.add_subparsers(dest="subcommand", required=True)
    t = ps_sub.add_parser("table")
    t.add_argument("--d-min", type=int, default=2)
    t.add_argument("--d-max", type=int, default=12)
    t.add_argument("--s-count", type=int, default=3)
    t.set_defaults(func=cmd_exponents_table)

    p = sub.add_parser("ps")
    ps_sub = p.add_subparsers(dest="subcommand", required=True)
    t = ps_sub.add_parser("count")
    t.add_argument("--c", required=True)
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--decades", type=int, default=0)
    t.set_defaults(func=cmd_ps_count)
    t = ps_sub.add_parser("list")
    t.add_argument("--c", required=True)
    t.add_argument("--x", type=int, required=True)
    t.set_defaults(func=cmd_ps_list)

    p = sub.add_parser("wtrick")
    ps_sub = p.add_subparsers(dest="subcommand", required=True)
    t = ps_sub.add_parser("majorant")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--c", required=True)
    t.add_argument("--toy-w", type=int, default=None)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_wtrick_majorant)

    p = sub.add_parser("expsum")
    ps_sub = p.add_subparsers(dest="subcommand", required=True)
    t = ps_sub.add_parser("weyl")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--alpha", required=True)
    t.add_argument("--grid-m", type=int, default=None)
    t.add_argument("--dump", default=None)
    t.set_defaults(func=cmd_expsum_weyl)
    t = ps_sub.add_parser("meanvalue")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--S", type=int, required=True)
    t.set_defaults(func=cmd_expsum_meanvalue)
    t = ps_sub.add_parser("decay")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--c", required=True)
    t.add_argument("--toy-w", type=int, default=None)
    t.add_argument("--samples", type=int, default=4096)
    t.set_defaults(func=cmd_expsum_decay)
    t = ps_sub.add_parser("restrict")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--c", required=True)
    t.add_argument("--u", type=float, required=True)
    t.add_argument("--toy-w", type=int, default=None)
    t.add_argument("--samples", type=int, default=4096)
    t.set_defaults(func=cmd_expsum_restrict)
    t = ps_sub.add_parser("arcs")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--toy-w", type=int, default=None)
    t.add_argument("--alpha", action="append", required=True)
    t.add_argument("--Q", type=int, default=1000)
    t.set_defaults(func=cmd_expsum_arcs)

    p = sub.add_parser("dioph")
    ps_sub = p.add_subparsers(dest="subcommand", required=True)
    t = ps_sub.add_parser("count")
    t.add_argument("--coeffs", required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--set", required=True,
                   help="'ps:x,c' or a file of integers")
    t.add_argument("--K", default=None, help="constraint-matrix file")
    t.add_argument("--cap", type=int, default=100)
    t.set_defaults(func=cmd_dioph_count)

    t = sub.add_parser("pipeline")
    t.add_argument("--config", default=None)
    t.add_argument("--x", type=int, default=None)
    t.add_argument("--d", type=int, default=None)
    t.add_argument("--s", type=int, default=None)
    t.add_argument("--c", default=None)
    t.add_argument("--toy-w", dest="toy_w", type=int, default=None)
    t.add_argument("--samples", type=int, default=None)
    t.add_argument("--no-avoider", action="store_true")
    t.set_defaults(func=cmd_pipeline)

    t = sub.add_parser("sweep")
    t.add_argument("--config", required=True)
    t.add_argument("--avoider", action="store_true")
    t.set_defaults(func=cmd_sweep)

    return parser


PRECONDITION_ERRORS = (
    ValueError, TypeError, OverflowError, MemoryError, OSError,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckFailure as exc:
        sys.stderr.write(f"check failure: {exc}\n")
        return EXIT_CHECK
    except PRECONDITION_ERRORS as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
