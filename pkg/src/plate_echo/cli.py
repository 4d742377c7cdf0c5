"""Command-line driver: forward solves, imaging runs, verification, oracle dumps.

Commands
--------
    plate-echo forward  [--config CFG | --preset NAME] [--seed S] [--out DIR]
    plate-echo image    MATRIX_FILE [--config CFG | --preset NAME] [--seed S] [--out DIR]
    plate-echo verify   [--config CFG | --preset NAME]
    plate-echo oracle   [--config CFG | --preset NAME] [--out DIR]

Configuration is flat INI-style key=value text with section headers (see
ExperimentConfig / config_text); every key has a default reproducing the
benchmark setup (wavenumber 4, 64 directions, 150x150 grid on [-4,4]^2,
rho=4 inner-product indicator, no noise). Presets: 'paper-star',
'paper-peanut'.

Exit codes: 0 ok, 2 config error, 3 solver failure, 4 degenerate output,
5 verification failure.

The env var PLATE_ECHO_THREADS, when set, caps worker parallelism; this
implementation computes serially (one worker), which satisfies any positive
cap. The value is still validated.

Every command is a pure function of (config, input files, seed): reruns
produce byte-identical outputs. Files are written atomically (temp + rename).
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .forward import assemble_far_field_matrix, load_farfield, save_farfield
from .geometry import make_curve
from .imaging import (
    ApertureMask,
    NoiseModel,
    add_noise,
    apply_mask,
    evaluate_grid,
    save_grid_csv,
    save_grid_pgm,
)
from .oracle import disk_far_field_matrix
from .verify import (
    check_decay_slope,
    check_equivalence_chain,
    check_funk_hecke,
    check_operator_identity,
    report_line,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_DEGENERATE = 4
EXIT_VERIFY = 5

DECAY_DIRECTIONS = 1024   # direction count for the decay-slope checks
DECAY_RADII = tuple(np.geomspace(10.0, 100.0, 12))


class ConfigError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; defaults reproduce the benchmark setup."""

    shape_kind: str = "star"
    shape_params: tuple | None = None
    k: float = 4.0
    n_dirs: int = 64
    quad_nodes: int = 128
    extent: tuple = (-4.0, 4.0, -4.0, 4.0)
    resolution: tuple = (150, 150)
    rho: float = 4.0
    which: str = "ip"
    delta: float = 0.0
    seed: int = 0
    mask_rows: tuple = ()
    mask_cols: tuple = ()
    out_dir: str = "."
    write_pgm: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.k <= 0:
            raise ConfigError("k must be positive")
        if self.n_dirs < 4:
            raise ConfigError("n_dirs must be >= 4")
        if self.quad_nodes < 16 or self.quad_nodes % 2:
            raise ConfigError("quad_nodes must be an even integer >= 16")
        if self.which not in ("ip", "norm"):
            raise ConfigError("which must be 'ip' or 'norm'")
        if self.rho <= 0:
            raise ConfigError("rho must be positive")
        if not 0.0 <= self.delta < 1.0:
            raise ConfigError("delta must lie in [0, 1)")
        if len(self.extent) != 4:
            raise ConfigError("extent needs four values: x_min, x_max, y_min, y_max")
        if len(self.resolution) != 2 or self.resolution[0] < 2 or self.resolution[1] < 2:
            raise ConfigError("grid resolution must be two values >= 2")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        for idx in (*self.mask_rows, *self.mask_cols):
            if not 1 <= idx <= self.n_dirs:
                raise ConfigError(f"mask index {idx} outside 1..{self.n_dirs}")
        try:
            curve = self.curve()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        # pin the effective shape parameters so serialization round-trips
        return replace(self, shape_params=curve.params)

    def curve(self):
        return make_curve(self.shape_kind, self.shape_params)

    def mask(self) -> ApertureMask:
        return ApertureMask(receiver_rows=self.mask_rows, source_cols=self.mask_cols)


PRESETS = {
    "paper-star": ExperimentConfig(shape_kind="star"),
    "paper-peanut": ExperimentConfig(shape_kind="peanut"),
}


# ---------------------------------------------------------------------------
# config file round trip
# ---------------------------------------------------------------------------
def config_text(cfg: ExperimentConfig) -> str:
    """Serialize the effective configuration (re-readable by parse_config)."""
    params = cfg.shape_params
    if params is None:
        params = cfg.curve().params
    lines = [
        "[experiment]",
        f"shape = {cfg.shape_kind}",
        "shape_params = " + ", ".join(f"{p:.17g}" for p in params),
        f"k = {cfg.k:.17g}",
        f"n_dirs = {cfg.n_dirs}",
        f"quad_nodes = {cfg.quad_nodes}",
        "",
        "[imaging]",
        f"which = {cfg.which}",
        f"rho = {cfg.rho:.17g}",
        "extent = " + ", ".join(f"{v:.17g}" for v in cfg.extent),
        f"resolution = {cfg.resolution[0]}, {cfg.resolution[1]}",
        "",
        "[noise]",
        f"delta = {cfg.delta:.17g}",
        f"seed = {cfg.seed}",
        "",
        "[mask]",
        "rows = " + _format_indices(cfg.mask_rows),
        "cols = " + _format_indices(cfg.mask_cols),
        "",
        "[output]",
        f"dir = {cfg.out_dir}",
        f"write_pgm = {'true' if cfg.write_pgm else 'false'}",
    ]
    return "\n".join(lines) + "\n"


def _format_indices(idx: tuple) -> str:
    if not idx:
        return ""
    runs = []
    start = prev = idx[0]
    for v in idx[1:]:
        if v == prev + 1:
            prev = v
            continue
        runs.append((start, prev))
        start = prev = v
    runs.append((start, prev))
    return ", ".join(f"{a}-{b}" if b > a else f"{a}" for a, b in runs)


def _parse_indices(text: str) -> tuple:
    out = []
    for chunk in text.replace(",", " ").split():
        if "-" in chunk:
            a, b = chunk.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(chunk))
    return tuple(out)


def parse_config(source: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse INI text (or a file path) on top of the defaults."""
    cfg = base if base is not None else ExperimentConfig()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if "\n" in source or "=" in source:
            parser.read_string(source)
        else:
            with open(source, encoding="utf-8") as fh:
                parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc

    try:
        updates = {}
        if parser.has_section("experiment"):
            s = parser["experiment"]
            if "shape" in s:
                updates["shape_kind"] = s["shape"].strip()
            if "shape_params" in s and s["shape_params"].strip():
                updates["shape_params"] = tuple(
                    float(v) for v in s["shape_params"].replace(",", " ").split()
                )
            if "k" in s:
                updates["k"] = float(s["k"])
            if "n_dirs" in s:
                updates["n_dirs"] = int(s["n_dirs"])
            if "quad_nodes" in s:
                updates["quad_nodes"] = int(s["quad_nodes"])
        if parser.has_section("imaging"):
            s = parser["imaging"]
            if "which" in s:
                updates["which"] = s["which"].strip()
            if "rho" in s:
                updates["rho"] = float(s["rho"])
            if "extent" in s:
                vals = tuple(float(v) for v in s["extent"].replace(",", " ").split())
                if len(vals) != 4:
                    raise ConfigError("extent needs four values: x_min, x_max, y_min, y_max")
                updates["extent"] = vals
            if "resolution" in s:
                vals = tuple(int(v) for v in s["resolution"].replace(",", " ").split())
                if len(vals) != 2:
                    raise ConfigError("resolution needs two values: nx, ny")
                updates["resolution"] = vals
        if parser.has_section("noise"):
            s = parser["noise"]
            if "delta" in s:
                updates["delta"] = float(s["delta"])
            if "seed" in s:
                updates["seed"] = int(s["seed"])
        if parser.has_section("mask"):
            s = parser["mask"]
            if "rows" in s:
                updates["mask_rows"] = _parse_indices(s["rows"])
            if "cols" in s:
                updates["mask_cols"] = _parse_indices(s["cols"])
        if parser.has_section("output"):
            s = parser["output"]
            if "dir" in s:
                updates["out_dir"] = s["dir"].strip()
            if "write_pgm" in s:
                updates["write_pgm"] = s.getboolean("write_pgm")
    except (ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}") from exc

    return replace(cfg, **updates).validate()


# ---------------------------------------------------------------------------
# atomic output
# ---------------------------------------------------------------------------
def _atomic_write(path: str, writer) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_forward(cfg: ExperimentConfig) -> str:
    """Solve the scattering problem and write the far-field matrix file."""
    ff = assemble_far_field_matrix(cfg.curve(), cfg.k, cfg.n_dirs, cfg.quad_nodes)
    path = os.path.join(cfg.out_dir, f"farfield_{cfg.shape_kind}.txt")
    _atomic_write(path, lambda p: save_farfield(ff, p))
    rep = check_operator_identity(ff, tolerance=1e-2)
    print(rep.line())
    print(f"wrote {path}")
    return path


def cmd_image(cfg: ExperimentConfig, matrix_path: str) -> str:
    """Noise + mask + indicator grid from a far-field matrix file."""
    try:
        ff = load_farfield(matrix_path)
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if ff.n_dirs != cfg.n_dirs:
        raise ConfigError(f"matrix has N={ff.n_dirs}, config expects N={cfg.n_dirs}")
    ff = add_noise(ff, NoiseModel(cfg.delta, cfg.seed))
    ff = apply_mask(ff, cfg.mask())
    grid = evaluate_grid(ff, cfg.extent, cfg.resolution, cfg.rho, cfg.which)
    path = os.path.join(cfg.out_dir, f"grid_{cfg.which}.csv")
    _atomic_write(path, lambda p: save_grid_csv(grid, p))
    if cfg.write_pgm:
        pgm = os.path.join(cfg.out_dir, f"grid_{cfg.which}.pgm")
        _atomic_write(pgm, lambda p: save_grid_pgm(grid, p))
    ax, ay = grid.argmax_point()
    print(
        f"image which={cfg.which} rho={cfg.rho:g} delta={cfg.delta:g} seed={cfg.seed} "
        f"argmax=({ax:.6g}, {ay:.6g}) max=1"
    )
    print(f"wrote {path}")
    return path


def cmd_oracle(cfg: ExperimentConfig) -> str:
    """Write the closed-form disk far-field matrix (circle configs only)."""
    if cfg.shape_kind != "circle":
        raise ConfigError("the oracle command needs shape = circle")
    radius = (cfg.shape_params or (1.0,))[0]
    ff = disk_far_field_matrix(radius, cfg.k, cfg.n_dirs)
    path = os.path.join(cfg.out_dir, "farfield_circle_oracle.txt")
    _atomic_write(path, lambda p: save_farfield(ff, p))
    print(f"wrote {path}")
    return path


def cmd_verify(cfg: ExperimentConfig) -> bool:
    """Run the verification suite; prints one record per check."""
    k = cfg.k
    lines = []
    ok_all = True

    def record(check, shape, n, value, tol):
        nonlocal ok_all
        ok = bool(value <= tol)
        ok_all = ok_all and ok
        lines.append(report_line(check, shape, k, n, value, tol, ok))

    # circle-average identity, including the J_0-zero separation
    j0_zero = 2.404825557695773
    for name, sep in (("funk_hecke_origin", 0.0), ("funk_hecke_j0zero", j0_zero / k),
                      ("funk_hecke_sep10", 10.0 / k)):
        res = check_funk_hecke(k, (sep, 0.0), (0.0, 0.0), cfg.n_dirs)
        record(name, "-", cfg.n_dirs, res, 1e-10)

    radius = (cfg.shape_params or (1.0,))[0] if cfg.shape_kind == "circle" else 1.0
    orc = disk_far_field_matrix(radius, k, cfg.n_dirs)
    record("identity_oracle", "circle", cfg.n_dirs,
           check_operator_identity(orc).residual, 1e-6)

    curve = cfg.curve()
    ff = assemble_far_field_matrix(curve, k, cfg.n_dirs, cfg.quad_nodes)
    record("identity_bie", cfg.shape_kind, cfg.n_dirs,
           check_operator_identity(ff).residual, 1e-2)

    disk_bie = assemble_far_field_matrix(make_curve("circle", (radius,)), k,
                                         cfg.n_dirs, cfg.quad_nodes)
    agree = np.abs(disk_bie.entries - orc.entries).max() / np.abs(orc.entries).max()
    record("disk_bie_vs_oracle", "circle", cfg.n_dirs, agree, 1e-6)

    zs = np.random.default_rng(0).uniform(-4.0, 4.0, size=(100, 2))
    record("equivalence_oracle", "circle", cfg.n_dirs,
           check_equivalence_chain(orc, zs), 1e-6)
    record("equivalence_bie", cfg.shape_kind, cfg.n_dirs,
           check_equivalence_chain(ff, zs), 0.05)

    big = assemble_far_field_matrix(curve, k, DECAY_DIRECTIONS, cfg.quad_nodes)
    for which, rho in (("ip", 1.0), ("ip", 2.0), ("norm", 1.0), ("norm", 2.0)):
        expected = -rho if which == "ip" else -rho / 2.0
        slope = check_decay_slope(big, which, rho, DECAY_RADII)
        record(f"decay_{which}_rho{rho:g}", cfg.shape_kind, DECAY_DIRECTIONS,
               abs(slope - expected), 0.2 * abs(expected))

    print("\n".join(lines))
    return ok_all


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------
def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plate-echo",
        description="clamped-cavity plate scattering: forward solves, imaging, verification",
    )
    p.add_argument("--version", action="version", version=f"plate-echo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("forward", "solve and write the multi-static far-field matrix"),
        ("image", "evaluate an imaging grid from a far-field matrix file"),
        ("verify", "run the identity/decay verification suite"),
        ("oracle", "write the closed-form disk far-field matrix"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="INI config file")
        sp.add_argument("--preset", choices=sorted(PRESETS), help="named benchmark setup")
        sp.add_argument("--seed", type=int, help="override the noise seed")
        sp.add_argument("--out", help="override the output directory")
        if name == "image":
            sp.add_argument("matrix", help="far-field matrix file (from 'forward' or 'oracle')")
    return p


def _effective_config(args) -> ExperimentConfig:
    base = PRESETS[args.preset] if args.preset else ExperimentConfig()
    cfg = parse_config(args.config, base=base) if args.config else base.validate()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        cfg = replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _check_thread_cap() -> None:
    cap = os.environ.get("PLATE_ECHO_THREADS")
    if cap is None:
        return
    try:
        value = int(cap)
    except ValueError:
        raise ConfigError(f"PLATE_ECHO_THREADS must be a positive integer, got {cap!r}")
    if value < 1:
        raise ConfigError("PLATE_ECHO_THREADS must be >= 1")
    # computation is serial (one worker), which satisfies any positive cap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _check_thread_cap()
        cfg = _effective_config(args)
        if args.command == "forward":
            cmd_forward(cfg)
        elif args.command == "image":
            cmd_image(cfg, args.matrix)
        elif args.command == "oracle":
            cmd_oracle(cfg)
        elif args.command == "verify":
            if not cmd_verify(cfg):
                print("verification: FAIL", file=sys.stderr)
                return EXIT_VERIFY
            print("verification: ok")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"degenerate output: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
