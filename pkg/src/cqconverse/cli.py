"""Command line front end.

Exit codes: 0 success, 1 input or validation error, 2 numerical
non-convergence (the report is still written), 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import bounds, io, verify
from .info import e0, mutual_info
from .optimizer import OptimizerConfig, capacity, min_e0_over_prior

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_VERIFY = 0, 1, 2, 3
SLOPE_STEP = 1e-4


def parse_grid(spec: str) -> np.ndarray:
    """``a:b:step`` (inclusive of ``b``) or a comma-separated list of numbers."""
    try:
        if ":" in spec:
            a, b, step = (float(x) for x in spec.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            k = int(np.floor((b - a) / step + 1e-9))
            return np.round(a + step * np.arange(k + 1), 12)
        return np.array([float(x) for x in spec.split(",") if x.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}; expected a:b:step or a comma list") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    channel: str | None = None
    codebook: str | None = None
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    s_grid: tuple | None = None
    rate_grid: tuple | None = None
    rate: float | None = None
    bits: bool = False
    prior: str = "optimal"
    beta: float | None = None
    beta_grid: tuple | None = None
    suite: str = "all"
    trials: int | None = None
    optimizer: OptimizerConfig = OptimizerConfig()

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        opt = OptimizerConfig(
            max_iters=ns.max_iters, tol=ns.tol, kkt_tol=ns.kkt_tol, grid_resolution=ns.grid_res
        )
        names = {f.name for f in fields(cls)} - {"optimizer"}
        kwargs = {k: v for k, v in vars(ns).items() if k in names}
        for key in ("s_grid", "rate_grid", "beta_grid"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(float(x) for x in kwargs[key])
        cfg = cls(optimizer=opt, **kwargs)
        cfg.validate()
        return cfg

    def validate(self):
        if self.command in ("capacity", "e0-curve", "exponent", "bound") and not self.channel:
            raise io.InputError(f"{self.command}: --channel is required")
        if self.command == "bound" and not self.codebook:
            raise io.InputError("bound: --codebook is required")
        if self.format not in ("csv", "json"):
            raise io.InputError(f"unknown format {self.format!r}")
        if self.s_grid is not None and (min(self.s_grid) <= -1 or max(self.s_grid) > 0):
            raise io.InputError("--s-grid values must lie in (-1, 0]")
        if self.command == "exponent" and self.rate is None and self.rate_grid is None:
            raise io.InputError("exponent: give --rate or --rate-grid")
        rates = ([self.rate] if self.rate is not None else []) + list(self.rate_grid or ())
        if any(r < 0 for r in rates):
            raise io.InputError("rates must be non-negative")
        betas = ([self.beta] if self.beta is not None else []) + list(self.beta_grid or ())
        if any(not 0 < b <= 1 for b in betas):
            raise io.InputError("beta values must lie in (0, 1]")


def _emit(cfg: RunConfig, header, rows, payload: dict) -> str:
    if cfg.format == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return io.to_csv(header, rows)


def cmd_capacity(cfg: RunConfig):
    ch = io.load_channel(cfg.channel)
    res = capacity(ch, cfg.optimizer)
    pi = [float(x) for x in res.pi_star]
    payload = {
        "capacity_nats": res.value,
        "capacity_bits": res.value / np.log(2),
        "pi_star": pi,
        "kkt_residual": res.kkt_residual,
        "iterations": res.iterations,
        "converged": res.converged,
    }
    header = ["capacity_nats", "capacity_bits", "kkt_residual", "iterations", "converged"] + [
        f"pi_{i + 1}" for i in range(ch.a)
    ]
    row = [res.value, res.value / np.log(2), res.kkt_residual, res.iterations, res.converged] + pi
    return _emit(cfg, header, [row], payload), res.converged


def cmd_e0_curve(cfg: RunConfig):
    ch = io.load_channel(cfg.channel)
    grid = np.array(cfg.s_grid if cfg.s_grid is not None else bounds.DEFAULT_S_GRID)
    converged = True
    if cfg.prior == "optimal":
        def curve(s):
            nonlocal converged
            if s == 0.0:
                return 0.0
            r = min_e0_over_prior(ch, s, cfg.optimizer)
            converged &= r.converged
            return r.value
        prior_out = "optimal"
    else:
        try:
            prior = np.array([float(x) for x in cfg.prior.split(",")])
            if prior.min() < 0 or prior.sum() <= 0:
                raise ValueError("entries must be nonnegative with a positive sum")
            ch_prior = prior / prior.sum()
            mutual_info(ch, ch_prior)
        except ValueError as exc:
            raise io.InputError(f"--prior: {exc}") from None

        def curve(s):
            return e0(ch, ch_prior, s).value
        prior_out = ch_prior.tolist()

    rows = []
    for s in grid:
        val = curve(float(s))
        if s > -1 + 2 * SLOPE_STEP and s < 0:
            slope = (curve(float(s) + SLOPE_STEP) - curve(float(s) - SLOPE_STEP)) / (2 * SLOPE_STEP)
        elif s == 0:
            slope = (val - curve(-SLOPE_STEP)) / SLOPE_STEP
        else:
            slope = (curve(float(s) + SLOPE_STEP) - val) / SLOPE_STEP
        rows.append([float(s), val, slope])
    payload = {"prior": prior_out, "rows": [dict(zip(("s", "E0", "slope_estimate"), r)) for r in rows]}
    return _emit(cfg, ["s", "E0", "slope_estimate"], rows, payload), converged


def cmd_exponent(cfg: RunConfig):
    ch = io.load_channel(cfg.channel)
    rates = np.array(cfg.rate_grid if cfg.rate_grid is not None else [cfg.rate], dtype=float)
    if cfg.bits:
        rates = rates * np.log(2)
    curve = bounds.exponent_curve(ch, rates, cfg.s_grid, cfg.optimizer)
    rows = curve.rows()
    payload = {"rows": [dict(zip(("rate", "exponent", "s_star"), r)) for r in rows], "units": "nats"}
    return _emit(cfg, ["rate", "exponent", "s_star"], rows, payload), bounds.cache_converged(ch)


def cmd_bound(cfg: RunConfig):
    ch = io.load_channel(cfg.channel)
    cb = io.load_codebook(cfg.codebook)
    try:
        cb.check_alphabet(ch.a)
    except ValueError as exc:
        raise io.InputError(f"{cfg.codebook}: {exc}") from None
    betas = list(cfg.beta_grid or ()) or [cfg.beta if cfg.beta is not None else 1.0]
    rows = []
    for b in betas:
        val = bounds.lemma1_bound(ch, cb, float(b))
        rows.append([float(b), val.value, val.vacuous])
    payload = {"rows": [dict(zip(("beta", "bound", "vacuous"), r)) for r in rows]}
    return _emit(cfg, ["beta", "bound", "vacuous"], rows, payload), True


def cmd_verify(cfg: RunConfig):
    names = sorted(verify.SUITES) if cfg.suite == "all" else [cfg.suite]
    if any(n not in verify.SUITES for n in names):
        raise io.InputError(f"unknown suite {cfg.suite!r}; choose from all, {', '.join(sorted(verify.SUITES))}")
    reports = [verify.run_suite(n, cfg.seed, cfg.trials) for n in names]
    text = json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"
    return text, all(r.passed for r in reports)


COMMANDS = {
    "capacity": cmd_capacity,
    "e0-curve": cmd_e0_curve,
    "exponent": cmd_exponent,
    "bound": cmd_bound,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--channel", help="channel JSON file, or builtin:<name>")
    shared.add_argument("--out", help="output file (written atomically); default stdout")
    shared.add_argument("--format", choices=("csv", "json"), default="csv")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--s-grid", type=parse_grid, help="a:b:step or comma list, values in (-1, 0]")
    shared.add_argument("--rate-grid", type=parse_grid, help="a:b:step or comma list of rates")
    opt = OptimizerConfig()
    shared.add_argument("--max-iters", type=int, default=opt.max_iters)
    shared.add_argument("--tol", type=float, default=opt.tol)
    shared.add_argument("--kkt-tol", type=float, default=opt.kkt_tol)
    shared.add_argument("--grid-res", type=int, default=opt.grid_resolution)

    parser = argparse.ArgumentParser(
        prog="cqconverse", description="Strong-converse error bounds for classical-quantum channels."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("capacity", parents=[shared], help="channel capacity and optimal prior")
    p = sub.add_parser("e0-curve", parents=[shared], help="E0(s) table")
    p.add_argument("--prior", default="optimal", help="'optimal' or comma-separated probabilities")
    p = sub.add_parser("exponent", parents=[shared], help="strong-converse exponent vs rate")
    p.add_argument("--rate", type=float)
    p.add_argument("--bits", action="store_true", help="rates are given in bits")
    p = sub.add_parser("bound", parents=[shared], help="per-codebook error lower bound")
    p.add_argument("--codebook", help="codebook JSON file, or builtin:<name>")
    p.add_argument("--beta", type=float)
    p.add_argument("--beta-grid", type=parse_grid)
    p = sub.add_parser("verify", parents=[shared], help="randomized inequality suites")
    p.add_argument("suite", nargs="?", default="all")
    p.add_argument("--trials", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_namespace(ns)
        text, ok = COMMANDS[cfg.command](cfg)
    except (io.InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    if cfg.out:
        io.write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify":
        return EXIT_OK if ok else EXIT_VERIFY
    return EXIT_OK if ok else EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
