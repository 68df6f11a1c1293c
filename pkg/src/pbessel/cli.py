"""Command-line front end.

Commands
--------
``pbessel coeffs --config CFG``
    Compute the coefficient tables; write the coefficient CSV, the
    residual-vs-N CSV, a decay-fit JSON and gnuplot-ready log-log data
    files of |beta_n(b)|, |gamma_n(b)| vs n.
``pbessel eigen --config CFG [--oracle]``
    Find eigenvalues in the configured window; write the eigenvalue CSV
    and, with ``--oracle``, a comparison table against the shooting
    reference with absolute-error columns.
``pbessel solve --config CFG``
    Evaluate (u, u') on the configured omega and x lists; write the
    evaluation grid CSV with error-indicator columns.
``pbessel decay-sweep --config CFG``
    Repeat the coefficient computation over a list of l values and write
    one log-log data file per l plus a JSON of fitted decay exponents.

Flags: ``--config PATH``, ``--out DIR``, ``--mesh M``, ``--N K``,
``--oracle``.  Exit codes: 0 success, 2 configuration error, 3 numerical
breakdown, 4 convergence failure.

Every output file starts with a ``#``-prefixed provenance block (config
hash, actual mesh size, N, N_opt, residual floors), uses 17-significant-
digit floats, and is byte-identical across reruns of the same config.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, config_sha256, emit_config, parse_config
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    InsufficientDataError,
    InvalidMeshError,
    NonVanishingError,
    NumericalBreakdownError,
    OrderCapError,
    PerturbedBesselError,
)
from .mesh import UniformMesh, next_valid_size
from .potentials import make_potential, potential_callable
from .shooting import shoot_eigenvalue_near
from .solution import build_solution, error_indicator, eval_u, eval_u_prime
from .spectral import BoundaryCondition, SpectralProblem, decay_fit, find_eigenvalues

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CONVERGENCE = 4


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config(text)
    else:
        cfg = RunConfig()
    return cfg.with_overrides(
        directory=args.out,
        mesh_points=args.mesh,
        N=args.N,
        oracle=True if args.oracle else None,
    )


def _pipeline(cfg: RunConfig):
    m = next_valid_size(cfg.mesh_points)
    mesh = UniformMesh(cfg.b, m)
    p = make_potential(cfg.potential, mesh, cfg.l)
    sol = build_solution(p, N=cfg.N)
    return mesh, p, sol


def _provenance(cfg: RunConfig, command: str, mesh: UniformMesh, sol=None) -> list[str]:
    lines = [
        f"# pbessel {__version__} {command}",
        f"# config_sha256 = {config_sha256(cfg)}",
        f"# mesh_m = {mesh.m} (requested {cfg.mesh_points})",
        f"# N = {cfg.N}",
    ]
    if sol is not None:
        t = sol.tables
        lines += [
            f"# N_opt = {t.N_opt}",
            f"# beta_floor = {_fmt(t.beta_floor)}",
            f"# gamma_floor = {_fmt(t.gamma_floor)}",
            f"# converged = {str(t.converged).lower()}",
        ]
    return lines


def _write(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _write_csv(path: Path, provenance: list[str], header: str, rows) -> None:
    _write(path, provenance + [header] + [",".join(_fmt(v) for v in row) for row in rows])


def _fit_or_none(values: np.ndarray, n_lo: int, n_hi: int):
    span = values[n_lo : n_hi + 1]
    if span.size < 11:
        return None, "insufficient n range"
    try:
        return decay_fit(span, n_lo), None
    except (InsufficientDataError, DomainError) as exc:
        return None, str(exc)


def cmd_coeffs(cfg: RunConfig) -> int:
    mesh, p, sol = _pipeline(cfg)
    out = Path(cfg.directory)
    prov = _provenance(cfg, "coeffs", mesh, sol)
    t = sol.tables

    stride = max(1, (mesh.m - 1) // 200)
    idx = np.arange(0, mesh.m, stride)
    if idx[-1] != mesh.m - 1:
        idx = np.append(idx, mesh.m - 1)
    rows = []
    bm, gm = t.beta_matrix(), t.gamma_matrix()
    for n in range(t.N + 1):
        for i in idx:
            rows.append((n, mesh.x[i], bm[n, i], gm[n, i]))
    _write_csv(out / "coefficients.csv", prov, "n,x,beta_n,gamma_n", rows)

    _write_csv(
        out / "residuals.csv",
        prov,
        "K,beta_residual,gamma_residual",
        [(k, t.beta_residual[k], t.gamma_residual[k]) for k in range(t.N + 1)],
    )

    beta_abs = np.abs(bm[:, -1])
    gamma_abs = np.abs(gm[:, -1])
    n_lo, n_hi = 10, min(100, t.N)
    beta_exp, beta_msg = _fit_or_none(beta_abs, n_lo, n_hi)
    gamma_exp, gamma_msg = _fit_or_none(gamma_abs, n_lo, n_hi)
    fit = {
        "N": t.N,
        "N_opt": t.N_opt,
        "converged": t.converged,
        "beta_floor": t.beta_floor,
        "gamma_floor": t.gamma_floor,
        "fit_range": [n_lo, n_hi],
        "beta_exponent": beta_exp,
        "beta_fit_note": beta_msg,
        "gamma_exponent": gamma_exp,
        "gamma_fit_note": gamma_msg,
    }
    _write(out / "decay_fit.json", [json.dumps(fit, sort_keys=True, indent=2)])

    for name, arr in (("beta_abs_loglog.dat", beta_abs), ("gamma_abs_loglog.dat", gamma_abs)):
        _write(
            out / name,
            prov + [f"{n} {_fmt(arr[n])}" for n in range(1, t.N + 1)],
        )
    return EXIT_OK


def _oracle_rows(cfg: RunConfig, sol, pairs):
    resolved = potential_callable(cfg.potential)
    if resolved is None:
        raise ConfigError("--oracle needs an analytic potential (builtin or const:), not csv:")
    q, _ = resolved
    omegas = [p.omega for p in pairs]
    gaps = np.diff([0.0] + omegas) if omegas else []
    rows = []
    for k, pair in enumerate(pairs):
        halfwidth = 0.2 if len(omegas) < 2 else max(min(0.2, 0.4 * float(np.min(gaps[1:]))), 1e-3)
        ref = shoot_eigenvalue_near(
            q, cfg.l, cfg.b, pair.omega, kind=cfg.boundary, robin_h=cfg.H, halfwidth=halfwidth
        )
        rows.append((pair.index, pair.omega, ref, abs(pair.omega - ref)))
    return rows


def cmd_eigen(cfg: RunConfig) -> int:
    mesh, p, sol = _pipeline(cfg)
    out = Path(cfg.directory)
    prov = _provenance(cfg, "eigen", mesh, sol)
    prob = SpectralProblem(
        potential=p,
        boundary=BoundaryCondition(cfg.boundary, H=cfg.H),
        omega_window=(cfg.omega_min, cfg.omega_max),
        scan_points=cfg.scan_points,
    )
    pairs = find_eigenvalues(sol, prob)
    _write_csv(
        out / "eigenvalues.csv",
        prov,
        "index,omega,residual,bracket_width",
        [(e.index, e.omega, e.char_residual, e.refinement_width) for e in pairs],
    )
    if cfg.oracle:
        _write_csv(
            out / "eigenvalues_comparison.csv",
            prov,
            "index,omega,omega_oracle,abs_error",
            _oracle_rows(cfg, sol, pairs),
        )
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    if not cfg.omegas or not cfg.xs:
        raise ConfigError("solve needs non-empty omegas and xs lists in [solve]")
    mesh, p, sol = _pipeline(cfg)
    out = Path(cfg.directory)
    prov = _provenance(cfg, "solve", mesh, sol)
    rows = []
    for om in cfg.omegas:
        for x in cfg.xs:
            eb, eg = error_indicator(sol, x) if x > 0 else (0.0, 0.0)
            rows.append((om, x, eval_u(sol, om, x), eval_u_prime(sol, om, x), eb, eg))
    _write_csv(out / "solution.csv", prov, "omega,x,u,u_prime,eps_beta,eps_gamma", rows)
    return EXIT_OK


def cmd_decay_sweep(cfg: RunConfig) -> int:
    l_values = cfg.l_values or (0.5, 1.0, 1.5, 2.0)
    out = Path(cfg.directory)
    exponents = {}
    for lv in l_values:
        sub = cfg.with_overrides(l=float(lv))
        mesh, p, sol = _pipeline(sub)
        t = sol.tables
        prov = _provenance(sub, "decay-sweep", mesh, sol)
        tag = _fmt(lv)
        beta_abs = np.abs(t.beta_matrix()[:, -1])
        gamma_abs = np.abs(t.gamma_matrix()[:, -1])
        for name, arr in (
            (f"beta_abs_loglog_l{tag}.dat", beta_abs),
            (f"gamma_abs_loglog_l{tag}.dat", gamma_abs),
        ):
            _write(out / name, prov + [f"{n} {_fmt(arr[n])}" for n in range(1, t.N + 1)])
        n_lo, n_hi = 10, min(100, t.N)
        b_exp, _ = _fit_or_none(beta_abs, n_lo, n_hi)
        g_exp, _ = _fit_or_none(gamma_abs, n_lo, n_hi)
        exponents[tag] = {"beta_exponent": b_exp, "gamma_exponent": g_exp}
    _write(Path(cfg.directory) / "decay_exponents.json", [json.dumps(exponents, sort_keys=True, indent=2)])
    return EXIT_OK


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "eigen": cmd_eigen,
    "solve": cmd_solve,
    "decay-sweep": cmd_decay_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbessel",
        description="Perturbed Bessel equation solver (Neumann series of Bessel functions).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="path to the run configuration file")
        s.add_argument("--out", help="output directory (overrides config)")
        s.add_argument("--mesh", type=int, help="mesh point count (overrides config)")
        s.add_argument("--N", type=int, help="coefficient table size (overrides config)")
        s.add_argument("--oracle", action="store_true", help="also run the shooting comparison")
        s.add_argument(
            "--emit-config",
            action="store_true",
            help="print the canonical config and exit",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.emit_config:
            sys.stdout.write(emit_config(cfg))
            return EXIT_OK
        return _COMMANDS[args.command](cfg)
    except (ConfigError, InvalidMeshError, DomainError, OrderCapError) as exc:
        print(f"pbessel: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalBreakdownError, EvaluationError) as exc:
        print(f"pbessel: numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConvergenceError, NonVanishingError) as exc:
        print(f"pbessel: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except PerturbedBesselError as exc:
        print(f"pbessel: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
