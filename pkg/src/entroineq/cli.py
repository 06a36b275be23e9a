"""Command-line front end: constant tables, inequality verification,
sharpness and limit scans, and sphere-measure estimation.

Every output embeds the resolved run configuration and contains nothing
time- or machine-dependent, so identical configurations produce
byte-identical files.  Verification commands exit nonzero exactly when
some gap is negative beyond ten times its propagated error budget, so
CI jobs can consume them directly.
"""

from __future__ import annotations

import argparse
import importlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from .densities import density_from_dict, make_phi1, make_phi2
from .functionals import (
    is_violation,
    logsob_gap,
    renyi_gap,
    shannon_gap,
    stam_gap,
    uncertainty_check,
)
from .group_geometry import (
    GroupSpec,
    QuasiNormSpec,
    ensure_sphere_measure,
    sphere_measure,
)
from .quadrature import QuadratureError, default_abs_tol
from .serialize import csv_lines, stable_dumps
from .sharp_constants import (
    EntropyParams,
    log_sobolev_constant,
    shannon_constant,
    sharp_renyi_constant,
)

DEFAULT_SAMPLES = 200_000
DEFAULT_LIMIT_ALPHAS = "0.9,0.99,0.999,1.001,1.01,1.1"


class CliError(Exception):
    """Configuration problem; rendered as a diagnostic, exit code 2."""


def _parse_fraction_list(text: str, what: str) -> list[Fraction]:
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(Fraction(token))
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(f"cannot parse {what} entry {token!r}: {exc}")
    if not values:
        raise CliError(f"empty {what} list")
    return values


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}")


def _load_custom_evaluator(spec: str):
    if ":" not in spec:
        raise CliError(
            f"custom norm import {spec!r} must look like 'package.module:attribute'"
        )
    mod_name, attr = spec.split(":", 1)
    try:
        mod = importlib.import_module(mod_name)
        return getattr(mod, attr)
    except (ImportError, AttributeError) as exc:
        raise CliError(f"cannot import custom norm evaluator {spec!r}: {exc}")


def _norm_from_dict(d: dict) -> QuasiNormSpec:
    kind = d.get("kind")
    if kind is None:
        raise CliError("norm spec is missing the 'kind' field")
    if kind == "euclidean":
        return QuasiNormSpec.euclidean()
    if kind == "koranyi":
        return QuasiNormSpec.koranyi()
    if kind == "weighted_power":
        nu = d.get("nu")
        return QuasiNormSpec.weighted_power(None if nu is None else Fraction(str(nu)))
    if kind == "custom":
        if "import" not in d:
            raise CliError("custom norm spec needs an 'import' field (module:attr)")
        return QuasiNormSpec.custom(
            _load_custom_evaluator(d["import"]),
            bounding_halfwidths=d.get("bounding_halfwidths"),
        )
    raise CliError(f"unknown norm kind {kind!r}")


def _resolve_group_norm(args) -> tuple[GroupSpec, QuasiNormSpec]:
    """Build (group, norm-with-sphere) from --group or --weights/--norm."""
    sphere_override = getattr(args, "sphere", None)
    if getattr(args, "group", None):
        data = _load_json(args.group)
        if "weights" not in data:
            raise CliError(f"{args.group}: group spec is missing the 'weights' field")
        try:
            group = GroupSpec.from_weights(
                [Fraction(str(w)) for w in data["weights"]]
            )
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise CliError(f"{args.group}: bad 'weights' field: {exc}")
        norm = _norm_from_dict(data.get("norm", {"kind": "euclidean"}))
        if sphere_override is None:
            sphere_override = data.get("sphere_measure")
    else:
        weights = _parse_fraction_list(getattr(args, "weights", "1") or "1", "weights")
        try:
            group = GroupSpec.from_weights(weights)
        except ValueError as exc:
            raise CliError(str(exc))
        kind = getattr(args, "norm", "euclidean") or "euclidean"
        norm_dict = {"kind": kind}
        if getattr(args, "nu", None) is not None:
            norm_dict["nu"] = args.nu
        norm = _norm_from_dict(norm_dict)

    try:
        if sphere_override is not None:
            norm = norm.with_sphere_measure(float(sphere_override))
        else:
            norm = ensure_sphere_measure(
                norm, group, samples=args.samples, seed=args.seed
            )
    except ValueError as exc:
        raise CliError(str(exc))
    return group, norm


def _config_echo(args, group, norm, **extra) -> dict:
    cfg = {
        "command": args.command,
        "weights": [float(w) for w in group.weights],
        "norm": norm.identifier(),
        "sphere_measure": norm.sphere_measure,
        "sphere_stderr": norm.sphere_stderr,
        "seed": args.seed,
        "samples": args.samples,
        "format": args.format,
        "tolerance": default_abs_tol(),
    }
    cfg.update(extra)
    return cfg


def _emit(args, payload: dict, header: list[str], rows: list[list], config: dict) -> None:
    if args.format == "json":
        text = stable_dumps(payload)
    else:
        text = csv_lines(header, rows, config_echo=stable_dumps(config, compact=True))
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_A(args) -> tuple[float, str]:
    spec = args.A
    if spec is None:
        raise CliError("this command needs --A (a number, 'heisenberg_n:N' or 'euclidean_n:N')")
    try:
        return float(spec), spec
    except ValueError:
        pass
    if ":" not in spec:
        raise CliError(f"cannot parse --A value {spec!r}")
    kind, _, nstr = spec.partition(":")
    try:
        n = int(nstr)
    except ValueError:
        raise CliError(f"cannot parse --A value {spec!r}: bad index {nstr!r}")
    try:
        return log_sobolev_constant(kind, n=n), spec
    except ValueError as exc:
        raise CliError(str(exc))


def _density_from_args(args, group, norm):
    if not getattr(args, "density", None):
        raise CliError("this command needs --density FILE")
    data = _load_json(args.density)
    try:
        return density_from_dict(data, group, norm), data
    except (ValueError, QuadratureError) as exc:
        raise CliError(f"{args.density}: {exc}")


# --- commands ---------------------------------------------------------


def cmd_constants(args) -> int:
    group, norm = _resolve_group_norm(args)
    alphas = _parse_fraction_list(args.alpha, "alpha")
    bs = _parse_fraction_list(args.b, "b")
    q = group.Q
    sphere = norm.sphere_measure

    rows_json = []
    rows_csv = []
    for a in alphas:
        for b in bs:
            row = {"alpha": float(a), "b": float(b), "Q": float(q), "sphere": sphere}
            try:
                res = sharp_renyi_constant(EntropyParams(a, b), q, sphere)
                row.update(
                    status="ok",
                    branch=res.branch,
                    K=res.K,
                    A_stated=res.A_stated,
                    C=res.ingredients.c,
                    extremizer_alpha_norm=res.ingredients.alpha_norm,
                    extremizer_moment=res.ingredients.moment,
                )
            except ValueError as exc:
                row.update(
                    status=f"invalid: {exc}",
                    branch=None,
                    K=None,
                    A_stated=None,
                    C=None,
                    extremizer_alpha_norm=None,
                    extremizer_moment=None,
                )
            rows_json.append(row)
            rows_csv.append(
                [
                    row["alpha"], row["b"], row["Q"], row["sphere"], row["status"],
                    row["branch"], row["K"], row["A_stated"], row["C"],
                    row["extremizer_alpha_norm"], row["extremizer_moment"],
                ]
            )

    config = _config_echo(
        args, group, norm,
        alpha=[float(a) for a in alphas], b=[float(b) for b in bs],
    )
    header = [
        "alpha", "b", "Q", "sphere", "status", "branch", "K", "A_stated",
        "C", "extremizer_alpha_norm", "extremizer_moment",
    ]
    _emit(args, {"config": config, "rows": rows_json}, header, rows_csv, config)
    return 0


def _report_rows(report) -> tuple[list[str], list[list]]:
    d = report.to_dict()
    header = ["inequality", "lhs", "rhs", "gap", "quad_error"]
    return header, [[d["inequality"], d["lhs"], d["rhs"], d["gap"], d["quad_error"]]]


def _finish_verify(args, group, norm, report, config) -> int:
    payload = {"config": config, "report": report.to_dict()}
    header, rows = _report_rows(report)
    _emit(args, payload, header, rows, config)
    return 1 if is_violation(report) else 0


def cmd_verify_renyi(args) -> int:
    group, norm = _resolve_group_norm(args)
    u, density_echo = _density_from_args(args, group, norm)
    alphas = _parse_fraction_list(args.alpha, "alpha")
    bs = _parse_fraction_list(args.b, "b")
    if len(alphas) != 1 or len(bs) != 1:
        raise CliError("verify-renyi takes a single --alpha and a single --b")
    params = EntropyParams(alphas[0], bs[0])
    try:
        params.validate(group.Q)
        report = renyi_gap(u, params)
    except (ValueError, QuadratureError) as exc:
        raise CliError(str(exc))
    config = _config_echo(
        args, group, norm,
        alpha=[float(alphas[0])], b=[float(bs[0])], density=density_echo,
    )
    return _finish_verify(args, group, norm, report, config)


def cmd_verify_shannon(args) -> int:
    group, norm = _resolve_group_norm(args)
    u, density_echo = _density_from_args(args, group, norm)
    try:
        report = shannon_gap(u)
    except (ValueError, QuadratureError) as exc:
        raise CliError(str(exc))
    config = _config_echo(args, group, norm, density=density_echo)
    return _finish_verify(args, group, norm, report, config)


def cmd_verify_logsob(args) -> int:
    group, norm = _resolve_group_norm(args)
    u, density_echo = _density_from_args(args, group, norm)
    A, a_spec = _parse_A(args)
    try:
        report = logsob_gap(u, A, samples=args.samples, seed=args.seed)
    except (ValueError, QuadratureError) as exc:
        raise CliError(str(exc))
    config = _config_echo(
        args, group, norm, density=density_echo, A=A, A_spec=a_spec
    )
    return _finish_verify(args, group, norm, report, config)


def cmd_verify_uncertainty(args) -> int:
    group, norm = _resolve_group_norm(args)
    u, density_echo = _density_from_args(args, group, norm)
    A, a_spec = _parse_A(args)
    try:
        report = uncertainty_check(u, A, samples=args.samples, seed=args.seed)
    except (ValueError, QuadratureError) as exc:
        raise CliError(str(exc))
    config = _config_echo(
        args, group, norm, density=density_echo, A=A, A_spec=a_spec
    )
    return _finish_verify(args, group, norm, report, config)


def cmd_verify_stam(args) -> int:
    group, norm = _resolve_group_norm(args)
    u, density_echo = _density_from_args(args, group, norm)
    try:
        report = stam_gap(u, samples=args.samples, seed=args.seed)
    except (ValueError, QuadratureError) as exc:
        raise CliError(str(exc))
    config = _config_echo(args, group, norm, density=density_echo)
    return _finish_verify(args, group, norm, report, config)


def cmd_limit_scan(args) -> int:
    group, norm = _resolve_group_norm(args)
    alphas = _parse_fraction_list(args.alpha or DEFAULT_LIMIT_ALPHAS, "alpha")
    q = group.Q
    sphere = norm.sphere_measure
    cg = shannon_constant(q, sphere)
    b = Fraction(2)  # the Shannon limit lives at the second moment

    rows_json = []
    rows_csv = []
    for a in alphas:
        res = sharp_renyi_constant(EntropyParams(a, b), q, sphere)
        rows_json.append(
            {"alpha": float(a), "K": res.K, "C_G": cg, "ratio": res.K / cg}
        )
        rows_csv.append([float(a), res.K, cg, res.K / cg])

    config = _config_echo(args, group, norm, alpha=[float(a) for a in alphas], b=[2.0])
    _emit(
        args,
        {"config": config, "rows": rows_json},
        ["alpha", "K", "C_G", "ratio"],
        rows_csv,
        config,
    )
    return 0


def cmd_sharpness_scan(args) -> int:
    group, norm = _resolve_group_norm(args)
    alphas = _parse_fraction_list(args.alpha, "alpha")
    bs = _parse_fraction_list(args.b, "b")

    rows_json = []
    rows_csv = []
    for a in alphas:
        for b in bs:
            row = {"alpha": float(a), "b": float(b)}
            try:
                params = EntropyParams(a, b)
                params.validate(group.Q)
                maker = make_phi1 if params.branch == "below_one" else make_phi2
                u = maker(a, b, group, norm)
                report = renyi_gap(u, params)
                row.update(
                    status="ok",
                    branch=params.branch,
                    gap=report.gap,
                    quad_error=report.quad_error,
                )
            except (ValueError, QuadratureError) as exc:
                row.update(
                    status=f"invalid: {exc}", branch=None, gap=None, quad_error=None
                )
            rows_json.append(row)
            rows_csv.append(
                [row["alpha"], row["b"], row["status"], row["branch"],
                 row["gap"], row["quad_error"]]
            )

    config = _config_echo(
        args, group, norm,
        alpha=[float(a) for a in alphas], b=[float(b) for b in bs],
    )
    _emit(
        args,
        {"config": config, "rows": rows_json},
        ["alpha", "b", "status", "branch", "gap", "quad_error"],
        rows_csv,
        config,
    )
    return 0


def cmd_sphere_measure(args) -> int:
    # bypass ensure_sphere_measure: this command reports the estimate itself
    sphere_override = getattr(args, "sphere", None)
    if sphere_override is not None:
        raise CliError("--sphere override makes no sense for sphere-measure")
    if getattr(args, "group", None):
        data = _load_json(args.group)
        if "weights" not in data:
            raise CliError(f"{args.group}: group spec is missing the 'weights' field")
        group = GroupSpec.from_weights([Fraction(str(w)) for w in data["weights"]])
        norm = _norm_from_dict(data.get("norm", {"kind": "euclidean"}))
    else:
        group = GroupSpec.from_weights(
            _parse_fraction_list(args.weights or "1", "weights")
        )
        norm_dict = {"kind": args.norm or "euclidean"}
        if getattr(args, "nu", None) is not None:
            norm_dict["nu"] = args.nu
        norm = _norm_from_dict(norm_dict)
    try:
        value, stderr = sphere_measure(group, norm, samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc))

    config = _config_echo(args, group, norm.with_sphere_measure(value, stderr))
    payload = {
        "config": config,
        "report": {
            "sphere_measure": value,
            "stderr": stderr,
            "exact": norm.kind == "euclidean",
            "samples": args.samples,
            "seed": args.seed,
        },
    }
    rows = [[value, stderr, norm.kind == "euclidean", args.samples, args.seed]]
    _emit(args, payload, ["sphere_measure", "stderr", "exact", "samples", "seed"], rows, config)
    return 0


# --- parser -----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, density=False, a_flag=False, grid=False):
    p.add_argument("--group", help="JSON file with weights/norm/sphere_measure")
    p.add_argument("--weights", help="comma list of dilation weights, e.g. 1,1,2")
    p.add_argument(
        "--norm",
        choices=["euclidean", "koranyi", "weighted_power"],
        help="quasi-norm kind (default euclidean; custom kinds via --group)",
    )
    p.add_argument("--nu", help="weighted_power exponent parameter")
    p.add_argument("--sphere", type=float, help="override the sphere measure |S|")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.add_argument(
        "--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo sample count"
    )
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    if grid:
        p.add_argument("--alpha", required=True, help="comma list of entropy orders")
        p.add_argument("--b", required=True, help="comma list of moment exponents")
    if density:
        p.add_argument("--density", help="JSON density spec file")
    if a_flag:
        p.add_argument(
            "--A",
            help="log-Sobolev constant: a number, 'heisenberg_n:N' or 'euclidean_n:N'",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entroineq",
        description="Sharp entropy-moment inequalities on homogeneous groups: "
        "constants, extremizers, and verification runs.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("constants", help="table of sharp constants over a parameter grid")
    _add_common(p, grid=True)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify-renyi", help="entropy-moment gap for one density")
    _add_common(p, density=True, grid=True)
    p.set_defaults(func=cmd_verify_renyi)

    p = sub.add_parser("verify-shannon", help="Shannon inequality gap for one density")
    _add_common(p, density=True)
    p.set_defaults(func=cmd_verify_shannon)

    p = sub.add_parser("verify-logsob", help="log-Sobolev gap for one density")
    _add_common(p, density=True, a_flag=True)
    p.set_defaults(func=cmd_verify_logsob)

    p = sub.add_parser(
        "verify-uncertainty", help="moment-Fisher product against its lower bound"
    )
    _add_common(p, density=True, a_flag=True)
    p.set_defaults(func=cmd_verify_uncertainty)

    p = sub.add_parser("verify-stam", help="Euclidean entropy-Fisher bound for one density")
    _add_common(p, density=True)
    p.set_defaults(func=cmd_verify_stam)

    p = sub.add_parser("limit-scan", help="K against the Shannon constant as alpha -> 1")
    _add_common(p)
    p.add_argument("--alpha", help=f"comma list (default {DEFAULT_LIMIT_ALPHAS})")
    p.set_defaults(func=cmd_limit_scan)

    p = sub.add_parser("sharpness-scan", help="extremizer gap over a parameter grid")
    _add_common(p, grid=True)
    p.set_defaults(func=cmd_sharpness_scan)

    p = sub.add_parser("sphere-measure", help="unit quasi-sphere measure of a group/norm")
    _add_common(p)
    p.set_defaults(func=cmd_sphere_measure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"entroineq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
