"""Command-line surface: every module behind one reproducible driver.

Subcommand groups: rootsys, alcove, tessellate, spectrum, fd, crystal.
Exit codes: 0 success, 2 when the computation succeeded but the
mathematical verdict is negative (not_strict, invalid axioms, no Goldbach
pair, failed verification), 1 on errors.  The environment variable
ALCOVE_LAB_THREADS caps internal parallelism; the current implementation
is sequential, so any value >= 1 is accepted and acts as an upper bound.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import crystallo, formats
from .alcoves import OnWallError, alcove_at, fundamental_alcove
from .exact_geometry import GeometryError, Q, vector
from .fd_oracle import (
    FDOracleError,
    fd_spectrum,
    fd_spectrum_interval,
    nodal_set_sample,
    pde_residual,
)
from .root_systems import (
    RootSystem,
    standard_root_system,
    validate_root_system,
    weyl_chambers,
    weyl_group,
)
from .spectra import (
    eigenfunction,
    spectrum,
    support_frame,
    trig_sum_from_sines,
    verify_eigenpair,
)
from .tessellation import (
    NOT_STRICT,
    STRICT,
    NotStrictError,
    is_strict_tessellation,
    reflection_closure,
    root_system_from_tessellation,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


@dataclass
class RunConfig:
    """One resolved CLI invocation; identical configs give identical bytes
    for exact outputs and tolerance-identical floating outputs."""

    subcommand: str
    inputs: tuple[str, ...] = ()
    out: str | None = None
    format: str = "json"
    h: Fraction | None = None
    cutoff: float | None = None
    count: int | None = None
    region: tuple[Fraction, ...] | None = None
    max_copies: int = 20000
    seed: int = 0
    threads: int = 1
    params: dict = field(default_factory=dict)


def _threads_from_env() -> int:
    raw = os.environ.get("ALCOVE_LAB_THREADS")
    if raw is None:
        return 1
    try:
        val = int(raw)
    except ValueError as err:
        raise GeometryError(f"ALCOVE_LAB_THREADS must be an integer, got {raw!r}") from err
    if val < 1:
        raise GeometryError("ALCOVE_LAB_THREADS must be >= 1")
    return val


def _parse_fractions(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(tok.strip()) for tok in text.split(","))


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _system_from(config: RunConfig) -> RootSystem:
    fam = config.params.get("family")
    if fam:
        return standard_root_system(fam)
    if config.inputs:
        return formats.root_system_from_json(_load_json(config.inputs[0]))
    raise GeometryError("need --family or a root-system JSON file")


def _trig_sum_from(config: RunConfig):
    if config.params.get("preset") == "fig8":
        s = 1.0 / math.sqrt(2.0)
        return trig_sum_from_sines(
            [(1.0, (1.0, 0.0), 0.0), (1.0, (0.0, 1.0), 0.0), (1.0, (s, s), 0.0)]
        )
    if config.params.get("sum"):
        return formats.trig_sum_from_json(_load_json(config.params["sum"]))
    if config.params.get("q") is not None:
        system = _system_from(config)
        return eigenfunction(system, _parse_fractions(config.params["q"]))
    raise GeometryError("need --preset fig8, --sum FILE, or --family/--q")


# ---------------------------------------------------------------------------
# subcommand implementations


def _run_rootsys(config: RunConfig) -> int:
    action = config.params["action"]
    if action == "validate":
        doc = _load_json(config.inputs[0])
        roots = [formats.vector_from_json(v) for v in doc["roots"]]
        report = validate_root_system(
            roots, allow_subspace=bool(config.params.get("subspace"))
        )
        _emit(config, formats.dumps(formats.validation_report_to_json(report)))
        return EXIT_OK if report.is_valid else EXIT_NEGATIVE
    system = _system_from(config)
    if action == "standard":
        _emit(config, formats.dumps(formats.root_system_to_json(system)))
        return EXIT_OK
    if action == "weyl":
        group = weyl_group(system)
        doc = {
            "order": group.order,
            "elements": [
                [[formats.rational_to_json(x) for x in row] for row in m]
                for m in group.elements
            ],
        }
        _emit(config, formats.dumps(doc))
        return EXIT_OK
    if action == "chambers":
        chambers = weyl_chambers(system)
        doc = {
            "count": len(chambers),
            "hyperplane_normals": [
                formats.vector_to_json(v) for v in chambers[0].normals
            ],
            "chambers": [{"signs": list(c.signs)} for c in chambers],
        }
        _emit(config, formats.dumps(doc))
        return EXIT_OK
    raise GeometryError(f"unknown rootsys action {action!r}")


def _run_alcove(config: RunConfig) -> int:
    system = _system_from(config)
    if config.params["action"] == "build":
        alc = fundamental_alcove(system)
    else:
        point = _parse_fractions(config.params["point"])
        alc = alcove_at(system, point)
    _emit(config, formats.dumps(formats.alcove_to_json(alc)))
    return EXIT_OK


def _region_pair(config: RunConfig, dim: int):
    if config.region is None:
        return None
    coords = config.region
    if len(coords) != 2 * dim:
        raise GeometryError(f"--region needs {2 * dim} comma-separated rationals")
    return (vector(coords[:dim]), vector(coords[dim:]))


def _run_tessellate(config: RunConfig) -> int:
    action = config.params["action"]
    poly = formats.polytope_from_json(_load_json(config.inputs[0]))
    region = _region_pair(config, poly.ambient_dim)
    if action == "check":
        verdict = is_strict_tessellation(poly, region, config.max_copies)
        _emit(config, formats.dumps(formats.verdict_to_json(verdict)))
        return EXIT_OK if verdict.verdict == STRICT else EXIT_NEGATIVE
    if action == "closure":
        closure = reflection_closure(poly, region, config.max_copies)
        if config.format == "svg":
            _emit(config, formats.closure_to_svg(closure))
        else:
            _emit(config, formats.dumps(formats.closure_to_json(closure)))
        return EXIT_OK
    if action == "reconstruct":
        system = root_system_from_tessellation(poly)
        _emit(config, formats.dumps(formats.root_system_to_json(system)))
        return EXIT_OK
    raise GeometryError(f"unknown tessellate action {action!r}")


def _run_spectrum(config: RunConfig) -> int:
    action = config.params["action"]
    system = _system_from(config)
    if action == "compute":
        if config.count is not None:
            entries = spectrum(system, count=config.count)
        elif config.cutoff is not None:
            entries = spectrum(system, lambda_max=config.cutoff)
        else:
            entries = spectrum(system, count=10)
        if config.format == "csv":
            _emit(config, formats.spectrum_to_csv(entries))
        else:
            _emit(config, formats.dumps(formats.spectrum_to_json(entries)))
        return EXIT_OK
    if action == "eigenfunction":
        u = eigenfunction(system, _parse_fractions(config.params["q"]))
        _emit(config, formats.dumps(formats.trig_sum_to_json(u)))
        return EXIT_OK
    if action == "verify":
        if config.params.get("q"):
            q = _parse_fractions(config.params["q"])
        else:
            q = spectrum(system, count=1)[0].weights[0]
        u = eigenfunction(system, q)
        alc = fundamental_alcove(system)
        report = verify_eigenpair(
            u,
            alc.polytope,
            samples=config.params.get("samples") or 1000,
            h=float(config.h) if config.h else 1e-3,
            seed=config.seed,
        )
        doc = {
            "q": formats.vector_to_json(vector(q)),
            "eigenvalue": u.eigenvalue,
            "boundary_max": report.boundary_max,
            "residual_max": report.residual_max,
            "sign_constant": report.sign_constant,
            "antisymmetry_max": report.antisymmetry_max,
            "boundary_samples": report.boundary_samples,
            "interior_samples": report.interior_samples,
            "h": report.h,
            "seed": report.seed,
        }
        _emit(config, formats.dumps(doc))
        return EXIT_OK if report.passed else EXIT_NEGATIVE
    raise GeometryError(f"unknown spectrum action {action!r}")


def _run_fd(config: RunConfig) -> int:
    action = config.params["action"]
    if action == "solve":
        poly = formats.polytope_from_json(_load_json(config.inputs[0]))
        h = config.h if config.h is not None else Fraction(1, 64)
        if poly.dim == 1:
            lo, hi = poly.vertices[0][0], poly.vertices[-1][0]
            fs = fd_spectrum_interval(lo, hi, h, config.count or 6)
        else:
            fs = fd_spectrum(poly, h, config.count or 6, seed=config.seed)
        if config.format == "json":
            doc = {
                "eigenvalues": list(fs.eigenvalues),
                "h": fs.h,
                "polygon": fs.polygon_id,
            }
            _emit(config, formats.dumps(doc))
        else:
            _emit(config, formats.fd_spectrum_to_csv(fs))
        return EXIT_OK
    u = _trig_sum_from(config)
    if action == "residual":
        point = tuple(float(c) for c in _parse_fractions(config.params["point"]))
        h = float(config.h) if config.h else 1.0 / 128
        lam = config.params.get("lambda") or u.freq_norm_sq
        res = pde_residual(u, lam, point, h)
        _emit(
            config,
            formats.dumps({"residual": res, "lambda": lam, "h": h, "point": list(point)}),
        )
        return EXIT_OK
    if action == "nodal":
        region = tuple(float(c) for c in (config.region or (-8, -8, 8, 8)))
        resolution = config.params.get("resolution") or 256
        polylines = nodal_set_sample(u, region, resolution)
        if config.format == "svg":
            _emit(config, formats.nodal_to_svg(polylines, region))
        else:
            _emit(config, formats.dumps(formats.nodal_to_json(polylines, region, resolution)))
        return EXIT_OK
    raise GeometryError(f"unknown fd action {action!r}")


def _run_crystal(config: RunConfig) -> int:
    action = config.params["action"]
    n = config.params["n"]
    if action == "psi":
        _emit(config, formats.dumps(formats.psi_to_json(crystallo.psi_value(n))))
        return EXIT_OK
    if action == "ord":
        doc = {"n": n, "orders": crystallo.ord_set(n)}
        _emit(config, formats.dumps(doc))
        return EXIT_OK
    if action == "goldbach":
        upper = config.params.get("max") or n
        results = []
        missing = False
        for k in range(n, upper + 1, 2):
            w = crystallo.goldbach_witness(k)
            if w is None:
                results.append({"n": k, "witness": None, "note": "no pair found"})
                missing = True
            else:
                results.append(formats.goldbach_to_json(w))
        doc = results[0] if len(results) == 1 else results
        _emit(config, formats.dumps(doc))
        return EXIT_NEGATIVE if missing else EXIT_OK
    raise GeometryError(f"unknown crystal action {action!r}")


_RUNNERS = {
    "rootsys": _run_rootsys,
    "alcove": _run_alcove,
    "tessellate": _run_tessellate,
    "spectrum": _run_spectrum,
    "fd": _run_fd,
    "crystal": _run_crystal,
}


def run(config: RunConfig) -> int:
    """Dispatch a resolved configuration; returns the process exit status."""
    return _RUNNERS[config.subcommand](config)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser, *, fmt=("json",)) -> None:
    p.add_argument("--format", choices=fmt, default=fmt[0])
    p.add_argument("--out", default=None, help="write output to this path")
    p.add_argument("--seed", type=int, default=0)


def _add_family(p: argparse.ArgumentParser, *, with_file: bool = True) -> None:
    p.add_argument("--family", default=None, help="standard system, e.g. B2, A3, G2, A1xA1")
    if with_file:
        p.add_argument("input", nargs="?", default=None, help="root-system JSON file")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="alcove-lab",
        description="Root systems, alcoves, strict tessellation, exact spectra.",
    )
    groups = top.add_subparsers(dest="group", required=True)

    g = groups.add_parser("rootsys").add_subparsers(dest="action", required=True)
    p = g.add_parser("validate")
    p.add_argument("input")
    p.add_argument("--subspace", action="store_true",
                   help="accept systems spanning a proper subspace")
    _add_common(p)
    for name in ("standard", "weyl", "chambers"):
        p = g.add_parser(name)
        _add_family(p)
        _add_common(p)

    g = groups.add_parser("alcove").add_subparsers(dest="action", required=True)
    p = g.add_parser("build")
    _add_family(p)
    _add_common(p)
    p = g.add_parser("locate")
    _add_family(p)
    p.add_argument("--point", required=True, help="comma-separated rationals")
    _add_common(p)

    g = groups.add_parser("tessellate").add_subparsers(dest="action", required=True)
    for name, fmts in (("check", ("json",)), ("closure", ("json", "svg")),
                       ("reconstruct", ("json",))):
        p = g.add_parser(name)
        p.add_argument("input", help="polytope JSON file")
        p.add_argument("--region", default=None,
                       help="lo and hi corners, e.g. -2,-2,3,3")
        p.add_argument("--max-copies", type=int, default=20000)
        _add_common(p, fmt=fmts)

    g = groups.add_parser("spectrum").add_subparsers(dest="action", required=True)
    p = g.add_parser("compute")
    _add_family(p)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--cutoff", type=float, default=None, help="eigenvalue cutoff")
    _add_common(p, fmt=("csv", "json"))
    p = g.add_parser("eigenfunction")
    _add_family(p)
    p.add_argument("--q", required=True, help="weight, e.g. 3/2,1/2")
    _add_common(p)
    p = g.add_parser("verify")
    _add_family(p)
    p.add_argument("--q", default=None)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--h", default=None)
    _add_common(p)

    g = groups.add_parser("fd").add_subparsers(dest="action", required=True)
    p = g.add_parser("solve")
    p.add_argument("input", help="polytope JSON file")
    p.add_argument("--h", default="1/64")
    p.add_argument("--count", type=int, default=6)
    _add_common(p, fmt=("csv", "json"))
    p = g.add_parser("residual")
    _add_family(p)
    p.add_argument("--q", default=None)
    p.add_argument("--sum", default=None, help="TrigSum JSON file")
    p.add_argument("--preset", choices=("fig8",), default=None)
    p.add_argument("--point", required=True)
    p.add_argument("--h", default="1/128")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    _add_common(p)
    p = g.add_parser("nodal")
    _add_family(p)
    p.add_argument("--q", default=None)
    p.add_argument("--sum", default=None)
    p.add_argument("--preset", choices=("fig8",), default=None)
    p.add_argument("--region", default="-8,-8,8,8")
    p.add_argument("--resolution", type=int, default=256)
    _add_common(p, fmt=("json", "svg"))

    g = groups.add_parser("crystal").add_subparsers(dest="action", required=True)
    for name, arg in (("psi", "m"), ("ord", "n"), ("goldbach", "n")):
        p = g.add_parser(name)
        p.add_argument(arg, type=int)
        if name == "goldbach":
            p.add_argument("--max", type=int, default=None,
                           help="also scan every even n up to this value")
        _add_common(p)
    return top


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {"action": getattr(ns, "action", None)}
    for key in ("family", "point", "q", "sum", "preset", "samples", "resolution",
                "subspace", "max"):
        if hasattr(ns, key):
            params[key] = getattr(ns, key)
    if hasattr(ns, "lam"):
        params["lambda"] = ns.lam
    if hasattr(ns, "m"):
        params["n"] = ns.m
    if hasattr(ns, "n"):
        params["n"] = ns.n
    inputs = ()
    if getattr(ns, "input", None):
        inputs = (ns.input,)
    region = None
    if getattr(ns, "region", None):
        region = _parse_fractions(ns.region)
    h = None
    if getattr(ns, "h", None):
        h = Fraction(ns.h)
    return RunConfig(
        subcommand=ns.group,
        inputs=inputs,
        out=getattr(ns, "out", None),
        format=getattr(ns, "format", "json"),
        h=h,
        cutoff=getattr(ns, "cutoff", None),
        count=getattr(ns, "count", None),
        region=region,
        max_copies=getattr(ns, "max_copies", 20000),
        seed=getattr(ns, "seed", 0),
        threads=_threads_from_env(),
        params=params,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        return run(config)
    except OnWallError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except (NotStrictError, FDOracleError, crystallo.CrystalloError,
            GeometryError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
