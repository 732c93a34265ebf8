"""Serialization of every public value: JSON, CSV, and SVG.

Rationals travel as exact strings "p/q" (plain ints when the denominator
is one), so every JSON document round-trips into the module types without
loss.  SVG output is deterministic: fixed styling, fixed float formatting,
no timestamps.
"""
from __future__ import annotations

import io
import json
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .alcoves import Alcove
from .crystallo import GoldbachWitness, IntegerMatrix, PsiValue
from .exact_geometry import (
    GeometryError,
    Polytope,
    Q,
    Vector,
    polytope_from_halfspaces,
    polytope_from_vertices,
    vector,
)
from .fd_oracle import FDSpectrum
from .root_systems import RootSystem, ValidationReport
from .spectra import SpectrumEntry, TrigSum, TrigTerm, support_frame
from .tessellation import (
    CapInfo,
    OverlapCertificate,
    PlaneCutCertificate,
    ReflectionClosure,
    StrictnessVerdict,
)


def rational_to_json(x: Q):
    x = Q(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(x) -> Q:
    if isinstance(x, bool) or isinstance(x, float):
        raise GeometryError(f"rationals serialize as ints or 'p/q' strings, got {x!r}")
    return Q(x)


def vector_to_json(v: Vector) -> list:
    return [rational_to_json(c) for c in v]


def vector_from_json(v) -> Vector:
    return vector([rational_from_json(c) for c in v])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# polytopes and alcoves


def polytope_to_json(p: Polytope) -> dict:
    return {"dim": p.ambient_dim, "vertices": [vector_to_json(v) for v in p.vertices]}


def polytope_from_json(doc: dict) -> Polytope:
    dim = int(doc["dim"])
    if "vertices" in doc:
        verts = [vector_from_json(v) for v in doc["vertices"]]
        if any(len(v) != dim for v in verts):
            raise GeometryError("vertex dimension disagrees with 'dim'")
        return polytope_from_vertices(verts, allow_subspace=True)
    if "halfspaces" in doc:
        halfspaces = []
        for h in doc["halfspaces"]:
            halfspaces.append(
                (
                    vector_from_json(h["normal"]),
                    rational_from_json(h["offset"]),
                    h.get("sense", "le"),
                )
            )
        return polytope_from_halfspaces(halfspaces, dim)
    raise GeometryError("polytope JSON needs 'vertices' or 'halfspaces'")


def alcove_to_json(a: Alcove) -> dict:
    doc = polytope_to_json(a.polytope)
    doc["walls"] = [[vector_to_json(v), int(k)] for v, k in a.walls]
    return doc


# ---------------------------------------------------------------------------
# root systems


def root_system_to_json(r: RootSystem) -> dict:
    return {"dim": r.ambient_dim, "roots": [vector_to_json(v) for v in r.roots]}


def root_system_from_json(doc: dict, *, validate: bool = True) -> RootSystem:
    roots = [vector_from_json(v) for v in doc["roots"]]
    if any(len(v) != int(doc["dim"]) for v in roots):
        raise GeometryError("root dimension disagrees with 'dim'")
    return RootSystem.from_roots(roots, validate=validate)


def validation_report_to_json(rep: ValidationReport) -> dict:
    return {
        "valid": rep.is_valid,
        "ambient_dim": rep.ambient_dim,
        "rank": rep.rank,
        "axioms": [
            {
                "index": c.index,
                "name": c.name,
                "passed": c.passed,
                "witness": c.witness,
            }
            for c in rep.checks
        ],
    }


# ---------------------------------------------------------------------------
# tessellation verdicts and closures


def certificate_to_json(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, PlaneCutCertificate):
        return {
            "kind": "plane_cut",
            "normal": vector_to_json(cert.normal),
            "offset": rational_to_json(cert.offset),
            "copy_vertices": [vector_to_json(v) for v in cert.copy_vertices],
            "witness": vector_to_json(cert.witness),
        }
    if isinstance(cert, OverlapCertificate):
        return {
            "kind": "overlap",
            "vertices_a": [vector_to_json(v) for v in cert.vertices_a],
            "vertices_b": [vector_to_json(v) for v in cert.vertices_b],
            "witness": vector_to_json(cert.witness),
        }
    if isinstance(cert, CapInfo):
        return {
            "kind": "cap",
            "max_copies": cert.max_copies,
            "copies_seen": cert.copies_seen,
        }
    raise GeometryError(f"unknown certificate {cert!r}")


def verdict_to_json(v: StrictnessVerdict) -> dict:
    return {
        "verdict": v.verdict,
        "certificate": certificate_to_json(v.certificate),
        "copies": len(v.closure.copies),
        "complete": v.closure.complete,
        "region": [vector_to_json(v.closure.region[0]), vector_to_json(v.closure.region[1])],
    }


def closure_to_json(c: ReflectionClosure) -> dict:
    return {
        "seed": polytope_to_json(c.seed),
        "complete": c.complete,
        "region": [vector_to_json(c.region[0]), vector_to_json(c.region[1])],
        "copies": [
            {
                "vertices": [vector_to_json(v) for v in rec.polytope.vertices],
                "word": [
                    [vector_to_json(n), rational_to_json(off)] for n, off in rec.word
                ],
            }
            for rec in c.copies
        ],
        "planes": sorted(
            [vector_to_json(n), rational_to_json(off)] for n, off in c.plane_set
        ),
    }


# ---------------------------------------------------------------------------
# spectra


def spectrum_to_json(entries: Sequence[SpectrumEntry]) -> list[dict]:
    return [
        {
            "index": i + 1,
            "q_norm_sq": rational_to_json(e.q_norm_sq),
            "eigenvalue": e.eigenvalue,
            "multiplicity": e.multiplicity,
            "weights": [vector_to_json(w) for w in e.weights],
        }
        for i, e in enumerate(entries)
    ]


def spectrum_to_csv(entries: Sequence[SpectrumEntry]) -> str:
    out = io.StringIO()
    out.write("index,q_norm_sq,eigenvalue,multiplicity,weights\n")
    for i, e in enumerate(entries):
        weights = ";".join(
            ",".join(str(rational_to_json(c)) for c in w) for w in e.weights
        )
        out.write(
            f"{i + 1},{rational_to_json(e.q_norm_sq)},{e.eigenvalue!r},"
            f"{e.multiplicity},{weights}\n"
        )
    return out.getvalue()


def trig_sum_to_json(u: TrigSum) -> list[dict]:
    return [
        {
            "re": t.coefficient.real,
            "im": t.coefficient.imag,
            "frequency": list(t.frequency),
        }
        for t in u.terms
    ]


def trig_sum_from_json(doc: list) -> TrigSum:
    terms = []
    nsq = None
    for t in doc:
        freq = tuple(float(f) for f in t["frequency"])
        this = sum(f * f for f in freq)
        if nsq is None:
            nsq = this
        elif abs(this - nsq) > 1e-9 * max(1.0, nsq):
            raise GeometryError("unequal squared frequency norms in TrigSum JSON")
        terms.append(
            TrigTerm(
                coefficient=complex(float(t["re"]), float(t["im"])), frequency=freq
            )
        )
    if not terms:
        raise GeometryError("empty TrigSum")
    return TrigSum(
        terms=tuple(terms), freq_norm_sq=nsq, ambient_dim=len(terms[0].frequency)
    )


# ---------------------------------------------------------------------------
# fd oracle


def fd_spectrum_to_csv(fs: FDSpectrum) -> str:
    out = io.StringIO()
    out.write("index,eigenvalue,h,polygon\n")
    for i, v in enumerate(fs.eigenvalues):
        out.write(f"{i + 1},{v!r},{fs.h!r},{fs.polygon_id}\n")
    return out.getvalue()


def nodal_to_json(polylines: Sequence[np.ndarray], region, resolution: int) -> dict:
    return {
        "region": [float(c) for c in region],
        "resolution": resolution,
        "polylines": [[[float(x), float(y)] for x, y in line] for line in polylines],
    }


# ---------------------------------------------------------------------------
# crystallo


def int_matrix_to_json(m: IntegerMatrix) -> list[list[int]]:
    return [list(row) for row in m]


def psi_to_json(p: PsiValue) -> dict:
    return {
        "m": p.m,
        "psi": p.value,
        "factorization": [[pr, r] for pr, r in p.factorization],
    }


def goldbach_to_json(w: GoldbachWitness) -> dict:
    return {
        "n": w.n,
        "p": w.p,
        "q": w.q,
        "order": w.order,
        "matrix": int_matrix_to_json(w.matrix),
    }


# ---------------------------------------------------------------------------
# SVG


def _svg_header(lo, hi, width=720) -> tuple[io.StringIO, float]:
    spanx = hi[0] - lo[0]
    spany = hi[1] - lo[1]
    height = width * spany / spanx
    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="{lo[0]:.6f} {-hi[1]:.6f} '
        f'{spanx:.6f} {spany:.6f}">\n'
    )
    return out, spanx


def _to_plane(p: Polytope) -> np.ndarray:
    """Vertices of a 2-D polytope as floats in a fixed planar frame."""
    if p.dim != 2:
        raise GeometryError("SVG rendering needs 2-D polytopes")
    if p.ambient_dim == 2:
        pts = np.array([[float(c) for c in v] for v in p.vertices])
    else:
        origin, frame = support_frame(p)
        pts = (
            np.array([[float(c) for c in v] for v in p.vertices]) - origin
        ) @ frame.T
    center = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0]))
    return pts[order]


def closure_to_svg(
    closure: ReflectionClosure, highlight_planes: Sequence = ()
) -> str:
    """Copies as polygons; optionally highlighted (violated) planes in red."""
    polys = [_to_plane(rec.polytope) for rec in closure.copies]
    allpts = np.vstack(polys)
    pad = 0.05 * float(np.ptp(allpts, axis=0).max())
    lo = allpts.min(axis=0) - pad
    hi = allpts.max(axis=0) + pad
    out, span = _svg_header(lo, hi)
    stroke = span / 400.0
    for pts in polys:
        path = " ".join(f"{x:.6f},{-y:.6f}" for x, y in pts)
        out.write(
            f'<polygon points="{path}" fill="#dce6f2" stroke="#30435c" '
            f'stroke-width="{stroke:.6f}"/>\n'
        )
    seed_pts = _to_plane(closure.seed)
    path = " ".join(f"{x:.6f},{-y:.6f}" for x, y in seed_pts)
    out.write(
        f'<polygon points="{path}" fill="#9fc2e8" stroke="#30435c" '
        f'stroke-width="{stroke:.6f}"/>\n'
    )
    frame = None
    if closure.seed.ambient_dim != 2:
        frame = support_frame(closure.seed)
    for plane in highlight_planes:
        n, c = plane
        nf = np.array([float(x) for x in n])
        cf = float(c)
        if frame is not None:
            origin, rows = frame
            cf = cf - nf @ origin
            nf = rows @ nf
        seg = _plane_segment(nf, cf, lo, hi)
        if seg is not None:
            (x1, y1), (x2, y2) = seg
            out.write(
                f'<line x1="{x1:.6f}" y1="{-y1:.6f}" x2="{x2:.6f}" y2="{-y2:.6f}" '
                f'stroke="#c0392b" stroke-width="{2 * stroke:.6f}"/>\n'
            )
    out.write("</svg>\n")
    return out.getvalue()


def _plane_segment(n, c, lo, hi):
    """Clip the line n.x = c to the box [lo, hi]; None when it misses."""
    pts = []
    for x in (lo[0], hi[0]):
        if abs(n[1]) > 1e-12:
            y = (c - n[0] * x) / n[1]
            if lo[1] - 1e-9 <= y <= hi[1] + 1e-9:
                pts.append((x, y))
    for y in (lo[1], hi[1]):
        if abs(n[0]) > 1e-12:
            x = (c - n[1] * y) / n[0]
            if lo[0] - 1e-9 <= x <= hi[0] + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    return uniq[0], uniq[1]


def nodal_to_svg(polylines: Sequence[np.ndarray], region) -> str:
    x0, y0, x1, y1 = (float(c) for c in region)
    out, span = _svg_header((x0, y0), (x1, y1))
    stroke = span / 600.0
    out.write(
        f'<rect x="{x0:.6f}" y="{-y1:.6f}" width="{x1 - x0:.6f}" '
        f'height="{y1 - y0:.6f}" fill="#ffffff" stroke="#888888" '
        f'stroke-width="{stroke:.6f}"/>\n'
    )
    for line in polylines:
        path = " ".join(f"{x:.6f},{-y:.6f}" for x, y in line)
        out.write(
            f'<polyline points="{path}" fill="none" stroke="#1a5276" '
            f'stroke-width="{stroke:.6f}"/>\n'
        )
    out.write("</svg>\n")
    return out.getvalue()
