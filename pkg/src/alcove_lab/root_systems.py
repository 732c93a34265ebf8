"""Root systems, their validation, coroots, Weyl groups and chambers.

Root systems whose textbook presentation needs irrationals are built in
integer embeddings: the A family as {e_i - e_j} inside the hyperplane
sum(x) = 0 of R^(rank+1), and G2 as the rank-2 subsystem
{e_i - e_j} union {+-(2e_i - e_j - e_k)} of the same hyperplane in R^3.
All coordinates stay rational this way.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exact_geometry import (
    GeometryError,
    Matrix,
    Q,
    Vector,
    dot,
    determinant,
    identity_matrix,
    is_zero,
    mat_mul,
    mat_vec,
    neg,
    norm_sq,
    orthogonalize,
    parallel_factor,
    rank_of,
    reflection_matrix,
    scale,
    solve_square,
    sub,
    vector,
    zero_vector,
)

AXIOM_NAMES = (
    "nonzero",
    "spanning",
    "reduced",
    "reflection-closed",
    "integral-pairings",
)


class InvalidRootSystemError(GeometryError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        failed = [c.name for c in report.checks if not c.passed]
        super().__init__(f"not a root system; failed axioms: {', '.join(failed)}")


class WeylClosureCapError(GeometryError):
    """Reflection closure exceeded the safety cap; the input is not a valid system."""


@dataclass(frozen=True)
class AxiomCheck:
    index: int
    name: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AxiomCheck, ...]
    ambient_dim: int
    rank: int

    @property
    def is_valid(self) -> bool:
        return all(c.passed for c in self.checks)


def _reflect_in_root(x: Vector, v: Vector) -> Vector:
    return sub(x, scale(2 * dot(v, x) / norm_sq(v), v))


def validate_root_system(
    candidate: Iterable, *, allow_subspace: bool = False
) -> ValidationReport:
    """Check the five root-system axioms, reporting a witness per failure.

    ``allow_subspace`` relaxes the spanning axiom to the span of the set
    itself, which is how the integer-embedded A and G2 families validate.
    """
    roots = [vector(v) for v in candidate]
    if not roots:
        raise GeometryError("empty candidate set")
    dim = len(roots[0])
    rootset = set(roots)
    checks = []

    zero_witness = next((v for v in roots if is_zero(v)), None)
    checks.append(
        AxiomCheck(1, AXIOM_NAMES[0], zero_witness is None,
                   None if zero_witness is None else f"contains {_fmt(zero_witness)}")
    )

    nonzero = [v for v in roots if not is_zero(v)]
    rank = rank_of(nonzero) if nonzero else 0
    expected = rank if allow_subspace else dim
    span_ok = rank == expected and rank > 0
    checks.append(
        AxiomCheck(2, AXIOM_NAMES[1], span_ok,
                   None if span_ok else f"rank {rank} < ambient dimension {dim}")
    )

    reduced_witness = None
    for u in rootset:
        if is_zero(u):
            continue
        for v in rootset:
            if u == v or is_zero(v):
                continue
            c = parallel_factor(u, v)
            if c is not None and c not in (Q(1), Q(-1)):
                reduced_witness = f"{_fmt(u)} = {c} * {_fmt(v)}"
                break
        if reduced_witness:
            break
    checks.append(AxiomCheck(3, AXIOM_NAMES[2], reduced_witness is None, reduced_witness))

    closure_witness = None
    for u in sorted(rootset):
        if is_zero(u):
            continue
        for v in sorted(rootset):
            if is_zero(v):
                continue
            image = _reflect_in_root(v, u)
            if image not in rootset:
                closure_witness = (
                    f"reflection of {_fmt(v)} across {_fmt(u)} gives {_fmt(image)}, "
                    "which is missing"
                )
                break
        if closure_witness:
            break
    checks.append(AxiomCheck(4, AXIOM_NAMES[3], closure_witness is None, closure_witness))

    integral_witness = None
    for u in sorted(rootset):
        for v in sorted(rootset):
            if is_zero(v):
                continue
            val = 2 * dot(u, v) / norm_sq(v)
            if val.denominator != 1:
                integral_witness = f"2<{_fmt(u)},{_fmt(v)}>/|{_fmt(v)}|^2 = {val}"
                break
        if integral_witness:
            break
    checks.append(AxiomCheck(5, AXIOM_NAMES[4], integral_witness is None, integral_witness))

    return ValidationReport(checks=tuple(checks), ambient_dim=dim, rank=rank)


def _fmt(v: Vector) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


@dataclass(frozen=True)
class RootSystem:
    """Finite crystallographic reduced root system with exact coordinates."""

    roots: tuple[Vector, ...]
    ambient_dim: int

    @classmethod
    def from_roots(cls, roots: Iterable, *, validate: bool = True) -> "RootSystem":
        rs = tuple(sorted({vector(v) for v in roots}))
        if not rs:
            raise GeometryError("no roots")
        if validate:
            report = validate_root_system(rs, allow_subspace=True)
            if not report.is_valid:
                raise InvalidRootSystemError(report)
        return cls(roots=rs, ambient_dim=len(rs[0]))

    @cached_property
    def support_basis(self) -> tuple[Vector, ...]:
        picked: list[Vector] = []
        for v in self.roots:
            if rank_of(picked + [v]) > len(picked):
                picked.append(v)
        return tuple(orthogonalize(picked))

    @property
    def rank(self) -> int:
        return len(self.support_basis)

    def in_support(self, x: Vector) -> bool:
        y = x
        for b in self.support_basis:
            y = sub(y, scale(dot(y, b) / norm_sq(b), b))
        return is_zero(y)

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        zero = zero_vector(self.ambient_dim)
        return tuple(v for v in self.roots if v > zero)

    @cached_property
    def simple_roots(self) -> tuple[Vector, ...]:
        pos = set(self.positive_roots)
        simple = []
        for a in self.positive_roots:
            if not any(sub(a, b) in pos for b in pos if b != a):
                simple.append(a)
        return tuple(simple)

    @cached_property
    def dominant_point(self) -> Vector:
        """The support point with <alpha, x> = 1 for every simple root alpha."""
        simple = self.simple_roots
        basis = self.support_basis
        a = tuple(tuple(dot(al, b) for b in basis) for al in simple)
        rhs = tuple(Q(1) for _ in simple)
        t = solve_square(a, rhs)
        if t is None:
            raise GeometryError("simple system is degenerate")
        x = zero_vector(self.ambient_dim)
        for ti, b in zip(t, basis):
            x = add_vec(x, scale(ti, b))
        return x

    def coroot(self, v: Vector) -> Vector:
        return scale(2 / norm_sq(v), v)


def add_vec(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def coroots(system: RootSystem) -> RootSystem:
    """The dual root system {2v/|v|^2 : v in R}; an involution."""
    return RootSystem.from_roots(
        (system.coroot(v) for v in system.roots), validate=False
    )


_FAMILIES = ("A", "B", "C", "D", "G2", "A1xA1")


def standard_root_system(family: str, rank: int | None = None) -> RootSystem:
    """Integer-embedded standard families A, B, C, D plus G2 and A1xA1.

    Accepts either ``standard_root_system("B", 2)`` or the compact form
    ``standard_root_system("B2")``.
    """
    fam = family.strip()
    if rank is None:
        if fam in ("G2", "A1xA1"):
            rank = 2
        else:
            fam, digits = fam[0], fam[1:]
            if not digits.isdigit():
                raise GeometryError(f"cannot parse family {family!r}")
            rank = int(digits)
    fam = fam if fam in ("G2", "A1xA1") else fam.upper()

    e = lambda i, n: tuple(Q(1) if j == i else Q(0) for j in range(n))
    roots: list[Vector] = []
    if fam == "A":
        if rank < 1:
            raise GeometryError("family A needs rank >= 1")
        n = rank + 1
        for i in range(n):
            for j in range(n):
                if i != j:
                    roots.append(sub(e(i, n), e(j, n)))
    elif fam == "B":
        if rank < 1:
            raise GeometryError("family B needs rank >= 1")
        n = rank
        for i in range(n):
            roots.append(e(i, n))
            roots.append(neg(e(i, n)))
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(add_vec(scale(si, e(i, n)), scale(sj, e(j, n))))
    elif fam == "C":
        if rank < 1:
            raise GeometryError("family C needs rank >= 1")
        n = rank
        for i in range(n):
            roots.append(scale(2, e(i, n)))
            roots.append(scale(-2, e(i, n)))
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(add_vec(scale(si, e(i, n)), scale(sj, e(j, n))))
    elif fam == "D":
        if rank < 2:
            raise GeometryError("family D needs rank >= 2")
        n = rank
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(add_vec(scale(si, e(i, n)), scale(sj, e(j, n))))
    elif fam == "G2":
        if rank != 2:
            raise GeometryError("G2 has fixed rank 2")
        n = 3
        for i in range(n):
            for j in range(n):
                if i != j:
                    roots.append(sub(e(i, n), e(j, n)))
        for i in range(3):
            j, k = [a for a in range(3) if a != i]
            long = sub(sub(scale(2, e(i, n)), e(j, n)), e(k, n))
            roots.append(long)
            roots.append(neg(long))
    elif fam == "A1xA1":
        if rank != 2:
            raise GeometryError("A1xA1 has fixed rank 2")
        roots = [e(0, 2), neg(e(0, 2)), e(1, 2), neg(e(1, 2))]
    else:
        raise GeometryError(f"unsupported family {family!r} (know {_FAMILIES})")
    return RootSystem.from_roots(roots, validate=True)


# ---------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True)
class WeylGroup:
    """Finite orthogonal group generated by the root reflections.

    Elements are stored as exact ambient matrices so they can act on
    arbitrary weight vectors later, not only on the roots.
    """

    elements: tuple[Matrix, ...]
    generators: tuple[Matrix, ...]
    root_system: RootSystem

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def determinants(self) -> tuple[Q, ...]:
        return tuple(determinant(m) for m in self.elements)

    def apply(self, element: Matrix, x: Vector) -> Vector:
        return mat_vec(element, x)


def weyl_group(system: RootSystem, cap: int = 10**6) -> WeylGroup:
    """Closure of the generating reflections; deterministic element order."""
    gens = []
    seen_gen = set()
    for v in system.positive_roots:
        m = reflection_matrix(v)
        if m not in seen_gen:
            seen_gen.add(m)
            gens.append(m)
    ident = identity_matrix(system.ambient_dim)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                p = mat_mul(g, e)
                if p not in elements:
                    elements.add(p)
                    nxt.append(p)
                    if len(elements) > cap:
                        raise WeylClosureCapError(
                            f"closure exceeded cap {cap}; input is not a finite reflection group"
                        )
        frontier = nxt
    return WeylGroup(
        elements=tuple(sorted(elements)),
        generators=tuple(gens),
        root_system=system,
    )


# ---------------------------------------------------------------------------
# Weyl chambers


@dataclass(frozen=True)
class Chamber:
    """Open cone cut out by strict sign constraints over the root hyperplanes."""

    normals: tuple[Vector, ...]
    signs: tuple[int, ...]

    def contains(self, x) -> bool:
        x = vector(x)
        for n, s in zip(self.normals, self.signs):
            v = dot(n, x)
            if v == 0 or (v > 0) != (s > 0):
                return False
        return True

    @property
    def is_dominant(self) -> bool:
        return all(s > 0 for s in self.signs)


def weyl_chambers(system: RootSystem, group: WeylGroup | None = None) -> list[Chamber]:
    """All Weyl chambers; exactly one per Weyl group element."""
    group = group or weyl_group(system)
    pos = system.positive_roots
    x0 = system.dominant_point
    chambers = {}
    for w in group.elements:
        xw = mat_vec(w, x0)
        signs = []
        for v in pos:
            d = dot(v, xw)
            if d == 0:
                raise GeometryError("chamber representative landed on a wall")
            signs.append(1 if d > 0 else -1)
        chambers[tuple(signs)] = Chamber(normals=pos, signs=tuple(signs))
    if len(chambers) != group.order:
        raise GeometryError(
            f"chamber count {len(chambers)} != Weyl group order {group.order}"
        )
    return [chambers[k] for k in sorted(chambers)]


def dominant_chamber(system: RootSystem) -> Chamber:
    pos = system.positive_roots
    return Chamber(normals=pos, signs=(1,) * len(pos))


def is_strictly_dominant(system: RootSystem, x: Vector) -> bool:
    return all(dot(v, x) > 0 for v in system.positive_roots)
