"""Exact rational polyhedral cones, colored cones, and colored fans.

Cones are kept in a canonical double description: extreme rays (primitive,
orthogonal to the lineality space), a Hermite basis of the lineality lattice,
facet inequalities (primitive, orthogonal to the equation space), and a
Hermite basis of the equation lattice.  Structural equality of two cones is
then the same as equality of the point sets they define.

Conversion between descriptions enumerates candidate active sets, which is
exact and entirely adequate for the small dimensions this package works in.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd, lcm

from .intlinalg import (
    IntMatrix,
    Lattice,
    kernel_lattice,
    solve_exact,
    vec_dot,
    vec_is_zero,
    vec_neg,
)
from .ratlp import feasible
from .staraction import dual_action_on_V


class NotStrictlyConvex(ValueError):
    """A construction needed a strictly convex cone but got lineality."""


def _qvec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _primitive(v) -> tuple[int, ...] | None:
    """Scale a rational vector to a primitive integer vector, same direction."""
    fv = _qvec(v)
    if all(x == 0 for x in fv):
        return None
    mult = lcm(*(x.denominator for x in fv))
    ints = [int(x * mult) for x in fv]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)


def _project_off(v, lat: Lattice):
    """Orthogonal projection of v off the span of the lattice rows."""
    if lat.rank == 0:
        return _qvec(v)
    rows = lat.basis.entries
    gram = [[vec_dot(a, b) for b in rows] for a in rows]
    coeffs = solve_exact(gram, [vec_dot(a, v) for a in rows])
    out = list(_qvec(v))
    for lam, row in zip(coeffs, rows):
        for j, x in enumerate(row):
            out[j] -= lam * x
    return tuple(out)


def _hcone_extreme_rays(constraints, dim: int) -> tuple[tuple, Lattice]:
    """Extreme rays, modulo lineality, of {x : c.x >= 0 for all c}.

    Returns (rays, lineality): primitive integer ray representatives chosen
    orthogonal to the lineality space, and the saturated lineality lattice
    (the kernel of the constraint matrix).  A candidate direction appears on
    an active set of constraint rank dim - lineality - 1, so all such subsets
    are enumerated.
    """
    rows = [c for c in constraints if not vec_is_zero(c)]
    if not rows:
        return (), Lattice.full(dim)
    cmat = IntMatrix.from_rows(rows, cols=dim)
    lin = kernel_lattice(cmat)
    t = dim - lin.rank - 1
    if t < 0:
        return (), lin
    rays = set()
    for subset in combinations(range(len(rows)), t):
        sub = IntMatrix.from_rows([rows[i] for i in subset], cols=dim)
        ker = kernel_lattice(sub)
        if ker.rank != lin.rank + 1:
            continue
        v = next((b for b in ker.basis.entries if lin.coordinates(b) is None), None)
        if v is None:
            continue
        ray = _primitive(_project_off(v, lin))
        if ray is None:
            continue
        for cand in (ray, vec_neg(ray)):
            if all(vec_dot(c, cand) >= 0 for c in rows):
                rays.add(cand)
                break
    return tuple(sorted(rays)), lin


@dataclass(frozen=True)
class RationalCone:
    """Convex rational polyhedral cone in canonical double description."""

    ambient_dim: int
    rays: tuple
    lineality: tuple
    inequalities: tuple
    equations: tuple

    @property
    def is_strictly_convex(self) -> bool:
        return not self.lineality

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_origin(self) -> bool:
        return not self.rays and not self.lineality

    def generators(self) -> tuple:
        return self.rays + self.lineality + tuple(vec_neg(r) for r in self.lineality)

    def contains(self, v) -> bool:
        fv = _qvec(v)
        if len(fv) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return (all(vec_dot(e, fv) == 0 for e in self.equations)
                and all(vec_dot(c, fv) >= 0 for c in self.inequalities))

    def contains_cone(self, other: "RationalCone") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return all(self.contains(g) for g in other.generators())

    def relative_interior_point(self):
        """Sum of the extreme rays: a canonical relative interior point."""
        out = [Fraction(0)] * self.ambient_dim
        for r in self.rays:
            for j, x in enumerate(r):
                out[j] += x
        return tuple(out)

    def image(self, matrix: IntMatrix) -> "RationalCone":
        """Image cone under a linear map given by a matrix acting on columns."""
        if matrix.cols != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return cone_from_generators(matrix.rows,
                                    [matrix.apply(g) for g in self.generators()])


def cone_from_generators(dim: int, generators) -> RationalCone:
    """Canonical cone spanned by rational generators (possibly redundant)."""
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    prim = []
    for g in generators:
        if len(g) != dim:
            raise ValueError("dimension mismatch")
        p = _primitive(g)
        if p is not None:
            prim.append(p)
    # facets of the cone are the extreme rays of its polar dual, whose
    # lineality is the orthogonal complement of the cone's span
    ineqs, perp = _hcone_extreme_rays(prim, dim)
    constraints = list(ineqs)
    for e in perp.basis.entries:
        constraints += [e, vec_neg(e)]
    rays, lin = _hcone_extreme_rays(constraints, dim)
    return RationalCone(dim, rays, lin.basis.entries,
                        tuple(sorted(ineqs)), perp.basis.entries)


def cone_from_inequalities(dim: int, inequalities, equations=()) -> RationalCone:
    """Canonical cone {x : c.x >= 0, e.x = 0}; redundant rows are fine."""
    constraints = []
    for c in inequalities:
        if len(c) != dim:
            raise ValueError("dimension mismatch")
        p = _primitive(c)
        if p is not None:
            constraints.append(p)
    for e in equations:
        if len(e) != dim:
            raise ValueError("dimension mismatch")
        p = _primitive(e)
        if p is not None:
            constraints += [p, vec_neg(p)]
    rays, lin = _hcone_extreme_rays(constraints, dim)
    gens = list(rays)
    for b in lin.basis.entries:
        gens += [b, vec_neg(b)]
    return cone_from_generators(dim, gens)


def cones_equal(a: RationalCone, b: RationalCone) -> bool:
    """Mutual containment; agrees with structural equality of canonical forms."""
    return a.contains_cone(b) and b.contains_cone(a)


@lru_cache(maxsize=65536)
def _cone_from_ray_tuple(dim: int, rays: tuple) -> RationalCone:
    # face enumeration rebuilds the same ray subsets across nested faces;
    # RationalCone is immutable, so sharing the canonical object is safe
    return cone_from_generators(dim, rays)


def meet_relative_interiors(strict, weak=()):
    """A point interior to every cone of `strict` and inside every cone of
    `weak`, or None.  Exact rational feasibility.

    c.x > 0 for facets is homogenized to c.x >= 1: for a homogeneous system
    a solution can be scaled until every strict value reaches 1.  Equations
    are eliminated first by restricting to the kernel of their stacked rows,
    which keeps the linear program at the dimension actually in play.
    """
    cones = list(strict) + list(weak)
    if not cones:
        return ()
    dim = cones[0].ambient_dim
    if any(c.ambient_dim != dim for c in cones):
        raise ValueError("dimension mismatch")
    eq_rows = []
    needed = {}
    for cone in strict:
        eq_rows += list(cone.equations)
        for c in cone.inequalities:
            needed[c] = 1
    for cone in weak:
        eq_rows += list(cone.equations)
        for c in cone.inequalities:
            needed.setdefault(c, 0)
    if not eq_rows:
        sol = feasible(list(needed), list(needed.values()))
        return sol if sol is None or needed else (Fraction(0),) * dim
    basis = kernel_lattice(IntMatrix.from_rows(eq_rows, cols=dim)).basis.entries
    rows, rhs = [], []
    for c, r in needed.items():
        row = tuple(vec_dot(c, b) for b in basis)
        if vec_is_zero(row):
            if r > 0:
                return None
            continue
        rows.append(row)
        rhs.append(r)
    sol = feasible(rows, rhs)
    if sol is None:
        return None
    out = [Fraction(0)] * dim
    for y, b in zip(sol, basis):
        for j, x in enumerate(b):
            out[j] += y * x
    return tuple(out)


@dataclass(frozen=True)
class ColorRecord:
    """Image data of one color: its valuation vector and its simple-root set."""

    rho: tuple
    sigma: frozenset

    def __post_init__(self):
        object.__setattr__(self, "rho", _qvec(self.rho))
        object.__setattr__(self, "sigma", frozenset(int(i) for i in self.sigma))

    def key(self):
        return (self.rho, tuple(sorted(self.sigma)))


@dataclass(frozen=True)
class ColoredCone:
    """Strictly convex cone with a set of colors mapping into it."""

    cone: RationalCone
    colors: frozenset

    def __post_init__(self):
        if not self.cone.is_strictly_convex:
            raise NotStrictlyConvex("colored cones must be strictly convex")
        for rec in self.colors:
            if all(x == 0 for x in rec.rho):
                raise ValueError("colors must have nonzero valuation image")
            if len(rec.rho) != self.cone.ambient_dim:
                raise ValueError("color dimension mismatch")
            if not self.cone.contains(rec.rho):
                raise ValueError("color image outside the cone")

    def key(self):
        c = self.cone
        return (c.rays, c.lineality, c.equations, c.inequalities,
                tuple(sorted(r.key() for r in self.colors)))


def colored_cone(dim: int, generators, colors) -> ColoredCone:
    """Build the colored cone spanned by the color images and extra generators."""
    recs = frozenset(colors)
    gens = [r.rho for r in recs] + [tuple(g) for g in generators]
    return ColoredCone(cone_from_generators(dim, gens), recs)


def faces(cc: ColoredCone) -> frozenset:
    """All faces of a colored cone, each with its induced color set.

    A face is the cone cut by some subset of facet inequalities turned into
    equations; its colors are those whose image lies on the face.  Since the
    cone is strictly convex, each face is spanned by the extreme rays lying
    on it, so the face lattice is enumerated as the ray subsets closed under
    the ray-facet incidence relation (far cheaper than one double-description
    conversion per inequality subset).
    """
    base = cc.cone
    nrays = len(base.rays)
    incidence = [sum(1 << i for i, r in enumerate(base.rays)
                     if vec_dot(c, r) == 0)
                 for c in base.inequalities]
    full = (1 << nrays) - 1
    closed = set()
    for pick in range(1 << nrays):
        span = full
        for mask in incidence:
            if pick & ~mask == 0:
                span &= mask
        closed.add(span)
    out = []
    for span in sorted(closed):
        if span == full:
            face = base
        else:
            face = _cone_from_ray_tuple(
                base.ambient_dim,
                tuple(r for i, r in enumerate(base.rays) if span >> i & 1))
        cols = frozenset(r for r in cc.colors if face.contains(r.rho))
        out.append(ColoredCone(face, cols))
    return frozenset(out)


@dataclass(frozen=True)
class ColoredFan:
    """Nonempty finite set of colored cones, kept in a canonical order."""

    cones: tuple

    @classmethod
    def build(cls, cones) -> "ColoredFan":
        dedup = {cc.key(): cc for cc in cones}
        if not dedup:
            raise ValueError("a colored fan must be nonempty")
        dims = {cc.cone.ambient_dim for cc in dedup.values()}
        if len(dims) != 1:
            raise ValueError("all cones must share one ambient dimension")
        return cls(tuple(dedup[k] for k in sorted(dedup)))

    @property
    def ambient_dim(self) -> int:
        return self.cones[0].cone.ambient_dim

    def __contains__(self, cc: ColoredCone) -> bool:
        return any(cc == other for other in self.cones)


@dataclass(frozen=True)
class FanVerdict:
    """Per-axiom outcome of the colored fan validity check."""

    interior_ok: bool
    closure_ok: bool
    separation_ok: bool
    problems: tuple

    @property
    def ok(self) -> bool:
        return self.interior_ok and self.closure_ok and self.separation_ok


def _relint_contains(cone: RationalCone, p) -> bool:
    # relative interior membership: equations hold, every facet is strict
    return (all(vec_dot(e, p) == 0 for e in cone.equations)
            and all(vec_dot(c, p) > 0 for c in cone.inequalities))


def _relint_meets(cone: RationalCone, v_cone: RationalCone) -> bool:
    # the canonical interior point often certifies cheaply; LP decides else
    if cone.is_strictly_convex and v_cone.contains(cone.relative_interior_point()):
        return True
    return meet_relative_interiors([cone], [v_cone]) is not None


def _relints_overlap(a: RationalCone, b: RationalCone,
                     v_cone: RationalCone) -> bool:
    for one, other in ((a, b), (b, a)):
        if one.is_strictly_convex:
            p = one.relative_interior_point()
            if _relint_contains(other, p) and v_cone.contains(p):
                return True
    return meet_relative_interiors([a, b], [v_cone]) is not None


def is_valid_fan(fan: ColoredFan, v_cone: RationalCone) -> FanVerdict:
    """Check the three colored fan axioms against a valuation cone.

    (i) each cone's relative interior meets the valuation cone; (ii) each
    face that meets the valuation cone (with its induced colors) belongs to
    the fan; (iii) no point of the valuation cone is interior to two cones.
    """
    if v_cone.ambient_dim != fan.ambient_dim:
        raise ValueError("fan and valuation cone dimensions differ")
    problems = []
    interior_ok = True
    for k, cc in enumerate(fan.cones):
        if not _relint_meets(cc.cone, v_cone):
            interior_ok = False
            problems.append(f"cone {k}: relative interior misses the valuation cone")
    closure_ok = True
    for k, cc in enumerate(fan.cones):
        for face in sorted(faces(cc), key=ColoredCone.key):
            if not _relint_meets(face.cone, v_cone):
                continue
            if face not in fan:
                closure_ok = False
                problems.append(f"cone {k}: face with rays {face.cone.rays} "
                                "missing from the fan")
    separation_ok = True
    for i, j in combinations(range(len(fan.cones)), 2):
        a, b = fan.cones[i].cone, fan.cones[j].cone
        if _relints_overlap(a, b, v_cone):
            separation_ok = False
            problems.append(f"cones {i} and {j}: relative interiors overlap "
                            "inside the valuation cone")
    return FanVerdict(interior_ok, closure_ok, separation_ok, tuple(problems))


def wonderful_fan(v_cone: RationalCone) -> ColoredFan:
    """The colorless fan of all faces of a strictly convex valuation cone."""
    if not v_cone.is_strictly_convex:
        raise NotStrictlyConvex(
            "the valuation cone has nontrivial lineality, so no fan has it "
            "as a maximal strictly convex cone")
    return ColoredFan.build(faces(ColoredCone(v_cone, frozenset())))


def is_wonderful(fan: ColoredFan, v_cone: RationalCone) -> bool:
    """One maximal cone, equal to the valuation cone, and no colors anywhere."""
    if any(cc.colors for cc in fan.cones):
        return False
    maximal = [cc for cc in fan.cones
               if not any(other is not cc and other.cone.contains_cone(cc.cone)
                          and other.cone != cc.cone for other in fan.cones)]
    return len(maximal) == 1 and maximal[0].cone == v_cone


def transform_colored_cone(cc: ColoredCone, matrix: IntMatrix, s_perm) -> ColoredCone:
    """Apply a lattice automorphism of V plus a simple-root permutation."""
    new_cone = cc.cone.image(matrix)
    new_colors = frozenset(
        ColorRecord(matrix.apply(r.rho), frozenset(s_perm[i] for i in r.sigma))
        for r in cc.colors)
    return ColoredCone(new_cone, new_colors)


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the fan stability check under a finite action."""

    stable: bool
    violating_generator: str | None
    violating_cone: ColoredCone | None


def is_gamma_stable(fan: ColoredFan, action, weight_lattice) -> StabilityVerdict:
    """Does every action generator map every fan cone onto a fan cone?

    The action is transported to V through the inverse-transpose of its
    restriction to the weight lattice; colors move by (matrix on V,
    permutation of simple roots).  Generators suffice: the moved-fan
    condition is closed under composition and inverses.
    """
    duals = dual_action_on_V(action, weight_lattice)
    index = {el.matrix.entries: k for k, el in enumerate(action.elements)}
    for name, gen in zip(action.generator_names, action.generators):
        dmat = duals[index[gen.matrix.entries]]
        for cc in fan.cones:
            if transform_colored_cone(cc, dmat, gen.s_perm) not in fan:
                return StabilityVerdict(False, name, cc)
    return StabilityVerdict(True, None, None)
