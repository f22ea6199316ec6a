"""Weyl group computations: orbits, orthogonal root quadruples, conjugacy.

Orbits are closed by breadth-first search over simple reflections on exact
rational vectors.  Conjugacy of root subsets is decided by scanning the fully
enumerated Weyl group in its canonical order, so returned witnesses have
minimal word length.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .intlinalg import vec_dot, vec_neg
from .rootdata import BasedRootDatum, CapExceeded, WeylElement, weyl_group

ORBIT_CAP = 10 ** 6


@dataclass(frozen=True)
class RootSubset:
    """A subset of the roots of a fixed based root datum."""

    brd: BasedRootDatum
    roots: frozenset

    def __post_init__(self):
        bad = [r for r in self.roots if r not in self.brd.root_set]
        if bad:
            raise ValueError(f"not roots of the datum: {sorted(bad)}")

    def sorted_roots(self):
        return tuple(sorted(self.roots))

    def is_negation_closed(self) -> bool:
        return all(vec_neg(r) in self.roots for r in self.roots)


def root_subset(brd: BasedRootDatum, vectors) -> RootSubset:
    return RootSubset(brd, frozenset(tuple(int(x) for x in v) for v in vectors))


def weyl_orbit(brd: BasedRootDatum, v, cap: int = ORBIT_CAP) -> frozenset:
    """Orbit of a rational vector (X-coordinates) under the Weyl group."""
    start = tuple(Fraction(x) for x in v)
    if len(start) != brd.rank:
        raise ValueError("vector length mismatch")
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for alpha, cov in zip(brd.simple_roots, brd.simple_coroots):
                c = vec_dot(w, cov)
                img = tuple(x - c * a for x, a in zip(w, alpha))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > cap:
                        raise CapExceeded(f"orbit exceeded cap {cap}")
        frontier = nxt
    return frozenset(seen)


def orthogonal_quadruples(brd: BasedRootDatum) -> tuple[RootSubset, ...]:
    """Negation-closed sets {±β₁..±β₄} of pairwise orthogonal roots.

    Defined for type D₄ only (rank-4 orthogonality patterns of its positive
    system); found by exhaustive search over positive-root quadruples using
    the invariant inner product.
    """
    if brd.components != (("D", 4),):
        raise ValueError("orthogonal quadruples are implemented for irreducible D4")
    pos = brd.positive_roots
    eps = {beta: brd.to_epsilon(beta) for beta in pos}
    found = set()
    for quad in combinations(pos, 4):
        ok = all(sum(a * b for a, b in zip(eps[x], eps[y])) == 0
                 for x, y in combinations(quad, 2))
        if ok:
            closed = frozenset(quad) | frozenset(vec_neg(b) for b in quad)
            found.add(closed)
    return tuple(RootSubset(brd, s) for s in sorted(found, key=lambda s: sorted(s)))


def are_weyl_conjugate(brd: BasedRootDatum, a: RootSubset, b: RootSubset,
                       cap: int = 10 ** 7) -> WeylElement | None:
    """First Weyl element (in canonical enumeration order) mapping a to b.

    Returns None when the subsets are not conjugate.  The witness word is
    reduced because enumeration is breadth-first.
    """
    if a.brd != brd or b.brd != brd:
        raise ValueError("subsets belong to a different root datum")
    target = b.roots
    if len(a.roots) != len(target):
        return None
    for w in weyl_group(brd, cap):
        if frozenset(w.matrix.apply(r) for r in a.roots) == target:
            return w
    return None
