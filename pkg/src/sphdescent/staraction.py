"""Finite automorphism groups acting on a based root datum.

A Galois group acts on a based root datum through a homomorphism to its
(finite, for semisimple data) automorphism group.  We represent the action by
its image: a named generating set together with the full closure.  From the
closure we derive induced actions on stable sublattices, on the dual of a
stable lattice, and on subsets of the simple roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .intlinalg import IntMatrix, Lattice, fixed_sublattice
from .rootdata import (
    BasedRootDatum,
    BRDAutomorphism,
    as_brd_automorphism,
    identity_automorphism,
    lift_s_permutation,
)

CLOSURE_CAP = 10 ** 4


class ClosureCapExceeded(RuntimeError):
    """The generated automorphism group grew past the closure cap."""


@dataclass(frozen=True)
class GaloisAction:
    """A finite subgroup of Aut(BRD) with named generators.

    elements[0] is the identity; element_words[k] is a word in generator
    names evaluating (left to right) to elements[k].
    """

    brd: BasedRootDatum
    generator_names: tuple[str, ...]
    generators: tuple[BRDAutomorphism, ...]
    elements: tuple[BRDAutomorphism, ...]
    element_words: tuple[tuple[str, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def label(self, k: int) -> str:
        return "*".join(self.element_words[k]) or "e"

    @cached_property
    def fixed_lattice(self) -> Lattice:
        """Sublattice of the character lattice fixed by every element."""
        return fixed_sublattice(self.brd.rank, [g.matrix for g in self.generators])


def _coerce_generator(brd: BasedRootDatum, gen) -> BRDAutomorphism:
    if isinstance(gen, BRDAutomorphism):
        out = as_brd_automorphism(brd, gen.matrix)
        if out is None:
            raise ValueError("generator is not an automorphism of this datum")
        return out
    if isinstance(gen, IntMatrix):
        out = as_brd_automorphism(brd, gen)
        if out is None:
            raise ValueError("matrix generator is not a based root datum automorphism")
        return out
    perm = tuple(int(i) for i in gen)
    out = lift_s_permutation(brd, perm)
    if out is None:
        raise ValueError(f"simple root permutation {perm} does not lift to the datum")
    return out


def build_action(brd: BasedRootDatum, generators, names=None,
                 cap: int = CLOSURE_CAP) -> GaloisAction:
    """Validate generators and close them into a finite group.

    Each generator may be a BRDAutomorphism, an IntMatrix, or a permutation
    of simple root indices (lifted as a diagram automorphism).  An empty
    generator list yields the trivial action.
    """
    gens = tuple(_coerce_generator(brd, g) for g in generators)
    if names is None:
        names = tuple(f"g{i}" for i in range(len(gens)))
    else:
        names = tuple(names)
        if len(names) != len(gens):
            raise ValueError("one name per generator required")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")

    ident = identity_automorphism(brd)
    elements = [ident]
    words = [()]
    seen = {ident.matrix.entries: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            for name, g in zip(names, gens):
                prod = elements[k].compose(g)
                if prod.matrix.entries in seen:
                    continue
                if len(elements) >= cap:
                    raise ClosureCapExceeded(
                        f"closure exceeds {cap} elements; the action must factor "
                        "through a finite group (for a torus factor, pick "
                        "generators of finite order)")
                seen[prod.matrix.entries] = len(elements)
                nxt.append(len(elements))
                elements.append(prod)
                words.append(words[k] + (name,))
        frontier = nxt
    return GaloisAction(brd, names, gens, tuple(elements), tuple(words))


@dataclass(frozen=True)
class InducedAction:
    """Result of restricting a GaloisAction to a sublattice.

    When every closure element stabilizes the lattice, matrices[k] is the
    restriction of elements[k] written in the lattice's canonical basis.
    Otherwise matrices is None and violator labels the first element moving
    the lattice.
    """

    matrices: tuple[IntMatrix, ...] | None
    violator: str | None

    @property
    def present(self) -> bool:
        return self.matrices is not None


def induced_action_on_sublattice(action: GaloisAction, lattice: Lattice) -> InducedAction:
    """Restrict every closure element to a sublattice, if stable."""
    if lattice.ambient_rank != action.brd.rank:
        raise ValueError("lattice does not live in the character lattice")
    n = lattice.rank
    mats = []
    for k, el in enumerate(action.elements):
        cols = []
        for b in lattice.basis.entries:
            coords = lattice.coordinates(el.matrix.apply(b))
            if coords is None:
                return InducedAction(None, action.label(k))
            cols.append(coords)
        mats.append(IntMatrix.from_rows(
            [[cols[i][j] for i in range(n)] for j in range(n)], cols=n))
    return InducedAction(tuple(mats), None)


def dual_action_on_V(action: GaloisAction, weight_lattice: Lattice) -> tuple[IntMatrix, ...]:
    """Action on the dual of a stable lattice, in the dual basis.

    If an element acts on the lattice by N, it acts on linear functionals by
    the inverse transpose of N, so that the evaluation pairing is preserved.
    """
    induced = induced_action_on_sublattice(action, weight_lattice)
    if not induced.present:
        raise ValueError(f"action does not stabilize the lattice: "
                         f"element {induced.violator} moves it")
    return tuple(m.inverse_unimodular().transpose() for m in induced.matrices)


def action_on_simple_subset(action: GaloisAction, subset, element: BRDAutomorphism) -> frozenset:
    """Image of a set of simple root indices under one closure element."""
    nsimple = len(action.brd.simple_roots)
    idx = frozenset(int(i) for i in subset)
    if any(i < 0 or i >= nsimple for i in idx):
        raise ValueError("subset members must index the simple roots")
    return frozenset(element.s_perm[i] for i in idx)


def stabilizes_simple_subset(action: GaloisAction, subset) -> bool:
    """True iff every closure element maps the subset onto itself."""
    idx = frozenset(int(i) for i in subset)
    return all(action_on_simple_subset(action, idx, el) == idx
               for el in action.elements)
