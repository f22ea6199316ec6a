"""Based root data with chosen character lattices, realized exactly.

Each irreducible type is seeded with its classical coordinate realization
(simple roots as exact rational vectors in an ambient Euclidean space); the
full root system is generated by reflection closure from the simple roots.
Character lattices X between the root and weight lattices are coordinatized by
a fixed basis, so roots and coroots are plain integer vectors and the pairing
between X and its dual is the dot product.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .intlinalg import IntMatrix, Lattice, Vec, solve_exact, vec_dot, vec_neg, vec_sub


class CapExceeded(RuntimeError):
    """An enumeration guardrail was hit before the computation finished."""


WEYL_CAP = 10 ** 7


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# Simple roots in the classical epsilon coordinates, one table per type.
def _epsilon_simple_roots(letter: str, rank: int) -> list[tuple[Fraction, ...]]:
    F = Fraction
    def e(i, m):
        return tuple(F(int(j == i)) for j in range(m))

    if letter == "A":
        if rank < 1:
            raise ValueError("type A needs rank >= 1")
        m = rank + 1
        return [vec_sub(e(i, m), e(i + 1, m)) for i in range(rank)]
    if letter == "B":
        if rank < 2:
            raise ValueError("type B needs rank >= 2")
        out = [vec_sub(e(i, rank), e(i + 1, rank)) for i in range(rank - 1)]
        out.append(e(rank - 1, rank))
        return out
    if letter == "C":
        if rank < 2:
            raise ValueError("type C needs rank >= 2")
        out = [vec_sub(e(i, rank), e(i + 1, rank)) for i in range(rank - 1)]
        out.append(tuple(2 * x for x in e(rank - 1, rank)))
        return out
    if letter == "D":
        if rank < 3:
            raise ValueError("type D needs rank >= 3")
        out = [vec_sub(e(i, rank), e(i + 1, rank)) for i in range(rank - 1)]
        out.append(tuple(x + y for x, y in zip(e(rank - 2, rank), e(rank - 1, rank))))
        return out
    if letter == "E":
        if rank not in (6, 7, 8):
            raise ValueError("type E needs rank 6, 7 or 8")
        half = F(1, 2)
        a1 = (half, -half, -half, -half, -half, -half, -half, half)
        roots8 = [a1,
                  vec_add8(e(0, 8), e(1, 8)),
                  vec_sub(e(1, 8), e(0, 8)),
                  vec_sub(e(2, 8), e(1, 8)),
                  vec_sub(e(3, 8), e(2, 8)),
                  vec_sub(e(4, 8), e(3, 8)),
                  vec_sub(e(5, 8), e(4, 8)),
                  vec_sub(e(6, 8), e(5, 8))]
        return roots8[:rank]
    if letter == "F":
        if rank != 4:
            raise ValueError("type F needs rank 4")
        half = F(1, 2)
        return [vec_sub(e(1, 4), e(2, 4)),
                vec_sub(e(2, 4), e(3, 4)),
                e(3, 4),
                (half, -half, -half, -half)]
    if letter == "G":
        if rank != 2:
            raise ValueError("type G needs rank 2")
        return [vec_sub(e(0, 3), e(1, 3)),
                (F(-2), F(1), F(1))]
    raise ValueError(f"unknown type {letter!r}")


def vec_add8(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _reflection_eps(x, alpha):
    c = 2 * _dot(x, alpha) / _dot(alpha, alpha)
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))


def _generate_roots_eps(simple):
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for alpha in simple:
                img = _reflection_eps(beta, alpha)
                if img not in roots:
                    roots.add(img)
                    nxt.append(img)
        frontier = nxt
    return roots


@dataclass(frozen=True)
class BasedRootDatum:
    """Root datum with a based root system and a fixed basis of X.

    Roots live in X-coordinates (integers), coroots in the dual coordinates,
    and pairing(chi, y) is the dot product.  `realization` maps X-coordinates
    to the classical ambient coordinates used to seed the construction, which
    also carries the Weyl-invariant inner product.
    """

    components: tuple[tuple[str, int], ...]
    isogeny: str
    rank: int
    realization: tuple[tuple[Fraction, ...], ...]  # ambient_dim x rank
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]          # aligned with roots
    simple_roots: tuple[Vec, ...]
    simple_coroots: tuple[Vec, ...]
    torus_coords: tuple[int, ...] = ()

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def coroot_of(self) -> dict:
        return dict(zip(self.roots, self.coroots))

    @cached_property
    def cartan_matrix(self) -> IntMatrix:
        k = len(self.simple_roots)
        return IntMatrix.from_rows(
            [[vec_dot(self.simple_roots[j], self.simple_coroots[i]) for j in range(k)]
             for i in range(k)], k)

    @cached_property
    def positive_roots(self) -> tuple[Vec, ...]:
        if not self.simple_roots:
            return ()
        rows = [[Fraction(self.simple_roots[j][i]) for j in range(len(self.simple_roots))]
                for i in range(self.rank)]
        pos = []
        for beta in self.roots:
            coeffs = solve_exact(rows, _frac_vec(beta))
            assert coeffs is not None
            if all(c >= 0 for c in coeffs):
                pos.append(beta)
        return tuple(pos)

    def pairing(self, chi, y):
        """Canonical pairing between X and its dual in the fixed bases."""
        if len(chi) != self.rank or len(y) != self.rank:
            raise ValueError("vector length mismatch")
        return _dot(chi, y)

    def to_epsilon(self, v) -> tuple[Fraction, ...]:
        return tuple(sum(Fraction(row[j]) * v[j] for j in range(self.rank))
                     for row in self.realization)

    def from_epsilon(self, vec) -> Vec:
        sol = solve_exact(self.realization, _frac_vec(vec))
        if sol is None:
            raise ValueError("vector is not in the span of the character lattice")
        if any(x.denominator != 1 for x in sol):
            raise ValueError("vector is not in the character lattice")
        return tuple(int(x) for x in sol)

    def invariant_form(self, v, w):
        """Weyl-invariant inner product, computed in the seed coordinates."""
        return _dot(self.to_epsilon(v), self.to_epsilon(w))

    def reflection(self, root: Vec) -> IntMatrix:
        if root not in self.coroot_of:
            raise ValueError("not a root")
        cor = self.coroot_of[root]
        n = self.rank
        return IntMatrix.from_rows(
            [[(1 if i == j else 0) - root[i] * cor[j] for j in range(n)] for i in range(n)], n)

    def simple_reflection(self, i: int) -> IntMatrix:
        return self.reflection(self.simple_roots[i])


def build_root_datum(letter: str, rank: int, isogeny: str = "simply_connected",
                     lattice_basis=None) -> BasedRootDatum:
    """Construct a based root datum of the given irreducible type.

    isogeny selects X: "simply_connected" (weight lattice), "adjoint" (root
    lattice), or "custom_lattice" with `lattice_basis` rows expressed in
    fundamental-weight coordinates (the lattice must contain all roots).
    """
    if letter == "torus":
        return torus(rank)
    simple_eps = _epsilon_simple_roots(letter, rank)
    ambient = len(simple_eps[0])
    cartan = [[2 * _dot(simple_eps[j], simple_eps[i]) // _dot(simple_eps[i], simple_eps[i])
               if (2 * _dot(simple_eps[j], simple_eps[i])) % _dot(simple_eps[i], simple_eps[i]) == 0
               else None
               for j in range(rank)] for i in range(rank)]
    for row in cartan:
        if any(x is None for x in row):
            raise AssertionError("seed realization is not crystallographic")

    # columns of E are the basis of X in ambient coordinates
    if isogeny == "adjoint":
        basis_eps = [list(col) for col in zip(*simple_eps)]  # columns alpha_j
    elif isogeny in ("simply_connected", "custom_lattice"):
        # fundamental weights: omega_i = sum_k (C^-1)[k][i] alpha_k
        cart_rows = [[Fraction(x) for x in row] for row in cartan]
        fw_cols = []
        for i in range(rank):
            rhs = [Fraction(int(j == i)) for j in range(rank)]
            coeffs = solve_exact(cart_rows, rhs)
            fw = tuple(sum(coeffs[k] * simple_eps[k][d] for k in range(rank))
                       for d in range(ambient))
            fw_cols.append(fw)
        basis_eps = [[fw_cols[j][d] for j in range(rank)] for d in range(ambient)]
        if isogeny == "custom_lattice":
            if lattice_basis is None:
                raise ValueError("custom_lattice requires lattice_basis rows")
            b = IntMatrix.from_rows(lattice_basis, rank)
            if b.rows != rank or b.det() == 0:
                raise ValueError("lattice_basis must be square and nonsingular")
            # new basis vectors (rows of b, in fundamental-weight coordinates)
            basis_eps = [[sum(Fraction(b.entries[i][k]) * fw_cols[k][d] for k in range(rank))
                          for i in range(rank)] for d in range(ambient)]
    else:
        raise ValueError(f"unknown isogeny {isogeny!r}")

    realization = tuple(tuple(Fraction(x) for x in row) for row in basis_eps)
    all_eps = sorted(_generate_roots_eps(tuple(tuple(v) for v in simple_eps)))

    def x_coords(vec_eps) -> Vec:
        sol = solve_exact(realization, vec_eps)
        if sol is None or any(c.denominator != 1 for c in sol):
            raise ValueError("chosen lattice does not contain the root lattice")
        return tuple(int(c) for c in sol)

    def covec_coords(vec_eps) -> Vec:
        out = []
        for j in range(rank):
            col = tuple(realization[d][j] for d in range(len(realization)))
            val = _dot(col, vec_eps)
            if val.denominator != 1:
                raise ValueError("coroot is not integral on the chosen lattice")
            out.append(int(val))
        return tuple(out)

    roots = []
    coroots = []
    for beta in all_eps:
        roots.append(x_coords(beta))
        norm = _dot(beta, beta)
        coroots.append(covec_coords(tuple(2 * x / norm for x in beta)))
    simple_x = tuple(x_coords(tuple(v)) for v in simple_eps)
    simple_cox = []
    for v in simple_eps:
        norm = _dot(v, v)
        simple_cox.append(covec_coords(tuple(2 * x / norm for x in v)))

    order = sorted(range(len(roots)), key=lambda i: roots[i])
    brd = BasedRootDatum(
        components=((letter, rank),),
        isogeny=isogeny,
        rank=rank,
        realization=realization,
        roots=tuple(roots[i] for i in order),
        coroots=tuple(coroots[i] for i in order),
        simple_roots=simple_x,
        simple_coroots=tuple(simple_cox),
    )
    _validate_datum(brd)
    return brd


def torus(rank: int) -> BasedRootDatum:
    """Root datum with empty root system (a torus of the given rank)."""
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank))
    return BasedRootDatum(
        components=(("torus", rank),) if rank else (),
        isogeny="torus",
        rank=rank,
        realization=ident,
        roots=(),
        coroots=(),
        simple_roots=(),
        simple_coroots=(),
        torus_coords=tuple(range(rank)),
    )


def direct_sum(a: BasedRootDatum, b: BasedRootDatum) -> BasedRootDatum:
    """Product root datum on the concatenated coordinates."""
    n, m = a.rank, b.rank
    def padl(v):
        return tuple(v) + (0,) * m
    def padr(v):
        return (0,) * n + tuple(v)
    amb_a = len(a.realization)
    amb_b = len(b.realization)
    zero_a = tuple(Fraction(0) for _ in range(m))
    zero_b = tuple(Fraction(0) for _ in range(n))
    realization = tuple(tuple(row) + zero_a for row in a.realization) + \
        tuple(zero_b + tuple(row) for row in b.realization)
    roots = tuple(padl(r) for r in a.roots) + tuple(padr(r) for r in b.roots)
    coroots = tuple(padl(r) for r in a.coroots) + tuple(padr(r) for r in b.coroots)
    order = sorted(range(len(roots)), key=lambda i: roots[i])
    return BasedRootDatum(
        components=a.components + b.components,
        isogeny=f"{a.isogeny}+{b.isogeny}",
        rank=n + m,
        realization=realization,
        roots=tuple(roots[i] for i in order),
        coroots=tuple(coroots[i] for i in order),
        simple_roots=tuple(padl(r) for r in a.simple_roots) + tuple(padr(r) for r in b.simple_roots),
        simple_coroots=tuple(padl(r) for r in a.simple_coroots) + tuple(padr(r) for r in b.simple_coroots),
        torus_coords=a.torus_coords + tuple(n + i for i in b.torus_coords),
    )


def _validate_datum(brd: BasedRootDatum):
    for beta, cov in zip(brd.roots, brd.coroots):
        if brd.pairing(beta, cov) != 2:
            raise AssertionError("pairing of a root with its coroot is not 2")
        if vec_neg(beta) not in brd.root_set:
            raise AssertionError("root system is not symmetric")


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element as a matrix on X with a reduced word in the simple
    reflections (indices into simple_roots)."""

    matrix: IntMatrix
    word: tuple[int, ...]


def weyl_group(brd: BasedRootDatum, cap: int = WEYL_CAP) -> tuple[WeylElement, ...]:
    """Enumerate the Weyl group by breadth-first closure over simple
    reflections; words are reduced and the ordering is deterministic."""
    gens = [brd.simple_reflection(i) for i in range(len(brd.simple_roots))]
    ident = IntMatrix.identity(brd.rank)
    seen = {ident: ()}
    out = [WeylElement(ident, ())]
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            base = seen[m]
            for i, s in enumerate(gens):
                prod = m @ s
                if prod not in seen:
                    seen[prod] = base + (i,)
                    nxt.append(prod)
                    out.append(WeylElement(prod, base + (i,)))
                    if len(out) > cap:
                        raise CapExceeded(f"Weyl group enumeration exceeded cap {cap}")
        frontier = nxt
    return tuple(out)


@dataclass(frozen=True)
class BRDAutomorphism:
    """Automorphism of a based root datum: a unimodular matrix on X together
    with the permutations it induces on the simple roots and on all roots."""

    matrix: IntMatrix
    s_perm: tuple[int, ...]
    r_perm: tuple[int, ...]

    def compose(self, other: "BRDAutomorphism") -> "BRDAutomorphism":
        return BRDAutomorphism(
            matrix=self.matrix @ other.matrix,
            s_perm=tuple(self.s_perm[j] for j in other.s_perm),
            r_perm=tuple(self.r_perm[j] for j in other.r_perm),
        )


def identity_automorphism(brd: BasedRootDatum) -> BRDAutomorphism:
    return BRDAutomorphism(IntMatrix.identity(brd.rank),
                           tuple(range(len(brd.simple_roots))),
                           tuple(range(len(brd.roots))))


def as_brd_automorphism(brd: BasedRootDatum, m: IntMatrix) -> BRDAutomorphism | None:
    """Interpret m as an automorphism of the based root datum, or None.

    Requires: m unimodular, m(R) = R, m(S) = S, and compatibility with the
    root/coroot bijection (the dual inverse-transpose action maps coroots to
    the matching coroots, which also preserves the pairing).
    """
    if m.rows != brd.rank or m.cols != brd.rank or not m.is_unimodular():
        return None
    inv_t = m.inverse_unimodular().transpose()
    index = {r: i for i, r in enumerate(brd.roots)}
    r_perm = []
    for beta, cov in zip(brd.roots, brd.coroots):
        img = m.apply(beta)
        if img not in index:
            return None
        if inv_t.apply(cov) != brd.coroots[index[img]]:
            return None
        r_perm.append(index[img])
    s_perm = []
    s_index = {r: i for i, r in enumerate(brd.simple_roots)}
    for alpha in brd.simple_roots:
        img = m.apply(alpha)
        if img not in s_index:
            return None
        s_perm.append(s_index[img])
    return BRDAutomorphism(m, tuple(s_perm), tuple(r_perm))


def is_brd_automorphism(brd: BasedRootDatum, m: IntMatrix) -> bool:
    return as_brd_automorphism(brd, m) is not None


def lift_s_permutation(brd: BasedRootDatum, perm) -> BRDAutomorphism | None:
    """Extend a Cartan-preserving permutation of the simple roots to X.

    The lift acts trivially on any central torus block.  Returns None when the
    permutation does not preserve the Cartan matrix or the induced rational
    map does not stabilize the chosen lattice X.
    """
    k = len(brd.simple_roots)
    perm = tuple(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError("not a permutation of the simple roots")
    cartan = brd.cartan_matrix.entries
    for i in range(k):
        for j in range(k):
            if cartan[perm[i]][perm[j]] != cartan[i][j]:
                return None
    semis = [i for i in range(brd.rank) if i not in set(brd.torus_coords)]
    if len(semis) != k and k > 0:
        return None  # lattice does not split off the torus block
    n = brd.rank
    rows = [[Fraction(0)] * n for _ in range(n)]
    for t in brd.torus_coords:
        rows[t][t] = Fraction(1)
    if k:
        # solve M restricted to the semisimple coordinates from root images
        sub = [[Fraction(brd.simple_roots[j][i]) for j in range(k)] for i in semis]
        img = [[Fraction(brd.simple_roots[perm[j]][i]) for j in range(k)] for i in semis]
        # M_sub @ sub == img, solved column-by-column on the transposed system
        for ri, i in enumerate(semis):
            coeffs = solve_exact([list(col) for col in zip(*sub)], [img[ri][j] for j in range(k)])
            if coeffs is None:
                return None
            for rj, j in enumerate(semis):
                rows[i][j] = coeffs[rj]
    if any(x.denominator != 1 for row in rows for x in row):
        return None
    m = IntMatrix.from_rows([[int(x) for x in row] for row in rows], n)
    return as_brd_automorphism(brd, m)


def dynkin_automorphisms(brd: BasedRootDatum):
    """All Cartan-preserving permutations of S, lifted to X when possible.

    Returns (automorphisms, skipped) where skipped lists the permutations that
    do not stabilize the chosen lattice, with a reason string.
    """
    from itertools import permutations

    k = len(brd.simple_roots)
    autos = []
    skipped = []
    for perm in permutations(range(k)):
        cartan = brd.cartan_matrix.entries
        if any(cartan[perm[i]][perm[j]] != cartan[i][j] for i in range(k) for j in range(k)):
            continue
        lifted = lift_s_permutation(brd, perm)
        if lifted is None:
            skipped.append((perm, "permutation does not stabilize the chosen lattice"))
        else:
            autos.append(lifted)
    return tuple(autos), tuple(skipped)
