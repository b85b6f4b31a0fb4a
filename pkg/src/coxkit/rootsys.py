"""Finite root systems, Weyl groups, diagram automorphisms, twisted Coxeter elements.

Roots are stored as integer coordinate vectors in the simple-root basis, so all
comparisons and reflections are exact integer arithmetic.  Positivity of a root
is the sign of its first nonzero coordinate (for genuine roots all coordinates
share a sign).  Reducible systems are disjoint unions with block Cartan
matrices; the ambient cocharacter lattice may be larger than the coroot
lattice (e.g. a rank-1 system inside a 2-dimensional lattice).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[int, ...]

SERIES = "ABCDEFG"

_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


class RootSystemError(ValueError):
    pass


def _cartan_block(series: str, n: int) -> list[list[int]]:
    """Cartan matrix of one irreducible component, Bourbaki numbering."""
    a = [[2 * (i == j) for j in range(n)] for i in range(n)]

    def join(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if series in "ABC":
        for i in range(n - 1):
            join(i, i + 1)
        if series == "B" and n >= 2:
            # alpha_n short: <alpha_n, alpha_{n-1}^vee> = -1, <alpha_{n-1}, alpha_n^vee> = -2
            join(n - 2, n - 1, -2, -1)
        if series == "C" and n >= 2:
            join(n - 2, n - 1, -1, -2)
    elif series == "D":
        for i in range(n - 2):
            join(i, i + 1)
        join(n - 3, n - 1)
    elif series == "E":
        # chain 1-3-4-5-6(-7-8), node 2 attached to 4
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for i, j in zip(chain, chain[1:]):
            join(i, j)
        join(1, 3)
    elif series == "F":
        join(0, 1)
        join(1, 2, -2, -1)
        join(2, 3)
    elif series == "G":
        join(0, 1, -1, -3)
    return a


def _parse_descriptor(descriptor: str) -> list[tuple[str, int]]:
    parts = [p.strip() for p in descriptor.replace("+", "x").split("x") if p.strip()]
    if not parts:
        raise RootSystemError(f"empty type descriptor {descriptor!r}")
    comps = []
    for p in parts:
        series, rank = p[0].upper(), p[1:]
        if series not in SERIES or not rank.isdigit():
            raise RootSystemError(f"bad component {p!r} in {descriptor!r}")
        n = int(rank)
        if not _VALID_RANKS[series](n):
            raise RootSystemError(f"invalid rank {n} for series {series}")
        comps.append((series, n))
    return comps


@dataclass(frozen=True)
class RootDatum:
    """A root system with a chosen positive system and an ambient cocharacter lattice.

    ``roots`` lists positive roots first, then their negatives in the same
    order, so root index ``i + n_pos`` is the negative of index ``i``.
    ``coroots[i]`` is the coroot of ``roots[i]`` in the simple-coroot basis.
    ``coweight_embedding`` maps simple coroots into the ambient lattice Z^m.
    """

    type_name: str
    cartan: tuple[Vec, ...]
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]
    n_pos: int
    components: tuple[tuple[str, int, tuple[int, ...]], ...]
    coweight_embedding: tuple[Vec, ...]
    _index: dict[Vec, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        self._index.update({r: i for i, r in enumerate(self.roots)})

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def lattice_rank(self) -> int:
        return len(self.coweight_embedding[0]) if self.coweight_embedding else 0

    @property
    def positive_roots(self) -> tuple[int, ...]:
        return tuple(range(self.n_pos))

    def root_index(self, v: Vec) -> int:
        return self._index[v]

    def is_root(self, v: Vec) -> bool:
        return v in self._index

    def negative(self, i: int) -> int:
        return i + self.n_pos if i < self.n_pos else i - self.n_pos

    def pairing(self, root_idx: int, coroot_idx: int) -> int:
        """<beta, alpha^vee> for beta = roots[root_idx], alpha = roots[coroot_idx]."""
        beta = self.roots[root_idx]
        alpha_v = self.coroots[coroot_idx]
        # <alpha_k, alpha_i^vee> = cartan[i][k]
        return sum(
            c * a * self.cartan[i][k]
            for i, c in enumerate(alpha_v)
            if c
            for k, a in enumerate(beta)
            if a
        )

    def height(self, i: int) -> int:
        return sum(self.roots[i])

    def reflect(self, mirror: int, i: int) -> int:
        """Index of s_{alpha}(beta) for alpha = roots[mirror], beta = roots[i]."""
        beta = self.roots[i]
        alpha = self.roots[mirror]
        n = self.pairing(i, mirror)
        return self._index[tuple(b - n * a for b, a in zip(beta, alpha))]

    def to_json(self) -> dict:
        return {
            "type": self.type_name,
            "cartan": [list(r) for r in self.cartan],
            "roots": [list(r) for r in self.roots],
            "positive": list(self.positive_roots),
        }

    def component_of(self, i: int) -> tuple[str, int]:
        v = self.roots[i]
        for series, n, idxs in self.components:
            if any(v[k] for k in idxs):
                return series, n
        raise RootSystemError("root supported on no component")


def _close_under_reflections(simples: list[Vec], cartan) -> list[Vec]:
    """All roots as the closure of the simple roots under simple reflections."""
    n = len(simples)
    found = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                pair = sum(v[k] * cartan[i][k] for k in range(n))
                w = list(v)
                w[i] -= pair
                w = tuple(w)
                if w not in found:
                    found.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(found)


def _is_positive(v: Vec) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


def build_root_system(
    descriptor: str, coweight_embedding: Sequence[Sequence[int]] | None = None
) -> RootDatum:
    """Construct the root datum named by ``descriptor`` (e.g. "G2", "F4xA2").

    The root set is generated by closing the simple roots under simple
    reflections.  By default the cocharacter lattice is the coroot lattice
    (identity embedding); pass ``coweight_embedding`` to place the simple
    coroots inside a larger ambient lattice.
    """
    comps = _parse_descriptor(descriptor)
    total = sum(n for _, n in comps)
    cartan = [[0] * total for _ in range(total)]
    components = []
    off = 0
    for series, n in comps:
        block = _cartan_block(series, n)
        for i in range(n):
            for j in range(n):
                cartan[off + i][off + j] = block[i][j]
        components.append((series, n, tuple(range(off, off + n))))
        off += n

    simples = [tuple(int(i == j) for j in range(total)) for i in range(total)]
    allroots = _close_under_reflections(simples, cartan)
    pos = sorted(
        (v for v in allroots if _is_positive(v)), key=lambda v: (sum(v), v)
    )
    roots = tuple(pos + [tuple(-c for c in v) for v in pos])

    # squared lengths (up to a per-component scale) from a symmetrizing diagonal
    d = _symmetrizer(cartan)
    norms = {}
    for v in roots:
        norms[v] = sum(
            v[i] * v[j] * d[i] * cartan[i][j] for i in range(total) for j in range(total)
        )
    simple_norms = [norms[s] for s in simples]
    coroots = []
    for v in roots:
        cv = tuple(
            _exact_int(Fraction(c * simple_norms[k], norms[v]))
            for k, c in enumerate(v)
        )
        coroots.append(cv)

    if coweight_embedding is None:
        emb = tuple(tuple(int(i == j) for j in range(total)) for i in range(total))
    else:
        emb = tuple(tuple(int(c) for c in row) for row in coweight_embedding)
        if len(emb) != total:
            raise RootSystemError("coweight embedding needs one row per simple coroot")

    return RootDatum(
        type_name=descriptor,
        cartan=tuple(tuple(r) for r in cartan),
        roots=roots,
        coroots=tuple(coroots),
        n_pos=len(pos),
        components=tuple(components),
        coweight_embedding=emb,
    )


def _exact_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise RootSystemError(f"non-integral coroot coefficient {x}")
    return x.numerator


def _symmetrizer(cartan) -> list[Fraction]:
    """Diagonal d with d_i * a_ij symmetric, normalized per component."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for i in range(n):
        if d[i] is None:
            d[i] = Fraction(1)
            stack = [i]
            while stack:
                k = stack.pop()
                for j in range(n):
                    if cartan[k][j] and j != k and d[j] is None:
                        d[j] = d[k] * Fraction(cartan[k][j], cartan[j][k])
                        stack.append(j)
    return [x if x is not None else Fraction(1) for x in d]


def gl2_root_datum() -> RootDatum:
    """Rank-1 root system inside a 2-dimensional cocharacter lattice.

    The single coroot sits as (1, -1) in Z^2, the cocharacter lattice of the
    2x2 general linear group's diagonal torus.
    """
    return build_root_system("A1", coweight_embedding=[(1, -1)])


@dataclass(frozen=True)
class DiagramAutomorphism:
    """Permutation of simple-root indices preserving the Cartan matrix."""

    perm: tuple[int, ...]

    @property
    def order(self) -> int:
        k, p = 1, self.perm
        q = p
        ident = tuple(range(len(p)))
        while q != ident:
            q = tuple(p[i] for i in q)
            k += 1
        return k

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    def on_root(self, v: Vec) -> Vec:
        out = [0] * len(v)
        for i, c in enumerate(v):
            out[self.perm[i]] = c
        return tuple(out)


def diagram_automorphisms(rs: RootDatum) -> list[DiagramAutomorphism]:
    """All simple-root permutations preserving the Cartan matrix, identity first."""
    n = rs.rank
    out = []
    from itertools import permutations

    for p in permutations(range(n)):
        if all(
            rs.cartan[p[i]][p[j]] == rs.cartan[i][j] for i in range(n) for j in range(n)
        ):
            out.append(DiagramAutomorphism(p))
    out.sort(key=lambda a: (not a.is_identity(), a.perm))
    return out


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, canonicalized by its permutation of the full root list."""

    perm: tuple[int, ...]
    word: tuple[int, ...]

    def __hash__(self):
        return hash(self.perm)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm


def simple_root_index(rs: RootDatum, i: int) -> int:
    """Root-list index of the i-th simple root (the list is height-sorted)."""
    return rs.root_index(tuple(int(i == j) for j in range(rs.rank)))


def simple_reflection_perm(rs: RootDatum, i: int) -> tuple[int, ...]:
    mirror = simple_root_index(rs, i)
    return tuple(rs.reflect(mirror, k) for k in range(len(rs.roots)))


def sigma_perm(rs: RootDatum, sigma: DiagramAutomorphism) -> tuple[int, ...]:
    return tuple(rs.root_index(sigma.on_root(v)) for v in rs.roots)


def compose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation of x -> outer(inner(x))."""
    return tuple(outer[i] for i in inner)


def weyl_element(rs: RootDatum, word: Iterable[int]) -> WeylElement:
    word = tuple(word)
    perm = tuple(range(len(rs.roots)))
    for i in reversed(word):
        perm = compose(simple_reflection_perm(rs, i), perm)
    return WeylElement(perm=perm, word=word)


def identity_weyl(rs: RootDatum) -> WeylElement:
    return WeylElement(perm=tuple(range(len(rs.roots))), word=())


def sigma_orbits_on_simples(rs: RootDatum, sigma: DiagramAutomorphism) -> list[tuple[int, ...]]:
    seen, orbits = set(), []
    for i in range(rs.rank):
        if i in seen:
            continue
        orb, j = [], i
        while j not in seen:
            seen.add(j)
            orb.append(j)
            j = sigma.perm[j]
        orbits.append(tuple(sorted(orb)))
    return orbits


def twisted_coxeter_elements(rs: RootDatum, sigma: DiagramAutomorphism) -> list[WeylElement]:
    """All products of one simple reflection per sigma-orbit, over all orderings.

    Products are deduplicated as Weyl elements (by their root permutation).
    Distinct orderings of the same reflections are merged by a subset dynamic
    program so the full symmetric group is never enumerated.
    """
    from itertools import product as iproduct

    orbits = sigma_orbits_on_simples(rs, sigma)
    k = len(orbits)
    refl = {i: simple_reflection_perm(rs, i) for i in range(rs.rank)}
    ident = tuple(range(len(rs.roots)))

    found: dict[tuple[int, ...], tuple[int, ...]] = {}
    for choice in iproduct(*orbits):
        # products[S] = distinct permutations of the chosen reflections indexed by S
        products: list[dict[tuple[int, ...], tuple[int, ...]]] = [dict() for _ in range(1 << k)]
        products[0][ident] = ()
        for s in range(1, 1 << k):
            acc = products[s]
            for b in range(k):
                if not s & (1 << b):
                    continue
                i = choice[b]
                for perm, word in products[s ^ (1 << b)].items():
                    q = compose(refl[i], perm)
                    if q not in acc:
                        acc[q] = (i,) + word
        for perm, word in products[(1 << k) - 1].items():
            found.setdefault(perm, word)

    out = [WeylElement(perm=p, word=w) for p, w in found.items()]
    out.sort(key=lambda w: w.perm)
    return out


def twist_perm(rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism) -> tuple[int, ...]:
    """The permutation of roots given by w followed after sigma (alpha -> w(sigma(alpha)))."""
    return compose(w.perm, sigma_perm(rs, sigma))


def inversion_set(w: WeylElement, sigma: DiagramAutomorphism, rs: RootDatum) -> frozenset[int]:
    """Positive-root indices alpha with w(sigma(alpha)) negative."""
    f = twist_perm(rs, w, sigma)
    return frozenset(i for i in range(rs.n_pos) if f[i] >= rs.n_pos)


def lattice_action(rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism) -> tuple[Vec, ...]:
    """Matrix of w∘sigma on the ambient cocharacter lattice (rows = images of e_j).

    The action on the span of the coroots is transported through the coweight
    embedding; the orthogonal complement is fixed only when the embedding is
    square.  For non-square embeddings the ambient action must be supplied by
    the torus model; here we support the square case and the rank-1-in-Z^2
    case used by the 2x2 matrix-group model.
    """
    m = rs.lattice_rank
    n = rs.rank
    f = twist_perm(rs, w, sigma)
    # image of each simple coroot under w∘sigma, in simple-coroot coordinates
    img = []
    for i in range(n):
        simple_idx = rs.root_index(tuple(int(i == j) for j in range(n)))
        img.append(rs.coroots[f[simple_idx]])
    if m == n:
        # transform to ambient coordinates via the embedding
        rows = [
            tuple(
                sum(img[j][k] * rs.coweight_embedding[k][t] for k in range(n))
                for t in range(m)
            )
            for j in range(n)
        ]
        emb = rs.coweight_embedding
        # solve emb * M = rows in the square case (emb invertible over Q)
        return _solve_int_matrix(emb, rows)
    if n == 1 and m == 2 and rs.coweight_embedding[0] in ((1, -1), (-1, 1)):
        # swap or identity on Z^2 according to the sign of the coroot image
        if img[0] == (1,):
            return ((1, 0), (0, 1))
        return ((0, 1), (1, 0))
    raise RootSystemError("ambient lattice action not determined by the root datum")


def _solve_int_matrix(a: Sequence[Vec], b: Sequence[Vec]) -> tuple[Vec, ...]:
    """Solve a*M = b exactly for integer matrices (a square, invertible over Q)."""
    n = len(a)
    aa = [[Fraction(x) for x in row] for row in a]
    bb = [[Fraction(x) for x in row] for row in b]
    for col in range(n):
        piv = next(r for r in range(col, n) if aa[r][col] != 0)
        aa[col], aa[piv] = aa[piv], aa[col]
        bb[col], bb[piv] = bb[piv], bb[col]
        inv = 1 / aa[col][col]
        aa[col] = [x * inv for x in aa[col]]
        bb[col] = [x * inv for x in bb[col]]
        for r in range(n):
            if r != col and aa[r][col]:
                c = aa[r][col]
                aa[r] = [x - c * y for x, y in zip(aa[r], aa[col])]
                bb[r] = [x - c * y for x, y in zip(bb[r], bb[col])]
    return tuple(tuple(_exact_int(x) for x in row) for row in bb)


def matrix_order(m: tuple[Vec, ...], cap: int = 10_000) -> int:
    n = len(m)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = tuple(
            tuple(sum(p[i][t] * m[t][j] for t in range(n)) for j in range(n))
            for i in range(n)
        )
    raise RootSystemError("order exceeds cap")


def twist_order(rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism) -> int:
    """Order of w∘sigma on the ambient cocharacter lattice."""
    return matrix_order(lattice_action(rs, w, sigma))


@dataclass(frozen=True)
class OrbitProfile:
    orbits: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]
    delta: frozenset[int]


def orbit_profile(
    w: WeylElement, sigma: DiagramAutomorphism, rs: RootDatum, n_order: int
) -> OrbitProfile:
    """F-orbits on the full root set and Delta = (negatives) ∩ F(positives), F = w∘sigma."""
    f = twist_perm(rs, w, sigma)
    if sorted(f) != list(range(len(rs.roots))):
        raise RootSystemError("w∘sigma does not permute the root set")
    seen = [False] * len(rs.roots)
    orbits = []
    for i in range(len(rs.roots)):
        if seen[i]:
            continue
        orb, j = [], i
        while not seen[j]:
            seen[j] = True
            orb.append(j)
            j = f[j]
        orbits.append(tuple(orb))
    delta = frozenset(f[i] for i in range(rs.n_pos) if f[i] >= rs.n_pos)
    return OrbitProfile(
        orbits=tuple(orbits), lengths=tuple(len(o) for o in orbits), delta=delta
    )


def weyl_group_order(rs: RootDatum, cap: int = 2_000_000) -> int:
    """Order of the group generated by all reflections, by breadth-first closure."""
    gens = [simple_reflection_perm(rs, i) for i in range(rs.rank)]
    ident = tuple(range(len(rs.roots)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > cap:
                        raise RootSystemError("Weyl group larger than cap")
        frontier = nxt
    return len(seen)


def dump_fixture(rs: RootDatum, path) -> None:
    with open(path, "w") as fh:
        json.dump(rs.to_json(), fh, indent=2, sort_keys=True)
