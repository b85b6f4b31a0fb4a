"""Affine-root bookkeeping: the building point, the total order, the orbit
bijection, and the jump-set families with their closure properties.

An affine root is a pair (vector part, integer level) acting on the apartment
as f(x) = -alpha(x - x0) + m; the torus contributes integer-level items with
no vector part ("zero items").  Everything is truncated to the finite window
0 < f(x) < r of a fixed level bound r; all evaluations are exact rationals.

Counting convention: the order and the set machinery treat a zero item as a
single element, while dimension counts weight it by the ambient rank (its
coordinate space is the full cocharacter space).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rootsys import (
    DiagramAutomorphism,
    RootDatum,
    WeylElement,
    orbit_profile,
    twist_perm,
)


class AffineError(ValueError):
    pass


@dataclass(frozen=True)
class AffineRoot:
    """(vector part, level); vector part None marks a torus (zero) item."""

    level: int
    vec: int | None  # root index in the datum, or None

    def is_zero_part(self) -> bool:
        return self.vec is None

    def sort_key(self):
        return (self.level, -1 if self.vec is None else self.vec)


def zero_item(m: int) -> AffineRoot:
    return AffineRoot(level=m, vec=None)


@dataclass(frozen=True)
class BuildingPoint:
    """Rational values alpha(x - x0) for every root, extended linearly.

    Only evaluations are ever needed, so the point is represented by its
    value vector on the root list.
    """

    values: tuple[Fraction, ...]

    @staticmethod
    def hyperspecial(rs: RootDatum) -> "BuildingPoint":
        return BuildingPoint(values=tuple(Fraction(0) for _ in rs.roots))

    def check_linearity(self, rs: RootDatum) -> None:
        for i in range(len(rs.roots)):
            if self.values[rs.negative(i)] != -self.values[i]:
                raise AffineError("building point values are not odd under negation")
            for j in range(len(rs.roots)):
                s = tuple(a + b for a, b in zip(rs.roots[i], rs.roots[j]))
                if rs.is_root(s):
                    k = rs.root_index(s)
                    if self.values[k] != self.values[i] + self.values[j]:
                        raise AffineError("building point values are not additive")

    def value(self, rs: RootDatum, f: AffineRoot) -> Fraction:
        """f(x) = -alpha(x - x0) + m, or m for a zero item."""
        if f.vec is None:
            return Fraction(f.level)
        return -self.values[f.vec] + f.level


class AffineContext:
    """F-action and evaluation for affine roots of one (rs, w, sigma, x)."""

    def __init__(
        self,
        rs: RootDatum,
        w: WeylElement,
        sigma: DiagramAutomorphism,
        x: BuildingPoint | None = None,
    ):
        self.rs = rs
        self.w = w
        self.sigma = sigma
        self.x = x if x is not None else BuildingPoint.hyperspecial(rs)
        self.f_perm = twist_perm(rs, w, sigma)
        if not all(v.denominator == 1 for v in self.x.values):
            # mixed normalizations of the reduced root set are untested here
            import warnings

            warnings.warn("non-hyperspecial building points are experimental")

    def value(self, f: AffineRoot) -> Fraction:
        return self.x.value(self.rs, f)

    def apply_F(self, f: AffineRoot) -> AffineRoot:
        """Twisted Frobenius; the level shifts so the evaluation at x is preserved."""
        if f.vec is None:
            return f
        img = self.f_perm[f.vec]
        shift = self.x.values[img] - self.x.values[f.vec]
        if shift.denominator != 1:
            raise AffineError("F does not act integrally on affine roots at this point")
        return AffineRoot(level=f.level + int(shift), vec=img)

    def add(self, f: AffineRoot, g: AffineRoot) -> AffineRoot | None:
        """f + g when it is again an (extended) affine root, else None."""
        if f.vec is None and g.vec is None:
            return zero_item(f.level + g.level)
        if f.vec is None:
            return AffineRoot(level=f.level + g.level, vec=g.vec)
        if g.vec is None:
            return AffineRoot(level=f.level + g.level, vec=f.vec)
        s = tuple(a + b for a, b in zip(self.rs.roots[f.vec], self.rs.roots[g.vec]))
        if self.rs.is_root(s):
            return AffineRoot(level=f.level + g.level, vec=self.rs.root_index(s))
        if all(c == 0 for c in s):
            return zero_item(f.level + g.level)
        return None

    def rep_sort_key(self, f: AffineRoot):
        """Value, zero items before root items, then a fixed injective tie-break."""
        if f.vec is None:
            return (self.value(f), 0, 0, (), f.level)
        return (
            self.value(f),
            1,
            self.rs.height(f.vec),
            self.rs.roots[f.vec],
            f.level,
        )


@dataclass(frozen=True)
class AffineSets:
    """The windowed affine root sets for one context at one level bound."""

    r: int
    positive: frozenset[AffineRoot]  # 0 < f(x) < r, root and zero items
    delta: frozenset[int]  # root indices: negatives meeting F(positives)
    delta_aff: frozenset[AffineRoot]  # window items with vector part in delta
    delta_tilde: frozenset[AffineRoot]  # delta_aff plus zero items
    phi_red: frozenset[int]  # root indices with integral value at x
    delta_red: frozenset[int]


def affine_sets(ctx: AffineContext, r: int) -> AffineSets:
    """All windowed sets at level bound r (exclusive)."""
    if r < 1:
        raise AffineError("level bound must be at least 1")
    rs = ctx.rs
    n_order = _perm_order(ctx.f_perm)
    prof = orbit_profile(ctx.w, ctx.sigma, rs, n_order)
    delta = prof.delta

    items = []
    for i in range(len(rs.roots)):
        base = ctx.x.values[i]
        m = base.numerator // base.denominator + 1  # smallest level with value > 0
        while Fraction(m) - base < r:
            items.append(AffineRoot(level=m, vec=i))
            m += 1
    zeros = [zero_item(m) for m in range(1, r)]
    positive = frozenset(items) | frozenset(zeros)

    delta_aff = frozenset(f for f in items if f.vec in delta)
    phi_red = frozenset(
        i for i in range(len(rs.roots)) if ctx.x.values[i].denominator == 1
    )
    return AffineSets(
        r=r,
        positive=positive,
        delta=delta,
        delta_aff=delta_aff,
        delta_tilde=delta_aff | frozenset(zeros),
        phi_red=phi_red,
        delta_red=phi_red & delta,
    )


def _perm_order(perm: tuple[int, ...]) -> int:
    ident = tuple(range(len(perm)))
    q, k = perm, 1
    while q != ident:
        q = tuple(perm[i] for i in q)
        k += 1
    return k


def orbit_of(
    ctx: AffineContext, f: AffineRoot, window: frozenset[AffineRoot]
) -> frozenset[AffineRoot]:
    orb = {f}
    g = ctx.apply_F(f)
    while g != f:
        orb.add(g)
        g = ctx.apply_F(g)
    if not orb <= window:
        raise AffineError("orbit leaves the window; F does not preserve evaluations")
    return frozenset(orb)


def orbit_bijection_check(ctx: AffineContext, sets: AffineSets) -> bool:
    """Distinct delta-tilde items have disjoint orbits covering the window."""
    covered: set[AffineRoot] = set()
    for f in sets.delta_tilde:
        orb = orbit_of(ctx, f, sets.positive)
        if covered & orb:
            return False
        covered |= orb
    return covered == set(sets.positive)


@dataclass(frozen=True)
class AffineOrder:
    """Total order on the windowed affine roots realized as a sort key."""

    sequence: tuple[AffineRoot, ...]
    rank_of: dict[AffineRoot, int]
    reps: tuple[AffineRoot, ...]  # delta-tilde in order

    def key(self, f: AffineRoot) -> int:
        return self.rank_of[f]

    def successor_rep(self, f: AffineRoot) -> AffineRoot | None:
        i = self.reps.index(f)
        return self.reps[i + 1] if i + 1 < len(self.reps) else None

    def predecessor_rep(self, f: AffineRoot) -> AffineRoot | None:
        """Previous delta-tilde representative, or None as the zero sentinel."""
        i = self.reps.index(f)
        return self.reps[i - 1] if i > 0 else None


def affine_order(ctx: AffineContext, sets: AffineSets) -> AffineOrder:
    """Build a total order satisfying the three defining constraints.

    Items are grouped into F-orbit blocks indexed by their delta-tilde
    representative.  Blocks are sorted by value at x (constant on each orbit),
    zero items before root items at equal value, remaining ties by a fixed
    injective key on the representative; inside a root block the order is
    f, F(f), ..., F^{N-1}(f).
    """
    if not orbit_bijection_check(ctx, sets):
        raise AffineError("orbit bijection fails; the order is not defined for this F")

    reps = sorted(sets.delta_tilde, key=ctx.rep_sort_key)
    seq: list[AffineRoot] = []
    for f in reps:
        if f.vec is None:
            seq.append(f)
            continue
        g = f
        block = [g]
        g = ctx.apply_F(g)
        while g != f:
            block.append(g)
            g = ctx.apply_F(g)
        seq.extend(block)
    rank = {f: i for i, f in enumerate(seq)}
    return AffineOrder(sequence=tuple(seq), rank_of=rank, reps=tuple(reps))


def order_satisfies_axioms(
    ctx: AffineContext, sets: AffineSets, order: AffineOrder
) -> bool:
    """Check the three defining constraints directly (used by tests)."""
    seq = order.sequence
    for i, f in enumerate(seq):
        for g in seq[i + 1 :]:
            if ctx.value(f) > ctx.value(g):
                return False
            if ctx.value(f) == ctx.value(g) and f.vec is not None and g.vec is None:
                return False
    for f in sets.delta_aff:
        ranks = [order.key(f)]
        g = ctx.apply_F(f)
        while g != f:
            ranks.append(order.key(g))
            g = ctx.apply_F(g)
        if ranks != list(range(ranks[0], ranks[0] + len(ranks))):
            return False
    return True


# --- jump sets ----------------------------------------------------------------


@dataclass(frozen=True)
class JumpData:
    h: int
    labels: tuple[AffineRoot, ...]  # f_1 .. f_{m-1}, self-paired block, flats reversed
    flats: dict[AffineRoot, AffineRoot]
    m: int
    n: int
    d_set: frozenset[AffineRoot]
    a_sets: tuple[frozenset[AffineRoot], ...]  # indices 0 .. m+1
    b_sets: tuple[frozenset[AffineRoot], ...]  # indices 0 .. m
    c_sets: tuple[frozenset[AffineRoot], ...]  # indices 0 .. m-1
    levi: frozenset[int]


def jump_sets(
    ctx: AffineContext, sets: AffineSets, h: int, levi: Iterable[int]
) -> JumpData:
    """Label the jump roots below level h outside the Levi and build the
    nested set families used to peel the level-h fibration.

    The jump set D consists of delta-tilde representatives; its flat pairing
    sends f to the representative of the orbit of the level-h complement of
    f, so values pair to h.  Pairs are ordered by descending flat side, which
    makes the low-side value chain ascend and keeps the flat chain strictly
    decreasing in the affine order.
    """
    levi = frozenset(levi)
    for i in levi:
        if ctx.rs.negative(i) not in levi:
            raise AffineError("Levi subsystem must be symmetric")
    if not 1 <= h <= sets.r:
        raise AffineError("jump level out of range")

    d_set = frozenset(
        f for f in sets.delta_aff if ctx.value(f) < h and f.vec not in levi
    )

    flats: dict[AffineRoot, AffineRoot] = {}
    for f in d_set:
        comp = AffineRoot(level=h - f.level, vec=ctx.rs.negative(f.vec))
        orb = orbit_of(ctx, comp, sets.positive)
        partners = [g for g in orb if g in sets.delta_aff]
        if len(partners) != 1:
            raise AffineError(f"no unique flat partner for {f}")
        flats[f] = partners[0]
    for f, g in flats.items():
        if flats.get(g) != f:
            raise AffineError("flat pairing is not an involution")
        if ctx.value(f) + ctx.value(g) != h:
            raise AffineError("flat pairing does not pair values to the jump level")

    self_paired = sorted(
        (f for f in d_set if flats[f] == f), key=ctx.rep_sort_key
    )
    pairs = []
    seen: set[AffineRoot] = set()
    for f in sorted(d_set, key=ctx.rep_sort_key):
        if flats[f] == f or f in seen:
            continue
        g = flats[f]
        seen |= {f, g}
        lo, hi = sorted((f, g), key=ctx.rep_sort_key)
        pairs.append((lo, hi))
    pairs.sort(key=lambda p: ctx.rep_sort_key(p[1]), reverse=True)

    m = len(pairs) + 1
    n = len(pairs) + len(self_paired)
    labels = tuple(
        [p[0] for p in pairs] + self_paired + [p[1] for p in reversed(pairs)]
    )

    window = sets.positive
    tail = frozenset(f for f in window if ctx.value(f) >= h)
    levi_window = frozenset(f for f in window if f.vec is not None and f.vec in levi)

    f_lows = [p[0] for p in pairs]  # f_1 .. f_{m-1}
    a_sets: list[frozenset[AffineRoot]] = [window, window]  # A_0, A_1
    removed: set[AffineRoot] = set()
    for i in range(2, m + 1):
        removed |= orbit_of(ctx, f_lows[i - 2], window)
        a_sets.append(frozenset(window - removed))

    b_sets: list[frozenset[AffineRoot]] = [tail]
    flat_cum: set[AffineRoot] = set()
    for i in range(1, m + 1):
        if i <= m - 1:
            flat_cum |= orbit_of(ctx, pairs[i - 1][1], window)
        else:
            for f in self_paired:
                flat_cum |= orbit_of(ctx, f, window)
        b_sets.append(frozenset(tail | flat_cum))

    h_item = zero_item(h)
    c_sets = tuple(frozenset(b - {h_item}) for b in b_sets[:-1])
    a_sets.append(frozenset(b_sets[m - 1] | levi_window))  # A_{m+1}

    return JumpData(
        h=h,
        labels=labels,
        flats=flats,
        m=m,
        n=n,
        d_set=d_set,
        a_sets=tuple(a_sets),
        b_sets=tuple(b_sets),
        c_sets=c_sets,
        levi=levi,
    )


def flat_order_check(ctx: AffineContext, jd: JumpData) -> bool:
    """Labeling respects the value chain and the pairing inequalities."""
    vals = [ctx.value(f) for f in jd.labels]
    half = Fraction(jd.h, 2)
    m, n = jd.m, jd.n
    lows, mids, highs = vals[: m - 1], vals[m - 1 : n], vals[n:]
    if any(a > b for a, b in zip(lows, lows[1:])):
        return False
    if lows and lows[-1] > half:
        return False
    if any(v != half for v in mids):
        return False
    if any(a > b for a, b in zip(highs, highs[1:])):
        return False
    if highs and highs[0] < half:
        return False
    for i in range(m - 1):
        f, g = jd.labels[i], jd.labels[len(jd.labels) - 1 - i]
        if jd.flats[f] != g:
            return False
        if not ctx.rep_sort_key(f) < ctx.rep_sort_key(g):
            return False
    # flat chain f_{m-1}^flat < ... < f_1^flat, read right to left in labels
    flats_right = jd.labels[n:]
    keys = [ctx.rep_sort_key(f) for f in flats_right]
    if keys != sorted(keys):
        return False
    for f in jd.labels[m - 1 : n]:
        if jd.flats[f] != f:
            return False
    return True


# --- closure verification -----------------------------------------------------


def _window_max_level(window: frozenset[AffineRoot]) -> int:
    return max((f.level for f in window), default=0)


def _closed_in_window(
    ctx: AffineContext, s: frozenset[AffineRoot], window: frozenset[AffineRoot]
) -> bool:
    """s + s ⊆ s and s + positive-level zero items stays in s, inside the window."""
    for f in s:
        for g in s:
            t = ctx.add(f, g)
            if t is not None and t in window and t not in s:
                return False
        for m in range(1, _window_max_level(window) + 1):
            t = ctx.add(f, zero_item(m))
            if t is not None and t in window and t not in s:
                return False
    return True


def _f_stable(ctx: AffineContext, s: frozenset[AffineRoot]) -> bool:
    return all(ctx.apply_F(f) in s for f in s)


def _sums_into(
    ctx: AffineContext,
    a: frozenset[AffineRoot],
    b: frozenset[AffineRoot],
    target: frozenset[AffineRoot],
    window: frozenset[AffineRoot],
) -> bool:
    for f in a:
        for g in b:
            t = ctx.add(f, g)
            if t is not None and t in window and t not in target:
                return False
    return True


def verify_closure(ctx: AffineContext, jd: JumpData, sets: AffineSets) -> dict[str, bool]:
    """The five pairwise inclusions plus F-stability and closedness, per index.

    All checks run inside the level window; sums leaving the window vanish in
    the truncated group and are vacuously fine.
    """
    window = sets.positive
    levi_window = frozenset(f for f in window if f.vec is not None and f.vec in jd.levi)
    out: dict[str, bool] = {}
    m = jd.m
    for i in range(1, m + 1):
        a_prev, a_i, a_next = jd.a_sets[i - 1], jd.a_sets[i], jd.a_sets[i + 1]
        b_prev, b_i = jd.b_sets[i - 1], jd.b_sets[i]
        c_prev = jd.c_sets[i - 1]
        out[f"A{i - 1}+A{i - 1}<=A{i}"] = _sums_into(ctx, a_prev, a_prev, a_i, window)
        out[f"A{i}+B{i}<=B{i - 1}"] = _sums_into(ctx, a_i, b_i, b_prev, window)
        out[f"M+B{i}<=C{i - 1}"] = _sums_into(ctx, levi_window, b_i, c_prev, window)
        out[f"C{i - 1}+C{i - 1}<=C{i - 1}"] = _sums_into(ctx, c_prev, c_prev, c_prev, window)
        out[f"A{i + 1}+B{i}<=C{i - 1}"] = _sums_into(ctx, a_next, b_i, c_prev, window)
        out[f"A{i} stable+closed"] = _f_stable(ctx, a_i) and _closed_in_window(ctx, a_i, window)
        out[f"B{i} stable+closed"] = _f_stable(ctx, b_i) and _closed_in_window(ctx, b_i, window)
        out[f"C{i - 1} stable+closed"] = _f_stable(ctx, c_prev) and _closed_in_window(
            ctx, c_prev, window
        )
    return out


def dump_fixture(ctx: AffineContext, sets: AffineSets, order: AffineOrder) -> dict:
    def enc(f: AffineRoot):
        return {"vec": f.vec, "level": f.level}

    return {
        "r": sets.r,
        "positive": [enc(f) for f in sorted(sets.positive, key=AffineRoot.sort_key)],
        "delta": sorted(sets.delta),
        "order": [enc(f) for f in order.sequence],
        "reps": [enc(f) for f in order.reps],
    }
