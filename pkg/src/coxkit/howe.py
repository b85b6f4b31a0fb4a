"""Character-datum bookkeeping and the closed-form degree/dimension formulas.

A character of the deep torus determines jump levels and a nested chain of
F-stable Levi subsystems; from those the single homology and compactly
supported cohomology degrees, the variety dimension, and the weight-space
dimension all follow by closed formulas.  Also houses the prime condition:
p must avoid the torsion primes of the root system and the fundamental-group
orders of all F-stable Levi subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .affcomb import AffineSets
from .rootsys import (
    DiagramAutomorphism,
    RootDatum,
    WeylElement,
    orbit_profile,
    twist_perm,
)


class HoweError(ValueError):
    pass


# --- torsion primes -------------------------------------------------------------

_TORSION = {
    "A": lambda n: set(),
    "B": lambda n: {2} if n >= 3 else set(),
    "C": lambda n: set(),
    "D": lambda n: {2},
    "G": lambda n: {2},
    "F": lambda n: {2, 3},
    "E": lambda n: {2, 3, 5} if n == 8 else {2, 3},
}


def torsion_primes(rs: RootDatum) -> set[int]:
    """Union of the classified torsion primes over irreducible components."""
    out: set[int] = set()
    for series, n, _ in rs.components:
        out |= _TORSION[series](n)
    assert all(p <= 5 for p in out)
    return out


# --- Smith normal form and fundamental group orders ------------------------------


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors of an integer matrix."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    divisors = []
    r = c = 0
    while r < nr and c < nc:
        # find a pivot of least absolute value
        piv = None
        for i in range(r, nr):
            for j in range(c, nc):
                if m[i][j] and (piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        m[r], m[i] = m[i], m[r]
        for row in m:
            row[c], row[j] = row[j], row[c]
        # clear the row and column; restart if remainders appear
        while True:
            dirty = False
            for i in range(r + 1, nr):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                if m[i][c]:
                    m[r], m[i] = m[i], m[r]
                    dirty = True
            for j in range(c + 1, nc):
                q = m[r][j] // m[r][c]
                if q:
                    for row in m:
                        row[j] -= q * row[c]
                if m[r][j]:
                    for row in m:
                        row[c], row[j] = row[j], row[c]
                    dirty = True
            if not dirty:
                break
        divisors.append(abs(m[r][c]))
        r += 1
        c += 1
    # normalize divisibility chain
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            import math

            g = math.gcd(divisors[i], divisors[j])
            l = divisors[i] * divisors[j] // g if g else 0
            divisors[i], divisors[j] = g, l
    return [d for d in divisors if d]


def pi1_order(rs: RootDatum, levi: Iterable[int]) -> int:
    """Index of the Levi coroot lattice in its saturation inside the
    cocharacter lattice: the product of elementary divisors of the coroot
    coordinate matrix."""
    levi = sorted(set(levi))
    if not levi:
        return 1
    n, m = rs.rank, rs.lattice_rank
    rows = []
    for i in levi:
        cv = rs.coroots[i]
        rows.append(
            tuple(
                sum(cv[k] * rs.coweight_embedding[k][t] for k in range(n))
                for t in range(m)
            )
        )
    out = 1
    for d in smith_diagonal(rows):
        out *= d
    return out


# --- F-stable Levi subsystems -----------------------------------------------------


def _span_closure(rs: RootDatum, seed: Iterable[int]) -> frozenset[int]:
    """Roots in the rational span of the seed roots (a Levi subsystem)."""
    from fractions import Fraction

    basis: list[list[Fraction]] = []

    def reduce(v):
        v = [Fraction(c) for c in v]
        for b in basis:
            lead = next((i for i, c in enumerate(b) if c), None)
            if lead is not None and v[lead]:
                f = v[lead] / b[lead]
                v = [a - f * c for a, c in zip(v, b)]
        return v

    for i in seed:
        v = reduce(rs.roots[i])
        if any(v):
            basis.append(v)
    return frozenset(
        i for i in range(len(rs.roots)) if not any(reduce(rs.roots[i]))
    )


def f_stable_levi_subsystems(
    rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism
) -> list[frozenset[int]]:
    """All subsystems of the form (span of a union of F-orbits) ∩ roots.

    For a twisted Coxeter F the orbit count equals the rank, so the sweep is
    a subset enumeration of at most 2^rank seeds.
    """
    f = twist_perm(rs, w, sigma)
    n_ord = 1
    q = f
    ident = tuple(range(len(rs.roots)))
    while q != ident:
        q = tuple(f[i] for i in q)
        n_ord += 1
    prof = orbit_profile(w, sigma, rs, n_ord)
    orbits = prof.orbits
    from itertools import combinations

    found: set[frozenset[int]] = {frozenset()}
    for k in range(1, len(orbits) + 1):
        for combo in combinations(range(len(orbits)), k):
            seed = [i for t in combo for i in orbits[t]]
            levi = _span_closure(rs, seed)
            # keep only F-stable results (spans of orbit unions always are)
            if frozenset(f[i] for i in levi) == levi:
                found.add(levi)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class ConditionReport:
    p: int
    torsion_verdict: bool  # True = p is not a torsion prime
    levi_verdicts: tuple[tuple[tuple[int, ...], int, bool], ...]

    @property
    def verdict(self) -> bool:
        return self.torsion_verdict and all(v for _, _, v in self.levi_verdicts)


def check_condition_on_p(
    p: int, rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism
) -> ConditionReport:
    """p avoids the torsion primes and every F-stable Levi fundamental group."""
    tors = p not in torsion_primes(rs)
    levis = f_stable_levi_subsystems(rs, w, sigma)
    verdicts = []
    for levi in levis:
        order = pi1_order(rs, levi)
        verdicts.append((tuple(sorted(levi)), order, order % p != 0))
    return ConditionReport(p=p, torsion_verdict=tors, levi_verdicts=tuple(verdicts))


def bad_primes(rs: RootDatum, w: WeylElement, sigma: DiagramAutomorphism) -> set[int]:
    """All primes failing the condition (finite: torsion or dividing some pi1)."""
    cands = set(torsion_primes(rs))
    for levi in f_stable_levi_subsystems(rs, w, sigma):
        order = pi1_order(rs, levi)
        d = 2
        while d * d <= order:
            if order % d == 0:
                cands.add(d)
                while order % d == 0:
                    order //= d
            d += 1
        if order > 1:
            cands.add(order)
    return {p for p in cands if not check_condition_on_p(p, rs, w, sigma).verdict}


# --- jump data and degree formulas -------------------------------------------------


@dataclass(frozen=True)
class HoweDatum:
    """Depth, jump levels, and the nested Levi chain of a torus character.

    ``levis`` lists R_0 ⊆ ... ⊆ R_{d-1} as root-index sets; the full system
    is implied as R_d.  ``central_depth`` records an optional final level
    r_d with R_d = full, which never enters the degree formulas.
    """

    depth: int  # the level bound r
    jumps: tuple[int, ...]  # r_0 < ... < r_{d-1}
    levis: tuple[frozenset[int], ...]
    central_depth: int | None = None

    def __post_init__(self):
        if len(self.jumps) != len(self.levis):
            raise HoweError("one Levi per jump")
        if any(a >= b for a, b in zip(self.jumps, self.jumps[1:])):
            raise HoweError("jumps must be strictly increasing")
        if self.jumps:
            if not (0 < self.jumps[0] and self.jumps[-1] <= self.depth):
                raise HoweError("jumps must lie in (0, depth]")
        for a, b in zip(self.levis, self.levis[1:]):
            if not a <= b:
                raise HoweError("Levi chain must be nested")
        if self.central_depth is not None:
            lo = self.jumps[-1] if self.jumps else 0
            if not (lo <= self.central_depth <= self.depth):
                raise HoweError("central depth out of range")


@dataclass(frozen=True)
class AffineCounts:
    """The sizes entering the closed formulas."""

    n_phi: int
    n_phi_red: int
    n_delta: int
    n_delta_red: int
    n_order: int

    @staticmethod
    def from_sets(sets: AffineSets, rs: RootDatum, n_order: int) -> "AffineCounts":
        return AffineCounts(
            n_phi=len(rs.roots),
            n_phi_red=len(sets.phi_red),
            n_delta=len(sets.delta),
            n_delta_red=len(sets.delta_red),
            n_order=n_order,
        )


def _reduced_count(levi: frozenset[int], phi_red: frozenset[int]) -> int:
    return len(levi & phi_red)


def cohomological_degree(
    datum: HoweDatum, counts: AffineCounts, phi_red: frozenset[int]
) -> int:
    """The single degree carrying compactly supported cohomology.

    N * s = 2r*#roots - #reduced - #R_0^reduced - sum_i r_i (#R_{i+1} - #R_i),
    with the full system appended as the last chain member.
    """
    chain = list(datum.levis) + [frozenset(range(counts.n_phi))]
    r0_red = _reduced_count(chain[0], phi_red)
    total = 2 * datum.depth * counts.n_phi - counts.n_phi_red - r0_red
    for i, r_i in enumerate(datum.jumps):
        total -= r_i * (len(chain[i + 1]) - len(chain[i]))
    if total % counts.n_order:
        raise HoweError(f"degree numerator {total} not divisible by N={counts.n_order}")
    s = total // counts.n_order
    if s < 0:
        raise HoweError("negative cohomological degree")
    return s


def homology_degree(
    datum: HoweDatum, counts: AffineCounts, phi_red: frozenset[int]
) -> int:
    """The single homology degree: N * s = -#reduced + #R_0^reduced + sum_i r_i (#R_{i+1} - #R_i)."""
    chain = list(datum.levis) + [frozenset(range(counts.n_phi))]
    r0_red = _reduced_count(chain[0], phi_red)
    total = -counts.n_phi_red + r0_red
    for i, r_i in enumerate(datum.jumps):
        total += r_i * (len(chain[i + 1]) - len(chain[i]))
    if total % counts.n_order:
        raise HoweError(f"degree numerator {total} not divisible by N={counts.n_order}")
    s = total // counts.n_order
    if s < 0:
        raise HoweError("negative homology degree")
    return s


def dim_Yr(r: int, counts: AffineCounts) -> int:
    """Variety dimension, computed both ways and asserted equal:
    r*#delta - #delta_red = (r*#roots - #reduced)/N."""
    a = r * counts.n_delta - counts.n_delta_red
    num = r * counts.n_phi - counts.n_phi_red
    if num % counts.n_order:
        raise HoweError("dimension numerator not divisible by N")
    b = num // counts.n_order
    if a != b:
        raise HoweError(f"dimension formulas disagree: {a} != {b}")
    return a


def weight_dimension(q: int, n_order: int, s_homology: int) -> int:
    """q^(s*N/2); the exponent must be integral (even s*N)."""
    if (s_homology * n_order) % 2:
        raise HoweError("s*N is odd; weight dimension undefined")
    return q ** (s_homology * n_order // 2)


# --- the concrete rank-1-in-GL2 character-to-datum map ---------------------------


def levi_of_character_gl2(chi, level: int) -> str:
    """'full' if the level character kills the norm image of the coroot line,
    else 'empty'.  ``chi`` is a torus character of the twisted 2x2 model; the
    norm image at each level is the trace-zero line of the quadratic
    extension, embedded at that level.

    The verdict only depends on the level-restriction of chi with lower
    levels stripped; pass the stripped character (see ``gl2_howe_datum``).
    """
    if level not in (1, 2):
        raise HoweError("character level must be 1 or 2 in the depth-3 model")
    model = chi.model
    for y in model.trace_zero_elements():
        t = model.torus_element_at_level(y, level)
        if chi.value_exponent(t) != 0:
            return "empty"
    return "full"


def gl2_howe_datum(chi, r: int = 3) -> HoweDatum:
    """Jump levels and Levi chain of a torus character of the depth-3 model.

    Levels are tested top down; at each level the still-unexplained part of
    the character is restricted to the norm image of the coroot line.  A
    level where the restriction is nontrivial is a jump with empty Levi; a
    nontrivial but norm-killing level contributes only a central factor.
    """
    b_generic = levi_of_character_gl2(chi, 2) == "empty"
    if b_generic:
        return HoweDatum(depth=r, jumps=(2,), levis=(frozenset(),))
    stripped = chi.strip_top_level()
    a_generic = levi_of_character_gl2(stripped, 1) == "empty"
    if a_generic:
        central = 2 if chi.has_level(2) else None
        return HoweDatum(depth=r, jumps=(1,), levis=(frozenset(),), central_depth=central)
    central = 2 if chi.has_level(2) else (1 if chi.has_level(1) else None)
    return HoweDatum(depth=r, jumps=(), levis=(), central_depth=central)
