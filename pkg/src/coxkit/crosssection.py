"""Cross-section filtration search and certification.

The search grows a chain of positive-root subsets from the twisted inversion
set up to the full positive system, one root at a time.  A step is accepted
when the enlarged set keeps the chain conditions: the set and its part outside
the inversion set are closed under addition, sums of pairs fall one level down
the chain, and the twisted action maps the part outside the inversion set back
into the set.  Accepted chains are re-validated by independent code before a
certificate is issued.

Subsets of the positive roots are bitmasks over positive-root indices inside
the search; the validator works on frozensets of coordinate tuples instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .rootsys import (
    DiagramAutomorphism,
    RootDatum,
    Vec,
    WeylElement,
    inversion_set,
    twist_perm,
    twisted_coxeter_elements,
)


class NotFound:
    """Sentinel: no candidate root extends the current chain."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotFound"


NOT_FOUND = NotFound()


@dataclass(frozen=True)
class FiltrationCertificate:
    w: WeylElement
    sigma: DiagramAutomorphism
    chain: tuple[frozenset[int], ...]
    step_sizes: tuple[int, ...]

    def to_json(self, rs: RootDatum, type_name: str | None = None) -> dict:
        return {
            "type": type_name or rs.type_name,
            "sigma": list(self.sigma.perm),
            "w_word": [i + 1 for i in self.w.word],
            "chain": [sorted(s) for s in self.chain],
            "step_sizes": list(self.step_sizes),
        }


@dataclass(frozen=True)
class Failure:
    w: WeylElement
    sigma: DiagramAutomorphism
    psi: frozenset[int]
    reason: str


@lru_cache(maxsize=64)
def _sum_tables(rs: RootDatum):
    """(sum_idx, addmask, candidate order) for the positive roots of rs."""
    n = rs.n_pos
    sum_idx = [[-1] * n for _ in range(n)]
    addmask = [0] * n
    for i in range(n):
        vi = rs.roots[i]
        for j in range(i, n):
            s = tuple(a + b for a, b in zip(vi, rs.roots[j]))
            if rs.is_root(s):
                k = rs.root_index(s)
                sum_idx[i][j] = sum_idx[j][i] = k
                addmask[i] |= 1 << j
                addmask[j] |= 1 << i
    order = sorted(range(n), key=lambda i: (rs.height(i), rs.roots[i]))
    return tuple(tuple(r) for r in sum_idx), tuple(addmask), tuple(order)


class _Context:
    """Bitmask tables for one (rs, sigma, w) triple."""

    def __init__(self, rs: RootDatum, sigma: DiagramAutomorphism, w: WeylElement):
        self.rs = rs
        n = rs.n_pos
        self.n_pos = n
        self.full = (1 << n) - 1
        self.sum_idx, self.addmask, self.order = _sum_tables(rs)
        f = twist_perm(rs, w, sigma)
        self.f_pos = f[:n]  # image index (may be >= n_pos, i.e. negative)
        self.phi_w = 0
        for i in range(n):
            if self.f_pos[i] >= n:
                self.phi_w |= 1 << i

    def mask_of(self, roots: Iterable[int]) -> int:
        m = 0
        for i in roots:
            m |= 1 << i
        return m

    def set_of(self, mask: int) -> frozenset[int]:
        return frozenset(i for i in range(self.n_pos) if mask >> i & 1)


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _closed_under_addition(ctx: _Context, mask: int) -> bool:
    for i in _iter_bits(mask):
        for j in _iter_bits(mask & ctx.addmask[i] & ~((1 << i) - 1)):
            if not mask >> ctx.sum_idx[i][j] & 1:
                return False
    return True


def _sums_land_in(ctx: _Context, mask: int, target: int) -> bool:
    for i in _iter_bits(mask):
        for j in _iter_bits(mask & ctx.addmask[i] & ~((1 << i) - 1)):
            if not target >> ctx.sum_idx[i][j] & 1:
                return False
    return True


def _twist_image_inside(ctx: _Context, mask: int, target: int) -> bool:
    for i in _iter_bits(mask):
        im = ctx.f_pos[i]
        if im >= ctx.n_pos or not target >> im & 1:
            return False
    return True


def _step_conditions(ctx: _Context, prev_mask: int, beta: int) -> bool:
    """Conditions for accepting prev ∪ {beta} as the next chain member.

    (a) the new set and its part outside the inversion set are closed under
        addition; (b) sums of pairs from the new set land in the previous set;
        (c) the twisted action maps the part outside the inversion set into
        the new set.  (b) is checked against the previous set: that is what
        the chain re-validation requires of consecutive members.
    """
    psi1 = prev_mask | (1 << beta)
    psi2 = psi1 & ~ctx.phi_w
    if not _sums_land_in(ctx, psi1, prev_mask):
        return False
    if not _closed_under_addition(ctx, psi1):
        return False
    if not _closed_under_addition(ctx, psi2):
        return False
    return _twist_image_inside(ctx, psi2, psi1)


def _step_conditions_incremental(ctx: _Context, prev_mask: int, beta: int) -> bool:
    """Same predicate as _step_conditions when prev_mask itself was accepted.

    Only pairs involving beta can newly violate anything, and the twisted
    image only needs checking at beta; equivalence with the full check is
    exercised by tests on small systems.
    """
    psi1 = prev_mask | (1 << beta)
    psi2 = psi1 & ~ctx.phi_w
    for j in _iter_bits(psi1 & ctx.addmask[beta]):
        k = ctx.sum_idx[beta][j]
        if not prev_mask >> k & 1:
            return False
        # beta itself is never in the inversion set, so the pair lies in the
        # outside part exactly when j does
        if psi2 >> j & 1 and not psi2 >> k & 1:
            return False
    im = ctx.f_pos[beta]
    return im < ctx.n_pos and bool(psi1 >> im & 1)


def find_candidate_for_one_step(
    w: WeylElement, sigma: DiagramAutomorphism, psi: frozenset[int], rs: RootDatum
) -> frozenset[int] | NotFound:
    """First one-root extension of psi satisfying the step conditions, else NotFound."""
    ctx = _Context(rs, sigma, w)
    psi_mask = ctx.mask_of(psi)
    if psi_mask == ctx.full:
        raise ValueError("psi already equals the full positive system")
    if psi_mask & ~ctx.full:
        raise ValueError("psi contains non-positive root indices")
    for beta in ctx.order:
        if psi_mask >> beta & 1:
            continue
        if _step_conditions(ctx, psi_mask, beta):
            return ctx.set_of(psi_mask | (1 << beta))
    return NOT_FOUND


def iterate_steps(
    w: WeylElement,
    sigma: DiagramAutomorphism,
    psi: frozenset[int] | NotFound,
    rs: RootDatum,
    _chain: list[frozenset[int]] | None = None,
) -> bool:
    """Drive the candidate search until the full positive system or a dead end.

    Steps: compute the inversion set; succeed outright if it is everything;
    fail on the NotFound sentinel; succeed if psi is everything; otherwise
    recurse on the next candidate.  Implemented as a loop with an optional
    chain accumulator.  From the second step on, the previous set is known to
    satisfy the step conditions and a pairwise-incremental check (provably
    equivalent, and tested against the full check) is used.
    """
    ctx = _Context(rs, sigma, w)
    if ctx.phi_w == ctx.full:
        return True
    first_pass = True
    while True:
        if psi is NOT_FOUND:
            return False
        psi_mask = ctx.mask_of(psi)
        if psi_mask == ctx.full:
            return True
        check = _step_conditions if first_pass else _step_conditions_incremental
        nxt = NOT_FOUND
        for beta in ctx.order:
            if psi_mask >> beta & 1:
                continue
            if check(ctx, psi_mask, beta):
                nxt = ctx.set_of(psi_mask | (1 << beta))
                break
        if nxt is not NOT_FOUND and _chain is not None:
            _chain.append(nxt)
        psi = nxt
        first_pass = False


# --- independent chain validation -------------------------------------------
#
# The validator shares no condition-checking helpers with the search: it works
# with frozensets of coordinate tuples and re-derives the inversion set and
# the twisted action from the root datum.


def _validate_chain(
    rs: RootDatum,
    sigma: DiagramAutomorphism,
    w: WeylElement,
    chain: list[frozenset[int]],
) -> str | None:
    """Return None if the chain certifies the filtration, else a reason.

    For a strictly increasing chain ending at the full positive system the
    per-level conditions collapse to conditions on the entry level
    lvl(v) = min{i : v in chain[i]}:

      * sums land one level down at every level
            <=> lvl(x+y) < max(lvl(x), lvl(y)) for every positive pair;
      * every level is closed under addition       (implied by the above);
      * every chain[i] minus chain[0] is closed
            <=> x, y outside chain[0] never sum into chain[0];
      * the twisted action maps chain[i] minus chain[0] into chain[i]
            <=> v outside chain[0] has positive image with
                lvl(image) <= lvl(v).

    This re-derivation works on coordinate tuples and shares no membership or
    closure helpers with the search.
    """
    pos_vecs = {rs.roots[i]: i for i in range(rs.n_pos)}
    chain_vecs = [frozenset(rs.roots[i] for i in s) for s in chain]

    f = twist_perm(rs, w, sigma)

    def twist_vec(v):
        return rs.roots[f[rs.root_index(v)]]

    inv = frozenset(v for v in pos_vecs if twist_vec(v) not in pos_vecs)
    if chain_vecs[0] != inv:
        return "chain does not start at the inversion set"
    if chain_vecs[-1] != set(pos_vecs):
        return "chain does not end at the full positive system"
    for a, b in zip(chain_vecs, chain_vecs[1:]):
        if not a < b:
            return "chain is not strictly increasing"

    level: dict[Vec, int] = {}
    for lvl, s in enumerate(chain_vecs):
        for v in s:
            level.setdefault(v, lvl)

    vecs = list(pos_vecs)
    for a in range(len(vecs)):
        x = vecs[a]
        for b in range(a, len(vecs)):
            y = vecs[b]
            z = tuple(p + q for p, q in zip(x, y))
            if z not in pos_vecs:
                continue
            top = max(level[x], level[y])
            if level[z] >= top and top > 0:
                return f"sum {z} enters at level {level[z]}, pair tops at {top}"
            if top == 0 and level[z] > 0:
                return "inversion set not closed under addition"
            if x not in inv and y not in inv and z in inv:
                return "part outside the inversion set not closed"
    for v in vecs:
        if v in inv:
            continue
        im = twist_vec(v)
        if im not in pos_vecs:
            return f"twisted image of {v} is negative outside the inversion set"
        if level[im] > level[v]:
            return f"twisted image of {v} climbs the chain"
    return None


def verify_cross_section(
    rs: RootDatum, sigma: DiagramAutomorphism, w: WeylElement
) -> FiltrationCertificate | Failure:
    """Run the chain search from the inversion set; certify on success.

    The accepted chain is re-validated independently before the certificate is
    emitted; a validation mismatch is a bug, not a Failure, and raises.
    """
    inv = inversion_set(w, sigma, rs)
    chain: list[frozenset[int]] = [inv]
    ok = iterate_steps(w, sigma, inv, rs, _chain=chain)
    if not ok:
        return Failure(w=w, sigma=sigma, psi=chain[-1], reason="no admissible candidate")
    reason = _validate_chain(rs, sigma, w, chain)
    if reason is not None:
        raise AssertionError(f"search accepted an invalid chain: {reason}")
    sizes = tuple(len(b) - len(a) for a, b in zip(chain, chain[1:]))
    return FiltrationCertificate(w=w, sigma=sigma, chain=tuple(chain), step_sizes=sizes)


def sweep_twisted_coxeter(
    rs: RootDatum, sigma: DiagramAutomorphism
) -> list[FiltrationCertificate | Failure]:
    """Certificates for every twisted Coxeter element of (rs, sigma)."""
    return [verify_cross_section(rs, sigma, w) for w in twisted_coxeter_elements(rs, sigma)]
