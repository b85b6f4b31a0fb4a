"""Exact arithmetic: finite field towers, truncated polynomial rings, and
cyclotomic integers.

Field layers are realized as F_p[x]/(f) with f the lexicographically first
monic irreducible of the right degree; elements are integers encoding the
coefficient vector base p.  Each layer carries exponential/logarithm tables
with respect to a fixed multiplicative generator and a Zech logarithm table,
so products and sums are single table lookups.  Embeddings between layers
send the lower defining root to its deterministically first root upstairs;
field embeddings commute with the p-power map automatically, which tests
verify.

No floating point anywhere; characters take values in p-th roots of unity
represented by integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class LocringError(ValueError):
    pass


# --- generic dense polynomials over a coefficient ring ---------------------------
#
# A ring is anything with add/sub/mul/inv methods on opaque elements plus
# attributes zero=0 and one=1 (integer-coded elements everywhere below).


def _deg(v) -> int:
    for i in range(len(v) - 1, -1, -1):
        if v[i]:
            return i
    return -1


def _poly_mul(ring, a, b):
    out = [0] * (len(a) + len(b) - 1 or 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = ring.add(out[i + j], ring.mul(ca, cb))
    return out


def _poly_rem(ring, num, den):
    num = list(num)
    dn = _deg(den)
    if dn < 0:
        raise LocringError("division by the zero polynomial")
    inv_lead = ring.inv(den[dn])
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            f = ring.mul(c, inv_lead)
            for j in range(dn + 1):
                num[i - dn + j] = ring.sub(num[i - dn + j], ring.mul(f, den[j]))
    out = num[:dn]
    return out + [0] * (dn - len(out))


def _poly_pow_mod(ring, a, e, modulus):
    result, base = [1], list(a)
    while e:
        if e & 1:
            result = _poly_rem(ring, _poly_mul(ring, result, base), modulus)
        base = _poly_rem(ring, _poly_mul(ring, base, base), modulus)
        e >>= 1
    return result


def _poly_gcd_degree(ring, a, b) -> int:
    a, b = list(a), list(b)
    while _deg(b) >= 0:
        a = _poly_rem(ring, a, b)
        a, b = b, a
    return _deg(a)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(ring, f, card: int) -> bool:
    """f monic of degree d over a field of the given cardinality."""
    d = _deg(f)
    x = [0, 1]
    xq = _poly_pow_mod(ring, x, card**d, f)
    top = [ring.sub(a, b) for a, b in _padzip(xq, x)]
    if any(top):
        return False
    for ell in _prime_factors(d):
        xe = _poly_pow_mod(ring, x, card ** (d // ell), f)
        diff = [ring.sub(a, b) for a, b in _padzip(xe, x)]
        if not any(diff) or _poly_gcd_degree(ring, diff, f) > 0:
            return False
    return True


def _padzip(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


class _PrimeRing:
    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


def _first_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree d over F_p."""
    if d == 1:
        return (0, 1)
    ring = _PrimeRing(p)
    for code in range(p**d):
        coeffs, c = [], code
        for _ in range(d):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _is_irreducible(ring, f, p):
            return tuple(f)
    raise LocringError("no irreducible polynomial found")


# --- field layers ----------------------------------------------------------------


class FieldLayer:
    """F_{p^d} with integer-coded elements and full arithmetic tables.

    Element k encodes its coefficient vector base p.  ``exp``/``log`` are
    with respect to the first primitive element in code order; ``zech``
    turns sums into log arithmetic: 1 + g^k = g^zech[k], with sentinel -1
    at the k where g^k = -1.
    """

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.size = p**d
        self.modulus = _first_irreducible(p, d)
        self._build_tables()

    def _decode(self, k: int) -> list[int]:
        out = []
        for _ in range(self.d):
            out.append(k % self.p)
            k //= self.p
        return out

    def _encode(self, coeffs) -> int:
        k = 0
        cc = list(coeffs[: self.d]) + [0] * (self.d - len(coeffs))
        for c in reversed(cc):
            k = k * self.p + c % self.p
        return k

    def _raw_mul(self, a: int, b: int) -> int:
        ring = _PrimeRing(self.p)
        prod = _poly_rem(ring, _poly_mul(ring, self._decode(a), self._decode(b)), self.modulus)
        return self._encode(prod)

    def _build_tables(self):
        n = self.size
        target = n - 1
        gen = None
        for cand in range(1 if n == 2 else 2, n):
            x, k = cand, 1
            while x != 1 and k <= target:
                x = self._raw_mul(x, cand)
                k += 1
            if x == 1 and k == target:
                gen = cand
                break
        if gen is None:
            raise LocringError("no multiplicative generator found")
        self.gen = gen
        exp = [1] * target
        for k in range(1, target):
            exp[k] = self._raw_mul(exp[k - 1], gen)
        log = [0] * n
        for k, v in enumerate(exp):
            log[v] = k
        self.exp = exp
        self.log = log
        self.zech = [(log[v] if v else -1) for v in (self.add(1, e) for e in exp)]

    # exact scalar ops --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.d):
            out += (a % p + b % p) % p * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.d):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.size - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise LocringError("inverting zero")
        return self.exp[-self.log[a] % (self.size - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise LocringError("inverting zero")
            return 0 if e else 1
        return self.exp[self.log[a] * e % (self.size - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def scalar_from_int(self, c: int) -> int:
        return c % self.p

    def elements(self):
        return range(self.size)

    def prime_coords(self, a: int) -> tuple[int, ...]:
        return tuple(self._decode(a))


@dataclass(frozen=True)
class Embedding:
    """Field embedding determined by the image of the lower defining root."""

    src: FieldLayer
    dst: FieldLayer
    image_of_x: int

    def __call__(self, a: int) -> int:
        out, xpow = 0, 1
        for c in self.src._decode(a):
            if c:
                out = self.dst.add(out, self.dst.mul(c, xpow))
            xpow = self.dst.mul(xpow, self.image_of_x)
        return out


def embed(src: FieldLayer, dst: FieldLayer) -> Embedding:
    """Deterministic embedding: the defining root maps to its first root upstairs."""
    if dst.d % src.d:
        raise LocringError("no embedding between these layers")
    for cand in range(dst.size):
        acc, xpow = 0, 1
        for c in src.modulus:
            if c:
                acc = dst.add(acc, dst.mul(c, xpow))
            xpow = dst.mul(xpow, cand)
        if acc == 0:
            return Embedding(src=src, dst=dst, image_of_x=cand)
    raise LocringError("modulus has no root upstairs")


class FieldTower:
    """F_p ⊆ ... ⊆ F_{p^d} with explicit embeddings between consecutive layers."""

    def __init__(self, p: int, degrees: tuple[int, ...]):
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise LocringError(f"{p} is not prime")
        degs = [1] + [d for d in degrees if d > 1]
        if any(b % a for a, b in zip(degs, degs[1:])):
            raise LocringError("each layer degree must divide the next")
        self.p = p
        self.layers = [FieldLayer(p, d) for d in degs]
        self.embeddings = [embed(a, b) for a, b in zip(self.layers, self.layers[1:])]

    def layer(self, d: int) -> FieldLayer:
        for lay in self.layers:
            if lay.d == d:
                return lay
        raise LocringError(f"no layer of degree {d}")

    def embed_up(self, a: int, src_d: int, dst_d: int) -> int:
        idx = [lay.d for lay in self.layers]
        i, j = idx.index(src_d), idx.index(dst_d)
        for k in range(i, j):
            a = self.embeddings[k](a)
        return a


def tower_build(p: int, e: int, extensions: tuple[int, ...] = ()) -> FieldTower:
    """Tower with layers of absolute degrees e and the given extensions of it."""
    degs = (e,) + tuple(e * k for k in extensions)
    return FieldTower(p, degs)


def relative_trace(layer: FieldLayer, sub_degree: int, a: int) -> int:
    """Trace to the subfield of the given absolute degree."""
    if layer.d % sub_degree:
        raise LocringError("no such subfield")
    q = layer.p**sub_degree
    out, x = 0, a
    for _ in range(layer.d // sub_degree):
        out = layer.add(out, x)
        x = layer.pow(x, q)
    return out


def relative_norm(layer: FieldLayer, sub_degree: int, a: int) -> int:
    if layer.d % sub_degree:
        raise LocringError("no such subfield")
    q = layer.p**sub_degree
    out, x = 1, a
    for _ in range(layer.d // sub_degree):
        out = layer.mul(out, x)
        x = layer.pow(x, q)
    return out


def absolute_trace_table(layer: FieldLayer) -> tuple[int, ...]:
    """Trace to the prime field, as plain integers 0..p-1."""
    return tuple(relative_trace(layer, 1, a) for a in layer.elements())


# --- degree-k extension of a layer (the solution field for point counting) -------


class ExtensionField:
    """F_{base^deg} as polynomials over a tabulated base layer.

    Elements are integers coding digit vectors base ``base.size``.  Supports
    what point counting needs: addition, multiplication, base-scalar action,
    p-power Frobenius maps, and enumeration.  The defining polynomial is the
    first monic irreducible over the base in code order.
    """

    def __init__(self, base: FieldLayer, deg: int):
        self.base = base
        self.deg = deg
        self.size = base.size**deg
        self.modulus = self._find_modulus()
        self._pow_tables: dict[int, list[int]] = {}

    def _find_modulus(self) -> tuple[int, ...]:
        for code in range(self.size):
            f = self._decode(code) + [1]
            if _is_irreducible(self.base, f, self.base.size):
                return tuple(f)
        raise LocringError("no irreducible polynomial over the base layer")

    def _decode(self, k: int) -> list[int]:
        out = []
        for _ in range(self.deg):
            out.append(k % self.base.size)
            k //= self.base.size
        return out

    def _encode(self, coeffs) -> int:
        k = 0
        cc = list(coeffs[: self.deg]) + [0] * (self.deg - len(coeffs))
        for c in reversed(cc):
            k = k * self.base.size + c
        return k

    def add(self, a: int, b: int) -> int:
        da, db = self._decode(a), self._decode(b)
        return self._encode([self.base.add(x, y) for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        da, db = self._decode(a), self._decode(b)
        return self._encode([self.base.sub(x, y) for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._encode([self.base.neg(x) for x in self._decode(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        prod = _poly_rem(
            self.base, _poly_mul(self.base, self._decode(a), self._decode(b)), self.modulus
        )
        return self._encode(prod)

    def scalar_mul(self, s: int, a: int) -> int:
        if s == 0 or a == 0:
            return 0
        return self._encode([self.base.mul(s, c) for c in self._decode(a)])

    def from_base(self, s: int) -> int:
        return self._encode([s])

    def to_base(self, a: int) -> int | None:
        d = self._decode(a)
        return d[0] if not any(d[1:]) else None

    def _basis_power_images(self, e: int) -> list[int]:
        if e not in self._pow_tables:
            imgs = []
            for i in range(self.deg):
                xi = [0] * i + [1]
                imgs.append(self._encode(_poly_pow_mod(self.base, xi, e, self.modulus)))
            self._pow_tables[e] = imgs
        return self._pow_tables[e]

    def frob_power(self, a: int, e: int) -> int:
        """a^e for e a power of p, via semilinearity: (sum c_i x^i)^e = sum c_i^e (x^i)^e."""
        imgs = self._basis_power_images(e)
        out = 0
        for c, img in zip(self._decode(a), imgs):
            if c:
                out = self.add(out, self.scalar_mul(self.base.pow(c, e), img))
        return out

    def elements(self):
        return range(self.size)


# --- truncated polynomial rings ---------------------------------------------------


@dataclass(frozen=True)
class TruncElem:
    """Element of layer[pi]/pi^r with exact coefficient arithmetic."""

    coeffs: tuple[int, ...]
    layer: FieldLayer

    @property
    def level(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "TruncElem"):
        if self.layer is not other.layer or self.level != other.level:
            raise LocringError("operands from different truncated rings")

    def __add__(self, other: "TruncElem") -> "TruncElem":
        self._check(other)
        lay = self.layer
        return TruncElem(
            tuple(lay.add(a, b) for a, b in zip(self.coeffs, other.coeffs)), lay
        )

    def __neg__(self) -> "TruncElem":
        return TruncElem(tuple(self.layer.neg(a) for a in self.coeffs), self.layer)

    def __sub__(self, other: "TruncElem") -> "TruncElem":
        return self + (-other)

    def __mul__(self, other: "TruncElem") -> "TruncElem":
        self._check(other)
        lay, r = self.layer, self.level
        out = [0] * r
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b and i + j < r:
                        out[i + j] = lay.add(out[i + j], lay.mul(a, b))
        return TruncElem(tuple(out), lay)

    def inverse(self) -> "TruncElem":
        """Inverse of a unit (nonzero constant term), by the geometric series."""
        lay, r = self.layer, self.level
        a0 = self.coeffs[0]
        if a0 == 0:
            raise LocringError("not a unit in the truncated ring")
        unit = trunc_scalar(lay.inv(a0), r, lay)
        nil = trunc_one(r, lay) - unit * self
        out, power = trunc_one(r, lay), nil
        for _ in range(1, r):
            out = out + power
            power = power * nil
        return out * unit

    def frobenius(self, e: int = 1) -> "TruncElem":
        """Coefficientwise p^e-power."""
        lay = self.layer
        return TruncElem(tuple(lay.pow(c, lay.p**e) for c in self.coeffs), lay)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def trunc_zero(r: int, layer: FieldLayer) -> TruncElem:
    return TruncElem((0,) * r, layer)


def trunc_one(r: int, layer: FieldLayer) -> TruncElem:
    return TruncElem((1,) + (0,) * (r - 1), layer)


def trunc_scalar(a: int, r: int, layer: FieldLayer) -> TruncElem:
    return TruncElem((a,) + (0,) * (r - 1), layer)


# --- cyclotomic integers -----------------------------------------------------------


@dataclass(frozen=True)
class CycValue:
    """Element of Q * Z[zeta_p]: a rational scalar times an integer vector.

    The vector has length p-1 (coordinates of 1, zeta, ..., zeta^(p-2)); the
    relation 1 + zeta + ... + zeta^(p-1) = 0 is applied canonically by
    clearing the top coordinate.
    """

    p: int
    scalar: Fraction
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.p - 1:
            raise LocringError("coordinate vector has the wrong length")

    @staticmethod
    def zero(p: int) -> "CycValue":
        return CycValue(p, Fraction(0), (0,) * (p - 1))

    @staticmethod
    def from_int(p: int, n: int) -> "CycValue":
        return CycValue(p, Fraction(1), (n,) + (0,) * (p - 2))

    @staticmethod
    def root_of_unity(p: int, k: int) -> "CycValue":
        """zeta_p^k."""
        k %= p
        if k == p - 1:
            return CycValue(p, Fraction(1), tuple(-1 for _ in range(p - 1)))
        v = [0] * (p - 1)
        v[k] = 1
        return CycValue(p, Fraction(1), tuple(v))

    def _full(self) -> list[Fraction]:
        return [self.scalar * c for c in self.coords] + [Fraction(0)]

    @staticmethod
    def _normalize(p: int, full: list[Fraction]) -> "CycValue":
        top = full[p - 1]
        vec = [c - top for c in full[: p - 1]]
        den = 1
        for c in vec:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in vec]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if g == 0:
            return CycValue.zero(p)
        return CycValue(p, Fraction(g, den), tuple(c // g for c in ints))

    def _check(self, other: "CycValue"):
        if self.p != other.p:
            raise LocringError("mixed cyclotomic orders")

    def __add__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        return CycValue._normalize(
            self.p, [x + y for x, y in zip(self._full(), other._full())]
        )

    def __neg__(self) -> "CycValue":
        return CycValue(self.p, -self.scalar, self.coords)

    def __sub__(self, other: "CycValue") -> "CycValue":
        return self + (-other)

    def __mul__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        p = self.p
        conv = [0] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        conv[(i + j) % p] += a * b
        s = self.scalar * other.scalar
        return CycValue._normalize(p, [s * c for c in conv])

    def conjugate(self) -> "CycValue":
        """zeta -> zeta^(-1)."""
        p = self.p
        full = self._full()
        out = [Fraction(0)] * p
        for i, c in enumerate(full):
            out[(-i) % p] = c
        return CycValue._normalize(p, out)

    def abs_square(self) -> "CycValue":
        return self * self.conjugate()

    def divide_exact(self, n: int) -> "CycValue":
        """Divide by a nonzero integer, requiring an integral result."""
        if n == 0:
            raise LocringError("division by zero")
        out = CycValue(self.p, self.scalar / n, self.coords)
        if not out.is_integral():
            raise LocringError(f"inexact division by {n}")
        return out

    def scale(self, c: Fraction | int) -> "CycValue":
        c = Fraction(c)
        if c == 0:
            return CycValue.zero(self.p)
        return CycValue(self.p, self.scalar * c, self.coords)

    def is_integral(self) -> bool:
        return all((self.scalar * c).denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return self.scalar == 0 or not any(self.coords)

    def as_rational(self) -> Fraction:
        """The value if it is rational, else error."""
        full = self._full()
        if any(c != full[1] for c in full[1:]):
            raise LocringError("value is not rational")
        return full[0] - full[1]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "scalar": [self.scalar.numerator, self.scalar.denominator],
            "coords": list(self.coords),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycValue):
            return NotImplemented
        if self.p != other.p:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        n = CycValue._normalize(self.p, self._full())
        return hash((n.p, n.scalar, n.coords))


def cyc_sum(p: int, values) -> CycValue:
    out = CycValue.zero(p)
    for v in values:
        out = out + v
    return out
