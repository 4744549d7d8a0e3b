"""Exact scalar arithmetic over the rationals, finite fields GF(p^k) and the
rational quaternions, plus matrix rank over any of these division rings.

All values are immutable and all operations are pure functions, so everything
here is safe to share between worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rat = Fraction


# ---------------------------------------------------------------------------
# Rational helpers.  Fraction already stores values in lowest terms with a
# positive denominator, so these are thin wrappers kept for a uniform surface.
# ---------------------------------------------------------------------------

def rat(num, den=1) -> Fraction:
    return Fraction(num, den)


def rat_add(a, b) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_mul(a, b) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a, b) -> Fraction:
    if b == 0:
        raise ZeroDivisionError("rational division by zero")
    return Fraction(a) / Fraction(b)


def rat_cmp(a, b) -> int:
    """-1, 0 or 1 according to the exact order of a and b."""
    a, b = Fraction(a), Fraction(b)
    if a < b:
        return -1
    return 1 if a > b else 0


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over Z_p.  Polynomials are tuples of coefficients in
# ascending degree order; the zero polynomial is the empty tuple.
# ---------------------------------------------------------------------------

def _poly_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return tuple(c)


def _poly_mod(a, m, p):
    """Remainder of a divided by the monic polynomial m, coefficients mod p."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - 1 - dm
        lead = a[-1]
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim([x % p for x in a])


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_is_irreducible(m, p):
    """Trial division by all monic polynomials of degree <= deg(m)/2."""
    deg = len(m) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for idx in range(p ** d):
            coeffs = []
            t = idx
            for _ in range(d):
                coeffs.append(t % p)
                t //= p
            div = tuple(coeffs) + (1,)
            if not _poly_mod(m, div, p):
                return False
    return True


def default_modulus(p: int, k: int):
    """Smallest monic irreducible of degree k, ordered by the base-p encoding
    of the non-leading coefficients.  Deterministic, so GF(p^k) is
    reproducible across runs."""
    if k == 1:
        return (0, 1)
    for idx in range(p ** k):
        coeffs = []
        t = idx
        for _ in range(k):
            coeffs.append(t % p)
            t //= p
        m = tuple(coeffs) + (1,)
        if _poly_is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # unreachable


class GF:
    """The finite field GF(p^k).

    Elements are coefficient tuples of length k (ascending degree) reduced
    mod p.  The instance doubles as the "ring tag" consumed by mat_rank.
    """

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, k)
        else:
            modulus = _poly_trim(tuple(c % p for c in modulus))
            if len(modulus) - 1 != k or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not _poly_is_irreducible(modulus, p):
                raise ValueError("modulus is reducible")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.zero = (0,) * k
        self.one = ((1,) + (0,) * (k - 1)) if k else ()

    @property
    def order(self) -> int:
        return self.p ** self.k

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return (isinstance(other, GF) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # -- element construction ------------------------------------------------

    def element(self, coeffs) -> tuple:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients")
        return coeffs + (0,) * (self.k - len(coeffs))

    def from_int(self, a: int) -> tuple:
        """Embed an integer via the prime subfield."""
        return self.element((a,))

    def from_index(self, idx: int) -> tuple:
        """Element number idx in base-p coefficient order."""
        coeffs = []
        for _ in range(self.k):
            coeffs.append(idx % self.p)
            idx //= self.p
        return tuple(coeffs)

    def elements(self):
        for idx in range(self.order):
            yield self.from_index(idx)

    # -- arithmetic ----------------------------------------------------------

    def add(self, x, y):
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x, y):
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def neg(self, x):
        p = self.p
        return tuple((-a) % p for a in x)

    def mul(self, x, y):
        if self.k == 1:
            return ((x[0] * y[0]) % self.p,)
        prod = _poly_mod(_poly_mul(x, y, self.p), self.modulus, self.p)
        return prod + (0,) * (self.k - len(prod))

    def is_zero(self, x) -> bool:
        return not any(x)

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero in a finite field")
        # x^(q-2) by square-and-multiply; q <= 2^16 keeps this cheap
        return self.pow(x, self.order - 2)

    def pow(self, x, e: int):
        out = self.one
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def sqrt_of_minus_one(self):
        """The first element i (in from_index order) with i*i = -1."""
        minus_one = self.neg(self.one)
        for x in self.elements():
            if self.mul(x, x) == minus_one:
                return x
        raise ValueError(f"-1 has no square root in {self!r}")


def field_make(p: int, k: int = 1, modulus=None) -> GF:
    return GF(p, k, modulus)


# ---------------------------------------------------------------------------
# Rational quaternions.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    """a + b*i + c*j + d*k with exact rational coordinates."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def of(a=0, b=0, c=0, d=0) -> "Quaternion":
        return Quaternion(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    def __add__(self, o):
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> Fraction:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero quaternion")
        co = self.conjugate()
        return Quaternion(co.a / n, co.b / n, co.c / n, co.d / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def __repr__(self):
        return f"Quat({self.a},{self.b},{self.c},{self.d})"


QUAT_ZERO = Quaternion.of(0)
QUAT_ONE = Quaternion.of(1)
QUAT_I = Quaternion.of(0, 1)
QUAT_J = Quaternion.of(0, 0, 1)
QUAT_K = Quaternion.of(0, 0, 0, 1)


class RationalRing:
    """Ring tag for exact rationals."""

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def neg(x):
        return -x

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def inv(x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    @staticmethod
    def is_zero(x):
        return x == 0

    @staticmethod
    def from_int(a):
        return Fraction(a)

    def __repr__(self):
        return "Q"


class QuaternionRing:
    """Ring tag for the rational quaternions (a division ring)."""

    zero = QUAT_ZERO
    one = QUAT_ONE

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def neg(x):
        return -x

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def inv(x):
        return x.inverse()

    @staticmethod
    def is_zero(x):
        return x.is_zero()

    @staticmethod
    def from_int(a):
        return Quaternion.of(a)

    def __repr__(self):
        return "H"


RING_Q = RationalRing()
RING_H = QuaternionRing()


# ---------------------------------------------------------------------------
# Matrices over a division ring.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingMatrix:
    """Dense matrix with all entries in one ring."""

    ring: object
    rows: int
    cols: int
    entries: tuple  # row-major

    @staticmethod
    def from_rows(ring, rows) -> "RingMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return RingMatrix(ring, 0, 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        flat = tuple(e for r in rows for e in r)
        return RingMatrix(ring, len(rows), ncols, flat)

    def at(self, i, j):
        return self.entries[i * self.cols + j]

    def row_list(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column_submatrix(self, col_indices) -> "RingMatrix":
        rows = []
        for i in range(self.rows):
            rows.append([self.at(i, j) for j in col_indices])
        return RingMatrix.from_rows(self.ring, rows)


def mat_rank(ring, m) -> int:
    """Left row rank by Gaussian elimination.

    Row operations only ever multiply rows by ring elements on the left, so
    the result is the maximal number of left-linearly-independent rows.  Over
    a division ring this equals the right column rank, and over a commutative
    field it is the ordinary matrix rank.
    """
    if isinstance(m, RingMatrix):
        rows = m.row_list()
    else:
        rows = [list(r) for r in m]
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    top = 0
    for col in range(ncols):
        piv = None
        for r in range(top, nrows):
            if not ring.is_zero(rows[r][col]):
                piv = r
                break
        if piv is None:
            continue
        rows[top], rows[piv] = rows[piv], rows[top]
        inv = ring.inv(rows[top][col])
        rows[top] = [ring.mul(inv, e) for e in rows[top]]
        for r in range(nrows):
            if r != top and not ring.is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [ring.sub(e, ring.mul(f, pe))
                           for e, pe in zip(rows[r], rows[top])]
        top += 1
        rank += 1
        if top == nrows:
            break
    return rank
