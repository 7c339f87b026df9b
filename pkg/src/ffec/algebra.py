"""Exact arithmetic over finite fields, the polynomial rings F_q[t], the
rational function fields F_q(t), and the places of the projective line.

Conventions used everywhere:

- polynomial coefficients are stored low degree first,
- the degree of the zero polynomial is -inf (never -1),
- the valuation of 0 at any place is +inf,
- elements, polynomials, and places are ordered by reading coefficient
  sequences high degree first, with 0 < 1 < ... < p-1 in the prime field.
"""

from __future__ import annotations

import functools
import itertools
import math
import random

import numpy as np

NEG_INF = float("-inf")
POS_INF = float("inf")

# Hard cap on the size of any finite field that gets enumerated (point
# counts, discrete-log tables, generator searches).
PLACE_CAP = 1 << 16

# Polynomials above this length switch to the packed-integer fast paths.
_BIG = 64


class FFECError(Exception):
    """Base class for all library errors."""


class CapError(FFECError):
    """A finite field was too large for an enumeration-based operation."""


class ParseError(FFECError):
    """Malformed textual input."""


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _int_factor(n: int) -> dict[int, int]:
    """Factor a positive integer by trial division."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _moebius(n: int) -> int:
    mu = 1
    for _, e in _int_factor(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu if n >= 1 else 0


# ---------------------------------------------------------------------------
# finite fields


class FqElem:
    """An element of a finite field.  Instances are interned per field, so
    equal elements of the same field are the same object."""

    __slots__ = ("field", "val", "_hash")

    def __init__(self, field: "Fq", val, h: int):
        self.field = field
        self.val = val
        self._hash = h

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, FqElem):
            return self.field is other.field and self.val == other.val
        if isinstance(other, int):
            return self is self.field.scalar(other)
        return NotImplemented

    def __bool__(self):
        return self is not self.field.zero

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._make(self.field._vadd(self.val, o.val))

    __radd__ = __add__

    def __neg__(self):
        return self.field._make(self.field._vneg(self.val))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._make(self.field._vadd(self.val, self.field._vneg(o.val)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._make(self.field._vmul(self.val, o.val))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of 0")
        return self ** (self.field.q - 2)

    def __repr__(self):
        return format_element(self)


class Fq:
    """A finite field: either a prime field F_p or an extension of another
    Fq instance by a monic irreducible modulus.

    Do not call the constructor directly; use field_create(p, e) for the
    named fields and Place.residue_field() for residue fields.
    """

    _ids = itertools.count()

    def __init__(self, p: int | None = None, *, base: "Fq" = None, modulus=None):
        self._id = next(Fq._ids)
        self._intern: dict = {}
        self._gen_cache = None
        self._zech_cache = None
        self._basis_tr = None
        if base is None:
            if p is None or not _is_prime_int(p):
                raise ValueError("characteristic must be prime")
            self.p = p
            self.base = None
            self.deg = 1
            self.e = 1
            self.q = p
            self.modulus = None
            self.zero = self._make(0)
            self.one = self._make(1)
            self.gen = None
        else:
            # modulus: tuple of base elements, low degree first, monic
            if modulus is None or len(modulus) < 2 or modulus[-1] is not base.one:
                raise ValueError("modulus must be monic of degree >= 1")
            self.p = base.p
            self.base = base
            self.modulus = tuple(modulus)
            self.deg = len(modulus) - 1
            self.e = base.e * self.deg
            self.q = base.q ** self.deg
            d = self.deg
            # rows for t^k mod modulus, k = d .. 2d-2
            row = tuple(-c for c in modulus[:-1])
            rows = [row]
            for _ in range(d - 2):
                shifted = (base.zero,) + rows[-1][:-1]
                top = rows[-1][-1]
                if top:
                    shifted = tuple(s + top * r for s, r in zip(shifted, row))
                rows.append(shifted)
            self._red = rows
            self.zero = self._make((base.zero,) * d)
            one = (base.one,) + (base.zero,) * (d - 1)
            self.one = self._make(one)
            if d >= 2:
                g = (base.zero, base.one) + (base.zero,) * (d - 2)
                self.gen = self._make(g)
            else:
                self.gen = self._make((base.one,))

    def __repr__(self):
        return f"F_{self.q}"

    def __hash__(self):
        return self._id

    def __eq__(self, other):
        return self is other

    def _make(self, val) -> FqElem:
        el = self._intern.get(val)
        if el is None:
            el = FqElem(self, val, hash((self._id, val)))
            self._intern[val] = el
        return el

    # value-level arithmetic

    def _vadd(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return tuple(x + y for x, y in zip(a, b))

    def _vneg(self, a):
        if self.base is None:
            return -a % self.p
        return tuple(-x for x in a)

    def _vmul(self, a, b):
        if self.base is None:
            return a * b % self.p
        d = self.deg
        if d == 1:
            # modulus t + m0: t = -m0, but elements are constants anyway
            return (a[0] * b[0],)
        z = self.base.zero
        conv = [z] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] = conv[i + j] + x * y
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = self._red[k - d]
                out = [o + c * r for o, r in zip(out, row)]
        return tuple(out)

    # constructors

    def scalar(self, n: int) -> FqElem:
        """The image of the integer n under Z -> F_q."""
        if self.base is None:
            return self._make(n % self.p)
        c = self.base.scalar(n)
        return self._make((c,) + (self.base.zero,) * (self.deg - 1))

    def element(self, coeffs) -> FqElem:
        """Build an element from base-field coefficients, low degree first."""
        if self.base is None:
            raise ValueError("prime field has no coefficient structure")
        cs = []
        for c in coeffs:
            if isinstance(c, int):
                c = self.base.scalar(c)
            elif not (isinstance(c, FqElem) and c.field is self.base):
                raise ValueError("coefficients must lie in the base field")
            cs.append(c)
        if len(cs) > self.deg:
            raise ValueError("too many coefficients")
        cs += [self.base.zero] * (self.deg - len(cs))
        return self._make(tuple(cs))

    # enumeration and ordering

    def element_key(self, x: FqElem):
        """Total-order key: coefficients flattened high degree first."""
        if self.base is None:
            return (x.val,)
        out = []
        for c in reversed(x.val):
            out.extend(self.base.element_key(c))
        return tuple(out)

    def elements(self):
        """All field elements in canonical order.  Capped."""
        if self.q > PLACE_CAP:
            raise CapError(f"cannot enumerate F_{self.q}: above cap {PLACE_CAP}")
        if self.base is None:
            for v in range(self.p):
                yield self._make(v)
        else:
            base_elems = list(self.base.elements())
            for combo in itertools.product(base_elems, repeat=self.deg):
                yield self._make(tuple(reversed(combo)))

    def _flatten(self, x: FqElem):
        """Coefficients over F_p, low degree first, as ints of length e."""
        if self.base is None:
            return (x.val,)
        out = []
        for c in x.val:
            out.extend(self.base._flatten(c))
        return tuple(out)

    def _basis(self):
        """Elements whose flattened coordinates are the unit vectors."""
        if self.base is None:
            return [self.one]
        out = []
        sub = self.base._basis()
        z = self.base.zero
        for i in range(self.deg):
            for b in sub:
                val = tuple(b if j == i else z for j in range(self.deg))
                out.append(self._make(val))
        return out

    def absolute_trace(self, x: FqElem) -> int:
        """Trace down to F_p, returned as an integer in [0, p)."""
        if self._basis_tr is None:
            trs = []
            for b in self._basis():
                s = self.zero
                y = b
                for _ in range(self.e):
                    s = s + y
                    y = y ** self.p
                trs.append(self._prime_int(s))
            self._basis_tr = trs
        flat = self._flatten(x)
        return sum(c * tr for c, tr in zip(flat, self._basis_tr)) % self.p

    def _prime_int(self, x: FqElem) -> int:
        flat = self._flatten(x)
        if any(flat[1:]):
            raise ValueError("element not in the prime subfield")
        return flat[0]

    # special maps

    def frobenius(self, x: FqElem, k: int = 1) -> FqElem:
        return x ** (self.p ** k)

    def pth_root(self, x: FqElem) -> FqElem:
        """The unique p-th root in characteristic p."""
        return x ** (self.q // self.p)

    def sqrt(self, x: FqElem):
        """A square root of x, or None if x is not a square.

        In characteristic 2 every element has a unique square root.  In odd
        characteristic the returned root is deterministic.
        """
        if not x:
            return self.zero
        if self.p == 2:
            return x ** (self.q // 2)
        if x ** ((self.q - 1) // 2) is not self.one:
            return None
        if self.q % 4 == 3:
            return x ** ((self.q + 1) // 4)
        # Tonelli-Shanks with the least non-residue as auxiliary element
        q1 = self.q - 1
        s = 0
        while q1 % 2 == 0:
            q1 //= 2
            s += 1
        z = None
        for cand in self.elements():
            if cand and cand ** ((self.q - 1) // 2) is not self.one:
                z = cand
                break
        m = s
        c = z ** q1
        t = x ** q1
        r = x ** ((q1 + 1) // 2)
        while t is not self.one:
            i = 0
            tt = t
            while tt is not self.one:
                tt = tt * tt
                i += 1
            b = c ** (2 ** (m - i - 1))
            m = i
            c = b * b
            t = t * c
            r = r * b
        return r

    def element_order(self, x: FqElem) -> int:
        if not x:
            raise ValueError("0 has no multiplicative order")
        n = self.q - 1
        for ell, e in _int_factor(n).items():
            for _ in range(e):
                if x ** (n // ell) is self.one:
                    n //= ell
                else:
                    break
        return n

    def canonical_generator(self) -> FqElem:
        """The least multiplicative generator in canonical element order."""
        if self._gen_cache is None:
            n = self.q - 1
            ells = list(_int_factor(n))
            for cand in self.elements():
                if not cand:
                    continue
                if all(cand ** (n // ell) is not self.one for ell in ells):
                    self._gen_cache = cand
                    break
        return self._gen_cache

    def zech(self) -> "ZechTable":
        if self._zech_cache is None:
            self._zech_cache = ZechTable(self)
        return self._zech_cache


def field_create(p: int, e: int = 1) -> Fq:
    """The field with p^e elements.  Pure function of (p, e): repeated calls
    return the same object, built on the lexicographically least monic
    irreducible modulus of degree e over F_p.
    """
    return _field_create(int(p), int(e))


@functools.lru_cache(maxsize=None)
def _field_create(p: int, e: int) -> Fq:
    if not _is_prime_int(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** e > PLACE_CAP:
        raise CapError(f"q = {p}^{e} exceeds the cap {PLACE_CAP}")
    if e == 1:
        return Fq(p)
    base = _field_create(p, 1)
    for combo in itertools.product(range(p), repeat=e):
        # combo holds the coefficients of t^{e-1} .. t^0
        coeffs = [base.scalar(c) for c in reversed(combo)] + [base.one]
        f = Poly(base, coeffs)
        if is_irreducible(f):
            return Fq(base=base, modulus=tuple(coeffs))
    raise FFECError("unreachable: no irreducible modulus found")


class ZechTable:
    """Discrete logarithm and Zech tables for a small field.  Supports the
    fast point-counting loops: addition of powers of the generator stays in
    exponent arithmetic."""

    def __init__(self, field: Fq):
        if field.q > PLACE_CAP:
            raise CapError(f"F_{field.q} above the counting cap {PLACE_CAP}")
        self.field = field
        g = field.canonical_generator()
        self.g = g
        M = field.q - 1
        exp = [None] * M
        log: dict = {}
        x = field.one
        for k in range(M):
            exp[k] = x
            log[x] = k
            x = x * g
        one = field.one
        zech = [-1] * M
        for k in range(M):
            s = exp[k] + one
            zech[k] = log.get(s, -1)
        self.exp = exp
        self.log = log
        self.zech = zech
        if field.p == 2:
            self.tracebit = [field.absolute_trace(v) for v in exp]
        else:
            self.tracebit = None


def count_ws_points(field: Fq, a1, a2, a3, a4, a6) -> int:
    """Number of projective points of the Weierstrass curve with the given
    coefficients over the given field (including the point at infinity).

    The curve need not be smooth; singular points are counted like any
    other.  Enumeration is exponent-based, so the field size is capped.
    """
    zt = field.zech()
    M = field.q - 1
    Z = zt.zech
    log = zt.log
    tb = zt.tracebit

    def lg(c):
        return log[c] if c else None

    la1, la2, la3, la4, la6 = lg(a1), lg(a2), lg(a3), lg(a4), lg(a6)

    def zadd(i, j):
        if i is None:
            return j
        if j is None:
            return i
        z = Z[(j - i) % M]
        return None if z < 0 else (i + z) % M

    char2 = field.p == 2
    if not char2:
        linv4 = log[field.scalar(4).inverse()]

    total = 1
    # x = 0 and x = g^k handled uniformly via (ef, eh) exponents
    for k in range(-1, M):
        if k < 0:
            ef = la6
            eh = la3
        else:
            ef = 3 * k % M
            if la2 is not None:
                ef = zadd(ef, (la2 + 2 * k) % M)
            if la4 is not None:
                ef = zadd(ef, (la4 + k) % M)
            ef = zadd(ef, la6)
            eh = la3 if la1 is None else zadd((la1 + k) % M, la3)
        if char2:
            if eh is None:
                total += 1
            elif ef is None:
                total += 2
            else:
                total += 2 if tb[(ef - 2 * eh) % M] == 0 else 0
        else:
            # y^2 + hy = f  <=>  (y + h/2)^2 = f + h^2/4
            if eh is None:
                ed = ef
            else:
                ed = zadd(ef, (2 * eh + linv4) % M)
            if ed is None:
                total += 1
            else:
                total += 2 if ed % 2 == 0 else 0
    return total


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """A polynomial over an Fq, coefficients low degree first with no
    trailing zeros.  The zero polynomial has coeffs == () and degree -inf."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Fq, coeffs=()):
        cs = []
        for c in coeffs:
            if isinstance(c, int):
                c = field.scalar(c)
            elif not (isinstance(c, FqElem) and c.field is field):
                raise ValueError("coefficient in the wrong field")
            cs.append(c)
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(field: Fq) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field: Fq) -> "Poly":
        return Poly(field, (field.one,))

    @staticmethod
    def x(field: Fq) -> "Poly":
        return Poly(field, (field.zero, field.one))

    @staticmethod
    def const(c: FqElem) -> "Poly":
        return Poly(c.field, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] is self.field.one

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return hash((self.field._id, self.coeffs))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (FqElem, int)):
            return self == Poly(self.field, (other,))
        return NotImplemented

    def lc(self) -> FqElem:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> FqElem:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (FqElem, int)):
            return Poly(self.field, (other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        if len(a) == 1:
            c = a[0]
            return Poly(self.field, tuple(c * y for y in b))
        if len(b) == 1:
            c = b[0]
            return Poly(self.field, tuple(x * c for x in a))
        if max(len(a), len(b)) >= 32:
            fast = _fast_mul(self.field, a, b)
            if fast is not None:
                return Poly(self.field, fast)
        z = self.field.zero
        out = [z] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        if len(self.coeffs) >= _BIG:
            fast = _fast_divmod(self.field, self.coeffs, o.coeffs)
            if fast is not None:
                q, r = fast
                return Poly(self.field, q), Poly(self.field, r)
        dq = len(self.coeffs) - len(o.coeffs)
        if dq < 0:
            return Poly.zero(self.field), self
        inv = o.coeffs[-1].inverse()
        rem = list(self.coeffs)
        lo = len(o.coeffs)
        quo = [self.field.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + lo - 1]
            if c:
                f = c * inv
                quo[i] = f
                for j in range(lo - 1):
                    rem[i + j] = rem[i + j] - f * o.coeffs[j]
                rem[i + lo - 1] = self.field.zero
        return Poly(self.field, quo), Poly(self.field, rem[: lo - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if not self:
            return self
        c = self.coeffs[-1]
        if c is self.field.one:
            return self
        inv = c.inverse()
        return Poly(self.field, tuple(x * inv for x in self.coeffs))

    def gcd(self, other) -> "Poly":
        o = self._coerce(other)
        a, b = self, o
        if max(len(a.coeffs), len(b.coeffs)) >= _BIG:
            if self.field.e <= 1:
                fast = _np_gcd_prime(self.field, a.coeffs, b.coeffs)
            else:
                fast = _np_gcd_quad(self.field, a.coeffs, b.coeffs)
            if fast is not None:
                return Poly(self.field, fast).monic()
        while b:
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        f = self.field
        return Poly(f, tuple(f.scalar(k) * c for k, c in enumerate(self.coeffs) if k))

    def evaluate(self, x: FqElem) -> FqElem:
        acc = self.field.zero if self.field is x.field else x.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, d: int) -> "Poly":
        """Substitute t -> t^d."""
        if d < 1:
            raise ValueError("power must be >= 1")
        if not self.coeffs:
            return self
        z = self.field.zero
        out = [z] * ((len(self.coeffs) - 1) * d + 1)
        for i, c in enumerate(self.coeffs):
            out[i * d] = c
        return Poly(self.field, out)

    def scale_var(self, c: FqElem) -> "Poly":
        """Substitute t -> c*t."""
        out = []
        ck = self.field.one
        for a in self.coeffs:
            out.append(a * ck)
            ck = ck * c
        return Poly(self.field, out)

    def reverse(self, n: int) -> "Poly":
        """Coefficients reversed relative to fixed length n+1, so that
        reverse(f, n)(s) = s^n f(1/s) for deg f <= n."""
        if self.degree > n:
            raise ValueError("reversal length too small")
        cs = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return Poly(self.field, tuple(reversed(cs)))

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k."""
        if not self.coeffs or k == 0:
            return self
        return Poly(self.field, (self.field.zero,) * k + self.coeffs)

    def map_coeffs(self, fn, field: Fq | None = None) -> "Poly":
        return Poly(field or self.field, tuple(fn(c) for c in self.coeffs))

    def key(self):
        """Canonical ordering key: degree, then coefficients high first."""
        f = self.field
        flat = []
        for c in reversed(self.coeffs):
            flat.extend(f.element_key(c))
        return (len(self.coeffs), tuple(flat))

    def __repr__(self):
        return format_poly(self, "t")


def _fast_mul(field: Fq, a, b):
    """Packed-integer multiplication.  Prime fields use Kronecker
    substitution; quadratic extensions split into three prime products.
    Returns a coefficient list, or None if the field is not supported."""
    if field.base is None:
        av = [c.val for c in a]
        bv = [c.val for c in b]
        out = _kron_mul(field.p, av, bv)
        return [field._make(v) for v in out]
    if field.deg == 2 and field.base.base is None:
        p = field.p
        m0 = field.modulus[0].val
        m1 = field.modulus[1].val
        a0 = [c.val[0].val for c in a]
        a1 = [c.val[1].val for c in a]
        b0 = [c.val[0].val for c in b]
        b1 = [c.val[1].val for c in b]
        p00 = _kron_mul(p, a0, b0)
        p11 = _kron_mul(p, a1, b1)
        s0 = [(x + y) % p for x, y in zip(a0, a1)]
        s1 = [(x + y) % p for x, y in zip(b0, b1)]
        pss = _kron_mul(p, s0, s1)
        base = field.base
        out = []
        for k in range(len(p00)):
            c0 = (p00[k] - m0 * p11[k]) % p
            c1 = (pss[k] - p00[k] - p11[k] - m1 * p11[k]) % p
            out.append(field._make((base._make(c0), base._make(c1))))
        return out
    return None


def _kron_mul(p: int, a, b):
    """Multiply two coefficient lists mod p via one big-integer product."""
    n, m = len(a), len(b)
    bound = min(n, m) * (p - 1) * (p - 1)
    bw = (bound.bit_length() + 7) // 8
    abuf = bytearray(bw * n)
    for i, c in enumerate(a):
        if c:
            abuf[i * bw:(i + 1) * bw] = c.to_bytes(bw, "little")
    bbuf = bytearray(bw * m)
    for i, c in enumerate(b):
        if c:
            bbuf[i * bw:(i + 1) * bw] = c.to_bytes(bw, "little")
    prod = int.from_bytes(bytes(abuf), "little") * int.from_bytes(bytes(bbuf), "little")
    slots = n + m - 1
    pbuf = prod.to_bytes(bw * (n + m), "little")
    return [int.from_bytes(pbuf[k * bw:(k + 1) * bw], "little") % p for k in range(slots)]


def _fast_divmod(field: Fq, a, b):
    """Vectorised synthetic division for prime and quadratic fields."""
    if len(b) > len(a):
        return None
    if field.base is None:
        p = field.p
        A = np.array([c.val for c in a], dtype=np.int64)
        B = np.array([c.val for c in b], dtype=np.int64)
        lo = len(b)
        dq = len(a) - lo
        inv = pow(int(B[-1]), p - 2, p)
        quo = np.zeros(dq + 1, dtype=np.int64)
        Bt = B[:-1]
        for i in range(dq, -1, -1):
            c = int(A[i + lo - 1])
            if c:
                f = c * inv % p
                quo[i] = f
                if lo > 1:
                    A[i:i + lo - 1] = (A[i:i + lo - 1] - f * Bt) % p
                A[i + lo - 1] = 0
        mk = field._make
        return [mk(int(v)) for v in quo], [mk(int(v)) for v in A[: lo - 1]]
    if field.deg == 2 and field.base.base is None:
        p = field.p
        base = field.base
        m0 = field.modulus[0].val
        m1 = field.modulus[1].val
        A0 = np.array([c.val[0].val for c in a], dtype=np.int64)
        A1 = np.array([c.val[1].val for c in a], dtype=np.int64)
        B0 = np.array([c.val[0].val for c in b], dtype=np.int64)
        B1 = np.array([c.val[1].val for c in b], dtype=np.int64)
        lo = len(b)
        dq = len(a) - lo
        lead = b[-1]
        linv = lead.inverse()
        q0 = np.zeros(dq + 1, dtype=np.int64)
        q1 = np.zeros(dq + 1, dtype=np.int64)
        B0t, B1t = B0[:-1], B1[:-1]
        mk = field._make
        bmk = base._make
        for i in range(dq, -1, -1):
            c0, c1 = int(A0[i + lo - 1]), int(A1[i + lo - 1])
            if c0 or c1:
                fe = mk((bmk(c0), bmk(c1))) * linv
                f0, f1 = fe.val[0].val, fe.val[1].val
                q0[i], q1[i] = f0, f1
                if lo > 1:
                    # (f0 + f1 w)(B0 + B1 w) with w^2 = -m0 - m1 w
                    A0[i:i + lo - 1] = (A0[i:i + lo - 1] - f0 * B0t + m0 * f1 * B1t) % p
                    A1[i:i + lo - 1] = (A1[i:i + lo - 1] - f0 * B1t - f1 * B0t + m1 * f1 * B1t) % p
                A0[i + lo - 1] = 0
                A1[i + lo - 1] = 0
        quo = [mk((bmk(int(x)), bmk(int(y)))) for x, y in zip(q0, q1)]
        rem = [mk((bmk(int(x)), bmk(int(y)))) for x, y in zip(A0[: lo - 1], A1[: lo - 1])]
        return quo, rem
    return None


def _np_gcd_prime(field: Fq, a, b):
    if field.base is not None:
        return None
    p = field.p
    A = np.array([c.val for c in a], dtype=np.int64)
    B = np.array([c.val for c in b], dtype=np.int64)

    def trim(X):
        n = len(X)
        while n and X[n - 1] == 0:
            n -= 1
        return X[:n]

    A, B = trim(A), trim(B)
    while B.size:
        if A.size < B.size:
            A, B = B, A
        lo = B.size
        inv = pow(int(B[-1]), p - 2, p)
        for i in range(A.size - lo, -1, -1):
            c = int(A[i + lo - 1])
            if c:
                f = c * inv % p
                A[i:i + lo] = (A[i:i + lo] - f * B) % p
        A = trim(A)
        A, B = B, A
    mk = field._make
    return [mk(int(v)) for v in A]


def _np_gcd_quad(field: Fq, a, b):
    if field.deg != 2 or field.base is None or field.base.base is not None:
        return None
    p = field.p
    m0 = field.modulus[0].val
    m1 = field.modulus[1].val

    def arrs(cs):
        lo = np.array([c.val[0].val for c in cs], dtype=np.int64)
        hi = np.array([c.val[1].val for c in cs], dtype=np.int64)
        return lo, hi

    def trim(X0, X1):
        n = len(X0)
        while n and X0[n - 1] == 0 and X1[n - 1] == 0:
            n -= 1
        return X0[:n], X1[:n]

    A0, A1 = trim(*arrs(a))
    B0, B1 = trim(*arrs(b))
    mk = field._make
    bmk = field.base._make
    while len(B0):
        if len(A0) < len(B0):
            A0, A1, B0, B1 = B0, B1, A0, A1
        lo = len(B0)
        linv = mk((bmk(int(B0[-1])), bmk(int(B1[-1])))).inverse()
        for i in range(len(A0) - lo, -1, -1):
            c0, c1 = int(A0[i + lo - 1]), int(A1[i + lo - 1])
            if c0 or c1:
                fe = mk((bmk(c0), bmk(c1))) * linv
                f0, f1 = fe.val[0].val, fe.val[1].val
                # (f0 + f1 w)(B0 + B1 w) with w^2 = -m0 - m1 w
                A0[i:i + lo] = (A0[i:i + lo] - f0 * B0 + m0 * f1 * B1) % p
                A1[i:i + lo] = (A1[i:i + lo] - f0 * B1 - f1 * B0 + m1 * f1 * B1) % p
        A0, A1 = trim(A0, A1)
        A0, A1, B0, B1 = B0, B1, A0, A1
    return [mk((bmk(int(x)), bmk(int(y)))) for x, y in zip(A0, A1)]


# irreducibility and factorization

def pow_mod(base: Poly, n: int, mod: Poly) -> Poly:
    out = Poly.one(base.field)
    b = base % mod
    while n:
        if n & 1:
            out = out * b % mod
        b = b * b % mod
        n >>= 1
    return out


def is_irreducible(f: Poly) -> bool:
    """Deterministic irreducibility test over any Fq."""
    n = f.degree
    if n is NEG_INF or n == 0:
        return False
    if n == 1:
        return True
    q = f.field.q
    x = Poly.x(f.field)
    if pow_mod(x, q ** n, f) != x % f:
        return False
    for ell in _int_factor(n):
        g = pow_mod(x, q ** (n // ell), f) - x
        if (g % f).gcd(f).degree != 0:
            return False
    return True


_cz_rng = random.Random(0xFFEC)


def _random_poly(field: Fq, deg: int, rng) -> Poly:
    # random polynomial of degree < deg + 1 over a possibly-large field,
    # built from random prime coefficients on the absolute basis
    basis = field._basis() if field.base is not None else None
    cs = []
    for _ in range(deg + 1):
        if basis is None:
            cs.append(field.scalar(rng.randrange(field.p)))
        else:
            acc = field.zero
            for b in basis:
                acc = acc + field.scalar(rng.randrange(field.p)) * b
            cs.append(acc)
    return Poly(field, cs)


def _equal_degree_split(f: Poly, d: int, rng) -> list[Poly]:
    """Split a monic squarefree product of degree-d irreducibles."""
    if f.degree == d:
        return [f]
    field = f.field
    q = field.q
    n = f.degree
    while True:
        a = _random_poly(field, n - 1, rng)
        if a.degree <= 0:
            continue
        g = a.gcd(f)
        if 0 < g.degree < n:
            pieces = [g, f.exact_div(g)]
        else:
            if field.p == 2:
                # trace map over F_{2^m}
                m = field.e * d
                b = a % f
                acc = b
                for _ in range(m - 1):
                    b = b * b % f
                    acc = (acc + b) % f
                g = acc.gcd(f)
            else:
                b = pow_mod(a, (q ** d - 1) // 2, f) - Poly.one(field)
                g = (b % f).gcd(f)
            if 0 < g.degree < n:
                pieces = [g, f.exact_div(g)]
            else:
                continue
        out = []
        for piece in pieces:
            out.extend(_equal_degree_split(piece.monic(), d, rng))
        return out


def _poly_pth_root(f: Poly) -> Poly:
    """The p-th root of a polynomial of the form g(t^p)."""
    field = f.field
    p = field.p
    return Poly(field, [field.pth_root(f[i * p]) for i in range(int(f.degree) // p + 1)])


def _squarefree_decompose(f: Poly) -> dict[Poly, int]:
    """Monic f -> {squarefree monic factor: multiplicity}."""
    field = f.field
    p = field.p
    out: dict[Poly, int] = {}
    if f.degree < 1:
        return out
    df = f.derivative()
    if df.is_zero():
        for h, e in _squarefree_decompose(_poly_pth_root(f).monic()).items():
            out[h] = out.get(h, 0) + e * p
        return out
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.degree > 0:
            out[z.monic()] = out.get(z.monic(), 0) + i
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        # what is left has every multiplicity divisible by p
        for h, e in _squarefree_decompose(_poly_pth_root(c)).items():
            out[h] = out.get(h, 0) + e * p
    return out


def factor_poly(f: Poly):
    """Full factorization: returns (unit, [(monic irreducible, exponent)])
    with factors in canonical order."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = f.field
    unit = f.lc()
    f = f.monic()
    found: dict[Poly, int] = {}
    for sf, mult in _squarefree_decompose(f).items():
        # distinct-degree split of each squarefree part
        g = sf
        h = Poly.x(field)
        d = 0
        while g.degree > 0:
            d += 1
            if g.degree < 2 * d:
                found[g] = found.get(g, 0) + mult
                break
            h = pow_mod(h, field.q, g)
            gd = (h - Poly.x(field)).gcd(g)
            if gd.degree > 0:
                for irr in _equal_degree_split(gd, d, _cz_rng):
                    found[irr] = found.get(irr, 0) + mult
                g = g.exact_div(gd)
                h = h % g
    factors = sorted(found.items(), key=lambda it: it[0].key())
    return unit, factors


def poly_roots(f: Poly) -> list[tuple[FqElem, int]]:
    """Roots in the coefficient field, with multiplicities, canonical order."""
    _, factors = factor_poly(f)
    out = []
    for g, e in factors:
        if g.degree == 1:
            out.append((-g.coeffs[0], e))
    return out


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """An element of F_q(t), kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced=False):
        if den is None:
            den = Poly.one(num.field)
        if num.field is not den.field:
            raise ValueError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.one(num.field)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                c = den.lc()
                if c is not den.field.one:
                    inv = c.inverse()
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    @property
    def field(self) -> Fq:
        return self.num.field

    @staticmethod
    def from_const(c: FqElem) -> "RatFunc":
        return RatFunc(Poly.const(c))

    @staticmethod
    def zero(field: Fq) -> "RatFunc":
        return RatFunc(Poly.zero(field))

    @staticmethod
    def one(field: Fq) -> "RatFunc":
        return RatFunc(Poly.one(field))

    @staticmethod
    def t(field: Fq) -> "RatFunc":
        return RatFunc(Poly.x(field))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def const_value(self) -> FqElem:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    def __hash__(self):
        return hash((self.num, self.den))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.field is not self.field:
                raise ValueError("rational functions over different fields")
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (FqElem, int)):
            return RatFunc(Poly(self.field, (other,)))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.one(self.field) / self) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def compose_power(self, d: int) -> "RatFunc":
        """Substitute t -> t^d."""
        return RatFunc(self.num.compose_power(d), self.den.compose_power(d))

    def scale_var(self, c: FqElem) -> "RatFunc":
        """Substitute t -> c*t."""
        return RatFunc(self.num.scale_var(c), self.den.scale_var(c))

    def reciprocal_var(self) -> "RatFunc":
        """Substitute t -> 1/t, as a rational function in the new variable."""
        dn, dd = len(self.num.coeffs) - 1, len(self.den.coeffs) - 1
        if dn < 0:
            return self
        n = self.num.reverse(dn)
        d = self.den.reverse(dd)
        if dd > dn:
            n = n.shift(dd - dn)
        elif dn > dd:
            d = d.shift(dn - dd)
        return RatFunc(n, d)

    def map_coeffs(self, fn, field: Fq | None = None) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(fn, field), self.den.map_coeffs(fn, field))

    def evaluate(self, x: FqElem) -> FqElem:
        d = self.den.evaluate(x)
        if not d:
            raise ZeroDivisionError("pole at the evaluation point")
        return self.num.evaluate(x) * d.inverse()

    def __repr__(self):
        return format_ratfunc(self, "t")


# ---------------------------------------------------------------------------
# places


class Place:
    """A place of F_q(t): either the infinite place or a monic irreducible
    polynomial."""

    __slots__ = ("field", "poly", "_kappa")

    def __init__(self, field: Fq, poly: Poly | None, _checked=False):
        if poly is not None:
            if poly.field is not field:
                raise ValueError("place polynomial over the wrong field")
            if poly.lc() is not field.one:
                raise ValueError("place polynomial must be monic")
            if not _checked and not is_irreducible(poly):
                raise ValueError("place polynomial must be irreducible")
        self.field = field
        self.poly = poly
        self._kappa = None

    @staticmethod
    def infinite(field: Fq) -> "Place":
        return Place(field, None)

    @staticmethod
    def finite(poly: Poly) -> "Place":
        return Place(poly.field, poly.monic())

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else int(self.poly.degree)

    @property
    def qv(self) -> int:
        return self.field.q ** self.degree

    def __hash__(self):
        return hash((self.field._id, self.poly))

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.field is other.field and self.poly == other.poly

    def key(self):
        """Canonical order: infinity first, then degree-major, then
        coefficients high degree first."""
        if self.poly is None:
            return (0,)
        return (1,) + self.poly.key()

    def residue_field(self) -> Fq:
        """kappa_v.  For degree-1 places this is the constant field itself;
        otherwise F_q[t]/(f) as a direct extension."""
        if self._kappa is None:
            if self.degree == 1:
                self._kappa = self.field
            else:
                self._kappa = Fq(base=self.field, modulus=self.poly.coeffs)
        return self._kappa

    def reduce_poly(self, f: Poly) -> FqElem:
        """The image of a polynomial in the residue field."""
        if self.poly is None:
            raise ValueError("polynomials have poles at infinity")
        if self.degree == 1:
            return f.evaluate(-self.poly.coeffs[0])
        r = f % self.poly
        kappa = self.residue_field()
        return kappa.element(r.coeffs)

    def valuation_poly(self, f: Poly):
        if f.is_zero():
            return POS_INF
        if self.poly is None:
            return -int(f.degree)
        v = 0
        while True:
            q, r = divmod(f, self.poly)
            if r.is_zero():
                v += 1
                f = q
                if f.is_zero():
                    break
            else:
                break
        return v

    def valuation(self, r: RatFunc):
        if r.is_zero():
            return POS_INF
        if self.poly is None:
            return int(r.den.degree) - int(r.num.degree)
        return self.valuation_poly(r.num) - self.valuation_poly(r.den)

    def lift(self, x: FqElem) -> Poly:
        """A polynomial representative of a residue-field element.  Inverse to
        reduce_poly on polynomials of degree below deg(v)."""
        if self.poly is None:
            raise ValueError("no polynomial lifts at infinity")
        if self.degree == 1:
            if x.field is not self.field:
                raise ValueError("element of the wrong residue field")
            return Poly.const(x)
        if x.field is not self.residue_field():
            raise ValueError("element of the wrong residue field")
        return Poly(self.field, list(x.val))

    def reduce(self, r: RatFunc) -> FqElem:
        """The image of a rational function with non-negative valuation."""
        if self.poly is None:
            v = int(r.den.degree) - int(r.num.degree) if r.num else 1
            if r.is_zero():
                return self.field.zero
            if v > 0:
                return self.field.zero
            if v < 0:
                raise ValueError("pole at the infinite place")
            return r.num.lc() * r.den.lc().inverse()
        # reduced fractions cannot have both parts divisible by the place
        dnum = self.reduce_poly(r.num)
        dden = self.reduce_poly(r.den)
        if not dden:
            raise ValueError("pole at the place")
        return dnum * dden.inverse()

    def __repr__(self):
        return format_place(self, "t")


def valuation(r: RatFunc | Poly, v: Place):
    """Order of vanishing of r at v; +inf for r = 0."""
    if isinstance(r, Poly):
        return v.valuation_poly(r)
    return v.valuation(r)


def reduce_at(r: RatFunc | Poly, v: Place) -> FqElem:
    """Image of r in the residue field at v.  Requires valuation >= 0."""
    if isinstance(r, Poly):
        if v.poly is None:
            if r.degree > 0:
                raise ValueError("pole at the infinite place")
            return r[0] if r.coeffs else v.field.zero
        return v.reduce_poly(r)
    return v.reduce(r)


def mult_order(q: int, d: int) -> int:
    """Multiplicative order of q modulo d."""
    if d < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(q, d) != 1:
        raise ValueError("q and d are not coprime")
    if d == 1:
        return 1
    k, r = 1, q % d
    while r != 1:
        r = r * q % d
        k += 1
    return k


def place_count(q: int, n: int) -> int:
    """Number of finite places of F_q(t) of degree n (monic irreducibles)."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _moebius(n // d) * q ** d
    return total // n


def iter_monic_irreducibles(field: Fq, deg: int):
    """Monic irreducibles of exact degree deg, in canonical order."""
    if deg < 1:
        raise ValueError("degree must be >= 1")
    if field.q ** deg > 4 * 10 ** 6:
        raise CapError("too many monic polynomials to enumerate")
    elems = list(field.elements())
    # trial division by smaller irreducibles, built once per call
    small: list[Poly] = []
    for d in range(1, deg // 2 + 1):
        small.extend(iter_monic_irreducibles(field, d))
    for combo in itertools.product(elems, repeat=deg):
        # combo is read high degree first
        coeffs = tuple(reversed(combo)) + (field.one,)
        f = Poly(field, coeffs)
        ok = True
        for g in small:
            if 2 * g.degree > deg:
                break
            if (f % g).is_zero():
                ok = False
                break
        if ok:
            yield f


def places_up_to(field: Fq, max_deg: int) -> list[Place]:
    """All places of F_q(t) of degree <= max_deg, in canonical order:
    infinity first, then finite places degree-major."""
    out = [Place.infinite(field)]
    for d in range(1, max_deg + 1):
        for f in iter_monic_irreducibles(field, d):
            out.append(Place(field, f, _checked=True))
    return out


# ---------------------------------------------------------------------------
# textual notation

_VAR_LETTERS = ("t", "u", "s")


def _tokenize(s: str):
    out = []
    i = 0
    n = len(s)
    while i < n:
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and s[j].isdigit():
                j += 1
            out.append(("int", int(s[i:j]), i))
            i = j
        elif c.isalpha():
            if c != "g" and c not in _VAR_LETTERS:
                raise ParseError(f"unexpected name {c!r} at position {i}")
            out.append(("name", c, i))
            i += 1
        elif c in "+-*/^()[],":
            out.append((c, c, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r} at position {i}")
    out.append(("end", None, n))
    return out


class _Parser:
    def __init__(self, tokens, field: Fq, allow_var: bool):
        self.toks = tokens
        self.pos = 0
        self.field = field
        self.allow_var = allow_var
        self.seen_vars: set[str] = set()

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r} at position {tok[2]}")
        self.pos += 1
        return tok

    def parse_expr(self) -> RatFunc:
        v = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            w = self.parse_term()
            v = v + w if op == "+" else v - w
        return v

    def parse_term(self) -> RatFunc:
        v = self.parse_factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            w = self.parse_factor()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ParseError("division by zero")
                v = v / w
        return v

    def parse_factor(self) -> RatFunc:
        if self.peek()[0] == "-":
            self.take()
            return -self.parse_factor()
        v = self.parse_atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            v = v ** tok[1]
        return v

    def parse_atom(self) -> RatFunc:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return RatFunc.from_const(self.field.scalar(val))
        if kind == "(":
            self.take()
            v = self.parse_expr()
            self.take(")")
            return v
        if kind == "[":
            self.take()
            if self.field.base is None:
                raise ParseError(f"bracket element over a prime field at position {pos}")
            comps = []
            sub = _Parser(self.toks, self.field.base, False)
            sub.pos = self.pos
            while True:
                comps.append(_as_element(sub.parse_expr(), pos))
                k = sub.take()
                if k[0] == "]":
                    break
                if k[0] != ",":
                    raise ParseError(f"expected ',' or ']' at position {k[2]}")
            self.pos = sub.pos
            if len(comps) != self.field.deg:
                raise ParseError(
                    f"element needs exactly {self.field.deg} coefficients, got {len(comps)}")
            return RatFunc.from_const(self.field.element(comps))
        if kind == "name":
            self.take()
            if val == "g":
                if self.field.q > PLACE_CAP:
                    raise CapError("generator notation needs an enumerable field")
                return RatFunc.from_const(self.field.canonical_generator())
            if not self.allow_var:
                raise ParseError(f"variable {val!r} not allowed here (position {pos})")
            self.seen_vars.add(val)
            if len(self.seen_vars) > 1:
                raise ParseError(f"mixed variable names {sorted(self.seen_vars)}")
            return RatFunc.t(self.field)
        raise ParseError(f"unexpected token {val!r} at position {pos}")


def _as_element(r: RatFunc, pos: int) -> FqElem:
    if not r.is_constant():
        raise ParseError(f"expected a constant near position {pos}")
    return r.const_value()


def parse_ratfunc(s: str, field: Fq, var: str | None = None) -> RatFunc:
    """Parse the textual notation for an element of F_q(t)."""
    p = _Parser(_tokenize(s), field, True)
    v = p.parse_expr()
    p.take("end")
    if var is not None and p.seen_vars and p.seen_vars != {var}:
        raise ParseError(f"expected variable {var!r}, found {sorted(p.seen_vars)}")
    return v


def parse_ratfunc_seen(s: str, field: Fq):
    """Like parse_ratfunc but also reports which variable letter occurred."""
    p = _Parser(_tokenize(s), field, True)
    v = p.parse_expr()
    p.take("end")
    seen = next(iter(p.seen_vars)) if p.seen_vars else None
    return v, seen


def parse_poly(s: str, field: Fq, var: str | None = None) -> Poly:
    r = parse_ratfunc(s, field, var)
    if not r.is_polynomial():
        raise ParseError("expected a polynomial")
    return r.num * r.den[0].inverse() if r.den.degree == 0 else r.num


def parse_element(s: str, field: Fq) -> FqElem:
    p = _Parser(_tokenize(s), field, False)
    v = p.parse_expr()
    p.take("end")
    return _as_element(v, 0)


def format_element(x: FqElem) -> str:
    f = x.field
    if f.base is None:
        return str(x.val)
    flat = f._flatten(x)
    if not any(flat[1:]):
        return str(flat[0])
    return "[" + ",".join(format_element(c) for c in x.val) + "]"


def _format_term(c: FqElem, k: int, var: str) -> str:
    cs = format_element(c)
    if k == 0:
        return cs
    vp = var if k == 1 else f"{var}^{k}"
    if cs == "1":
        return vp
    return f"{cs}*{vp}"


def format_poly(f: Poly, var: str = "t") -> str:
    if f.is_zero():
        return "0"
    terms = []
    for k in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[k]
        if c:
            terms.append(_format_term(c, k, var))
    return "+".join(terms)


def format_ratfunc(r: RatFunc, var: str = "t") -> str:
    if r.den.is_one():
        return format_poly(r.num, var)
    return f"({format_poly(r.num, var)})/({format_poly(r.den, var)})"


def format_place(v: Place, var: str = "t") -> str:
    if v.is_infinite:
        return "inf"
    return format_poly(v.poly, var)


def parse_place(s: str, field: Fq, var: str | None = None) -> Place:
    s = s.strip()
    if s == "inf":
        return Place.infinite(field)
    return Place.finite(parse_poly(s, field, var))
