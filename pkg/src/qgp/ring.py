"""Finite commutative quasi-Frobenius coefficient rings.

Two families are supported: ``ZMod(n)`` (integers mod n, n >= 2) and
``TruncPoly(p, k)`` (F_p[t]/(t^k)).  Both are principal ideal rings, which is
what the Howell and Smith routines in :mod:`qgp.linalg` need.

Elements are plain Python ints.  For ZMod that is the residue in [0, n); for
TruncPoly it is the coefficient vector packed base p, low degree first, so
``1 + t`` over F_2 is ``1 + 1*2 = 3``.  :class:`RingElem` is a thin checked
wrapper used at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import NotUnit, ParseError, SpecMismatch

_TABLE_LIMIT = 256


def _factorize(n):
    factors = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _is_prime(p):
    return p >= 2 and _factorize(p) == {p: 1}


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class Ring:
    """Common interface.  Subclasses implement the scalar primitives.

    Besides field-like arithmetic every ring provides the principal-ideal
    toolkit used by the normal-form code:

    * ``gcdex(a, b) -> (g, s, t, u, v)`` with ``s*a + t*b = g`` generating
      ``(a, b)``, ``u*a + v*b = 0`` and ``s*v - t*u`` a unit;
    * ``normalizer(a)``: a unit ``c`` with ``c*a == canonical(a)``;
    * ``quo(a, d)`` for canonical ``d``: ``a - quo(a, d)*d`` is the canonical
      remainder of ``a`` modulo the ideal ``(d)``;
    * ``ann(a)``: canonical generator of ``{x : x*a = 0}``.
    """

    kind: str
    size: int
    zero = 0
    one = 1

    # --- arithmetic -------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_unit(self, a):
        raise NotImplementedError

    def elements(self):
        return range(self.size)

    def units(self):
        return [a for a in self.elements() if self.is_unit(a)]

    # --- vector helpers (hot paths; overridden for speed) ------------------
    def comb(self, s, x, t, y):
        """Return ``s*x + t*y`` for equal-length vectors."""
        add, mul = self.add, self.mul
        return [add(mul(s, a), mul(t, b)) for a, b in zip(x, y)]

    def scale(self, c, x):
        mul = self.mul
        return [mul(c, a) for a in x]

    def axpy(self, c, x, y):
        """Return ``y + c*x``."""
        add, mul = self.add, self.mul
        return [add(b, mul(c, a)) for a, b in zip(x, y)]

    def dot(self, x, y):
        add, mul = self.add, self.mul
        acc = 0
        for a, b in zip(x, y):
            if a and b:
                acc = add(acc, mul(a, b))
        return acc

    # --- ideal structure ----------------------------------------------------
    def canonical(self, a):
        return self.mul(self.normalizer(a), a)

    def divides(self, d, a):
        """True when ``a`` lies in the ideal ``(d)``."""
        raise NotImplementedError

    def quotient_size(self, d):
        """Cardinality of ``R/(d)``."""
        raise NotImplementedError

    def is_idempotent_ideal(self, d):
        """True when ``R/(d)`` is a projective R-module."""
        raise NotImplementedError

    def div(self, a, d):
        """Some ``x`` with ``x*d == a``; raises NotUnit when ``d`` does not divide ``a``."""
        raise NotImplementedError

    # --- serialization ------------------------------------------------------
    def to_spec(self):
        raise NotImplementedError

    def encode(self, a):
        raise NotImplementedError

    def decode(self, obj):
        raise NotImplementedError

    def __call__(self, value):
        if isinstance(value, int) and not isinstance(value, bool):
            return RingElem(self, self._check(value))
        return RingElem(self, self.decode(value))

    def _check(self, a):
        if not (isinstance(a, int) and 0 <= a < self.size):
            raise ParseError(f"{a!r} is not a canonical element of {self}")
        return a


@dataclass(frozen=True)
class ZMod(Ring):
    """The ring of integers modulo ``n``."""

    n: int

    kind = "z-mod"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"z-mod modulus must be an integer >= 2, got {self.n!r}")

    def __repr__(self):
        return f"ZMod({self.n})"

    def __str__(self):
        return f"Z/{self.n}"

    @property
    def size(self):
        return self.n

    @cached_property
    def prime_powers(self):
        return [p**e for p, e in sorted(_factorize(self.n).items())]

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def is_unit(self, a):
        return math.gcd(a, self.n) == 1

    def inv(self, a):
        if not self.is_unit(a):
            raise NotUnit(f"{a} is not a unit in {self}")
        return pow(a, -1, self.n)

    def comb(self, s, x, t, y):
        n = self.n
        return [(s * a + t * b) % n for a, b in zip(x, y)]

    def scale(self, c, x):
        n = self.n
        return [c * a % n for a in x]

    def axpy(self, c, x, y):
        n = self.n
        return [(b + c * a) % n for a, b in zip(x, y)]

    def dot(self, x, y):
        return sum(a * b for a, b in zip(x, y)) % self.n

    def gcdex(self, a, b):
        if a == 0 and b == 0:
            return 0, 1, 0, 0, 1
        g, s, t = _xgcd(a, b)
        n = self.n
        return g % n, s % n, t % n, (-b // g) % n, (a // g) % n

    @cached_property
    def _normalizers(self):
        if self.n > _TABLE_LIMIT:
            return None
        return [self._normalizer_raw(a) for a in range(self.n)]

    def normalizer(self, a):
        tb = self._normalizers
        return tb[a] if tb else self._normalizer_raw(a)

    def _normalizer_raw(self, a):
        n = self.n
        if a == 0:
            return 1
        g = math.gcd(a, n)
        m = n // g
        c = pow(a // g, -1, m) if m > 1 else 0
        while math.gcd(c, n) != 1:
            c += m
        return c % n

    def canonical(self, a):
        return math.gcd(a, self.n) % self.n

    def quo(self, a, d):
        return 0 if d == 0 else a // d

    def rem(self, a, d):
        return a if d == 0 else a % d

    def ann(self, a):
        return (self.n // math.gcd(a, self.n)) % self.n

    def divides(self, d, a):
        return a % math.gcd(d, self.n) == 0

    def div(self, a, d):
        n = self.n
        g = math.gcd(d, n)
        if a % g:
            raise NotUnit(f"{d} does not divide {a} in {self}")
        m = n // g
        if m == 1:
            return 0
        return (a // g) * pow(d // g, -1, m) % m

    def quotient_size(self, d):
        return math.gcd(d, self.n)

    def is_idempotent_ideal(self, d):
        g = math.gcd(d, self.n)
        return math.gcd(g, self.n // g) == 1

    def to_spec(self):
        return {"kind": "z-mod", "modulus": self.n}

    def encode(self, a):
        return a

    def decode(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ParseError(f"expected an integer element of {self}, got {obj!r}")
        return self._check(obj)


@dataclass(frozen=True)
class TruncPoly(Ring):
    """The truncated polynomial ring F_p[t]/(t^k), a local chain ring."""

    p: int
    k: int

    kind = "truncated-poly"

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"truncated-poly needs a prime p, got {self.p!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"nilpotency must be >= 1, got {self.k!r}")

    def __repr__(self):
        return f"TruncPoly({self.p}, {self.k})"

    def __str__(self):
        return f"F_{self.p}[t]/(t^{self.k})"

    @property
    def size(self):
        return self.p**self.k

    # coefficient <-> code
    def coeffs(self, a):
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_coeffs(self, cs):
        p = self.p
        a = 0
        for c in reversed(cs):
            a = a * p + c % p
        return a

    def _add_raw(self, a, b):
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def _mul_raw(self, a, b):
        ca, cb, k, p = self.coeffs(a), self.coeffs(b), self.k, self.p
        out = [0] * k
        for i, x in enumerate(ca):
            if x:
                for j in range(k - i):
                    out[i + j] += x * cb[j]
        return self.from_coeffs([c % p for c in out])

    @cached_property
    def _tables(self):
        if self.size > _TABLE_LIMIT:
            return None
        els = range(self.size)
        add = [[self._add_raw(a, b) for b in els] for a in els]
        mul = [[self._mul_raw(a, b) for b in els] for a in els]
        neg = [self.from_coeffs([-c for c in self.coeffs(a)]) for a in els]
        return add, mul, neg

    def add(self, a, b):
        tb = self._tables
        return tb[0][a][b] if tb else self._add_raw(a, b)

    def mul(self, a, b):
        tb = self._tables
        return tb[1][a][b] if tb else self._mul_raw(a, b)

    def neg(self, a):
        tb = self._tables
        return tb[2][a] if tb else self.from_coeffs([-c for c in self.coeffs(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def comb(self, s, x, t, y):
        tb = self._tables
        if tb is None:
            return super().comb(s, x, t, y)
        add, mul = tb[0], tb[1]
        ms, mt = mul[s], mul[t]
        return [add[ms[a]][mt[b]] for a, b in zip(x, y)]

    def scale(self, c, x):
        tb = self._tables
        if tb is None:
            return super().scale(c, x)
        mc = tb[1][c]
        return [mc[a] for a in x]

    def axpy(self, c, x, y):
        tb = self._tables
        if tb is None:
            return super().axpy(c, x, y)
        add, mc = tb[0], tb[1][c]
        return [add[b][mc[a]] for a, b in zip(x, y)]

    @cached_property
    def _unit_tables(self):
        if self.size > _TABLE_LIMIT:
            return None
        els = range(self.size)
        val = [self._valuation_raw(a) for a in els]
        inv = [self._inv_raw(a) if a % self.p else None for a in els]
        return val, inv

    def valuation(self, a):
        """Largest v with t^v dividing a; ``k`` for zero."""
        tb = self._unit_tables
        return tb[0][a] if tb else self._valuation_raw(a)

    def _valuation_raw(self, a):
        if a == 0:
            return self.k
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def _shift_down(self, a, v):
        return a // self.p**v

    def _t_power(self, v):
        return 0 if v >= self.k else self.p**v

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotUnit(f"{self.encode(a)} is not a unit in {self}")
        tb = self._unit_tables
        return tb[1][a] if tb else self._inv_raw(a)

    def _inv_raw(self, a):
        cs, p = self.coeffs(a), self.p
        c0 = pow(cs[0], -1, p)
        out = [c0]
        for i in range(1, self.k):
            acc = sum(cs[j] * out[i - j] for j in range(1, i + 1))
            out.append(-c0 * acc % p)
        return self.from_coeffs(out)

    def gcdex(self, a, b):
        if a == 0 and b == 0:
            return 0, 1, 0, 0, 1
        va, vb = self.valuation(a), self.valuation(b)
        if va <= vb:
            q = self.mul(self._shift_down(b, va), self.inv(self._shift_down(a, va)))
            return a, 1, 0, self.neg(q), 1
        q = self.mul(self._shift_down(a, vb), self.inv(self._shift_down(b, vb)))
        return b, 0, 1, 1, self.neg(q)

    def normalizer(self, a):
        if a == 0:
            return 1
        return self.inv(self._shift_down(a, self.valuation(a)))

    def canonical(self, a):
        return self._t_power(self.valuation(a))

    def quo(self, a, d):
        if d == 0:
            return 0
        return self._shift_down(a, self.valuation(d))

    def rem(self, a, d):
        if d == 0:
            return a
        return a % self.p ** self.valuation(d)

    def ann(self, a):
        return self._t_power(self.k - self.valuation(a))

    def divides(self, d, a):
        return self.valuation(a) >= self.valuation(d)

    def div(self, a, d):
        vd = self.valuation(d)
        if self.valuation(a) < vd:
            raise NotUnit(f"{self.encode(d)} does not divide {self.encode(a)} in {self}")
        if d == 0:
            return 0
        return self.mul(self._shift_down(a, vd), self.inv(self._shift_down(d, vd)))

    def quotient_size(self, d):
        return self.p ** self.valuation(d)

    def is_idempotent_ideal(self, d):
        return self.valuation(d) in (0, self.k)

    def to_spec(self):
        return {"kind": "truncated-poly", "p": self.p, "nilpotency": self.k}

    def encode(self, a):
        return self.coeffs(a)

    def decode(self, obj):
        if not isinstance(obj, list) or len(obj) != self.k:
            raise ParseError(f"expected a coefficient list of length {self.k} for {self}, got {obj!r}")
        for c in obj:
            if isinstance(c, bool) or not isinstance(c, int) or not 0 <= c < self.p:
                raise ParseError(f"coefficient {c!r} is not canonical in F_{self.p}")
        return self.from_coeffs(obj)


def ring_from_spec(spec):
    """Build a ring from its JSON description."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError(f"not a ring spec: {spec!r}")
    try:
        if spec["kind"] == "z-mod":
            return ZMod(spec["modulus"])
        if spec["kind"] == "truncated-poly":
            return TruncPoly(spec["p"], spec["nilpotency"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad ring spec {spec!r}: {exc}") from exc
    raise ParseError(f"unknown ring kind {spec['kind']!r}")


@dataclass(frozen=True)
class RingElem:
    """A ring element tagged with its ring; arithmetic checks that rings agree."""

    ring: Ring
    value: int

    def _other(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise SpecMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int):
            return self.ring._check(other % self.ring.size if isinstance(self.ring, ZMod) else other)
        return NotImplemented

    def __add__(self, other):
        return RingElem(self.ring, self.ring.add(self.value, self._other(other)))

    def __sub__(self, other):
        return RingElem(self.ring, self.ring.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return RingElem(self.ring, self.ring.mul(self.value, self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.value))

    def inverse(self):
        return RingElem(self.ring, self.ring.inv(self.value))

    def encode(self):
        return self.ring.encode(self.value)

    def __repr__(self):
        return f"{self.ring}({self.encode()!r})"


def ring_ops(ring, op, a, b=None):
    """Apply ``op`` in {add, sub, mul, neg, inv} to RingElem operands."""
    for x in (a, b):
        if x is not None and x.ring != ring:
            raise SpecMismatch(f"operand from {x.ring} used with {ring}")
    if op in ("add", "sub", "mul"):
        if b is None:
            raise ValueError(f"{op} needs two operands")
        return RingElem(ring, getattr(ring, op)(a.value, b.value))
    if op == "neg":
        return RingElem(ring, ring.neg(a.value))
    if op == "inv":
        return RingElem(ring, ring.inv(a.value))
    raise ValueError(f"unknown ring operation {op!r}")


def annihilator(ring, a):
    """Canonical generator of ``{x : x*a = 0}``."""
    value = a.value if isinstance(a, RingElem) else a
    return RingElem(ring, ring.ann(value))
