"""Exact scalar arithmetic over the rational function field Q(q).

Everything downstream (bilinear forms, module matrices, torus coefficients)
runs on the two classes here, so the representation is chosen for tight
loops: a Laurent polynomial is a plain ``{exponent: coefficient}`` dict over
Python ints, and a general scalar is a reduced fraction of those with the
denominator normalized to an honest polynomial.  No floats anywhere, no
modular tricks; equality of canonical forms is structural equality.
"""

from __future__ import annotations

import re
from math import gcd


__all__ = [
    "LaurentQ",
    "ScalarQ",
    "qint",
    "qfact",
    "qbinom",
    "qint_i",
    "qfact_i",
    "qbinom_i",
    "subst_qi",
    "gauss_product",
    "laurent_str",
    "scalar_str",
    "parse_scalar",
]


# ---------------------------------------------------------------------------
# dense integer polynomials (index = exponent, trimmed), used for gcd/division
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _dcontent(a: list[int]) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def _dprem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b over Z (result a with deg < deg b)."""
    a = a[:]
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        la = a[-1]
        off = len(a) - 1 - db
        for i in range(len(a)):
            a[i] *= lb
        for i in range(len(b)):
            a[off + i] -= la * b[i]
        _trim(a)
    return a


def _dgcd(a: list[int], b: list[int]) -> list[int]:
    """gcd in Z[q] including integer content, positive leading coefficient."""
    if not a:
        b = b[:]
        return [-x for x in b] if b and b[-1] < 0 else b
    if not b:
        a = a[:]
        return [-x for x in a] if a[-1] < 0 else a
    ca, cb = _dcontent(a), _dcontent(b)
    g0 = gcd(ca, cb)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    while b:
        r = _dprem(a, b)
        a, b = b, r
        if b:
            c = _dcontent(b)
            if c > 1:
                b = [x // c for x in b]
    if a[-1] < 0:
        a = [-x for x in a]
    if g0 != 1:
        a = [x * g0 for x in a]
    return a


def _kronecker_mul(a: list[int], b: list[int]) -> list[int]:
    """Dense polynomial product through one big-integer multiplication.

    Signed coefficients are packed into base-2^B digits via an offset of
    2^{B-1} per digit (so byte-level packing applies), with B wide enough
    that no convolution coefficient can reach the offset.
    """
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(len(a), len(b))
    nbytes = bound.bit_length() // 8 + 1
    width = 8 * nbytes
    half = 1 << (width - 1)
    halfbytes = half.to_bytes(nbytes, "little")

    def pack(coeffs: list[int]) -> int:
        buf = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
        off = int.from_bytes(halfbytes * len(coeffs), "little")
        return int.from_bytes(buf, "little") - off

    n = len(a) + len(b) - 1
    prod = pack(a) * pack(b) + int.from_bytes(halfbytes * n, "little")
    buf = prod.to_bytes(n * nbytes, "little")
    return [
        int.from_bytes(buf[k * nbytes : (k + 1) * nbytes], "little") - half
        for k in range(n)
    ]


def _ddiv_exact(a: list[int], b: list[int]) -> list[int]:
    """Exact division in Z[q]; raises if the remainder does not vanish."""
    if not a:
        return []
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        raise ArithmeticError("inexact polynomial division")
    a = a[:]
    lb = b[-1]
    out = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        top = a[db + k]
        if top == 0:
            continue
        c, r = divmod(top, lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[k] = c
        for i in range(db + 1):
            a[k + i] -= c * b[i]
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


# ---------------------------------------------------------------------------
# Laurent polynomials in q over Z
# ---------------------------------------------------------------------------

class LaurentQ:
    """Laurent polynomial in q with integer coefficients.

    Stored as ``{exponent: coefficient}`` with no zero coefficients.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[int, int] | int = 0):
        if isinstance(coeffs, int):
            self.c = {0: coeffs} if coeffs else {}
        else:
            self.c = {e: c for e, c in coeffs.items() if c}

    @classmethod
    def _raw(cls, d: dict[int, int]) -> "LaurentQ":
        obj = object.__new__(cls)
        obj.c = d
        return obj

    @classmethod
    def q_power(cls, e: int) -> "LaurentQ":
        return cls._raw({e: 1})

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == {0: 1}

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentQ):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == ({0: other} if other else {})
        return NotImplemented

    __hash__ = None

    def __neg__(self) -> "LaurentQ":
        return LaurentQ._raw({e: -c for e, c in self.c.items()})

    def __add__(self, other: "LaurentQ") -> "LaurentQ":
        a, b = self.c, other.c
        if not a:
            return other
        if not b:
            return self
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentQ._raw(out)

    def __sub__(self, other: "LaurentQ") -> "LaurentQ":
        a, b = self.c, other.c
        if not b:
            return self
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentQ._raw(out)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return _L_ZERO
            if other == 1:
                return self
            return LaurentQ._raw({e: c * other for e, c in self.c.items()})
        a, b = self.c, other.c
        if not a or not b:
            return _L_ZERO
        if len(b) < len(a):
            a, b = b, a
        if len(a) == 1:
            ((ea, ca),) = a.items()
            if ca == 1:
                return LaurentQ._raw({eb + ea: cb for eb, cb in b.items()})
            return LaurentQ._raw({eb + ea: cb * ca for eb, cb in b.items()})
        # dense convolution; sparse dicts pay too much overhead here
        alo, ahi = min(a), max(a)
        blo, bhi = min(b), max(b)
        da = [0] * (ahi - alo + 1)
        for e, c in a.items():
            da[e - alo] = c
        db = [0] * (bhi - blo + 1)
        for e, c in b.items():
            db[e - blo] = c
        lo = alo + blo
        if len(da) * len(db) >= 256:
            dout = _kronecker_mul(da, db)
        else:
            dout = [0] * (len(da) + len(db) - 1)
            for ka, ca in enumerate(da):
                if ca:
                    if ca == 1:
                        for kb, cb in enumerate(db):
                            if cb:
                                dout[ka + kb] += cb
                    else:
                        for kb, cb in enumerate(db):
                            if cb:
                                dout[ka + kb] += ca * cb
        return LaurentQ._raw({lo + k: c for k, c in enumerate(dout) if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentQ":
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial; use ScalarQ")
        out = _L_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentQ":
        """Multiply by q^k."""
        if k == 0:
            return self
        return LaurentQ._raw({e + k: c for e, c in self.c.items()})

    def bar(self) -> "LaurentQ":
        """The involution q -> q^{-1}."""
        return LaurentQ._raw({-e: c for e, c in self.c.items()})

    def subst(self, d: int) -> "LaurentQ":
        """Substitute q -> q^d (d >= 1)."""
        if d == 1:
            return self
        return LaurentQ._raw({e * d: c for e, c in self.c.items()})

    def min_exp(self) -> int:
        return min(self.c)

    def max_exp(self) -> int:
        return max(self.c)

    def _dense(self) -> tuple[list[int], int]:
        """Return (coefficient list, shift) with value = q^shift * poly."""
        if not self.c:
            return [], 0
        lo = min(self.c)
        hi = max(self.c)
        out = [0] * (hi - lo + 1)
        for e, c in self.c.items():
            out[e - lo] = c
        return out, lo

    @classmethod
    def _from_dense(cls, a: list[int], shift: int = 0) -> "LaurentQ":
        return cls._raw({i + shift: c for i, c in enumerate(a) if c})

    def exact_div(self, other: "LaurentQ") -> "LaurentQ":
        """Exact division; raises ArithmeticError when not divisible."""
        if not self.c:
            return _L_ZERO
        a, sa = self._dense()
        b, sb = other._dense()
        return LaurentQ._from_dense(_ddiv_exact(a, b), sa - sb)

    def to_scalar(self) -> "ScalarQ":
        return ScalarQ._make(dict(self.c), {0: 1})

    def __str__(self) -> str:
        return laurent_str(self)

    def __repr__(self) -> str:
        return f"LaurentQ({laurent_str(self)!r})"


_L_ZERO = LaurentQ._raw({})
_L_ONE = LaurentQ._raw({0: 1})


# ---------------------------------------------------------------------------
# the field Q(q)
# ---------------------------------------------------------------------------

class ScalarQ:
    """Element of Q(q) as a reduced fraction of integer (Laurent) polynomials.

    Canonical form: ``den`` is a polynomial with nonzero constant term and
    positive leading coefficient, gcd(num, den) = 1 in Z[q] (integer content
    included), and ``num`` carries any overall power of q.  Equality of
    canonical forms is structural, so ``__eq__`` just compares dicts.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: "LaurentQ | int" = 0, den: "LaurentQ | int" = 1):
        if isinstance(num, int):
            num = LaurentQ(num)
        if isinstance(den, int):
            den = LaurentQ(den)
        obj = ScalarQ._make(dict(num.c), dict(den.c))
        self.num = obj.num
        self.den = obj.den

    @classmethod
    def _raw(cls, num: LaurentQ, den: LaurentQ) -> "ScalarQ":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def _make(cls, num: dict[int, int], den: dict[int, int]) -> "ScalarQ":
        """Canonicalize a raw fraction of Laurent coefficient dicts."""
        if not den:
            raise ZeroDivisionError("zero denominator in Q(q)")
        if not num:
            return cls._raw(_L_ZERO, _L_ONE)
        sn = min(num)
        sd = min(den)
        a = [0] * (max(num) - sn + 1)
        for e, c in num.items():
            a[e - sn] = c
        b = [0] * (max(den) - sd + 1)
        for e, c in den.items():
            b[e - sd] = c
        if b != [1]:
            g = _dgcd(a, b)
            if len(g) > 1 or g[0] != 1:
                a = _ddiv_exact(a, g)
                b = _ddiv_exact(b, g)
            if b[-1] < 0:
                a = [-x for x in a]
                b = [-x for x in b]
        return cls._raw(
            LaurentQ._from_dense(a, sn - sd),
            LaurentQ._from_dense(b, 0),
        )

    @classmethod
    def from_int(cls, n: int) -> "ScalarQ":
        if n == 0:
            return S_ZERO
        if n == 1:
            return S_ONE
        return cls._raw(LaurentQ._raw({0: n}), _L_ONE)

    @classmethod
    def q_power(cls, e: int) -> "ScalarQ":
        return cls._raw(LaurentQ._raw({e: 1}), _L_ONE)

    def is_zero(self) -> bool:
        return not self.num.c

    def is_one(self) -> bool:
        return self.num.c == {0: 1} and self.den.c == {0: 1}

    def __bool__(self) -> bool:
        return bool(self.num.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, ScalarQ):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, int):
            return self.den.c == {0: 1} and self.num == other
        return NotImplemented

    __hash__ = None

    def __neg__(self) -> "ScalarQ":
        return ScalarQ._raw(-self.num, self.den)

    def __add__(self, other: "ScalarQ") -> "ScalarQ":
        if not self.num.c:
            return other
        if not other.num.c:
            return self
        d1, d2 = self.den, other.den
        if d1.c == d2.c:
            s = self.num + other.num
            if d1.c == {0: 1}:
                return ScalarQ._raw(s, _L_ONE)
            return ScalarQ._make(s.c, d1.c)
        n = self.num * d2 + other.num * d1
        return ScalarQ._make(n.c, (d1 * d2).c)

    def __sub__(self, other: "ScalarQ") -> "ScalarQ":
        return self + (-other)

    def __mul__(self, other: "ScalarQ") -> "ScalarQ":
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if not n1.c or not n2.c:
            return S_ZERO
        if d1.c == {0: 1} and d2.c == {0: 1}:
            return ScalarQ._raw(n1 * n2, _L_ONE)
        # cross-reduce so the final product is already canonical
        x = ScalarQ._make(n1.c, d2.c)
        y = ScalarQ._make(n2.c, d1.c)
        num = x.num * y.num
        den = x.den * y.den
        return ScalarQ._raw(num, den)

    def inverse(self) -> "ScalarQ":
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        num, lo = self.num._dense()
        den, _ = self.den._dense()
        if num[-1] < 0:
            num = [-x for x in num]
            den = [-x for x in den]
        return ScalarQ._raw(
            LaurentQ._from_dense(den, -lo), LaurentQ._from_dense(num, 0)
        )

    def __truediv__(self, other: "ScalarQ") -> "ScalarQ":
        return self * other.inverse()

    def __pow__(self, n: int) -> "ScalarQ":
        if n < 0:
            return self.inverse() ** (-n)
        out = S_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_qpow(self, k: int) -> "ScalarQ":
        """Multiply by q^k (stays canonical, no gcd work)."""
        if k == 0:
            return self
        return ScalarQ._raw(self.num.shift(k), self.den)

    def mul_int(self, n: int) -> "ScalarQ":
        if n == 0:
            return S_ZERO
        if n == 1:
            return self
        return ScalarQ._make((self.num * n).c, self.den.c)

    def bar(self) -> "ScalarQ":
        """The involution q -> q^{-1}."""
        if not self.num.c:
            return S_ZERO
        num = self.num.bar()
        den = self.den.bar()
        lo = den.min_exp()
        den = den.shift(-lo)
        num = num.shift(-lo)
        if den.c[den.max_exp()] < 0:
            num, den = -num, -den
        return ScalarQ._raw(num, den)

    def subst(self, d: int) -> "ScalarQ":
        """Substitute q -> q^d (d >= 1); canonical form is preserved."""
        if d == 1:
            return self
        return ScalarQ._raw(self.num.subst(d), self.den.subst(d))

    def as_laurent(self) -> "LaurentQ | None":
        """The numerator when the denominator is 1, else None."""
        return self.num if self.den.c == {0: 1} else None

    def as_q_power(self) -> "int | None":
        """Exponent k when the value is exactly q^k, else None."""
        if self.den.c == {0: 1} and len(self.num.c) == 1:
            e, c = next(iter(self.num.c.items()))
            if c == 1:
                return e
        return None

    def complexity(self) -> int:
        """Crude size measure used for pivot selection in linear algebra."""
        n = len(self.num.c) + len(self.den.c)
        span = 0
        if self.num.c:
            span += self.num.max_exp() - self.num.min_exp()
        if self.den.c:
            span += self.den.max_exp()
        return span + n

    def __str__(self) -> str:
        return scalar_str(self)

    def __repr__(self) -> str:
        return f"ScalarQ({scalar_str(self)!r})"


S_ZERO = ScalarQ._raw(_L_ZERO, _L_ONE)
S_ONE = ScalarQ._raw(_L_ONE, _L_ONE)


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def qint(n: int) -> LaurentQ:
    """Balanced q-integer [n] = (q^n - q^{-n}) / (q - q^{-1})."""
    if n == 0:
        return _L_ZERO
    if n < 0:
        return -qint(-n)
    return LaurentQ._raw({e: 1 for e in range(n - 1, -n - 1, -2)})


def qfact(n: int) -> LaurentQ:
    """Balanced q-factorial [n]! for n >= 0."""
    if n < 0:
        raise ValueError("q-factorial needs n >= 0")
    out = _L_ONE
    for k in range(2, n + 1):
        out = out * qint(k)
    return out


def qbinom(n: int, k: int) -> LaurentQ:
    """Balanced q-binomial: 1 for k = 0, [n][n-1]...[n-k+1]/[k]! for k > 0.

    Defined for every integer n; the quotient is always a Laurent polynomial
    and the division is checked to be exact.
    """
    if k < 0:
        raise ValueError("q-binomial needs k >= 0")
    if k == 0:
        return _L_ONE
    num = _L_ONE
    for j in range(k):
        num = num * qint(n - j)
    if not num.c:
        return _L_ZERO
    return num.exact_div(qfact(k))


def qint_i(n: int, d: int) -> LaurentQ:
    """[n] in the variable q_i = q^d."""
    return qint(n).subst(d)


def qfact_i(n: int, d: int) -> LaurentQ:
    return qfact(n).subst(d)


def qbinom_i(n: int, k: int, d: int) -> LaurentQ:
    return qbinom(n, k).subst(d)


def subst_qi(x, d: int):
    """Substitute q -> q^d in a LaurentQ or ScalarQ."""
    return x.subst(d)


def gauss_product(a: int) -> tuple[list[LaurentQ], list[LaurentQ]]:
    """Both sides of the q-binomial product identity, as polynomials in a
    central variable z with LaurentQ coefficients (index = power of z).

    lhs[t] = q^{t(a-1)} [a]! / ([t]! [a-t]!),   rhs = prod_{j=0}^{a-1} (1 + q^{2j} z).
    """
    if a < 0:
        raise ValueError("needs a >= 0")
    lhs = [qbinom(a, t).shift(t * (a - 1)) for t in range(a + 1)]
    rhs = [_L_ONE]
    for j in range(a):
        w = LaurentQ.q_power(2 * j)
        nxt = [rhs[0]]
        for t in range(1, len(rhs)):
            nxt.append(rhs[t] + w * rhs[t - 1])
        nxt.append(w * rhs[-1])
        rhs = nxt
    return lhs, rhs


# ---------------------------------------------------------------------------
# text form: sum of signed monomials "c*q^e", exponents decreasing;
# a genuine fraction renders as "(num)/(den)"
# ---------------------------------------------------------------------------

def laurent_str(x: LaurentQ) -> str:
    if not x.c:
        return "0"
    parts: list[str] = []
    for e in sorted(x.c, reverse=True):
        c = x.c[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = f"q^{e}"
        else:
            body = f"{mag}*q^{e}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"-{body}" if c < 0 else f"+{body}")
    return "".join(parts)


def scalar_str(x: "ScalarQ | LaurentQ") -> str:
    if isinstance(x, LaurentQ):
        return laurent_str(x)
    if x.den.c == {0: 1}:
        return laurent_str(x.num)
    return f"({laurent_str(x.num)})/({laurent_str(x.den)})"


_TERM_RE = re.compile(r"([+-]?)((?:\d+\*)?q\^-?\d+|\d+)")


def _parse_laurent(s: str) -> LaurentQ:
    if s == "0":
        return _L_ZERO
    out: dict[int, int] = {}
    pos = 0
    first = True
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ValueError(f"bad scalar text {s!r}")
        sign, body = m.group(1), m.group(2)
        if not first and not sign:
            raise ValueError(f"bad scalar text {s!r}")
        if "q" in body:
            head, _, exp = body.partition("q^")
            c = int(head[:-1]) if head else 1
            e = int(exp)
        else:
            c = int(body)
            e = 0
        if sign == "-":
            c = -c
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
        pos = m.end()
        first = False
    if pos != len(s) or first:
        raise ValueError(f"bad scalar text {s!r}")
    return LaurentQ._raw(out)


def parse_scalar(s: str) -> ScalarQ:
    """Inverse of scalar_str (on canonical output)."""
    s = s.strip()
    if s.startswith("(") and s.endswith(")") and ")/(" in s:
        i = s.index(")/(")
        num = _parse_laurent(s[1:i])
        den = _parse_laurent(s[i + 3 : -1])
        return ScalarQ._make(num.c, den.c)
    return _parse_laurent(s).to_scalar()
