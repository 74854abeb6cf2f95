"""Exact scalars over Q(zeta_N) and Q(t), and the q-combinatorics built on them.

A ``Field`` is either ``Field.cyclotomic(N)`` (root of unity zeta = z) or
``Field.rational()`` (generic parameter t).  ``Scalar`` values are immutable,
canonical and hashable.  Polynomial arithmetic is delegated to python-flint.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

import flint

INF = math.inf


class FieldMismatch(TypeError):
    """Scalars from two different fields were combined."""


class ParseError(ValueError):
    pass


def _poly(coeffs) -> flint.fmpq_poly:
    return flint.fmpq_poly(list(coeffs))


def _key(p: flint.fmpq_poly) -> tuple:
    return tuple((int(c.p), int(c.q)) for c in p.coeffs())


@lru_cache(maxsize=None)
def _cyclo(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(n).coeffs())


class Field:
    """Cyclotomic field Q(zeta_N) when ``n`` is set, else Q(t)."""

    __slots__ = ("n", "modulus", "_zero", "_one")
    _instances: dict = {}

    def __new__(cls, n: int | None = None):
        if n in cls._instances:
            return cls._instances[n]
        if n is not None and n < 1:
            raise ValueError("cyclotomic order must be positive")
        self = object.__new__(cls)
        self.n = n
        self.modulus = _cyclo(n) if n is not None else None
        cls._instances[n] = self
        self._zero = Scalar._make(self, _poly([]), _poly([1]))
        self._one = Scalar._make(self, _poly([1]), _poly([1]))
        return self

    @classmethod
    def cyclotomic(cls, n: int) -> Field:
        return cls(n)

    @classmethod
    def rational(cls) -> Field:
        return cls(None)

    @property
    def is_cyclotomic(self) -> bool:
        return self.n is not None

    @property
    def symbol(self) -> str:
        return "z" if self.is_cyclotomic else "t"

    def __repr__(self):
        return f"Field.cyclotomic({self.n})" if self.is_cyclotomic else "Field.rational()"

    def __reduce__(self):
        return (Field, (self.n,))

    def to_json(self):
        return {"cyclotomic": self.n} if self.is_cyclotomic else "rational_function"

    @classmethod
    def from_json(cls, obj) -> Field:
        if obj == "rational_function":
            return cls.rational()
        if isinstance(obj, dict) and set(obj) == {"cyclotomic"}:
            n = obj["cyclotomic"]
            if isinstance(n, int) and not isinstance(n, bool) and n >= 1:
                return cls.cyclotomic(n)
        raise ParseError(f"bad field spec {obj!r}")

    # constructors
    @property
    def zero(self) -> Scalar:
        return self._zero

    @property
    def one(self) -> Scalar:
        return self._one

    @property
    def gen(self) -> Scalar:
        """zeta_N or t."""
        return self.from_poly([0, 1])

    def __call__(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field is not self:
                raise FieldMismatch(f"{value.field} vs {self}")
            return value
        if isinstance(value, (int, Fraction)):
            if value == 0:
                return self._zero
            return self.from_poly([value])
        if isinstance(value, str):
            return parse_scalar(value, self)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_poly(self, coeffs, den_coeffs=None) -> Scalar:
        num = _poly(coeffs)
        den = _poly(den_coeffs) if den_coeffs is not None else _poly([1])
        return Scalar._normalize(self, num, den)

    def zeta_power(self, k: int) -> Scalar:
        return self.gen ** k


class Scalar:
    """An element of a ``Field``; canonical, immutable and hashable."""

    __slots__ = ("field", "num", "den", "_hash")

    @staticmethod
    def _make(field, num, den):
        s = object.__new__(Scalar)
        s.field = field
        s.num = num
        s.den = den
        s._hash = None
        return s

    @staticmethod
    def _normalize(field, num, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if field.n is not None:
            if not den.is_one():
                num = num * _inverse_mod(den, field.modulus)
            num = num % field.modulus
            return Scalar._make(field, num, _poly([1]))
        if num.is_zero():
            return field._zero
        if den.is_one():
            return Scalar._make(field, num, den)
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return Scalar._make(field, num, den)

    def _coerce(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise FieldMismatch(f"cannot mix {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            num = self.num + o.num
            if self.field.n is None and num.is_zero():
                return self.field._zero
            return Scalar._make(self.field, num, o.den)
        if self.den == o.den:
            return Scalar._normalize(self.field, self.num + o.num, self.den)
        return Scalar._normalize(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(self.field, -self.num, self.den)

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
        if self.field.n is not None:
            return Scalar._make(self.field, (self.num * o.num) % self.field.modulus, self.den)
        if self.den.is_one() and o.den.is_one():
            return Scalar._make(self.field, self.num * o.num, self.den) if not (
                self.num.is_zero() or o.num.is_zero()) else self.field._zero
        return Scalar._normalize(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return Scalar._normalize(self.field, self.den, self.num)

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
        if self.field.n is not None:
            num = pow(self.num, n) % self.field.modulus if n else _poly([1])
            return Scalar._make(self.field, num, self.den)
        if n == 0:
            return self.field._one
        return Scalar._make(self.field, self.num ** n, self.den ** n)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == _poly([other] if other else [])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.den.is_one() and self.num.degree() <= 0:
                c = self.num.coeffs()
                self._hash = hash(Fraction(int(c[0].p), int(c[0].q))) if c else 0
            else:
                self._hash = hash((self.field.n, _key(self.num), _key(self.den)))
        return self._hash

    def __reduce__(self):
        return (_rebuild, (self.field.n, _key(self.num), _key(self.den)))

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a rational constant")
        c = self.num.coeffs()
        return Fraction(int(c[0].p), int(c[0].q)) if c else Fraction(0)

    def degree(self) -> int:
        """deg(num) - deg(den) for Q(t); meaningless for cyclotomic fields."""
        return self.num.degree() - self.den.degree()

    def valuation(self) -> int:
        """Order of vanishing at t = 0."""
        def low(p):
            for i, c in enumerate(p.coeffs()):
                if c != 0:
                    return i
            raise ZeroDivisionError
        return low(self.num) - low(self.den)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r}, {self.field!r})"

    def __str__(self):
        return format_scalar(self)


def _rebuild(n, num, den):
    f = Field(n)
    return Scalar._make(f, _poly([Fraction(a, b) for a, b in num]), _poly([Fraction(a, b) for a, b in den]))


def _inverse_mod(a: flint.fmpq_poly, m: flint.fmpq_poly) -> flint.fmpq_poly:
    a = a % m
    if a.is_zero():
        raise ZeroDivisionError("division by zero scalar")
    g, s, _ = a.xgcd(m)
    # m is irreducible, so g is a nonzero constant
    return s / g.coeffs()[0]


# --- formatting and parsing -------------------------------------------------

def _fmt_poly(p: flint.fmpq_poly, sym: str) -> str:
    parts = []
    for k, c in reversed(list(enumerate(p.coeffs()))):
        if c == 0:
            continue
        c = Fraction(int(c.p), int(c.q))
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if k == 0 else (sym if k == 1 else f"{sym}^{k}")
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{a}*{mono}"
        else:
            body = str(a)
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def format_scalar(x: Scalar) -> str:
    sym = x.field.symbol
    num = _fmt_poly(x.num, sym)
    if x.den.is_one():
        return num
    return f"({num})/({_fmt_poly(x.den, sym)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|(.))")


def parse_scalar(text: str, field: Field) -> Scalar:
    """Parse a scalar literal such as ``"z^2"``, ``"-t^-1"`` or ``"(1-t)/(1+t)"``.

    Exactly one generator symbol is allowed, and it must match the field:
    ``z`` for cyclotomic fields and ``t`` for Q(t).
    """
    if isinstance(text, (int, Fraction)):
        return field(text)
    if not isinstance(text, str):
        raise ParseError(f"scalar literal must be a string, got {text!r}")
    toks = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            toks.append(("num", int(m.group(1))))
        elif m.group(2):
            name = m.group(2)
            if name not in ("z", "t"):
                raise ParseError(f"unknown symbol {name!r} in {text!r}")
            if name != field.symbol:
                raise ParseError(f"symbol {name!r} does not belong to {field!r} (in {text!r})")
            toks.append(("gen", name))
        elif m.group(3).strip():
            toks.append(("op", m.group(3)))
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, val = take()
            if kind != "num":
                raise ParseError(f"integer exponent expected in {text!r}")
            return base ** (sign * val)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return field(val)
        if kind == "gen":
            return field.gen
        if (kind, val) == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise ParseError(f"unbalanced parenthesis in {text!r}")
            return v
        raise ParseError(f"unexpected token {val!r} in {text!r}")

    if not toks:
        raise ParseError("empty scalar literal")
    try:
        out = expr()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return out


def detect_field(literals) -> Field | None:
    """Guess the backend from a collection of literals; None if no symbol occurs."""
    syms = set()
    for lit in literals:
        if isinstance(lit, str):
            syms |= set(re.findall(r"[A-Za-z]+", lit))
    if len(syms) > 1:
        raise ParseError(f"mixed generator symbols {sorted(syms)}")
    if syms == {"t"}:
        return Field.rational()
    return None


# --- q-combinatorics --------------------------------------------------------

def qnum(n: int, x: Scalar) -> Scalar:
    """(n)_x = 1 + x + ... + x^(n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = x.field.zero
    p = x.field.one
    for _ in range(n):
        total = total + p
        p = p * x
    return total


def qfact(n: int, x: Scalar) -> Scalar:
    """(n)_x! = (1)_x (2)_x ... (n)_x."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = x.field.one
    for r in range(1, n + 1):
        out = out * qnum(r, x)
    return out


def _qbinom_table(n: int, x: Scalar, alt: bool = False) -> list:
    # row[m] = binom(r, m)_x built row by row; alt selects the second recursion
    row = [x.field.one]
    for r in range(1, n + 1):
        new = []
        for m in range(r + 1):
            a = row[m] if m < r else x.field.zero
            b = row[m - 1] if m >= 1 else x.field.zero
            if alt:
                new.append(x ** m * a + b)
            else:
                new.append(a + x ** (r - m) * b)
        row = new
    return row


def qbinom(n: int, m: int, x: Scalar, alt: bool = False) -> Scalar:
    """Gaussian binomial via the Pascal recursion; zero outside 0 <= m <= n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m < 0 or m > n:
        return x.field.zero
    return _qbinom_table(n, x, alt)[m]


def qshift(n: int, x: Scalar, y: Scalar) -> Scalar:
    """(n; x, y) = 1 - x^(n-1) y."""
    return x.field.one - x ** (n - 1) * y


def qshift_fact(n: int, x: Scalar, y: Scalar) -> Scalar:
    """(n; x, y)! = prod_{m=1..n} (1 - x^(m-1) y)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = x.field.one
    p = x.field.one
    for _ in range(n):
        out = out * (1 - p * y)
        p = p * x
    return out


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def mul_order(x: Scalar) -> int | float:
    """Least m >= 1 with x^m = 1, or INF."""
    if x.is_zero():
        raise ZeroDivisionError("order of zero")
    f = x.field
    if f.is_cyclotomic:
        lcm = f.n * 2 // math.gcd(f.n, 2)
        for d in _divisors(lcm):
            if (x ** d).is_one():
                return d
        return INF
    if x.is_one():
        return 1
    if x == -1:
        return 2
    return INF


def kappa(x: Scalar) -> int:
    """Least r >= 2 with (r)_x! = 0, else 0."""
    order = mul_order(x)
    if order == INF or order < 2:
        return 0
    return int(order)


def kappa_prime(x: Scalar) -> int | float:
    k = kappa(x)
    return k if k >= 2 else INF


def kappa_by_factorials(x: Scalar, limit: int = 64) -> int:
    """Reference version of kappa: scan q-factorials for the first zero."""
    if x.is_zero():
        raise ZeroDivisionError("kappa of zero")
    for r in range(2, limit + 1):
        if qnum(r, x).is_zero():
            return r
    return 0


def discrete_log(x: Scalar, base: Scalar, bound: int = 256) -> int | None:
    """Some t with base^t = x, or None.  For roots of unity the least t >= 0."""
    if x.is_zero() or base.is_zero():
        raise ZeroDivisionError("discrete log of zero")
    order = mul_order(base)
    if order != INF:
        p = x.field.one
        for t in range(int(order)):
            if p == x:
                return t
            p = p * base
        return None
    if not x.field.is_cyclotomic:
        for inv in (Scalar.degree, Scalar.valuation):
            db, dx = inv(base), inv(x)
            if db != 0:
                if dx % db:
                    return None
                t = dx // db
                return t if base ** t == x else None
            if dx != 0:
                return None
    # fallback: bounded search (base is not a root of unity, so t is unique)
    if x.is_one():
        return 0
    up = down = x.field.one
    inv = base.inverse()
    for t in range(1, bound + 1):
        up = up * base
        down = down * inv
        if up == x:
            return t
        if down == x:
            return -t
    return None
