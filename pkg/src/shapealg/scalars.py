"""Exact Laurent polynomials in one variable ``q`` over the rationals.

Every coefficient in the package lives in Q[q, q^-1].  Values are immutable,
hashable and kept canonical (no zero coefficients), so structural equality is
mathematical equality.
"""

from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, EvalAtZero, NotDivisible

__all__ = [
    "LaurentScalar",
    "laurent_mul",
    "laurent_exact_div",
    "laurent_eval",
    "laurent_gcd",
    "parse_scalar",
    "ZERO",
    "ONE",
    "Q",
]


def _clean(terms):
    return {e: c for e, c in terms.items() if c != 0}


class LaurentScalar:
    """An element of Q[q, q^-1] stored as ``{exponent: Fraction}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, (int, Rational)):
            terms = {0: terms}
        self._terms = {int(e): Fraction(c) for e, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # terms already canonical: int keys, nonzero Fraction values
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff=1, exp=1):
        return cls({exp: coeff})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentScalar):
            return x
        if isinstance(x, (int, Rational)):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentScalar")

    # -- inspection ------------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self):
        return not self._terms or set(self._terms) == {0}

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(0, Fraction(0))

    def is_unit(self):
        """Units of Q[q, q^-1] are exactly the nonzero monomials c*q^k."""
        return len(self._terms) == 1

    def min_exp(self):
        return min(self._terms) if self._terms else 0

    def max_exp(self):
        return max(self._terms) if self._terms else 0

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        try:
            other = LaurentScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentScalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = LaurentScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentScalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                return ZERO
            f = Fraction(other)
            return LaurentScalar._raw({e: c * f for e, c in self._terms.items()})
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1:
            (eb, cb), = b.items()
            return LaurentScalar._raw({e + eb: c * cb for e, c in a.items()})
        if len(a) == 1:
            (ea, ca), = a.items()
            return LaurentScalar._raw({e + ea: c * ca for e, c in b.items()})
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                out[e] = out.get(e, 0) + ca * cb
        return LaurentScalar._raw(_clean(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit of Q[q, q^-1]")
        (e, c), = self._terms.items()
        return LaurentScalar._raw({-e: 1 / c})

    def __truediv__(self, other):
        return laurent_exact_div(self, LaurentScalar.coerce(other))

    def __rtruediv__(self, other):
        return laurent_exact_div(LaurentScalar.coerce(other), self)

    def __call__(self, r):
        return laurent_eval(self, r)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            if other == 0:
                return not self._terms
            return self._terms == {0: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not self._terms:
                self._hash = hash(0)
            elif set(self._terms) == {0}:
                self._hash = hash(self._terms[0])
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text ------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"

    def needs_parens(self):
        return len(self._terms) > 1


ZERO = LaurentScalar._raw({})
ONE = LaurentScalar._raw({0: Fraction(1)})
Q = LaurentScalar._raw({1: Fraction(1)})


# ---------------------------------------------------------------------------
# dense polynomial helpers (lowest degree first)


def _to_dense(a):
    lo = a.min_exp()
    dense = [Fraction(0)] * (a.max_exp() - lo + 1)
    for e, c in a._terms.items():
        dense[e - lo] = c
    return lo, dense


def _from_dense(lo, dense):
    return LaurentScalar._raw({lo + i: c for i, c in enumerate(dense) if c})


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    b = _trim(list(b))
    if len(a) < len(b):
        return [], _trim(a)
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        quot[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return quot, _trim(a[: len(b) - 1])


# ---------------------------------------------------------------------------
# public operations


def laurent_mul(a, b):
    return LaurentScalar.coerce(a) * LaurentScalar.coerce(b)


def laurent_exact_div(a, b):
    """Return ``c`` with ``b*c == a``; raise if b does not divide a."""
    a = LaurentScalar.coerce(a)
    b = LaurentScalar.coerce(b)
    if b.is_zero():
        raise DivisionByZero("division by the zero Laurent polynomial")
    if a.is_zero():
        return ZERO
    if b.is_unit():
        return a * b.inverse()
    la, da = _to_dense(a)
    lb, db = _to_dense(b)
    quot, rem = _poly_divmod(da, db)
    if rem:
        raise NotDivisible(f"({b}) does not divide ({a})")
    return _from_dense(la - lb, quot)


def laurent_eval(a, r):
    """Value of ``a`` at ``q = r`` as an exact Fraction.

    ``r = 0`` is refused for every input, even polynomial ones.
    """
    a = LaurentScalar.coerce(a)
    r = Fraction(r)
    if r == 0:
        raise EvalAtZero("Laurent scalars are not evaluated at q = 0")
    return sum((c * r**e for e, c in a._terms.items()), Fraction(0))


def laurent_gcd(a, b):
    """Normalized gcd in Q[q, q^-1]: monic polynomial with constant term."""
    a = LaurentScalar.coerce(a)
    b = LaurentScalar.coerce(b)
    if a.is_zero() and b.is_zero():
        return ZERO
    if a.is_zero():
        a, b = b, a
    if b.is_zero():
        _, x = _to_dense(a)
    else:
        _, x = _to_dense(a)
        _, y = _to_dense(b)
        while y:
            _, r = _poly_divmod(x, y)
            x, y = y, r
    x = _trim(list(x))
    lead = x[-1]
    return _from_dense(0, [c / lead for c in x])


def content(values):
    """gcd of an iterable of scalars (ZERO for an empty or all-zero input)."""
    g = ZERO
    for v in values:
        if v.is_zero():
            continue
        g = laurent_gcd(g, v)
        if g == ONE:
            break
    return g


def parse_scalar(text):
    """Parse scalar syntax such as ``-(q + q^-1)`` or ``3/2*q^2``."""
    from .freealg import GeneratorSet, parse_expr

    poly = parse_expr(text, GeneratorSet([], []))
    return poly.coeff(())
