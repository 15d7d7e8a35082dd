"""Free associative algebra over Q[q, q^-1].

Words are tuples of generator indices; a generator's index is its position in
the :class:`GeneratorSet`, which is also its default precedence.
"""

import re
from fractions import Fraction

from .errors import ExprSyntaxError, GeneratorSetMismatch, UnknownGenerator
from .scalars import ONE, ZERO, LaurentScalar, Q

__all__ = [
    "GeneratorSet",
    "NCPoly",
    "multidegree",
    "poly_mul",
    "parse_expr",
    "format_word",
]

RESERVED = {"q"}


class GeneratorSet:
    """Ordered generator names with a Z^k grading per generator."""

    def __init__(self, names, grading):
        names = tuple(names)
        grading = tuple(tuple(int(x) for x in g) for g in grading)
        if len(names) != len(grading):
            raise ValueError("one grading vector per generator is required")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for n in names:
            if n in RESERVED:
                raise ValueError("'q' is the deformation parameter, not a generator")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise ValueError(f"bad generator name {n!r}")
        dims = {len(g) for g in grading}
        if len(dims) > 1:
            raise ValueError("all gradings must have the same dimension")
        self.names = names
        self.grading = grading
        self.dim = dims.pop() if dims else 2
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorSet)
            and self.names == other.names
            and self.grading == other.grading
        )

    def __hash__(self):
        return hash((self.names, self.grading))

    def __repr__(self):
        body = " ".join(
            f"{n}({','.join(map(str, g))})" for n, g in zip(self.names, self.grading)
        )
        return f"GeneratorSet({body})"

    def gen(self, name):
        return NCPoly(self, {(self.index(name),): ONE})

    def word(self, *names):
        return tuple(self.index(n) for n in names)

    def one(self):
        return NCPoly(self, {(): ONE})

    def zero(self):
        return NCPoly(self, {})

    def multidegree(self, word):
        deg = [0] * self.dim
        for i in word:
            for k, x in enumerate(self.grading[i]):
                deg[k] += x
        return tuple(deg)


def multidegree(word, gens):
    """Sum of generator gradings along ``word``."""
    return gens.multidegree(word)


def format_word(word, gens):
    if not word:
        return "1"
    return "*".join(gens.names[i] for i in word)


class NCPoly:
    """Noncommutative polynomial: ``{word: nonzero LaurentScalar}``."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms=None):
        self.gens = gens
        if terms is None:
            terms = {}
        self.terms = {
            tuple(w): LaurentScalar.coerce(c) for w, c in terms.items() if c != 0
        }

    @classmethod
    def _raw(cls, gens, terms):
        obj = cls.__new__(cls)
        obj.gens = gens
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, gens, c):
        return cls(gens, {(): c})

    # -- inspection ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, word):
        return self.terms.get(tuple(word), ZERO)

    def words(self):
        return list(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def multidegrees(self):
        return {self.gens.multidegree(w) for w in self.terms}

    def is_homogeneous(self):
        return len(self.multidegrees()) <= 1

    def is_length_homogeneous(self):
        return len({len(w) for w in self.terms}) <= 1

    def map_coeffs(self, f):
        return NCPoly(self.gens, {w: f(c) for w, c in self.terms.items()})

    # -- arithmetic ------------------------------------------------------

    def _check(self, other):
        if other.gens is not self.gens and other.gens != self.gens:
            raise GeneratorSetMismatch("polynomials over different generator sets")

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return other
        return NCPoly(self.gens, {(): LaurentScalar.coerce(other)})

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NCPoly._raw(self.gens, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw(self.gens, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = LaurentScalar.coerce(c)
        if c.is_zero():
            return NCPoly._raw(self.gens, {})
        return NCPoly._raw(self.gens, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return poly_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.gens.one()
        for _ in range(n):
            out = out * self
        return out

    def lmul_word(self, u, c=ONE):
        """Return ``c * u * self`` for a word ``u``."""
        return NCPoly._raw(self.gens, {u + w: v * c for w, v in self.terms.items()})

    def sandwich(self, u, v, c=ONE):
        """Return ``c * u * self * v``."""
        if c == ONE:
            return NCPoly._raw(self.gens, {u + w + v: x for w, x in self.terms.items()})
        return NCPoly._raw(
            self.gens, {u + w + v: x * c for w, x in self.terms.items()}
        )

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction, LaurentScalar)):
            return self.terms == NCPoly(self.gens, {(): other}).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- text ------------------------------------------------------------

    def sorted_terms(self, key=None):
        key = key or (lambda w: (len(w), w))
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def format(self, key=None):
        if not self.terms:
            return "0"
        pieces = []
        alone = len(self.terms) == 1
        for w, c in self.sorted_terms(key):
            wtxt = format_word(w, self.gens)
            top = c.terms[c.max_exp()]
            if c.needs_parens():
                neg = top < 0
                body = str(-c if neg else c)
                if w:
                    body = f"({body})*{wtxt}"
                elif neg or not alone:
                    body = f"({body})"
                pieces.append(("-" if neg else "+", body))
                continue
            neg = top < 0
            a = -c if neg else c
            if not w:
                body = str(a)
            elif a == ONE:
                body = wtxt
            else:
                body = f"{a}*{wtxt}"
            pieces.append(("-" if neg else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"NCPoly({self.format()!r})"


def poly_mul(a, b):
    """Bilinear extension of word concatenation."""
    if a.gens is not b.gens and a.gens != b.gens:
        raise GeneratorSetMismatch("polynomials over different generator sets")
    out = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            w = wa + wb
            c = ca * cb
            v = out.get(w)
            out[w] = c if v is None else v + c
    return NCPoly._raw(a.gens, {w: c for w, c in out.items() if c})


# ---------------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, gens):
        self.gens = gens
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise ExprSyntaxError(f"expected {value!r}", tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise ExprSyntaxError("empty expression", 0)
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return out

    def expr(self):
        out = self.gens.zero()
        sign = 1
        tok = self.peek()
        if tok[:2] in (("op", "+"), ("op", "-")):
            self.take()
            sign = -1 if tok[1] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, pos = self.take()[1:]
            rhs = self.factor()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise ExprSyntaxError("division by zero", pos)
                if set(rhs.terms) != {()}:
                    raise ExprSyntaxError("can only divide by a scalar", pos)
                d = rhs.terms[()]
                out = out.map_coeffs(lambda c: c / d)
        return out

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            neg = False
            if self.peek()[:2] == ("op", "-"):
                self.take()
                neg = True
            tok = self.take()
            if tok[0] != "num":
                raise ExprSyntaxError("expected integer exponent", tok[2])
            n = int(tok[1])
            if neg:
                if set(base.terms) != {()} or not base.terms[()].is_unit():
                    raise ExprSyntaxError("negative power of a non-unit", tok[2])
                return NCPoly(self.gens, {(): base.terms[()] ** (-n)})
            return base**n
        return base

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return NCPoly(self.gens, {(): int(value)})
        if kind == "ident":
            if value == "q":
                return NCPoly(self.gens, {(): Q})
            if value not in self.gens:
                raise UnknownGenerator(f"unknown generator {value!r} at position {pos}")
            return self.gens.gen(value)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {value!r}" if value else "unexpected end", pos)


def parse_expr(text, gens):
    """Parse an expression such as ``"p1*q1 - q*q1*p1"`` into an NCPoly."""
    return _Parser(text, gens).parse()
