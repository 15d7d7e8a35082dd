"""The Weyl group S3 of sl(3), its action on weights, and orthocells.

Permutations use one-line notation: ``WeylElement((2, 3, 1))`` is ``[231]``
and sends 1 -> 2, 2 -> 3, 3 -> 1.  Weights are integer pairs ``(a, b)``
meaning ``a*w1 + b*w2`` in the fundamental weights.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .errors import NegativeWeight

__all__ = [
    "WeylElement",
    "Weight",
    "IDENTITY",
    "S1",
    "S2",
    "weyl_group",
    "act_on_weight",
    "weight_orbit",
    "Orthocell",
    "enumerate_orthocells",
    "orthocell",
    "is_effective",
    "effective_cells",
    "PRINTED_KEEP_LISTS",
    "weyl_dim",
    "pairing",
]


@dataclass(frozen=True)
class WeylElement:
    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != [1, 2, 3]:
            raise ValueError(f"{self.perm} is not a permutation of 1, 2, 3")

    @classmethod
    def parse(cls, text):
        """Parse bracket notation such as ``[231]`` or ``231``."""
        digits = text.strip().strip("[]")
        return cls(tuple(int(c) for c in digits))

    def __call__(self, k):
        return self.perm[k - 1]

    def __mul__(self, other):
        # (u * v)(k) = u(v(k))
        return WeylElement(tuple(self(other(k)) for k in (1, 2, 3)))

    def inverse(self):
        inv = [0, 0, 0]
        for k in (1, 2, 3):
            inv[self(k) - 1] = k
        return WeylElement(tuple(inv))

    def length(self):
        p = self.perm
        return sum(1 for a in range(3) for b in range(a + 1, 3) if p[a] > p[b])

    @property
    def reduced_word(self):
        return _reduced_words()[self.perm]

    def sign(self):
        return -1 if self.length() % 2 else 1

    def matrix(self):
        """Signed permutation matrix of determinant 1 sending e_k to +-e_w(k)."""
        m = [[0] * 3 for _ in range(3)]
        for k in (1, 2, 3):
            m[self(k) - 1][k - 1] = 1
        if self.sign() < 0:
            # flip one column so the determinant becomes +1
            m = [[-x if c == 2 else x for c, x in enumerate(row)] for row in m]
        return m

    def __str__(self):
        return "[" + "".join(map(str, self.perm)) + "]"

    __repr__ = __str__


IDENTITY = WeylElement((1, 2, 3))
S1 = WeylElement((2, 1, 3))
S2 = WeylElement((1, 3, 2))
SIMPLE = {1: S1, 2: S2}


@lru_cache(maxsize=None)
def _reduced_words():
    words = {IDENTITY.perm: ()}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for w in frontier:
            for i, s in SIMPLE.items():
                u = s * w
                if u.perm not in words:
                    words[u.perm] = (i,) + words[w.perm]
                    nxt.append(u)
        frontier = nxt
    return words


def weyl_group():
    """All six elements, ordered by length then one-line notation."""
    els = [WeylElement(p) for p in permutations((1, 2, 3))]
    return sorted(els, key=lambda w: (w.length(), w.perm))


def word_to_element(word):
    out = IDENTITY
    for i in word:
        out = out * SIMPLE[i]
    return out


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weight:
    a: int
    b: int

    @property
    def coords(self):
        return (self.a, self.b)

    def __add__(self, other):
        return Weight(self.a + other.a, self.b + other.b)

    def __neg__(self):
        return Weight(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def to_epsilon(self):
        # a*w1 + b*w2 = (a+b)*eps1 + b*eps2  (modulo eps1+eps2+eps3)
        return (self.a + self.b, self.b, 0)

    @classmethod
    def from_epsilon(cls, x):
        return cls(x[0] - x[1], x[1] - x[2])

    def __str__(self):
        return f"({self.a},{self.b})"


W1 = Weight(1, 0)
W2 = Weight(0, 1)


def pairing(lam, i):
    """<lam, alpha_i> for a weight given in fundamental coordinates."""
    return lam.a if i == 1 else lam.b


def act_on_weight(w, lam):
    """w . lam, with w permuting the epsilon coordinates."""
    x = lam.to_epsilon()
    y = [0, 0, 0]
    for k in (1, 2, 3):
        y[w(k) - 1] = x[k - 1]
    return Weight.from_epsilon(y)


def weight_orbit(lam):
    return [act_on_weight(w, lam) for w in weyl_group()]


def weyl_dim(n1, n2):
    """Dimension of the irreducible sl(3) module of highest weight n1*w1 + n2*w2."""
    if n1 < 0 or n2 < 0:
        raise NegativeWeight(f"highest weight ({n1},{n2}) must be dominant")
    return (n1 + 1) * (n2 + 1) * (n1 + n2 + 2) // 2


# ---------------------------------------------------------------------------
# orthocells


@dataclass(frozen=True)
class Orthocell:
    """A coset of the subgroup generated by ``A`` (empty or one reflection).

    ``side == "left"`` gives members ``{w, s*w}`` (s acts on values);
    ``side == "right"`` gives ``{w, w*s}`` (s acts on positions).
    """

    name: str
    w: WeylElement
    A: tuple = ()
    side: str = "left"

    def apply(self, L_gens, x):
        for i in L_gens:
            x = SIMPLE[i] * x if self.side == "left" else x * SIMPLE[i]
        return x

    @property
    def members(self):
        out = {self.w}
        if self.A:
            out.add(self.apply(self.A, self.w))
        return frozenset(out)

    def sorted_members(self):
        return sorted(self.members, key=lambda w: (w.length(), w.perm))

    @property
    def trivial(self):
        return not self.A

    def short_long(self):
        """(shorter member, longer member); equal for trivial cells."""
        ms = self.sorted_members()
        return ms[0], ms[-1]

    def __str__(self):
        return "{" + ", ".join(map(str, self.sorted_members())) + "}"


def _cell(name, members, A, side):
    a, b = (WeylElement.parse(m) for m in members)
    s = SIMPLE[A]
    ok = (s * a == b) if side == "left" else (a * s == b)
    assert ok, (name, members, A, side)
    return Orthocell(name, a, (A,), side)


@lru_cache(maxsize=None)
def enumerate_orthocells():
    """The fourteen small orthocells: C0_1..C0_6 then C_1..C_8."""
    trivial = ["123", "132", "213", "231", "312", "321"]
    cells = [
        Orthocell(f"C0_{k + 1}", WeylElement.parse(p)) for k, p in enumerate(trivial)
    ]
    spec = [
        ("C_1", ("123", "213"), 1, "left"),
        ("C_2", ("132", "231"), 1, "left"),
        ("C_3", ("312", "321"), 1, "left"),
        ("C_4", ("123", "132"), 2, "left"),
        ("C_5", ("213", "312"), 2, "left"),
        ("C_6", ("231", "321"), 2, "left"),
        ("C_7", ("132", "312"), 1, "right"),
        ("C_8", ("213", "231"), 2, "right"),
    ]
    cells += [_cell(*row) for row in spec]
    return tuple(cells)


def orthocell(name):
    for c in enumerate_orthocells():
        if c.name == name:
            return c
    raise KeyError(f"unknown orthocell {name!r}")


# lists of kept nontrivial cells as printed in the source; provenance only
PRINTED_KEEP_LISTS = {
    (1, 1): ("C_1", "C_2", "C_5", "C_6", "C_7"),
    (2, 2): ("C_2", "C_3", "C_4", "C_5", "C_8"),
    (1, 2): ("C_2", "C_3"),
    (2, 1): ("C_2", "C_3"),
}


def effective_cells(i, j):
    """Names of the ij-effective cells, decided by the rank criterion."""
    from .repmod import effective_selection

    return effective_selection(i, j)["effective"]


def is_effective(cell, i, j):
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError("i and j must be 1 or 2")
    if isinstance(cell, str):
        cell = orthocell(cell)
    if cell.trivial:
        return True
    return cell.name in effective_cells(i, j)
