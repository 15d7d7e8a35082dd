"""Coproduct of U_q(sl3) and sub-bialgebra checks.

The coproduct on generators is

    Delta K = K (x) K            (K in K1, K1inv, K2, K2inv)
    Delta X_i = X_i (x) 1 + K_i (x) X_i
    Delta Y_i = Y_i (x) K_i^-1 + 1 (x) Y_i

A generating set closes under Delta exactly when every tensor factor of every
generator's coproduct is a word in that set.  U_q(g1) passes; U_q(g0), which
lacks K2, fails because Delta Y2 contains K2^-1.
"""

from dataclasses import dataclass
from fractions import Fraction

from .scalars import ONE

__all__ = [
    "SYMBOLS",
    "CoprodExpr",
    "coproduct",
    "sub_bialgebra_check",
    "matrix_membership_check",
    "coproduct_relation_check",
    "UQ_G1_SYMBOLS",
    "UQ_G0_SYMBOLS",
]

SYMBOLS = ("K1", "K1inv", "K2", "K2inv", "X1", "X2", "Y1", "Y2")
UQ_G1_SYMBOLS = ("K1", "K1inv", "K2", "K2inv", "X1", "Y1", "Y2")
UQ_G0_SYMBOLS = ("K1", "K1inv", "X1", "Y1", "Y2")


@dataclass(frozen=True)
class CoprodExpr:
    """Sum of ``coeff * left (x) right`` with words of generator symbols."""

    terms: tuple  # ((LaurentScalar, left_word, right_word), ...)

    def symbols(self):
        out = []
        for _, left, right in self.terms:
            for s in left + right:
                if s not in out:
                    out.append(s)
        return out

    def __str__(self):
        parts = []
        for c, left, right in self.terms:
            lt = "*".join(left) or "1"
            rt = "*".join(right) or "1"
            body = f"{lt}⊗{rt}"
            if c != ONE:
                body = f"({c})*{body}"
            parts.append(body)
        return " + ".join(parts)


def coproduct(g):
    """Delta(g) for one of the eight generator symbols."""
    if g not in SYMBOLS:
        raise KeyError(f"unknown generator symbol {g!r}")
    if g.startswith("K"):
        return CoprodExpr(((ONE, (g,), (g,)),))
    i = g[1]
    if g.startswith("X"):
        return CoprodExpr(((ONE, (g,), ()), (ONE, (f"K{i}",), (g,))))
    return CoprodExpr(((ONE, (g,), (f"K{i}inv",)), (ONE, (), (g,))))


def sub_bialgebra_check(gens):
    """Does the subalgebra generated by ``gens`` close under the coproduct?

    Returns ``{"pass": bool, "witnesses": [(g, offending symbol), ...],
    "coproducts": {g: text}}``.
    """
    gens = list(gens)
    allowed = set(gens)
    witnesses = []
    table = {}
    for g in gens:
        d = coproduct(g)
        table[g] = str(d)
        for s in d.symbols():
            if s not in allowed:
                witnesses.append((g, s))
    return {"pass": not witnesses, "witnesses": witnesses, "coproducts": table}


# ---------------------------------------------------------------------------
# representation-level corroboration


def _matrix_algebra_contains(target, mats, dim):
    """Is ``target`` in the unital algebra generated by ``mats``? (over Q)"""
    from .linalg import RationalEchelon

    def flat(m):
        return {r * dim + c: v for c, col in m.items() for r, v in col.items() if v}

    ident = {c: {c: Fraction(1)} for c in range(dim)}
    ech = RationalEchelon()
    ech.add(flat(ident))
    basis = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for b in frontier:
            for m in mats:
                prod = _matmul(m, b, dim)
                if ech.add(flat(prod)):
                    basis.append(prod)
                    nxt.append(prod)
        frontier = nxt
    return ech.contains(flat(target)), len(basis)


def _matmul(a, b, dim):
    out = {}
    for c, col in b.items():
        acc = {}
        for k, v in col.items():
            for r, w in a.get(k, {}).items():
                acc[r] = acc.get(r, 0) + w * v
        acc = {r: v for r, v in acc.items() if v}
        if acc:
            out[c] = acc
    return out


def matrix_membership_check(target, gens, module=None, r=Fraction(3, 2)):
    """Is the image of ``target`` in the algebra generated by images of ``gens``?

    All matrices are specialized at ``q = r`` (default module V1 (+) V2).
    Returns ``(member, algebra_dimension)``.
    """
    from .repmod import V1, V2, direct_sum

    if module is None:
        module = direct_sum(V1(), V2())
    spec = module.specialize(r)

    def rational(g):
        m = spec.generator_matrix(g)
        return {c: {row: v.constant_value() for row, v in col.items()} for c, col in m.items()}

    mats = [rational(g) for g in gens]
    return _matrix_algebra_contains(rational(target), mats, spec.dim)


def coproduct_relation_check(rel, module=None, opposite=False):
    """Apply Delta to ``rel`` and test it on ``module (x) module``.

    ``rel`` is an NCPoly over the U_q generator set.  The default module is
    (V1 (+) V2) (x) (V1 (+) V2) built with the coproduct above
    (``opposite=False``).  Returns ``{"zero": bool, "defect": {...}}`` with
    the nonzero entries of the resulting operator on failure.
    """
    from .repmod import V1, V2, direct_sum, tensor

    if module is None:
        base = direct_sum(V1(), V2())
        module = tensor(base, base, opposite=opposite)
    op = module.operator(rel)
    defect = {
        f"{module.basis[r]} <- {module.basis[c]}": str(v)
        for c, col in op.items()
        for r, v in col.items()
    }
    return {"zero": not defect, "defect": defect}
