"""Exact linear algebra for sparse rows.

Rows are dictionaries ``{column: value}`` without zero entries.  Rational rows
are reduced by ordinary Gaussian elimination over Fractions; rows with Laurent
polynomial entries are reduced fraction-free (no division except exact
division by row content), which computes ranks and kernels over Q(q).
"""

from fractions import Fraction

from .scalars import ONE, LaurentScalar, content, laurent_eval, laurent_exact_div

__all__ = [
    "RationalEchelon",
    "rational_rank",
    "laurent_echelon",
    "laurent_rank",
    "laurent_nullspace",
    "evaluate_rows",
    "checked_rank",
    "in_span",
    "SAMPLE_POINTS",
]

# evaluation points for cross-checks; avoid q in {0, 1, -1}
SAMPLE_POINTS = (Fraction(2), Fraction(3, 2), Fraction(-5, 3))


class RationalEchelon:
    """Incremental row echelon form over Q.

    ``add`` reduces a row against the stored pivots and keeps it if a nonzero
    remainder is left; ``rank`` is the number of kept rows.
    """

    def __init__(self):
        self.pivots = {}  # pivot column -> row normalized to 1 at the pivot

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row):
        row = {c: Fraction(v) for c, v in row.items() if v}
        pivots = self.pivots
        # eliminate pivot columns from largest to smallest so that fill-in
        # only creates columns we have not yet visited
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = max(hits)
            f = row[c]
            for k, v in pivots[c].items():
                x = row.get(k, 0) - f * v
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)

    def add(self, row):
        row = self.reduce(row)
        if not row:
            return False
        c = max(row)
        inv = 1 / row[c]
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        return True

    def contains(self, row):
        return not self.reduce(row)


def rational_rank(rows):
    ech = RationalEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


# ---------------------------------------------------------------------------
# Laurent entries


def _primitive(row):
    g = content(row.values())
    if g == ONE or not row:
        return row
    return {c: laurent_exact_div(v, g) for c, v in row.items()}


def laurent_echelon(rows):
    """Fraction-free reduced echelon form over Q(q).

    Returns ``(echelon_rows, pivot_columns)``; in each returned row the pivot
    column is nonzero and every other row is zero there.
    """
    work = [
        {c: LaurentScalar.coerce(v) for c, v in r.items() if v} for r in rows
    ]
    work = [r for r in work if r]
    basis = []
    pivcols = []
    for row in work:
        for b, pc in zip(basis, pivcols):
            a = row.get(pc)
            if a is None:
                continue
            d = b[pc]
            new = {}
            for c in set(row) | set(b):
                v = row.get(c, 0) * d - b.get(c, 0) * a
                if v:
                    new[c] = v
            row = _primitive(new)
        if not row:
            continue
        pc = min(row)
        # clear the new pivot column from earlier rows
        for k, b in enumerate(basis):
            a = b.get(pc)
            if a is None:
                continue
            d = row[pc]
            new = {}
            for c in set(b) | set(row):
                v = b.get(c, 0) * d - row.get(c, 0) * a
                if v:
                    new[c] = v
            basis[k] = _primitive(new)
        basis.append(row)
        pivcols.append(pc)
    return basis, pivcols


def laurent_rank(rows):
    return len(laurent_echelon(rows)[1])


def laurent_nullspace(rows, ncols):
    """Basis of {x : sum_c row[c] * x[c] = 0 for every row} over Q(q).

    Vectors are dicts with Laurent entries, primitive (content 1).
    """
    basis, pivcols = laurent_echelon(rows)
    free = [c for c in range(ncols) if c not in set(pivcols)]
    out = []
    for f in free:
        denom = ONE
        for b, pc in zip(basis, pivcols):
            if f in b:
                denom = denom * b[pc]
        vec = {f: denom}
        for b, pc in zip(basis, pivcols):
            a = b.get(f)
            if a is not None:
                vec[pc] = -laurent_exact_div(a * denom, b[pc])
        out.append(_primitive(vec))
    return out


def evaluate_rows(rows, r):
    return [
        {c: laurent_eval(v, r) for c, v in row.items() if laurent_eval(v, r)}
        for row in rows
    ]


def checked_rank(rows, points=SAMPLE_POINTS):
    """Fraction-free rank plus ranks at sample points.

    Returns ``(rank, point_ranks, agree)``.  The rank over Q(q) bounds every
    specialized rank from above; ``agree`` is true when the maximum of the
    specialized ranks equals it.
    """
    rank = laurent_rank(rows)
    point_ranks = {str(p): rational_rank(evaluate_rows(rows, p)) for p in points}
    agree = max(point_ranks.values(), default=0) == rank
    return rank, point_ranks, agree


def in_span(vec, rows):
    """True if ``vec`` lies in the Q(q)-span of ``rows``."""
    if not vec:
        return True
    return laurent_rank(list(rows) + [vec]) == laurent_rank(rows)
