"""Brute-force dimension counts by exact rank, independent of the rewriter.

Classical (q = 1) presentations define commutative algebras.  Here the
generators are made to commute by fiat, relations become commutative
polynomials, and dimensions are ``#monomials - rank(relation multiples)``
computed over Q.  Nothing in this module calls :mod:`shapealg.rewrite`.
"""

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import NotClassical, SelectorMismatch
from .linalg import RationalEchelon

__all__ = [
    "DimTable",
    "commutative_dims",
    "filtered_localized_counts",
    "compare",
    "table_from_counts",
    "cumulative",
]


@dataclass
class DimTable:
    """Counts keyed by multidegree ``(n1, n2)`` or by length ``L``."""

    selector: str
    rows: dict
    meta: dict = field(default_factory=dict)
    stable: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(v < 0 for v in self.rows.values()):
            raise ValueError("counts must be nonnegative")
        self.rows = dict(sorted(self.rows.items()))

    def to_json(self):
        out = {"selector": self.selector, "meta": self.meta, "rows": []}
        for k, v in self.rows.items():
            row = _key_fields(self.selector, k)
            row["count"] = v
            if k in self.stable:
                row["stable"] = self.stable[k]
            out["rows"].append(row)
        return out

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["n1", "n2"] if self.selector == "multidegree" else ["length"]
        head.append("count")
        if self.stable:
            head.append("stable")
        w.writerow(head)
        for k, v in self.rows.items():
            vals = list(_key_fields(self.selector, k).values()) + [v]
            if self.stable:
                vals.append(str(self.stable.get(k, "")).lower())
            w.writerow(vals)
        return buf.getvalue()


def _key_fields(selector, k):
    if selector == "multidegree":
        return {"n1": k[0], "n2": k[1]}
    return {"length": k}


def table_from_counts(selector, rows, **meta):
    return DimTable(selector, dict(rows), dict(meta))


def cumulative(table):
    """Cumulative (length <= L) version of a per-length table."""
    if table.selector != "length":
        raise SelectorMismatch("cumulative sums need a length table")
    total = 0
    rows = {}
    for L, v in sorted(table.rows.items()):
        total += v
        rows[L] = total
    return DimTable("length", rows, dict(table.meta, cumulative=True))


# ---------------------------------------------------------------------------
# commutative images


def _check_classical(pres):
    for rel in pres.relations:
        for c in rel.terms.values():
            if not c.is_constant():
                raise NotClassical(
                    f"{pres.name}: coefficient {c} depends on q; specialize first")


def _commutative(rel, n):
    """{exponent tuple: Fraction} image of a relation under commutation."""
    out = {}
    for w, c in rel.terms.items():
        e = [0] * n
        for i in w:
            e[i] += 1
        e = tuple(e)
        out[e] = out.get(e, 0) + c.constant_value()
    return {e: v for e, v in out.items() if v}


def _monomials(n, length):
    """Exponent tuples of total degree exactly ``length``."""
    for combo in combinations_with_replacement(range(n), length):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mdeg(e, grading):
    dim = len(grading[0]) if grading else 0
    out = [0] * dim
    for i, k in enumerate(e):
        for d in range(dim):
            out[d] += k * grading[i][d]
    return tuple(out)


def commutative_dims(pres, max_total_deg):
    """Dimension of each multidegree piece of the commutative quotient."""
    _check_classical(pres)
    gens = pres.gens
    n = len(gens)
    grading = gens.grading
    if any(min(g) < 0 for g in grading):
        raise ValueError("commutative_dims needs nonnegative gradings")
    rels = [r for r in (_commutative(rel, n) for rel in pres.relations) if r]
    rel_deg = []
    for r in rels:
        ds = {_mdeg(e, grading) for e in r}
        if len(ds) != 1:
            raise ValueError(
                f"{pres.name}: inhomogeneous relation; use filtered_localized_counts")
        rel_deg.append((ds.pop(), sum(next(iter(r)))))
    by_deg = {}
    for L in range(max_total_deg + 1):
        for e in _monomials(n, L):
            by_deg.setdefault(_mdeg(e, grading), []).append(e)
    rows = {}
    for d, mons in by_deg.items():
        if sum(d) > max_total_deg:
            continue
        index = {e: k for k, e in enumerate(mons)}
        ech = RationalEchelon()
        for r, (rd, rlen) in zip(rels, rel_deg):
            need = tuple(x - y for x, y in zip(d, rd))
            if min(need) < 0:
                continue
            for m in by_deg.get(need, []):
                ech.add({index[_add(m, e)]: v for e, v in r.items()})
        rows[d] = len(mons) - ech.rank
    if gens.dim == 2:
        for n1 in range(max_total_deg + 1):
            for n2 in range(max_total_deg + 1 - n1):
                rows.setdefault((n1, n2), 0)
    return DimTable("multidegree", rows, {
        "presentation": pres.name, "bound": max_total_deg, "method": "commutative rank"})


def _filtered_count(rels, n, L, top, pfilter):
    """dim of (monomials of length <= L) modulo (ideal generated in length <= top)."""
    mons = [e for k in range(top + 1) for e in _monomials(n, k) if pfilter(e)]
    # high-length monomials get large indices so pivots land there first
    mons.sort(key=lambda e: (sum(e), e))
    index = {e: k for k, e in enumerate(mons)}
    low = sum(1 for e in mons if sum(e) <= L)
    ech = RationalEchelon()
    for r, rlen in rels:
        for k in range(top - rlen + 1):
            for m in _monomials(n, k):
                cols = [index.get(_add(m, e)) for e in r]
                if None not in cols:
                    ech.add(dict(zip(cols, r.values())))
    inside = sum(1 for c in ech.pivots if c < low)
    return low - inside


def filtered_localized_counts(pres, max_len, slack=2, p_degree=None):
    """Cumulative counts of the length filtration, with stability flags.

    Row ``L`` is the dimension of the image of monomials of length <= L after
    quotienting by every relation multiple of length <= L + slack.  A row is
    flagged stable when raising the slack from ``slack - 1`` to ``slack`` does
    not change it.  With ``p_degree = n1`` only monomials of p-degree n1 are
    counted (relations must be homogeneous in the first grading coordinate).
    """
    _check_classical(pres)
    if slack < 0 or max_len < 0:
        raise ValueError("max_len and slack must be nonnegative")
    gens = pres.gens
    n = len(gens)
    rels = []
    for rel in pres.relations:
        r = _commutative(rel, n)
        if r:
            rels.append((r, max(sum(e) for e in r)))
    if p_degree is None:
        def pfilter(e):
            return True
        rel_list = rels
    else:
        pcoord = [g[0] for g in gens.grading]

        def pdeg(e):
            return sum(k * pcoord[i] for i, k in enumerate(e))

        def pfilter(e):
            return pdeg(e) == p_degree
        rel_list = []
        for r, rl in rels:
            ds = {pdeg(e) for e in r}
            if len(ds) != 1:
                raise ValueError("relation not homogeneous in the first grading")
            rel_list.append((r, rl))
    rows, stable = {}, {}
    for L in range(max_len + 1):
        counts = []
        for s in range(max(0, slack - 1), slack + 1):
            counts.append(_filtered_count(rel_list, n, L, L + s, pfilter))
        rows[L] = counts[-1]
        stable[L] = len(counts) > 1 and counts[-1] == counts[-2]
    meta = {"presentation": pres.name, "max_len": max_len, "slack": slack,
            "method": "commutative rank, length filtration"}
    if p_degree is not None:
        meta["p_degree"] = p_degree
    return DimTable("length", rows, meta, stable)


def compare(a, b):
    """Rows where two tables differ (missing rows count as differences)."""
    if a.selector != b.selector:
        raise SelectorMismatch(f"cannot compare {a.selector} with {b.selector}")
    diffs = []
    for k in sorted(set(a.rows) | set(b.rows)):
        x, y = a.rows.get(k), b.rows.get(k)
        if x != y:
            diffs.append({"key": k, "a": x, "b": y})
    return diffs
