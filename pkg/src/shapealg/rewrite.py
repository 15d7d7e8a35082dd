"""Degree-bounded noncommutative rewriting.

Relations are oriented into rules ``c*lead -> tail`` under a deglex order,
reduced to normal form, and completed by resolving overlap ambiguities up to
a word-length bound (Bergman's diamond lemma, Buchberger/Mora style).

Coefficients are exact Laurent polynomials.  A rule whose lead coefficient is
not a unit of Q[q, q^-1] is kept with that coefficient and applied by
fraction-free pseudo-reduction, so completion is sound over the field Q(q);
rules with unit leads are always stored monic.
"""

import heapq
import random
from dataclasses import dataclass, field

from .errors import BoundExceeded, NonInvertibleLead, NotConfluent
from .freealg import NCPoly, format_word
from .scalars import ONE, content, laurent_exact_div, laurent_gcd

__all__ = [
    "MonomialOrder",
    "RewriteRule",
    "CompletionReport",
    "orient",
    "reduce",
    "complete",
    "count_irreducible",
    "irreducible_words",
    "replay_witness",
]


class MonomialOrder:
    """Degree-lexicographic order with a configurable generator precedence.

    ``precedence`` lists generator names from smallest to largest; the default
    is the generator set's own order (p1 < p2 < p3 < q1 < q2 < q3 < t for the
    shape algebras).
    """

    def __init__(self, gens, precedence=None):
        self.gens = gens
        if precedence is None:
            precedence = list(gens.names)
        if sorted(precedence) != sorted(gens.names):
            raise ValueError("precedence must list every generator exactly once")
        self.precedence = tuple(precedence)
        rank = {gens.index(n): r for r, n in enumerate(precedence)}
        self._rank = tuple(rank[i] for i in range(len(gens)))
        self._identity = self._rank == tuple(range(len(gens)))

    def key(self, word):
        if self._identity:
            return (len(word), word)
        r = self._rank
        return (len(word), tuple(r[i] for i in word))

    def lt(self, u, v):
        return self.key(u) < self.key(v)

    def leading_word(self, poly):
        return max(poly.terms, key=self.key)

    def __repr__(self):
        return f"MonomialOrder(deglex, {' < '.join(self.precedence)})"


@dataclass(frozen=True)
class RewriteRule:
    """``coeff * lead -> tail``; every word of ``tail`` is smaller than ``lead``."""

    lead: tuple
    tail: NCPoly
    coeff: object = ONE
    rid: int = -1

    def as_relation(self):
        return NCPoly._raw(self.tail.gens, {self.lead: self.coeff}) - self.tail

    def format(self):
        gens = self.tail.gens
        lhs = format_word(self.lead, gens)
        if self.coeff != ONE:
            c = str(self.coeff)
            lhs = f"({c})*{lhs}" if self.coeff.needs_parens() else f"{c}*{lhs}"
        return f"{lhs} -> {self.tail.format()}"

    __str__ = format


# ---------------------------------------------------------------------------
# orientation


def _unit_part(c):
    """Unit u with c/u having lowest exponent 0 and top coefficient 1."""
    lo = c.min_exp()
    top = c.terms[c.max_exp()]
    return type(c)({lo: top})


def _normalize(rel, order):
    """Divide out content and a unit; return (lead, coeff, tail)."""
    g = content(rel.terms.values())
    if g != ONE:
        rel = rel.map_coeffs(lambda c: laurent_exact_div(c, g))
    lead = order.leading_word(rel)
    c = rel.terms[lead]
    if c.is_unit():
        inv = c.inverse()
        tail = NCPoly._raw(
            rel.gens, {w: -(v * inv) for w, v in rel.terms.items() if w != lead})
        return lead, ONE, tail
    u = _unit_part(c)
    inv = u.inverse()
    c = c * inv
    tail = NCPoly._raw(
        rel.gens, {w: -(v * inv) for w, v in rel.terms.items() if w != lead})
    return lead, c, tail


def orient(rel, order=None):
    """Orient a nonzero relation ``rel = 0`` into a monic rule."""
    if rel.is_zero():
        raise ValueError("cannot orient the zero relation")
    order = order or MonomialOrder(rel.gens)
    lead = order.leading_word(rel)
    c = rel.terms[lead]
    if not c.is_unit():
        raise NonInvertibleLead(
            f"lead coefficient ({c}) of {format_word(lead, rel.gens)} is not a unit")
    inv = c.inverse()
    tail = NCPoly._raw(
        rel.gens, {w: -(v * inv) for w, v in rel.terms.items() if w != lead})
    return RewriteRule(lead, tail)


# ---------------------------------------------------------------------------
# reduction


class _RuleIndex:
    def __init__(self, rules):
        self.by_lead = {}
        for r in rules:
            self.by_lead[r.lead] = r
        self.lengths = sorted({len(r.lead) for r in self.by_lead.values()})

    def add(self, rule):
        self.by_lead[rule.lead] = rule
        self.lengths = sorted({len(r.lead) for r in self.by_lead.values()})

    def remove(self, rule):
        del self.by_lead[rule.lead]
        self.lengths = sorted({len(r.lead) for r in self.by_lead.values()})

    def first_match(self, word):
        """Leftmost occurrence (shortest lead first at a position)."""
        by_lead = self.by_lead
        n = len(word)
        for s in range(n + 1):
            for L in self.lengths:
                if s + L > n:
                    break
                r = by_lead.get(word[s:s + L])
                if r is not None:
                    return s, r
        return None

    def all_matches(self, word):
        out = []
        n = len(word)
        for s in range(n + 1):
            for L in self.lengths:
                if s + L > n:
                    break
                r = self.by_lead.get(word[s:s + L])
                if r is not None:
                    out.append((s, r))
        return out

    def is_reducible(self, word):
        return self.first_match(word) is not None

    def has_suffix_lead(self, word):
        n = len(word)
        for L in self.lengths:
            if L > n:
                break
            if word[n - L:] in self.by_lead:
                return True
        return False


def _apply(terms, word, rule, pos, scale_all):
    """One reduction step on the dict ``terms``; returns the pseudo factor."""
    a = terms.pop(word)
    u, v = word[:pos], word[pos + len(rule.lead):]
    c = rule.coeff
    factor = ONE
    if c == ONE:
        mult = a
    else:
        try:
            mult = laurent_exact_div(a, c)
        except ArithmeticError:
            g = laurent_gcd(a, c)
            factor = laurent_exact_div(c, g)
            mult = laurent_exact_div(a, g)
            scale_all(factor)
    for w, t in rule.tail.terms.items():
        nw = u + w + v
        x = t * mult
        old = terms.get(nw)
        if old is None:
            terms[nw] = x
        else:
            x = old + x
            if x:
                terms[nw] = x
            else:
                del terms[nw]
    return factor


def _reduce_greedy(poly, index, order, trace=None):
    pending = dict(poly.terms)
    done = {}
    key = order.key
    heap = [(_neg_key(key(w)), w) for w in pending]
    heapq.heapify(heap)
    total = ONE

    def scale_all(f):
        for d in (pending, done):
            for w in d:
                d[w] = d[w] * f

    while heap:
        _, w = heapq.heappop(heap)
        if w not in pending:
            continue
        m = index.first_match(w)
        if m is None:
            done[w] = pending.pop(w)
            continue
        pos, rule = m
        before = set(pending)
        f = _apply(pending, w, rule, pos, scale_all)
        if f != ONE:
            total = total * f
        if trace is not None:
            trace.append(rule.rid)
        for nw in pending:
            if nw not in before:
                heapq.heappush(heap, (_neg_key(key(nw)), nw))
    return NCPoly._raw(poly.gens, done), total


def _neg_key(k):
    # max-heap on deglex keys via negated components
    return (-k[0], tuple(-x for x in k[1]))


def _reduce_random(poly, index, rng):
    terms = dict(poly.terms)
    total = ONE

    def scale_all(f):
        for w in terms:
            terms[w] = terms[w] * f

    while True:
        reducible = [w for w in terms if index.is_reducible(w)]
        if not reducible:
            break
        reducible.sort(key=lambda w: (len(w), w))
        w = rng.choice(reducible)
        pos, rule = rng.choice(index.all_matches(w))
        f = _apply(terms, w, rule, pos, scale_all)
        if f != ONE:
            total = total * f
    return NCPoly._raw(poly.gens, terms), total


def reduce(poly, rules, order=None, strategy="greedy", seed=0, return_factor=False):
    """Normal form of ``poly`` modulo ``rules``.

    ``strategy`` is ``"greedy"`` (largest reducible word first, leftmost
    match) or ``"random"`` (random reducible word and match, seeded).  If some
    rule has a non-unit lead coefficient the result is a normal form of
    ``factor * poly``; pass ``return_factor=True`` to receive that factor.
    """
    if isinstance(rules, CompletionReport):
        order = order or rules.order
        rules = rules.rules
    order = order or MonomialOrder(poly.gens)
    index = rules if isinstance(rules, _RuleIndex) else _RuleIndex(rules)
    if strategy == "greedy":
        out, f = _reduce_greedy(poly, index, order)
    elif strategy == "random":
        out, f = _reduce_random(poly, index, random.Random(seed))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return (out, f) if return_factor else out


# ---------------------------------------------------------------------------
# completion


@dataclass
class CompletionReport:
    rules: list
    order: MonomialOrder
    bound: int
    resolved: int = 0
    new_rules: dict = field(default_factory=dict)
    collapse: dict = None
    confluent: bool = False
    stabilized: bool = True
    steps: dict = field(default_factory=dict)
    ambiguities: int = 0

    @property
    def gens(self):
        return self.order.gens

    def reduce(self, poly, **kw):
        return reduce(poly, self.rules, self.order, **kw)

    def rule_strings(self):
        return [r.format() for r in self.rules]

    def lead_degrees(self):
        out = {}
        for r in self.rules:
            out[len(r.lead)] = out.get(len(r.lead), 0) + 1
        return dict(sorted(out.items()))

    def to_json(self):
        return {
            "bound": self.bound,
            "order": list(self.order.precedence),
            "confluent": self.confluent,
            "stabilized": self.stabilized,
            "ambiguities": self.ambiguities,
            "resolved": self.resolved,
            "new_rules": {str(k): v for k, v in sorted(self.new_rules.items())},
            "rule_count": len(self.rules),
            "rules": self.rule_strings(),
            "collapse": self.collapse,
        }


def _overlaps(a, b, bound):
    """Proper overlaps: suffix of lead ``a`` equals prefix of lead ``b``."""
    A, B = a.lead, b.lead
    out = []
    for k in range(1, min(len(A), len(B))):
        if A[len(A) - k:] == B[:k] and len(A) + len(B) - k <= bound:
            out.append(k)
    return out


def _spoly(a, b, k):
    A, B = a.lead, b.lead
    u, v = A[:len(A) - k], B[k:]
    left = a.tail.sandwich((), v, b.coeff)
    right = b.tail.sandwich(u, (), a.coeff)
    return left - right, A + v


def complete(rules, max_deg, order=None, strict=False, max_rules=None):
    """Resolve every ambiguity whose superposition word has length <= max_deg.

    ``rules`` may be a Presentation, a list of relations (NCPoly) or a list of
    RewriteRule.  Deriving a nonzero constant ``c*1 = 0`` is reported as a
    collapse with the chain of steps that produced it; completion stops there.
    """
    from .presentations import Presentation

    if isinstance(rules, Presentation):
        relations = list(rules.relations)
    else:
        relations = [r.as_relation() if isinstance(r, RewriteRule) else r for r in rules]
    relations = [r for r in relations if not r.is_zero()]
    if not relations:
        raise ValueError("no relations to complete")
    gens = relations[0].gens
    order = order or MonomialOrder(gens)
    top = max(r.degree() for r in relations)
    if max_deg < top:
        raise ValueError(f"max_deg {max_deg} below maximal relation degree {top}")

    index = _RuleIndex([])
    active = {}  # rid -> rule
    steps = {}  # rid -> provenance record
    counter = [0]
    heap = []
    report = CompletionReport([], order, max_deg)

    # normal selection: smallest superposition length first, then oldest
    def push(prio_word, item):
        counter[0] += 1
        heapq.heappush(heap, (len(prio_word), counter[0], item))

    for i, rel in enumerate(relations):
        push(order.leading_word(rel), ("input", i, rel))

    next_rid = [0]

    def new_rule(lead, coeff, tail):
        rid = next_rid[0]
        next_rid[0] += 1
        return RewriteRule(lead, tail, coeff, rid)

    while heap:
        _, _, item = heapq.heappop(heap)
        kind = item[0]
        if kind == "overlap":
            _, ra, rb, k = item
            if ra not in active or rb not in active:
                continue
            a, b = active[ra], active[rb]
            raw, word = _spoly(a, b, k)
            report.ambiguities += 1
            origin = {
                "kind": "overlap", "word": format_word(word, gens),
                "rules": [ra, rb], "length": len(word), "spoly": raw.format(),
            }
        elif kind == "input":
            _, i, raw = item
            origin = {"kind": "input", "index": i, "relation": raw.format()}
        else:  # reinsert
            _, old, raw = item
            origin = {"kind": "reinsert", "rule": old, "relation": raw.format()}

        trace = []
        h, _ = _reduce_greedy(raw, index, order, trace)
        origin["used"] = sorted(set(trace))
        if h.is_zero():
            if kind == "overlap":
                report.resolved += 1
            continue
        lead, coeff, tail = _normalize(h, order)
        origin["reduced"] = h.format()
        rule = new_rule(lead, coeff, tail)
        origin["result"] = rule.format()
        steps[rule.rid] = origin
        deg = len(lead)
        report.new_rules[deg] = report.new_rules.get(deg, 0) + 1
        if kind == "overlap" and origin["length"] == max_deg:
            report.stabilized = False

        if lead == ():
            report.collapse = {
                "kind": "unit",
                "rule": rule.format(),
                "chain": _chain(rule.rid, steps, active),
            }
            active[rule.rid] = rule
            break

        # inclusion ambiguities: retire rules whose lead contains the new lead
        for other in list(active.values()):
            if _contains(other.lead, lead):
                index.remove(other)
                del active[other.rid]
                push(other.lead, ("reinsert", other.rid, other.as_relation()))
        index.add(rule)
        active[rule.rid] = rule
        # keep tails in normal form
        for other in list(active.values()):
            if other.rid == rule.rid:
                continue
            if any(_contains(w, lead) for w in other.tail.terms):
                t, f = _reduce_greedy(other.tail, index, order)
                rel = NCPoly._raw(gens, {other.lead: other.coeff * f}) - t
                l2, c2, t2 = _normalize(rel, order)
                updated = RewriteRule(l2, t2, c2, other.rid)
                index.by_lead[l2] = updated
                active[other.rid] = updated
        if max_rules is not None and len(active) > max_rules:
            report.rules = _sorted_rules(active, order)
            raise BoundExceeded(f"more than {max_rules} rules", report)
        # older rule on the left first, so ties resolve by age
        for other in list(active.values()):
            if other.rid != rule.rid:
                for k in _overlaps(other, rule, max_deg):
                    push(other.lead + rule.lead[k:], ("overlap", other.rid, rule.rid, k))
            for k in _overlaps(rule, other, max_deg):
                push(rule.lead + other.lead[k:], ("overlap", rule.rid, other.rid, k))

    if report.collapse is None:
        gen_kills = [r for r in active.values() if len(r.lead) == 1 and r.tail.is_zero()]
        if gen_kills:
            r = gen_kills[0]
            report.collapse = {
                "kind": "generator",
                "rule": r.format(),
                "chain": _chain(r.rid, steps, active),
            }
    report.rules = _sorted_rules(active, order)
    report.steps = steps
    report.confluent = report.collapse is None or report.collapse["kind"] == "generator"
    if strict and not report.stabilized:
        raise BoundExceeded(
            f"rules were still being generated at the bound {max_deg}", report)
    return report


def _sorted_rules(active, order):
    return sorted(active.values(), key=lambda r: order.key(r.lead))


def _contains(word, sub):
    n, m = len(word), len(sub)
    for s in range(n - m + 1):
        if word[s:s + m] == sub:
            return True
    return False


def _chain(rid, steps, active):
    """Ancestor steps of rule ``rid`` in derivation order."""
    seen = set()
    order = []

    def visit(r):
        if r in seen or r not in steps:
            return
        seen.add(r)
        st = steps[r]
        for parent in st.get("rules", []):
            visit(parent)
        for parent in st.get("used", []):
            visit(parent)
        if st["kind"] == "reinsert":
            visit(st["rule"])
        order.append(r)

    visit(rid)
    return [dict(steps[r], rid=r) for r in order]


def replay_witness(report, presentation_or_relations):
    """Re-derive every step of a collapse witness; return True if all agree.

    Each step is recomputed from its recorded parents: the overlap S-polynomial
    (or the input/reinserted relation) is rebuilt and reduced with exactly the
    rules the step lists as used, and the normalized result must match.
    """
    from .presentations import Presentation
    from .freealg import parse_expr

    if report.collapse is None:
        return False
    if isinstance(presentation_or_relations, Presentation):
        relations = list(presentation_or_relations.relations)
    else:
        relations = list(presentation_or_relations)
    gens = report.gens
    order = report.order
    rebuilt = {}
    for step in report.collapse["chain"]:
        if step["kind"] == "overlap":
            ra, rb = step["rules"]
            a, b = rebuilt[ra], rebuilt[rb]
            k = len(a.lead) + len(b.lead) - step["length"]
            raw, _ = _spoly(a, b, k)
            if raw.format() != step["spoly"]:
                return False
        elif step["kind"] == "input":
            raw = relations[step["index"]]
        else:
            raw = parse_expr(step["relation"], gens)
        used = [rebuilt[r] for r in step["used"]]
        h, _ = _reduce_greedy(raw, _RuleIndex(used), order)
        if h.is_zero():
            return False
        lead, coeff, tail = _normalize(h, order)
        rule = RewriteRule(lead, tail, coeff, step["rid"])
        if rule.format() != step["result"]:
            return False
        rebuilt[step["rid"]] = rule
    return report.collapse["rule"] == rule.format()


# ---------------------------------------------------------------------------
# counting


def irreducible_words(report, bound):
    """Yield all irreducible words of length <= bound (depth-first)."""
    index = _RuleIndex(report.rules)
    n = len(report.gens)

    def walk(word):
        yield word
        if len(word) == bound:
            return
        for x in range(n):
            w = word + (x,)
            if not index.has_suffix_lead(w):
                yield from walk(w)

    if index.has_suffix_lead(()):
        return
    yield from walk(())


def count_irreducible(report, selector="multidegree", bound=None, assume_confluent=False):
    """Count irreducible words by multidegree or by word length.

    ``report`` must come from :func:`complete` at a bound >= ``bound`` without
    a unit collapse; otherwise :class:`NotConfluent` is raised.
    """
    if not isinstance(report, CompletionReport):
        if not assume_confluent:
            raise NotConfluent("counting needs a CompletionReport from complete()")
        rules = list(report)
        report = CompletionReport(rules, MonomialOrder(rules[0].tail.gens), bound or 0)
        report.confluent = True
        report.bound = bound
    if bound is None:
        bound = report.bound
    if not report.confluent:
        raise NotConfluent("completion reported a collapse; counts are meaningless")
    if bound > report.bound:
        raise NotConfluent(
            f"completion certified only up to {report.bound}, requested {bound}")
    gens = report.gens
    rows = {}
    if selector == "multidegree":
        if all(min(g) >= 0 for g in gens.grading) and gens.dim == 2:
            for n1 in range(bound + 1):
                for n2 in range(bound + 1 - n1):
                    rows[(n1, n2)] = 0
        for w in irreducible_words(report, bound):
            d = gens.multidegree(w)
            rows[d] = rows.get(d, 0) + 1
    elif selector == "length":
        rows = {L: 0 for L in range(bound + 1)}
        for w in irreducible_words(report, bound):
            rows[len(w)] += 1
    else:
        raise ValueError(f"unknown selector {selector!r}")
    return dict(sorted(rows.items()))
