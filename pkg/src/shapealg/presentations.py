"""Catalog of finitely presented algebras and a plain-text presentation format.

The catalog holds the classical and quantum shape algebras of SL(3), the
localized algebra of G1 (literal and amended quantum variants), the q3 = 1
restriction for G0, and the Drinfeld-Jimbo algebra U_q(sl3) with its two
generator sublists.  The ``*_modules`` entries are not transcribed: their
quadratic relations are computed from the U_q(sl3) modules (invariant
complements and the intertwiner R12), which yields a flat deformation.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    EvalAtZero,
    PoleAtValue,
    PresentationFormatError,
    UnknownPresentation,
)
from .freealg import GeneratorSet, parse_expr
from .scalars import LaurentScalar, laurent_eval

__all__ = [
    "Presentation",
    "builtin",
    "catalog_names",
    "classical_partner",
    "specialize_q",
    "validate_grading",
    "load_presentation",
    "parse_presentation",
    "dump_presentation",
    "SHAPE_GENERATORS",
]

P_GRADE = (1, 0)
Q_GRADE = (0, 1)
T_GRADE = (0, -1)

SHAPE_GENERATORS = [
    ("p1", P_GRADE), ("p2", P_GRADE), ("p3", P_GRADE),
    ("q1", Q_GRADE), ("q2", Q_GRADE), ("q3", Q_GRADE),
]
G1_GENERATORS = SHAPE_GENERATORS + [("t", T_GRADE)]

# root-lattice grading in simple-root coordinates
UQ_GENERATORS = [
    ("K1", (0, 0)), ("K1inv", (0, 0)), ("K2", (0, 0)), ("K2inv", (0, 0)),
    ("X1", (1, 0)), ("X2", (0, 1)), ("Y1", (-1, 0)), ("Y2", (0, -1)),
]
UQ_G1_NAMES = ["K1", "K1inv", "K2", "K2inv", "X1", "Y1", "Y2"]
UQ_G0_NAMES = ["K1", "K1inv", "X1", "Y1", "Y2"]


@dataclass
class Presentation:
    name: str
    gens: GeneratorSet
    relations: list
    notes: list
    # indices of relations allowed to be inhomogeneous (Z^2 or word length)
    inhomogeneous: set = field(default_factory=set)
    # index -> scalar the printed relation was multiplied by to clear denominators
    cleared: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.relations)

    def relation_strings(self):
        return [r.format() for r in self.relations]

    def is_classical(self):
        return all(c.is_constant() for r in self.relations for c in r.terms.values())

    def to_json(self):
        return {
            "name": self.name,
            "generators": [
                {"name": n, "grading": list(g)}
                for n, g in zip(self.gens.names, self.gens.grading)
            ],
            "relations": [
                {
                    "expr": r.format(),
                    "note": note,
                    "inhomogeneous": i in self.inhomogeneous,
                    "cleared_by": str(self.cleared[i]) if i in self.cleared else None,
                }
                for i, (r, note) in enumerate(zip(self.relations, self.notes))
            ],
        }


def _gens(spec):
    return GeneratorSet([n for n, _ in spec], [g for _, g in spec])


def _build(name, gen_spec, rows, cleared=None):
    """rows: (expr, note, inhomogeneous_flag)."""
    gens = _gens(gen_spec)
    rels, notes, inh = [], [], set()
    for i, (expr, note, flag) in enumerate(rows):
        rels.append(parse_expr(expr, gens))
        notes.append(note)
        if flag:
            inh.add(i)
    return Presentation(name, gens, rels, notes, inh, dict(cleared or {}))


# ---------------------------------------------------------------------------
# relation tables


def _sl3_classical_rows():
    rows = []
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        rows.append((f"p{i}*p{j} - p{j}*p{i}", "I11: p_ip_j=p_jp_i (i<j)", False))
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        rows.append((f"q{j}*q{i} - q{i}*q{j}", "I22: q_jq_i=q_iq_j (i<j)", False))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                rows.append((f"p{i}*q{j} - q{j}*p{i}", "II12: p_iq_j=q_jp_i (i!=j)", False))
    for i in (1, 2, 3):
        rows.append((f"p{i}*q{i} - q{i}*p{i}", "p_iq_i=q_ip_i", False))
    rows.append(("p1*q1 + p2*q2 + p3*q3", "p.q=0", False))
    return rows


def _sl3_quantum_rows():
    rows = []
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        rows.append((f"p{i}*p{j} - q*p{j}*p{i}", "(I)11 p_ip_j -qp_jp_i=0 (i<j)", False))
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        rows.append((f"q{i}*q{j} - q*q{j}*q{i}", "(I)22 q_iq_j -qq_jq_i=0 (i<j)", False))
    rows.append(("p2*q2 + q^-1*p1*q1 + q*p3*q3", "(I)12 p_2q_2+q^{-1}p_1q_1 +q p_3q_3=0", False))
    rows.append(("q2*p2 + q*q1*p1 + q^-1*q3*p3", "(I)21 q_2p_2+qq_1p_1 + q^{-1}q_3p_3=0", False))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                rows.append((
                    f"p{i}*q{j} - q*q{j}*p{i}",
                    "(II)12 printed 'p_ip_j -qp_jp_i=0, i!=j'; read as p_iq_j - q q_jp_i",
                    False,
                ))
    rows.append(("p1*q1 - q*q1*p1", "(II)12 printed 'p_1p_1 =qq_1p_1'; read as p_1q_1 = q q_1p_1", False))
    rows.append(("p3*q3 - q^-1*q3*p3", "(II)12 p_3q_3=q^{-1}q_3p_3", False))
    return rows


_LOCALIZE_CLASSICAL = [
    ("t*q3 - 1", "I0_{-12}: (1/q3).q3 = 1", True),
    ("q3*t - 1", "I0_{2-1}: q3.(1/q3) = 1", True),
]
_LOCALIZE_LITERAL = [
    ("t*q3 - 1", "I0_{-12}: (1/q3).q3 = 1", True),
    ("q3*t - q", "I0_{2-1} as printed: q3.(1/q3) = q", True),
]
_LOCALIZE_AMENDED = [
    ("t*q3 - 1", "I0_{-12}: (1/q3).q3 = 1", True),
    ("q3*t - 1", "I0_{2-1} amended to q3.(1/q3) = 1", True),
    ("t*p1 - q*p1*t", "derived: t (q3 p1 = q^-1 p1 q3) t", False),
    ("t*p2 - q*p2*t", "derived: t (q3 p2 = q^-1 p2 q3) t", False),
    ("t*p3 - q^-1*p3*t", "derived: t (q3 p3 = q p3 q3) t", False),
    ("t*q1 - q*q1*t", "derived: t (q3 q1 = q^-1 q1 q3) t", False),
    ("t*q2 - q*q2*t", "derived: t (q3 q2 = q^-1 q2 q3) t", False),
]

_CARTAN = LaurentScalar({1: 1, -1: -1})


def _uq_rows():
    rows = [
        ("K1*K1inv - 1", "(*) K_1K_1^{-1}=1", True),
        ("K1inv*K1 - 1", "(*) K_1^{-1}K_1=1", True),
        ("K2*K2inv - 1", "(*) K_2K_2^{-1}=1", True),
        ("K2inv*K2 - 1", "(*) K_2^{-1}K_2=1", True),
        ("K1*K2 - K2*K1", "(*) K_1K_2=K_2K_1", False),
    ]
    conj = [
        ("K1", "X1", "q^2"), ("K1", "Y1", "q^-2"), ("K1", "X2", "q^-1"), ("K1", "Y2", "q"),
        ("K2", "X1", "q^-1"), ("K2", "Y1", "q"), ("K2", "X2", "q^2"), ("K2", "Y2", "q^-2"),
    ]
    for k, g, c in conj:
        rows.append((f"{k}*{g}*{k}inv - {c}*{g}", f"(*) {k}{g}{k}^-1 = {c} {g}", True))
    rows.append(("X2*Y1 - Y1*X2", "(*) X_2Y_1-Y_1X_2=0", False))
    rows.append(("X1*Y2 - Y2*X1", "(*) X_1Y_2-Y_2X_1=0", False))
    rows.append((
        "(q - q^-1)*(X1*Y1 - Y1*X1) - (K1 - K1inv)",
        "(*) X_1Y_1-Y_1X_1=(K_1-K_1^{-1})/(q-q^{-1}), times (q-q^{-1})",
        True,
    ))
    rows.append((
        "(q - q^-1)*(X2*Y2 - Y2*X2) - (K2 - K2inv)",
        "(*) X_2Y_2-Y_2X_2=(K_2-K_2^{-1})/(q-q^{-1}), times (q-q^{-1})",
        True,
    ))
    for a, b, letter in [("1", "2", "X"), ("1", "2", "Y"), ("2", "1", "X"), ("2", "1", "Y")]:
        A, B = f"{letter}{a}", f"{letter}{b}"
        rows.append((
            f"{A}*{A}*{B} - (q + q^-1)*{A}*{B}*{A} + {B}*{A}*{A}",
            f"Serre {A}^2{B} - (q+q^-1){A}{B}{A} + {B}{A}^2 = 0",
            False,
        ))
    return rows


def _uq(name, keep):
    rows = _uq_rows()
    spec = [(n, g) for n, g in UQ_GENERATORS if n in keep]
    names = {n for n, _ in spec}
    kept, cleared = [], {}
    for expr, note, flag in rows:
        used = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", expr)) - {"q"}
        if used <= names:
            if "(q - q^-1)*" in expr:
                cleared[len(kept)] = _CARTAN
            kept.append((expr, note, flag))
    return _build(name, spec, kept, cleared)


def _derived(name, localize):
    """Quadratic relations read off from the U_q(sl3) modules (see repmod)."""
    from .repmod import derived_shape_relations

    spec = G1_GENERATORS if localize else SHAPE_GENERATORS
    gens = _gens(spec)
    pairs = derived_shape_relations(gens)
    rels = [r for r, _ in pairs]
    notes = [n for _, n in pairs]
    inh = set()
    if localize:
        for expr, note, _flag in _LOCALIZE_CLASSICAL:
            inh.add(len(rels))
            rels.append(parse_expr(expr, gens))
            notes.append(note)
    return Presentation(name, gens, rels, notes, inh, {})


_CATALOG = {
    "sl3_shape_classical": lambda: _build(
        "sl3_shape_classical", SHAPE_GENERATORS, _sl3_classical_rows()),
    "sl3_shape_quantum": lambda: _build(
        "sl3_shape_quantum", SHAPE_GENERATORS, _sl3_quantum_rows()),
    "g1_shape_classical": lambda: _build(
        "g1_shape_classical", G1_GENERATORS, _sl3_classical_rows() + _LOCALIZE_CLASSICAL),
    "g1_shape_quantum_literal": lambda: _build(
        "g1_shape_quantum_literal", G1_GENERATORS, _sl3_quantum_rows() + _LOCALIZE_LITERAL),
    "g1_shape_quantum_amended": lambda: _build(
        "g1_shape_quantum_amended", G1_GENERATORS, _sl3_quantum_rows() + _LOCALIZE_AMENDED),
    "g0_shape_classical": lambda: _build(
        "g0_shape_classical", SHAPE_GENERATORS,
        _sl3_classical_rows() + [("q3 - 1", "sections restricted to q3 = 1", True)]),
    "sl3_shape_quantum_modules": lambda: _derived("sl3_shape_quantum_modules", False),
    "g1_shape_quantum_modules": lambda: _derived("g1_shape_quantum_modules", True),
    "uq_sl3": lambda: _uq("uq_sl3", [n for n, _ in UQ_GENERATORS]),
    "uq_g1": lambda: _uq("uq_g1", UQ_G1_NAMES),
    "uq_g0": lambda: _uq("uq_g0", UQ_G0_NAMES),
}

_PARTNERS = {
    "sl3_shape_quantum": "sl3_shape_classical",
    "g1_shape_quantum_literal": "g1_shape_classical",
    "g1_shape_quantum_amended": "g1_shape_classical",
    "sl3_shape_quantum_modules": "sl3_shape_classical",
    "g1_shape_quantum_modules": "g1_shape_classical",
}


def catalog_names():
    return list(_CATALOG)


def builtin(name):
    """Return a fresh copy of the named catalog presentation."""
    try:
        factory = _CATALOG[name]
    except KeyError:
        raise UnknownPresentation(
            f"unknown presentation {name!r}; known: {', '.join(_CATALOG)}"
        ) from None
    return factory()


def classical_partner(name):
    return _PARTNERS.get(name)


def specialize_q(pres, r):
    """Evaluate every coefficient at ``q = r``."""
    r = Fraction(r)
    if r == 0:
        raise EvalAtZero("cannot specialize at q = 0")
    for i, factor in pres.cleared.items():
        if laurent_eval(factor, r) == 0:
            raise PoleAtValue(
                f"relation {i} of {pres.name} was cleared by ({factor}), "
                f"which vanishes at q = {r}"
            )
    rels = [
        rel.map_coeffs(lambda c: LaurentScalar(laurent_eval(c, r)))
        for rel in pres.relations
    ]
    notes = [f"{n} [q={r}]" for n in pres.notes]
    return Presentation(
        f"{pres.name}@q={r}", pres.gens, rels, notes, set(pres.inhomogeneous), {}
    )


def validate_grading(pres):
    """Per-relation homogeneity report.

    status is ``homogeneous``, ``whitelisted`` (inhomogeneous in Z^2 or in
    word length, and flagged as such) or ``violation``.
    """
    entries = []
    for i, rel in enumerate(pres.relations):
        degs = sorted(rel.multidegrees())
        z2 = len(degs) <= 1
        length = rel.is_length_homogeneous()
        if z2 and length:
            status = "homogeneous"
        elif i in pres.inhomogeneous:
            status = "whitelisted"
        else:
            status = "violation"
        entries.append({
            "index": i,
            "relation": rel.format(),
            "multidegrees": [list(d) for d in degs],
            "z2_homogeneous": z2,
            "length_homogeneous": length,
            "status": status,
        })
    return {
        "presentation": pres.name,
        "ok": all(e["status"] != "violation" for e in entries),
        "violations": [e for e in entries if e["status"] == "violation"],
        "relations": entries,
    }


# ---------------------------------------------------------------------------
# text format

_GEN_DECL = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_presentation(text, name="user"):
    """Parse the ``generators:`` header plus one relation per line.

    A relation may be written ``lhs = rhs``.  A trailing ``# inhomogeneous``
    comment whitelists the relation for :func:`validate_grading`.
    """
    gens = None
    rels, notes, inh = [], [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        line = line.strip()
        if not line:
            continue
        if gens is None:
            if not line.startswith("generators:"):
                raise PresentationFormatError(
                    f"line {lineno}: expected 'generators:' header")
            decls = line[len("generators:"):].strip()
            found = _GEN_DECL.findall(decls)
            if not found or _GEN_DECL.sub("", decls).strip():
                raise PresentationFormatError(f"line {lineno}: bad generator list")
            gens = GeneratorSet(
                [n for n, _, _ in found], [(int(a), int(b)) for _, a, b in found])
            continue
        if "=" in line:
            lhs, rhs = line.split("=", 1)
            rel = parse_expr(lhs, gens) - parse_expr(rhs, gens)
        else:
            rel = parse_expr(line, gens)
        if rel.is_zero():
            raise PresentationFormatError(f"line {lineno}: relation is identically zero")
        if "inhomogeneous" in comment:
            inh.add(len(rels))
        rels.append(rel)
        notes.append(f"line {lineno}: {line}")
    if gens is None:
        raise PresentationFormatError("missing 'generators:' header")
    return Presentation(name, gens, rels, notes, inh, {})


def load_presentation(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = re.sub(r"\.[^.]*$", "", path.replace("\\", "/").rsplit("/", 1)[-1])
    return parse_presentation(text, name=stem)


def dump_presentation(pres):
    decl = " ".join(
        f"{n}({g[0]},{g[1]})" for n, g in zip(pres.gens.names, pres.gens.grading))
    lines = [f"# {pres.name}", f"generators: {decl}"]
    for i, rel in enumerate(pres.relations):
        line = rel.format()
        if i in pres.inhomogeneous:
            line += "  # inhomogeneous"
        lines.append(line)
    return "\n".join(lines) + "\n"

