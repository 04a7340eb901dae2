"""Compile a small class-model description to modal and timed signature text.

Input is a line-oriented ``.cm`` description of classes, generalisations,
properties (rigid or flexible) and relations with multiplicities.  Two
emitters share the translation scheme:

* ``emit_modal``: classes become sorts, generalisations subsorts, properties
  rigid/flexible partial operations, relations rigid (or flexible, when
  dynamic) predicates; an ``isAlive`` predicate is declared per sort, and
  multiplicity bounds become first-order counting axioms.
* ``emit_casl``: the world-indexed view; a sort ``Time`` is added and every
  flexible symbol gains a trailing ``Time`` argument.  Rigid symbols and the
  multiplicity axioms are unchanged.

Multiplicity encoding for a relation ``has : A * B`` with bounds ``[m..n]``
on the B end: lower bound m emits m existentially quantified pairwise
distinct witnesses; upper bound n emits an n+1-variable collapse axiom.
Bounds on the A end quantify the other way around.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
MULT_RE = re.compile(r"\[(\d+)\.\.(\d+|\*)\]\Z")


class ClassModelError(Exception):
    """Parse or consistency failure with a 1-based source position."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"{line}: {message}")


@dataclass(frozen=True)
class Property:
    owner: str
    name: str
    result: str
    rigid: bool


@dataclass(frozen=True)
class RelationEnd:
    cls: str
    lower: int
    upper: int | None  # None: unbounded


@dataclass(frozen=True)
class Relation:
    kind: str  # association | composition
    a: RelationEnd
    b: RelationEnd
    dynamic: bool
    name: str = "has"


@dataclass
class ClassModel:
    classes: list[str] = field(default_factory=list)
    generalisations: list[tuple[str, str]] = field(default_factory=list)  # (sub, super)
    properties: list[Property] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)


def _parse_end(tok_cls: str, tok_mult: str, lineno: int) -> RelationEnd:
    if not IDENT_RE.match(tok_cls):
        raise ClassModelError(lineno, f"bad class name {tok_cls!r}")
    m = MULT_RE.match(tok_mult)
    if not m:
        raise ClassModelError(lineno, f"bad multiplicity {tok_mult!r}, expected [m..n] or [m..*]")
    lower = int(m.group(1))
    upper = None if m.group(2) == "*" else int(m.group(2))
    if upper is not None and lower > upper:
        raise ClassModelError(lineno, f"multiplicity lower bound {lower} exceeds upper bound {upper}")
    return RelationEnd(tok_cls, lower, upper)


def parse_class_model(text: str) -> ClassModel:
    model = ClassModel()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "class" and len(toks) == 2:
            if not IDENT_RE.match(toks[1]):
                raise ClassModelError(lineno, f"bad class name {toks[1]!r}")
            if toks[1] in model.classes:
                raise ClassModelError(lineno, f"duplicate class {toks[1]}")
            model.classes.append(toks[1])
        elif head == "extends" and len(toks) == 3:
            model.generalisations.append((toks[1], toks[2]))
        elif head == "prop" and len(toks) == 7 and toks[1] in ("rigid", "flexible") and toks[3] == ":" and toks[5] == "->":
            model.properties.append(Property(toks[4], toks[2], toks[6], rigid=toks[1] == "rigid"))
        elif head in ("assoc", "comp"):
            dynamic = False
            body = toks[1:]
            if body and body[-1] == "dynamic":
                dynamic = True
                body = body[:-1]
            if len(body) != 5 or body[2] != "--":
                raise ClassModelError(lineno, "expected: assoc|comp A [m..n] -- B [m..n] [dynamic]")
            a = _parse_end(body[0], body[1], lineno)
            b = _parse_end(body[3], body[4], lineno)
            kind = "association" if head == "assoc" else "composition"
            model.relations.append(Relation(kind, a, b, dynamic))
        else:
            raise ClassModelError(lineno, f"cannot parse statement {line!r}")
    _check(model)
    return model


def _check(model: ClassModel) -> None:
    declared = set(model.classes)
    for sub, sup in model.generalisations:
        for cls in (sub, sup):
            if cls not in declared:
                raise ClassModelError(0, f"generalisation references undeclared class {cls}")
    for prop in model.properties:
        if prop.owner not in declared:
            raise ClassModelError(0, f"property {prop.name} on undeclared class {prop.owner}")
    for rel in model.relations:
        for end in (rel.a, rel.b):
            if end.cls not in declared:
                raise ClassModelError(0, f"relation references undeclared class {end.cls}")
    # generalisation graph must be acyclic
    above: dict[str, set[str]] = {}
    for sub, sup in model.generalisations:
        above.setdefault(sub, set()).add(sup)

    def reaches(frm: str, to: str, seen: set[str]) -> bool:
        if frm == to:
            return True
        if frm in seen:
            return False
        seen.add(frm)
        return any(reaches(nxt, to, seen) for nxt in above.get(frm, ()))

    for sub, _ in model.generalisations:
        if any(reaches(sup, sub, set()) for sup in above.get(sub, ())):
            raise ClassModelError(0, f"cyclic generalisation involving {sub}")


def _var(cls: str, index: int | None = None) -> str:
    base = cls[0].lower()
    return base if index is None else f"{base}{index}"


def _lower_bound_axiom(rel: Relation, witness_end: RelationEnd, other: RelationEnd, order: str) -> str:
    """m pairwise-distinct witnesses for every instance of the other end."""
    k = witness_end.lower
    v = _var(other.cls)
    if k == 1 and _var(witness_end.cls) != v:
        ws = [_var(witness_end.cls)]
    else:
        ws = [_var(witness_end.cls, i) for i in range(1, k + 1)]
    distinct = [f"not ({ws[i]} = {ws[j]})" for i in range(k) for j in range(i + 1, k)]
    applied = [f"{rel.name}({w}, {v})" if order == "wa" else f"{rel.name}({v}, {w})" for w in ws]
    body = " /\\ ".join(distinct + applied)
    return f". forall {v} : {other.cls} . exists {', '.join(ws)} : {witness_end.cls} . {body}"


def _upper_bound_axiom(rel: Relation, bounded_end: RelationEnd, other: RelationEnd, order: str) -> str:
    """k+1 related instances must collapse, for upper bound k."""
    k = bounded_end.upper
    assert k is not None
    v = _var(other.cls)
    ws = [_var(bounded_end.cls, i) for i in range(1, k + 2)]
    applied = [f"{rel.name}({w}, {v})" if order == "wa" else f"{rel.name}({v}, {w})" for w in ws]
    collapse = " \\/ ".join(f"{ws[i]} = {ws[j]}" for i in range(k + 1) for j in range(i + 1, k + 1))
    conj = " /\\ ".join(applied)
    return f". forall {v} : {other.cls}; {', '.join(ws)} : {bounded_end.cls} . {conj} => {collapse}"


def _multiplicity_axioms(model: ClassModel) -> list[str]:
    out = []
    for rel in model.relations:
        # bounds on the B end constrain, per A instance, the related Bs
        if rel.b.lower >= 1:
            out.append(_lower_bound_axiom(rel, rel.b, rel.a, order="aw"))
        if rel.b.upper is not None:
            out.append(_upper_bound_axiom(rel, rel.b, rel.a, order="aw"))
        # and symmetrically for the A end
        if rel.a.lower >= 1:
            out.append(_lower_bound_axiom(rel, rel.a, rel.b, order="wa"))
        if rel.a.upper is not None:
            out.append(_upper_bound_axiom(rel, rel.a, rel.b, order="wa"))
    return out


def _pred_decl(rel: Relation) -> str:
    return f"__{rel.name}__ : {rel.a.cls} * {rel.b.cls}"


def _sections(model: ClassModel, timed: bool) -> list[str]:
    lines: list[str] = []
    lines.append("%% Classes:")
    sorts = (["Time"] if timed else []) + model.classes
    lines.append(f"sorts {', '.join(sorts)}" if sorts else "%% (none)")
    lines.append("%% Hierarchy:")
    by_super: dict[str, list[str]] = {}
    for sub, sup in model.generalisations:
        by_super.setdefault(sup, []).append(sub)
    for sup in sorted(by_super):
        lines.append(f"sorts {', '.join(by_super[sup])} < {sup}")
    lines.append("%% Properties:")
    rigid_props = [p for p in model.properties if p.rigid]
    flex_props = [p for p in model.properties if not p.rigid]
    if rigid_props:
        lines.append("ops" if timed else "rigid ops")
        for p in rigid_props:
            lines.append(f"     {p.name} : {p.owner} ->? {p.result}")
    if flex_props:
        lines.append("ops" if timed else "flexible ops")
        for p in flex_props:
            domain = f"{p.owner} * Time" if timed else p.owner
            lines.append(f"     {p.name} : {domain} ->? {p.result}")
    for title, kind in (("%% Compositions:", "composition"), ("%% Associations:", "association")):
        lines.append(title)
        rigid_rels = [r for r in model.relations if r.kind == kind and not r.dynamic]
        flex_rels = [r for r in model.relations if r.kind == kind and r.dynamic]
        if rigid_rels:
            lines.append("preds" if timed else "rigid preds")
            for r in rigid_rels:
                lines.append(f"     {_pred_decl(r)}")
        if flex_rels:
            lines.append("preds" if timed else "flexible preds")
            for r in flex_rels:
                decl = f"{r.name} : {r.a.cls} * {r.b.cls} * Time" if timed else f"{r.name} : {r.a.cls} * {r.b.cls}"
                lines.append(f"     {decl}")
    lines.append("%% Is Alive preds:")
    if model.classes:
        lines.append("preds" if timed else "rigid preds")
        for cls in model.classes:
            lines.append(f"     isAlive : {cls}")
    lines.append("%% Multiplicity axioms:")
    lines.extend(_multiplicity_axioms(model))
    lines.append("%% note: isAlive support axioms are not emitted")
    return lines


def emit_modal(model: ClassModel) -> str:
    """World-implicit signature: rigid/flexible keywords mark dynamics."""
    return "\n".join(_sections(model, timed=False)) + "\n"


def emit_casl(model: ClassModel) -> str:
    """Time-indexed signature: flexible symbols gain a Time argument."""
    return "\n".join(_sections(model, timed=True)) + "\n"
