"""Propositional semantics of a feature model and brute-force configuration
enumeration.

Two independent semantics live here on purpose: ``to_propositional`` derives a
formula from the connective rules, while ``is_valid_configuration`` checks the
tree rules directly.  Tests hold them to exhaustive agreement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .model import ConstraintKind, FeatureModel, RelKind

MAX_ENUM_FEATURES = 20
DEFAULT_CONFIG_CAP = 1_000_000


# Formula nodes: plain dataclass trees evaluated over name->bool assignments.
@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    operands: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    operands: tuple["Expr", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Iff:
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Var, Not, And, Or, Implies, Iff]


@dataclass(frozen=True)
class PropositionalFormula:
    variables: frozenset[str]
    clauses: tuple[Expr, ...]


@dataclass(frozen=True)
class Configuration:
    selected: frozenset[str]


class CapExceeded(Exception):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"configuration count exceeds cap {cap} (reached {reached})")
        self.cap = cap
        self.reached = reached


def evaluate(expr: Expr, assignment: dict[str, bool]) -> bool:
    if isinstance(expr, Var):
        return assignment[expr.name]
    if isinstance(expr, Not):
        return not evaluate(expr.operand, assignment)
    if isinstance(expr, And):
        return all(evaluate(e, assignment) for e in expr.operands)
    if isinstance(expr, Or):
        return any(evaluate(e, assignment) for e in expr.operands)
    if isinstance(expr, Implies):
        return (not evaluate(expr.lhs, assignment)) or evaluate(expr.rhs, assignment)
    if isinstance(expr, Iff):
        return evaluate(expr.lhs, assignment) == evaluate(expr.rhs, assignment)
    raise TypeError(f"unknown expression node {expr!r}")


def satisfies(formula: PropositionalFormula, assignment: dict[str, bool]) -> bool:
    return all(evaluate(c, assignment) for c in formula.clauses)


def to_propositional(model: FeatureModel) -> PropositionalFormula:
    """Translate connectives rule by rule.

    Root asserted true; mandatory child iff parent; optional child implies
    parent; OR group iff-disjunction; XOR group via pairwise exclusion plus a
    covering disjunction; requires as implication; excludes as negated
    conjunction.
    """
    name = lambda fid: model.features[fid].name
    clauses: list[Expr] = [Var(name(model.root_id))]

    for f in model.features.values():
        group_members = [c for c in f.children if model.features[c].rel_kind.is_group]
        plain = [c for c in f.children if not model.features[c].rel_kind.is_group]
        p = Var(f.name)
        for c in plain:
            child = Var(name(c))
            if model.features[c].rel_kind is RelKind.MANDATORY:
                clauses.append(Iff(p, child))
            else:
                clauses.append(Implies(child, p))
        if group_members:
            members = tuple(Var(name(c)) for c in group_members)
            kind = model.features[group_members[0]].rel_kind
            if kind is RelKind.OR_MEMBER:
                clauses.append(Iff(p, Or(members)))
            else:
                for i, ci in enumerate(members):
                    others = tuple(Not(cj) for j, cj in enumerate(members) if j != i)
                    clauses.append(Implies(ci, And((p,) + others)))
                clauses.append(Implies(p, Or(members)))

    for c in model.constraints:
        a, b = Var(name(c.lhs)), Var(name(c.rhs))
        if c.kind is ConstraintKind.REQUIRES:
            clauses.append(Implies(a, b))
        else:
            clauses.append(Not(And((a, b))))

    return PropositionalFormula(
        variables=frozenset(f.name for f in model.features.values()),
        clauses=tuple(clauses),
    )


def is_valid_configuration(model: FeatureModel, config: Configuration) -> bool:
    """Tree-rule checker, independent of the propositional translation."""
    by_name = {f.name: f for f in model.features.values()}
    for n in config.selected:
        if n not in by_name:
            raise KeyError(f"configuration names unknown feature {n!r}")
    selected = config.selected

    root = model.features[model.root_id]
    if root.name not in selected:
        return False

    for f in model.features.values():
        in_sel = f.name in selected
        if in_sel and f.parent_id is not None:
            if model.features[f.parent_id].name not in selected:
                return False
        group = [c for c in f.children if model.features[c].rel_kind.is_group]
        if in_sel:
            for c in f.children:
                cf = model.features[c]
                if cf.rel_kind is RelKind.MANDATORY and cf.name not in selected:
                    return False
            if group:
                count = sum(model.features[c].name in selected for c in group)
                kind = model.features[group[0]].rel_kind
                if kind is RelKind.OR_MEMBER and count < 1:
                    return False
                if kind is RelKind.XOR_MEMBER and count != 1:
                    return False

    for c in model.constraints:
        lhs_sel = model.features[c.lhs].name in selected
        rhs_sel = model.features[c.rhs].name in selected
        if c.kind is ConstraintKind.REQUIRES and lhs_sel and not rhs_sel:
            return False
        if c.kind is ConstraintKind.EXCLUDES and lhs_sel and rhs_sel:
            return False
    return True


def enumerate_configurations(
    model: FeatureModel, cap: int = DEFAULT_CONFIG_CAP
) -> list[Configuration]:
    """All valid configurations, deterministically ordered.

    Exhaustive subset search; raises CapExceeded when the valid count would
    pass ``cap`` and refuses models above MAX_ENUM_FEATURES outright.
    """
    n = len(model.features)
    if n > MAX_ENUM_FEATURES:
        raise CapExceeded(cap, 2 ** n)
    names = sorted(f.name for f in model.features.values())
    root_name = model.features[model.root_id].name
    non_root = [x for x in names if x != root_name]

    out: list[Configuration] = []
    for r in range(len(non_root) + 1):
        for combo in itertools.combinations(non_root, r):
            cfg = Configuration(frozenset(combo) | {root_name})
            if is_valid_configuration(model, cfg):
                out.append(cfg)
                if len(out) > cap:
                    raise CapExceeded(cap, len(out))
    out.sort(key=lambda c: tuple(sorted(c.selected)))
    return out
