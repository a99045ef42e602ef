"""Core domain types for feature models: features, relationships, constraints.

A feature model is a rooted tree of named features.  Each non-root feature
carries a relationship kind toward its parent (mandatory, optional, or
membership in an OR/XOR sibling group), and the model may carry cross-tree
requires/excludes constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence


class RelKind(Enum):
    MANDATORY = "mandatory"
    OPTIONAL = "optional"
    OR_MEMBER = "or"
    XOR_MEMBER = "xor"

    @property
    def is_group(self) -> bool:
        return self in (RelKind.OR_MEMBER, RelKind.XOR_MEMBER)


class ConstraintKind(Enum):
    REQUIRES = "requires"
    EXCLUDES = "excludes"


@dataclass(frozen=True)
class Feature:
    id: str
    name: str
    parent_id: Optional[str]
    rel_kind: RelKind
    abstract: bool = False
    children: tuple[str, ...] = ()


@dataclass(frozen=True)
class CrossTreeConstraint:
    kind: ConstraintKind
    lhs: str
    rhs: str


@dataclass(frozen=True)
class FeatureModel:
    """Immutable feature model; mutate by building a new instance."""

    name: str
    root_id: str
    features: dict[str, Feature]
    constraints: tuple[CrossTreeConstraint, ...] = ()

    def feature(self, fid: str) -> Feature:
        try:
            return self.features[fid]
        except KeyError:
            raise UnknownFeatureError(fid) from None

    def feature_by_name(self, name: str) -> Optional[Feature]:
        for f in self.features.values():
            if f.name == name:
                return f
        return None

    def names(self) -> set[str]:
        return {f.name for f in self.features.values()}


class UnknownFeatureError(KeyError):
    """Raised when an operation references a feature id absent from the model."""


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Violation:
    severity: Severity
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class RelationshipSlot:
    """One countable relationship: a parent-child edge or a constraint."""

    feature_id: Optional[str] = None
    constraint: Optional[CrossTreeConstraint] = None

    @property
    def is_constraint(self) -> bool:
        return self.constraint is not None


def validate(model: FeatureModel) -> list[Violation]:
    """Check well-formedness; an empty list means all invariants hold.

    Violations are returned, never raised.  ERROR severity marks models that
    must not be processed further; WARNING marks tolerated oddities such as
    single-member groups.
    """
    out: list[Violation] = []

    def err(code: str, subject: str, message: str) -> None:
        out.append(Violation(Severity.ERROR, code, subject, message))

    def warn(code: str, subject: str, message: str) -> None:
        out.append(Violation(Severity.WARNING, code, subject, message))

    if model.root_id not in model.features:
        err("missing-root", model.root_id, "root id is not a feature of the model")
        return out

    roots = [f.id for f in model.features.values() if f.parent_id is None]
    if roots != [model.root_id] and set(roots) != {model.root_id}:
        err(
            "root-count",
            ",".join(roots),
            "exactly one feature must lack a parent, and it must be the root",
        )

    seen_names: dict[str, str] = {}
    for f in model.features.values():
        if not f.name.strip():
            err("empty-name", f.id, "feature name must contain a non-whitespace character")
        if f.name in seen_names:
            err("duplicate-name", f.id, f"duplicate feature name {f.name!r}")
        else:
            seen_names[f.name] = f.id
        if f.parent_id is not None and f.parent_id not in model.features:
            err("dangling-parent", f.id, f"parent {f.parent_id!r} does not exist")
        for cid in f.children:
            if cid not in model.features:
                err("dangling-child", f.id, f"child {cid!r} does not exist")
            elif model.features[cid].parent_id != f.id:
                err("parent-mismatch", cid, "child's parent link disagrees with children list")

    # Reachability and cycle check via the children lists.
    reached: set[str] = set()
    stack = [model.root_id]
    while stack:
        fid = stack.pop()
        if fid in reached:
            err("cycle", fid, "feature reached twice; parent links do not form a tree")
            continue
        reached.add(fid)
        stack.extend(c for c in model.features[fid].children if c in model.features)
    unreachable = set(model.features) - reached
    for fid in sorted(unreachable):
        err("unreachable", fid, "feature not reachable from the root")

    root = model.features[model.root_id]
    if root.rel_kind is not RelKind.MANDATORY:
        warn("root-kind", root.id, "root should carry the mandatory kind by convention")

    # Group homogeneity: children of one parent are either all members of a
    # single OR/XOR group or each mandatory/optional.
    for f in model.features.values():
        kinds = [model.features[c].rel_kind for c in f.children if c in model.features]
        group_kinds = {k for k in kinds if k.is_group}
        if group_kinds:
            if len(group_kinds) > 1 or any(not k.is_group for k in kinds):
                err("mixed-group", f.id, "group members must share their kind with all siblings")
            elif len(kinds) == 1:
                warn("single-member-group", f.id, "group has a single member")

    for i, c in enumerate(model.constraints):
        subject = f"constraint[{i}]"
        if c.lhs == c.rhs:
            err("self-constraint", subject, "constraint endpoints must differ")
        for end in (c.lhs, c.rhs):
            if end not in model.features:
                err("dangling-constraint", subject, f"constraint references missing feature {end!r}")

    return out


def is_well_formed(model: FeatureModel) -> bool:
    return not any(v.severity is Severity.ERROR for v in validate(model))


def depth(model: FeatureModel, fid: str) -> int:
    """Distance from the root; the root itself has depth 0."""
    f = model.feature(fid)
    d = 0
    while f.parent_id is not None:
        f = model.feature(f.parent_id)
        d += 1
    return d


def preorder(model: FeatureModel) -> list[str]:
    """Feature ids, root first, children in stored order."""
    out: list[str] = []
    stack = [model.root_id]
    while stack:
        fid = stack.pop()
        out.append(fid)
        stack.extend(reversed(model.features[fid].children))
    return out


def relationship_slots(model: FeatureModel) -> list[RelationshipSlot]:
    """One slot per non-root feature edge plus one per constraint.

    Feature slots come in preorder, then constraint slots in stored order.
    """
    slots = [
        RelationshipSlot(feature_id=fid)
        for fid in preorder(model)
        if fid != model.root_id
    ]
    slots.extend(RelationshipSlot(constraint=c) for c in model.constraints)
    return slots


def structurally_equal(a: FeatureModel, b: FeatureModel) -> bool:
    """Equality up to feature ids: names, kinds, order, flags, constraints."""

    def shape(m: FeatureModel, fid: str):
        f = m.features[fid]
        return (
            f.name,
            f.rel_kind,
            f.abstract,
            tuple(shape(m, c) for c in f.children),
        )

    def cons(m: FeatureModel):
        return tuple(
            (c.kind, m.features[c.lhs].name, m.features[c.rhs].name) for c in m.constraints
        )

    return shape(a, a.root_id) == shape(b, b.root_id) and cons(a) == cons(b)


# -- construction helpers ----------------------------------------------------

TreeSpec = tuple  # (name, RelKind, [children]) or (name, RelKind, [children], {"abstract": True})


def model_from_tree(
    name: str,
    root_name: str,
    children: Sequence[TreeSpec] = (),
    constraints: Iterable[tuple[ConstraintKind, str, str]] = (),
    root_abstract: bool = False,
) -> FeatureModel:
    """Build a model from nested (name, kind, children) tuples.

    Constraint endpoints are given by feature name.  Ids are assigned in
    preorder as ``f1``, ``f2``, ...
    """
    features: dict[str, Feature] = {}
    counter = iter(range(1, 10_000))

    def add(spec_name: str, kind: RelKind, parent_id: Optional[str], subtree, abstract=False) -> str:
        fid = f"f{next(counter)}"
        child_ids = []
        features[fid] = Feature(fid, spec_name, parent_id, kind, abstract, ())
        for child in subtree:
            cname, ckind, csub = child[0], child[1], child[2]
            cabstract = child[3].get("abstract", False) if len(child) > 3 else False
            child_ids.append(add(cname, ckind, fid, csub, cabstract))
        features[fid] = Feature(fid, spec_name, parent_id, kind, abstract, tuple(child_ids))
        return fid

    root_id = add(root_name, RelKind.MANDATORY, None, children, root_abstract)
    by_name = {f.name: f.id for f in features.values()}
    cons = tuple(
        CrossTreeConstraint(kind, by_name[lhs], by_name[rhs]) for kind, lhs, rhs in constraints
    )
    return FeatureModel(name=name, root_id=root_id, features=features, constraints=cons)
