"""Integration strategies, conflict detection, and the semi-automatic
resolution session.

The five set-theoretic strategies operate on feature-name sets with matched
pairs identified under the base name; tree reconstruction keeps outputs
well-formed models.  The session state machine drives human conflict
resolution: every resolvable conflict must carry a keep-base/keep-other
decision before the merged model is produced.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .compare import (
    ComparisonReport,
    IntegrationMode,
    Matching,
    compute_cee,
    match_features,
    select_mode,
)
from .model import (
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    RelKind,
    Severity,
    depth,
    preorder,
    validate,
)

__all__ = [
    "MergeStrategy",
    "ConflictKind",
    "Choice",
    "Conflict",
    "SessionState",
    "Session",
    "IntegrationMode",
    "select_mode",
    "detect_conflicts",
    "integrate",
    "auto_integrate",
    "start_session",
    "resolve",
    "finalize",
    "IncompatibleStrategyError",
    "SessionError",
    "UnknownConflictError",
    "AlreadyResolvedError",
    "StructuralNotResolvableError",
    "WrongStateError",
    "UnresolvedConflictsError",
]


class MergeStrategy(Enum):
    COMMON = "common"
    ADDITIONAL = "additional"
    FORMAL = "formal"
    PARTIAL = "partial"
    COMPLEMENTARY = "complementary"
    NULL = "null"


class ConflictKind(Enum):
    NAME = "name"
    RELATIONSHIP_KIND = "relationship_kind"
    STRUCTURAL = "structural"


class Choice(Enum):
    KEEP_BASE = "keep_base"
    KEEP_OTHER = "keep_other"


@dataclass(frozen=True)
class Conflict:
    id: int
    kind: ConflictKind
    base_feature: str
    other_feature: str
    base_value: str
    other_value: str
    resolution: Optional[Choice] = None

    @property
    def resolvable(self) -> bool:
        return self.kind is not ConflictKind.STRUCTURAL

    @property
    def resolved(self) -> bool:
        return self.resolution is not None


class IncompatibleStrategyError(Exception):
    pass


class SessionError(Exception):
    pass


class UnknownConflictError(SessionError):
    pass


class AlreadyResolvedError(SessionError):
    pass


class StructuralNotResolvableError(SessionError):
    pass


class WrongStateError(SessionError):
    pass


class UnresolvedConflictsError(SessionError):
    def __init__(self, ids: list[int]):
        super().__init__(f"unresolved conflicts: {ids}")
        self.ids = ids


def detect_conflicts(
    base: FeatureModel, other: FeatureModel, matching: Matching
) -> list[Conflict]:
    """Per-pair disagreements in base preorder; unmatched features are
    additions, not conflicts.  Structural conflicts are report-only."""
    pair_by_base = {p.base_id: p.other_id for p in matching.pairs}
    conflicts: list[Conflict] = []
    next_id = 1
    for bid in preorder(base):
        oid = pair_by_base.get(bid)
        if oid is None:
            continue
        bf, of = base.features[bid], other.features[oid]
        if bf.name != of.name:
            conflicts.append(
                Conflict(next_id, ConflictKind.NAME, bid, oid, bf.name, of.name)
            )
            next_id += 1
        if bf.rel_kind is not of.rel_kind:
            conflicts.append(
                Conflict(
                    next_id,
                    ConflictKind.RELATIONSHIP_KIND,
                    bid,
                    oid,
                    bf.rel_kind.value,
                    of.rel_kind.value,
                )
            )
            next_id += 1
        db, do = depth(base, bid), depth(other, oid)
        if db != do:
            conflicts.append(
                Conflict(next_id, ConflictKind.STRUCTURAL, bid, oid, str(db), str(do))
            )
            next_id += 1
    return conflicts


# -- tree reconstruction ------------------------------------------------------


class _Builder:
    """Mutable scratch space for assembling a well-formed merged model."""

    def __init__(self, model_name: str):
        self.model_name = model_name
        self.features: dict[str, dict] = {}
        self.root_id: Optional[str] = None

    def add(self, fid: str, name: str, parent_id: Optional[str], kind: RelKind, abstract: bool):
        if parent_id is None:
            kind = RelKind.MANDATORY
            self.root_id = fid
        else:
            kind = self._coerced_kind(parent_id, kind)
        self.features[fid] = {
            "name": name,
            "parent": parent_id,
            "kind": kind,
            "abstract": abstract,
            "children": [],
        }
        if parent_id is not None:
            self.features[parent_id]["children"].append(fid)

    def _coerced_kind(self, parent_id: str, kind: RelKind) -> RelKind:
        """Keep sibling groups homogeneous when grafting onto a new parent."""
        sibling_kinds = {
            self.features[c]["kind"] for c in self.features[parent_id]["children"]
        }
        if not sibling_kinds:
            return kind
        group = {k for k in sibling_kinds if k.is_group}
        if group:
            return next(iter(group))
        if kind.is_group:
            return RelKind.OPTIONAL
        return kind

    def set_kind_checked(self, fid: str, kind: RelKind) -> bool:
        """Apply a kind override unless it would break group homogeneity."""
        parent_id = self.features[fid]["parent"]
        if parent_id is None:
            return False
        old = self.features[fid]["kind"]
        self.features[fid]["kind"] = kind
        kinds = [self.features[c]["kind"] for c in self.features[parent_id]["children"]]
        groups = {k for k in kinds if k.is_group}
        consistent = not groups or (len(groups) == 1 and all(k.is_group for k in kinds))
        if not consistent:
            self.features[fid]["kind"] = old
            return False
        return True

    def build(self, constraints: tuple[CrossTreeConstraint, ...] = ()) -> FeatureModel:
        assert self.root_id is not None
        features = {
            fid: Feature(
                id=fid,
                name=spec["name"],
                parent_id=spec["parent"],
                rel_kind=spec["kind"],
                abstract=spec["abstract"],
                children=tuple(spec["children"]),
            )
            for fid, spec in self.features.items()
        }
        return FeatureModel(self.model_name, self.root_id, features, constraints)


def _additional(
    base: FeatureModel,
    other: FeatureModel,
    matching: Matching,
    name_overrides: Optional[dict[str, str]] = None,
    kind_overrides: Optional[dict[str, RelKind]] = None,
    model_name: Optional[str] = None,
) -> FeatureModel:
    """Union merge: the base tree intact, unmatched other-features grafted
    under the base image of their nearest matched ancestor."""
    name_overrides = name_overrides or {}
    kind_overrides = kind_overrides or {}
    b = _Builder(model_name or f"{base.name}+{other.name}")

    for fid in preorder(base):
        f = base.features[fid]
        b.add(fid, name_overrides.get(fid, f.name), f.parent_id, f.rel_kind, f.abstract)
    for fid, kind in kind_overrides.items():
        b.set_kind_checked(fid, kind)

    other_to_base = matching.other_to_base()
    unmatched = set(matching.unmatched_other)
    placed: dict[str, str] = {}  # other id -> merged id
    for oid in preorder(other):
        if oid not in unmatched:
            continue
        of = other.features[oid]
        merged_id = f"o_{oid}"
        parent = of.parent_id
        dest = None
        kind = of.rel_kind
        if parent is not None and parent in placed:
            dest = placed[parent]
        else:
            anc = parent
            while anc is not None and anc not in other_to_base:
                anc = other.features[anc].parent_id
            if anc is not None:
                dest = other_to_base[anc]
            else:
                dest = b.root_id
                kind = RelKind.OPTIONAL
        b.add(merged_id, of.name, dest, kind, of.abstract)
        placed[oid] = merged_id

    constraints: list[CrossTreeConstraint] = list(base.constraints)

    def map_other(fid: str) -> Optional[str]:
        if fid in placed:
            return placed[fid]
        return other_to_base.get(fid)

    def key_of(kind, lhs, rhs):
        # Excludes is symmetric; both orientations are the same constraint.
        if kind is ConstraintKind.EXCLUDES:
            lhs, rhs = min(lhs, rhs), max(lhs, rhs)
        return (kind, lhs, rhs)

    existing = {key_of(c.kind, c.lhs, c.rhs) for c in constraints}
    for c in other.constraints:
        lhs, rhs = map_other(c.lhs), map_other(c.rhs)
        if lhs is None or rhs is None or lhs == rhs:
            continue
        key = key_of(c.kind, lhs, rhs)
        if key in existing:
            continue
        existing.add(key)
        constraints.append(CrossTreeConstraint(c.kind, lhs, rhs))

    return b.build(tuple(constraints))


def _subset(
    source: FeatureModel, keep: set[str], model_name: str, empty_root_name: str
) -> FeatureModel:
    """Keep only ``keep`` features, re-parenting orphans to their nearest
    surviving ancestor; the first survivor in preorder roots the output when
    the source root is dropped."""
    b = _Builder(model_name)
    order = [fid for fid in preorder(source) if fid in keep]
    if not order:
        b.add("r", empty_root_name, None, RelKind.MANDATORY, False)
        return b.build()

    root = order[0]
    b.add(root, source.features[root].name, None, RelKind.MANDATORY, source.features[root].abstract)
    for fid in order[1:]:
        f = source.features[fid]
        anc = f.parent_id
        while anc is not None and anc not in b.features:
            anc = source.features[anc].parent_id
        if anc is not None and anc == f.parent_id:
            kind = f.rel_kind
        else:
            anc = anc if anc is not None else root
            kind = RelKind.OPTIONAL
        b.add(fid, f.name, anc, kind, f.abstract)

    constraints = tuple(
        c for c in source.constraints if c.lhs in b.features and c.rhs in b.features
    )
    return b.build(constraints)


def integrate(
    base: FeatureModel,
    other: FeatureModel,
    matching: Matching,
    strategy: MergeStrategy,
) -> FeatureModel:
    """Apply one set-theoretic strategy; the output is always well-formed."""
    matched_base = {p.base_id for p in matching.pairs}
    if strategy is MergeStrategy.NULL:
        if matching.pairs:
            raise IncompatibleStrategyError("null strategy requires disjoint models")
        return _additional(base, other, matching)
    if strategy is MergeStrategy.COMMON:
        return _subset(base, set(base.features), f"{base.name}-common", base.features[base.root_id].name)
    if strategy is MergeStrategy.ADDITIONAL:
        return _additional(base, other, matching)
    if strategy is MergeStrategy.FORMAL:
        return _subset(base, matched_base, f"{base.name}-formal", base.features[base.root_id].name)
    if strategy is MergeStrategy.PARTIAL:
        keep = set(base.features) - matched_base
        return _subset(base, keep, f"{base.name}-partial", base.features[base.root_id].name)
    if strategy is MergeStrategy.COMPLEMENTARY:
        keep = set(matching.unmatched_other)
        return _subset(other, keep, f"{base.name}-complementary", other.features[other.root_id].name)
    raise IncompatibleStrategyError(f"unknown strategy {strategy!r}")


AUTO_STRATEGIES = (
    MergeStrategy.ADDITIONAL,
    MergeStrategy.FORMAL,
    MergeStrategy.PARTIAL,
    MergeStrategy.COMPLEMENTARY,
)


def auto_integrate(
    base: FeatureModel, other: FeatureModel, matching: Matching
) -> tuple[FeatureModel, FeatureModel, FeatureModel, FeatureModel]:
    """The four automatic outputs, in fixed strategy order."""
    return tuple(integrate(base, other, matching, s) for s in AUTO_STRATEGIES)


# -- session state machine -----------------------------------------------------


class SessionState(Enum):
    CREATED = "created"
    AWAITING_RESOLUTIONS = "awaiting_resolutions"
    FINALIZED = "finalized"


@dataclass(frozen=True)
class Session:
    id: str
    base: FeatureModel
    other: FeatureModel
    tau_name: float
    theta: float
    report: ComparisonReport
    conflicts: tuple[Conflict, ...]
    state: SessionState
    merged_model: Optional[FeatureModel] = None
    post_report: Optional[ComparisonReport] = None

    def conflict(self, conflict_id: int) -> Conflict:
        for c in self.conflicts:
            if c.id == conflict_id:
                return c
        raise UnknownConflictError(f"no conflict with id {conflict_id}")

    def unresolved_resolvable(self) -> list[int]:
        return [c.id for c in self.conflicts if c.resolvable and not c.resolved]


def start_session(
    base: FeatureModel,
    other: FeatureModel,
    tau_name: float = 0.85,
    theta: float = 0.95,
) -> Session:
    """Compare the models, queue the conflicts, await resolutions."""
    for label, model in (("base", base), ("other", other)):
        errors = [v for v in validate(model) if v.severity is Severity.ERROR]
        if errors:
            raise SessionError(f"{label} model is malformed: {errors[0].message}")
    report = compute_cee(base, other, tau_name, theta)
    conflicts = detect_conflicts(base, other, report.matching)
    return Session(
        id=uuid.uuid4().hex,
        base=base,
        other=other,
        tau_name=tau_name,
        theta=theta,
        report=report,
        conflicts=tuple(conflicts),
        state=SessionState.AWAITING_RESOLUTIONS,
    )


def resolve(session: Session, conflict_id: int, choice: Choice) -> Session:
    if session.state is not SessionState.AWAITING_RESOLUTIONS:
        raise WrongStateError(f"cannot resolve in state {session.state.value}")
    conflict = session.conflict(conflict_id)
    if not conflict.resolvable:
        raise StructuralNotResolvableError(
            f"conflict {conflict_id} is structural and report-only"
        )
    if conflict.resolved:
        raise AlreadyResolvedError(f"conflict {conflict_id} already resolved")
    updated = tuple(
        replace(c, resolution=choice) if c.id == conflict_id else c
        for c in session.conflicts
    )
    return replace(session, conflicts=updated)


def finalize(session: Session) -> Session:
    """Produce the intended model and its post-merge equivalence."""
    if session.state is not SessionState.AWAITING_RESOLUTIONS:
        raise WrongStateError(f"cannot finalize in state {session.state.value}")
    unresolved = session.unresolved_resolvable()
    if unresolved:
        raise UnresolvedConflictsError(unresolved)

    name_overrides: dict[str, str] = {}
    kind_overrides: dict[str, RelKind] = {}
    other = session.other
    for c in session.conflicts:
        if c.resolution is not Choice.KEEP_OTHER:
            continue
        if c.kind is ConflictKind.NAME:
            name_overrides[c.base_feature] = other.features[c.other_feature].name
        elif c.kind is ConflictKind.RELATIONSHIP_KIND:
            kind_overrides[c.base_feature] = other.features[c.other_feature].rel_kind

    merged = _additional(
        session.base,
        other,
        session.report.matching,
        name_overrides=name_overrides,
        kind_overrides=kind_overrides,
    )
    post_report = compute_cee(session.base, merged, session.tau_name, session.theta)
    return replace(
        session,
        state=SessionState.FINALIZED,
        merged_model=merged,
        post_report=post_report,
    )
