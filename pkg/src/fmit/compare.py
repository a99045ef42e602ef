"""Similarity scoring between two feature models.

Three strategies are computed over a feature matching:

* syntactic  — Jaro-Winkler similarity of matched feature names,
* semantic   — agreement of relationship kinds (edges and constraints),
* structural — agreement of hierarchy depths,

and their arithmetic mean gives the global equivalence score that drives the
automatic / semi-automatic integration dispatch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import (
    ConstraintKind,
    FeatureModel,
    depth,
    preorder,
    relationship_slots,
)

DEFAULT_NAME_THRESHOLD = 0.85
DEFAULT_MODE_THRESHOLD = 0.95


def jaro(s1: str, s2: str) -> float:
    """Jaro similarity in [0, 1].

    Characters match when equal and within a window of
    floor(max(len)/2) - 1; transpositions count half the out-of-order
    matched characters.
    """
    if s1 == s2:
        return 1.0
    if not s1 or not s2:
        return 0.0
    window = max(len(s1), len(s2)) // 2 - 1
    used2 = [False] * len(s2)
    matched1 = []
    for i, ch in enumerate(s1):
        lo = max(0, i - window)
        hi = min(len(s2), i + window + 1)
        for j in range(lo, hi):
            if not used2[j] and s2[j] == ch:
                used2[j] = True
                matched1.append(ch)
                break
    m = len(matched1)
    if m == 0:
        return 0.0
    matched2 = [s2[j] for j, used in enumerate(used2) if used]
    half_transpositions = sum(a != b for a, b in zip(matched1, matched2))
    t = half_transpositions / 2
    return (m / len(s1) + m / len(s2) + (m - t) / m) / 3


def jaro_winkler(s1: str, s2: str, prefix_scale: float = 0.1) -> float:
    """Jaro with a bonus for a common prefix of up to 4 characters."""
    dj = jaro(s1, s2)
    prefix = 0
    for a, b in zip(s1[:4], s2[:4]):
        if a != b:
            break
        prefix += 1
    return dj + prefix * prefix_scale * (1.0 - dj)


@dataclass(frozen=True)
class MatchedPair:
    base_id: str
    other_id: str
    name_score: float


@dataclass(frozen=True)
class Matching:
    pairs: tuple[MatchedPair, ...]
    unmatched_base: tuple[str, ...]
    unmatched_other: tuple[str, ...]

    def base_to_other(self) -> dict[str, str]:
        return {p.base_id: p.other_id for p in self.pairs}

    def other_to_base(self) -> dict[str, str]:
        return {p.other_id: p.base_id for p in self.pairs}


def match_features(
    base: FeatureModel,
    other: FeatureModel,
    tau_name: float = DEFAULT_NAME_THRESHOLD,
) -> Matching:
    """Pair features across two models.

    Exact case-sensitive name matches pair first; the remainder pairs
    greedily by descending Jaro-Winkler score, accepting only scores at or
    above ``tau_name``.  Ties break on smaller depth difference, then
    lexicographic names, which makes the result order-independent.
    """
    if not 0.0 < tau_name <= 1.0:
        raise ValueError("tau_name must lie in (0, 1]")
    base_order = preorder(base)
    other_order = preorder(other)
    by_name_other = {other.features[fid].name: fid for fid in other_order}

    pairs: list[MatchedPair] = []
    used_other: set[str] = set()
    remaining_base: list[str] = []
    for bid in base_order:
        oid = by_name_other.get(base.features[bid].name)
        if oid is not None and oid not in used_other:
            pairs.append(MatchedPair(bid, oid, 1.0))
            used_other.add(oid)
        else:
            remaining_base.append(bid)
    remaining_other = [fid for fid in other_order if fid not in used_other]

    candidates = []
    for bid in remaining_base:
        bf = base.features[bid]
        for oid in remaining_other:
            of = other.features[oid]
            score = jaro_winkler(bf.name, of.name)
            if score >= tau_name:
                delta = abs(depth(base, bid) - depth(other, oid))
                candidates.append((-score, delta, bf.name, of.name, bid, oid))
    candidates.sort()

    used_base: set[str] = set()
    for neg_score, _delta, _bn, _on, bid, oid in candidates:
        if bid in used_base or oid in used_other:
            continue
        used_base.add(bid)
        used_other.add(oid)
        pairs.append(MatchedPair(bid, oid, -neg_score))

    matched_base = {p.base_id for p in pairs}
    matched_other = {p.other_id for p in pairs}
    return Matching(
        pairs=tuple(pairs),
        unmatched_base=tuple(fid for fid in base_order if fid not in matched_base),
        unmatched_other=tuple(fid for fid in other_order if fid not in matched_other),
    )


def _larger_first(base: FeatureModel, other: FeatureModel, base_size: int, other_size: int):
    """Pick the enumeration side; ties favor the base model."""
    if other_size > base_size:
        return other, base, False
    return base, other, True


def semantic_score(
    base: FeatureModel, other: FeatureModel, matching: Matching
) -> tuple[list[float], float]:
    """Relationship-kind agreement per slot of the larger-slot-count model.

    A feature slot scores 1 when its feature is matched and both sides carry
    the same relationship kind; a constraint slot scores 1 when the opposite
    model holds a constraint of the same kind between the matched images of
    its endpoints.  The aggregate divides by the larger slot count.
    """
    slots_base = relationship_slots(base)
    slots_other = relationship_slots(other)
    big, small, big_is_base = _larger_first(base, other, len(slots_base), len(slots_other))
    big_slots = slots_base if big_is_base else slots_other
    to_small = matching.base_to_other() if big_is_base else matching.other_to_base()

    small_constraints = list(small.constraints)
    used = [False] * len(small_constraints)

    def constraint_match(c) -> bool:
        lhs_img = to_small.get(c.lhs)
        rhs_img = to_small.get(c.rhs)
        if lhs_img is None or rhs_img is None:
            return False
        for i, sc in enumerate(small_constraints):
            if used[i] or sc.kind is not c.kind:
                continue
            if (sc.lhs, sc.rhs) == (lhs_img, rhs_img):
                used[i] = True
                return True
            if c.kind is ConstraintKind.EXCLUDES and (sc.rhs, sc.lhs) == (lhs_img, rhs_img):
                used[i] = True
                return True
        return False

    vector: list[float] = []
    for slot in big_slots:
        if slot.is_constraint:
            vector.append(1.0 if constraint_match(slot.constraint) else 0.0)
        else:
            counterpart = to_small.get(slot.feature_id)
            if counterpart is None:
                vector.append(0.0)
            else:
                same = big.features[slot.feature_id].rel_kind is small.features[counterpart].rel_kind
                vector.append(1.0 if same else 0.0)

    c_count = len(big_slots)
    score = sum(vector) / c_count if c_count else 1.0
    return vector, score


_DEPTH_LADDER = {0: 1.0, 1: 0.5}


def structural_score(
    base: FeatureModel, other: FeatureModel, matching: Matching
) -> tuple[list[float], float]:
    """Depth agreement per feature of the larger model.

    Equal depth scores 1, one level apart 0.5, two or more 0.25, unmatched 0.
    """
    big, _small, big_is_base = _larger_first(
        base, other, len(base.features), len(other.features)
    )
    to_small = matching.base_to_other() if big_is_base else matching.other_to_base()
    small = other if big_is_base else base

    vector: list[float] = []
    for fid in preorder(big):
        counterpart = to_small.get(fid)
        if counterpart is None:
            vector.append(0.0)
        else:
            delta = abs(depth(big, fid) - depth(small, counterpart))
            vector.append(_DEPTH_LADDER.get(delta, 0.25))
    f_count = max(len(base.features), len(other.features))
    return vector, sum(vector) / f_count


def syntactic_score(
    base: FeatureModel, other: FeatureModel, matching: Matching
) -> tuple[list[float], float]:
    """Name similarity per feature of the larger model; unmatched score 0."""
    big, _small, big_is_base = _larger_first(
        base, other, len(base.features), len(other.features)
    )
    to_small = matching.base_to_other() if big_is_base else matching.other_to_base()
    small = other if big_is_base else base

    vector: list[float] = []
    for fid in preorder(big):
        counterpart = to_small.get(fid)
        if counterpart is None:
            vector.append(0.0)
        else:
            vector.append(jaro_winkler(big.features[fid].name, small.features[counterpart].name))
    f_count = max(len(base.features), len(other.features))
    return vector, sum(vector) / f_count


class IntegrationMode(Enum):
    AUTOMATIC = "automatic"
    SEMI_AUTOMATIC = "semi_automatic"


def select_mode(cee: float, theta: float = DEFAULT_MODE_THRESHOLD) -> IntegrationMode:
    """Dispatch rule: identical, disjoint, or near-identical models merge
    automatically; anything in between needs a human."""
    if not 0.0 <= cee <= 1.0:
        raise ValueError("cee must lie in [0, 1]")
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta must lie in (0, 1]")
    if cee == 0.0 or cee == 1.0 or cee >= theta:
        return IntegrationMode.AUTOMATIC
    return IntegrationMode.SEMI_AUTOMATIC


def global_equivalence(estest: float, estsem: float, estsin: float) -> float:
    """Arithmetic mean of the three strategy scores, clamped to [0, 1]."""
    return min(1.0, max(0.0, (estest + estsem + estsin) / 3))


@dataclass(frozen=True)
class ComparisonReport:
    syntactic_vector: tuple[float, ...]
    semantic_vector: tuple[float, ...]
    structural_vector: tuple[float, ...]
    estsin: float
    estsem: float
    estest: float
    cee: float
    f_denominator: int
    c_denominator: int
    recommended_mode: IntegrationMode
    matching: Matching


def compute_cee(
    base: FeatureModel,
    other: FeatureModel,
    tau_name: float = DEFAULT_NAME_THRESHOLD,
    theta: float = DEFAULT_MODE_THRESHOLD,
    matching: Optional[Matching] = None,
) -> ComparisonReport:
    """Match features, run the three strategies, aggregate, pick the mode."""
    if matching is None:
        matching = match_features(base, other, tau_name)
    syn_vec, estsin = syntactic_score(base, other, matching)
    sem_vec, estsem = semantic_score(base, other, matching)
    str_vec, estest = structural_score(base, other, matching)
    cee = global_equivalence(estest, estsem, estsin)
    return ComparisonReport(
        syntactic_vector=tuple(syn_vec),
        semantic_vector=tuple(sem_vec),
        structural_vector=tuple(str_vec),
        estsin=estsin,
        estsem=estsem,
        estest=estest,
        cee=cee,
        f_denominator=max(len(base.features), len(other.features)),
        c_denominator=max(len(relationship_slots(base)), len(relationship_slots(other))),
        recommended_mode=select_mode(cee, theta),
        matching=matching,
    )
