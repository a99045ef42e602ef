from __future__ import annotations

import pytest

from fmit.model import (
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    RelKind,
    Severity,
    UnknownFeatureError,
    depth,
    model_from_tree,
    preorder,
    relationship_slots,
    validate,
)

M = RelKind.MANDATORY
O = RelKind.OPTIONAL


def chain_model():
    return model_from_tree("chain", "A", [("B", M, [])])


def test_minimal_chain_is_well_formed():
    assert validate(chain_model()) == []


def test_duplicate_names_flagged():
    model = model_from_tree("dup", "Root", [("B", M, []), ("B", O, [])])
    codes = [v.code for v in validate(model) if v.severity is Severity.ERROR]
    assert codes == ["duplicate-name"]


def test_dangling_constraint_flagged():
    base = model_from_tree("dc", "Root", [("B", M, [])])
    model = FeatureModel(
        base.name,
        base.root_id,
        base.features,
        (CrossTreeConstraint(ConstraintKind.REQUIRES, "f1", "missing"),),
    )
    codes = [v.code for v in validate(model)]
    assert "dangling-constraint" in codes


def test_self_constraint_flagged():
    base = model_from_tree("sc", "Root", [("B", M, [])])
    model = FeatureModel(
        base.name,
        base.root_id,
        base.features,
        (CrossTreeConstraint(ConstraintKind.EXCLUDES, "f2", "f2"),),
    )
    assert any(v.code == "self-constraint" for v in validate(model))


def test_mixed_group_kinds_are_an_error():
    model = model_from_tree("mix", "Root", [
        ("A", RelKind.OR_MEMBER, []),
        ("B", RelKind.XOR_MEMBER, []),
    ])
    assert any(v.code == "mixed-group" for v in validate(model))


def test_single_member_group_is_a_warning_only():
    model = model_from_tree("single", "Root", [("A", RelKind.OR_MEMBER, [])])
    violations = validate(model)
    assert [v.code for v in violations] == ["single-member-group"]
    assert violations[0].severity is Severity.WARNING


def test_unreachable_feature_flagged():
    base = model_from_tree("u", "Root", [])
    features = dict(base.features)
    features["orphan"] = Feature("orphan", "Orphan", base.root_id, O, False, ())
    model = FeatureModel(base.name, base.root_id, features)
    codes = [v.code for v in validate(model)]
    assert "unreachable" in codes


def test_depth_root_and_descendants():
    model = model_from_tree("d", "Root", [("B", M, [("C", O, [])])])
    root = model.root_id
    b = model.feature_by_name("B").id
    c = model.feature_by_name("C").id
    assert depth(model, root) == 0
    assert depth(model, b) == 1
    assert depth(model, c) == 2


def test_depth_unknown_id():
    with pytest.raises(UnknownFeatureError):
        depth(chain_model(), "nope")


def test_preorder_root_only():
    model = model_from_tree("r", "Root", [])
    assert preorder(model) == [model.root_id]


def test_preorder_children_in_stored_order():
    model = model_from_tree("p", "Root", [("X", O, []), ("Y", O, [])])
    names = [model.features[fid].name for fid in preorder(model)]
    assert names == ["Root", "X", "Y"]


def test_relationship_slots_counts():
    model = model_from_tree(
        "slots",
        "Root",
        [("B", M, [("C", O, [])]), ("D", O, [])],
        constraints=[(ConstraintKind.REQUIRES, "C", "D")],
    )
    slots = relationship_slots(model)
    assert len(slots) == (len(model.features) - 1) + len(model.constraints)
    assert sum(s.is_constraint for s in slots) == 1
    # feature slots in preorder, constraints after
    assert not slots[0].is_constraint and slots[-1].is_constraint


def test_relationship_slots_root_only():
    assert relationship_slots(model_from_tree("r", "Root", [])) == []
