"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import hypothesis.strategies as st
import pytest

from fmit.model import (
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    RelKind,
    model_from_tree,
)

M = RelKind.MANDATORY
O = RelKind.OPTIONAL
OR = RelKind.OR_MEMBER
XOR = RelKind.XOR_MEMBER

_WORDS = [
    "alpha", "bravo", "carga", "delta", "echo", "forno", "gama", "hotel",
    "india", "julia", "kilo", "lima", "metro", "norte", "oscar", "papa",
    "quadro", "rio", "serra", "tango", "uno", "verde", "whisky", "xis",
]


@st.composite
def feature_models(draw, max_features: int = 12, allow_constraints: bool = True):
    """Random well-formed models: random tree shape, kinds, constraints."""
    n = draw(st.integers(min_value=1, max_value=max_features))
    word_idx = draw(st.permutations(range(len(_WORDS))))
    names = [f"{_WORDS[word_idx[i % len(_WORDS)]]}{i}" for i in range(n)]

    parents = [None] + [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    for i in range(1, n):
        children[parents[i]].append(i)

    kinds: dict[int, RelKind] = {0: RelKind.MANDATORY}
    for parent, kids in children.items():
        if not kids:
            continue
        group = draw(st.sampled_from([None, None, OR, XOR]))
        if group is not None:
            for k in kids:
                kinds[k] = group
        else:
            for k in kids:
                kinds[k] = draw(st.sampled_from([M, O]))

    features = {}
    for i in range(n):
        fid = f"f{i}"
        features[fid] = Feature(
            id=fid,
            name=names[i],
            parent_id=None if parents[i] is None else f"f{parents[i]}",
            rel_kind=kinds[i],
            abstract=draw(st.booleans()) if i == 0 else False,
            children=tuple(f"f{k}" for k in children[i]),
        )

    constraints = ()
    if allow_constraints and n >= 3:
        n_cons = draw(st.integers(min_value=0, max_value=2))
        cons = []
        for _ in range(n_cons):
            a = draw(st.integers(min_value=1, max_value=n - 1))
            b = draw(st.integers(min_value=1, max_value=n - 1))
            if a == b:
                continue
            kind = draw(st.sampled_from([ConstraintKind.REQUIRES, ConstraintKind.EXCLUDES]))
            cons.append(CrossTreeConstraint(kind, f"f{a}", f"f{b}"))
        constraints = tuple(cons)

    return FeatureModel("generated", "f0", features, constraints)


# -- worked-example fixtures ---------------------------------------------------


@pytest.fixture
def kind_slots_pair():
    """Pair whose relationship slot sequences are
    base [Obr, Aex, Ain, Obr, Opc, Obr, Dep] (7 slots) versus
    other [Obr, Ain, Ain, Opc, Obr, Opc, Dep, Exc] (8 slots)."""
    base = model_from_tree("slots_base", "MF", [
        ("A", M, [
            ("B", XOR, [
                ("C", OR, []),
            ]),
        ]),
        ("D", M, [
            ("E", O, []),
        ]),
        ("F", M, []),
    ], constraints=[(ConstraintKind.REQUIRES, "B", "D")])
    other = model_from_tree("slots_other", "MF", [
        ("A", M, [
            ("B", OR, []),
            ("C", OR, []),
        ]),
        ("D", O, [
            ("E", M, []),
        ]),
        ("F", O, []),
    ], constraints=[
        (ConstraintKind.REQUIRES, "B", "D"),
        (ConstraintKind.EXCLUDES, "C", "F"),
    ])
    return base, other


@pytest.fixture
def depth_ladder_pair():
    """Nine shared names whose depth deltas produce the score ladder
    [0.25, 1, 1, 1, 1, 0.5, 1, 0.5, 0.25] in base preorder A..I."""
    base = model_from_tree("depth_base", "A", [
        ("B", O, [
            ("C", O, []),
            ("D", O, []),
        ]),
        ("E", O, [
            ("F", O, []),
            ("G", O, []),
        ]),
        ("H", O, [
            ("I", O, []),
        ]),
    ])
    other = model_from_tree("depth_other", "I", [
        ("B", O, [
            ("C", O, [
                ("F", O, []),
            ]),
            ("D", O, []),
        ]),
        ("E", O, [
            ("G", O, [
                ("A", O, []),
            ]),
            ("H", O, []),
        ]),
    ])
    return base, other


@pytest.fixture
def name_pair():
    """Two-feature models: one exact name, one misspelled name."""
    base = model_from_tree("name_base", "ligacao", [("fone", O, [])])
    other = model_from_tree("name_other", "ligacao", [("ofne", O, [])])
    return base, other


@pytest.fixture
def letters_pair():
    """Base features {MF,B,D,F,H,J} against other features {MF,A,B,C,D,E}."""
    base = model_from_tree("letters_base", "MF", [
        ("B", M, []),
        ("D", O, []),
        ("F", O, []),
        ("H", O, []),
        ("J", O, []),
    ])
    other = model_from_tree("letters_other", "MF", [
        ("A", O, []),
        ("B", M, []),
        ("C", O, []),
        ("D", O, []),
        ("E", O, []),
    ])
    return base, other
