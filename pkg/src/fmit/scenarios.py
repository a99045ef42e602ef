"""Benchmark scenario fixtures: six model pairs exercising the conflict
detector across no-change, syntactic, structural, semantic, addition, and
mixed evolutions.

Element counting for the NF/NR targets: NF is the feature count;
NR counts each mandatory or optional edge once, each OR/XOR group once (not
per member), and each cross-tree constraint once.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

from .model import FeatureModel, RelKind, model_from_tree
from .xmlio import serialize_xml

M = RelKind.MANDATORY
O = RelKind.OPTIONAL
OR = RelKind.OR_MEMBER
XOR = RelKind.XOR_MEMBER


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    base: FeatureModel
    other: FeatureModel
    expected_conflicts: int
    expected_base_counts: tuple[int, int]  # (features, relationships)
    expected_other_counts: tuple[int, int]


def relationship_count(model: FeatureModel) -> int:
    """Mandatory/optional edges + one per group + constraints."""
    count = len(model.constraints)
    for f in model.features.values():
        kinds = [model.features[c].rel_kind for c in f.children]
        if kinds and kinds[0].is_group:
            count += 1
        else:
            count += len(kinds)
    return count


def build_scenarios() -> list[Scenario]:
    return [
        _scenario_1(),
        _scenario_2(),
        _scenario_3(),
        _scenario_4(),
        _scenario_5(),
        _scenario_6(),
    ]


def _scenario_1() -> Scenario:
    tree = [
        ("Core", M, [
            ("Radio", XOR, []),
            ("Media", XOR, []),
            ("Navigation", XOR, []),
        ]),
        ("Extras", O, [
            ("Bluetooth", O, []),
        ]),
    ]
    base = model_from_tree("scenario1_base", "Infotainment", tree)
    other = model_from_tree("scenario1_other", "Infotainment", tree)
    return Scenario("scenario1", "no changes", base, other, 0, (7, 4), (7, 4))


def _scenario_2() -> Scenario:
    def tree(search, filters, tracking, voucher):
        return [
            ("Catalog", M, [
                (search, M, []),
                (filters, O, []),
            ]),
            ("Payment", M, [
                ("CreditCard", OR, []),
                (voucher, OR, []),
            ]),
            ("Shipping", M, [
                (tracking, O, []),
            ]),
            ("Account", O, []),
        ]
    base = model_from_tree(
        "scenario2_base", "OnlineStore", tree("Search", "Filters", "Tracking", "Voucher")
    )
    other = model_from_tree(
        "scenario2_other", "OnlineStore", tree("Serch", "Filter", "Traking", "Vaucher")
    )
    return Scenario("scenario2", "syntactic changes", base, other, 4, (10, 8), (10, 8))


def _scenario_3() -> Scenario:
    def tree(night_vision_under_camera: bool):
        camera_children = [("NightVision", O, [])] if night_vision_under_camera else []
        security_children = [
            ("Alarm", M, []),
            ("Camera", O, camera_children),
        ]
        if not night_vision_under_camera:
            security_children.append(("NightVision", O, []))
        return [
            ("Lighting", M, [
                ("Dimmer", O, []),
                ("Scenes", O, []),
            ]),
            ("Climate", M, [
                ("Heating", M, []),
                ("Cooling", O, []),
            ]),
            ("Security", M, security_children),
            ("Energy", O, [
                ("SolarPanel", XOR, []),
                ("GridPower", XOR, []),
            ]),
        ]
    base = model_from_tree("scenario3_base", "SmartHome", tree(True))
    other = model_from_tree("scenario3_other", "SmartHome", tree(False))
    return Scenario("scenario3", "structural changes", base, other, 1, (14, 12), (14, 12))


def _scenario_4() -> Scenario:
    def tree(k1, k2, k3, k4, k5, k6):
        return [
            ("Accounts", M, [
                ("Checking", k1, []),
                ("Savings", k2, []),
            ]),
            ("Transfers", M, [
                ("Domestic", k3, []),
                ("International", k4, []),
            ]),
            ("Cards", O, [
                ("Debit", k5, []),
                ("Credit", k6, []),
            ]),
            ("Support", O, [
                ("Chat", XOR, []),
                ("Phone", XOR, []),
            ]),
        ]
    base = model_from_tree("scenario4_base", "Banking", tree(M, O, M, O, M, O))
    other = model_from_tree("scenario4_other", "Banking", tree(O, M, O, M, O, M))
    return Scenario("scenario4", "semantic changes", base, other, 6, (13, 11), (13, 11))


def _scenario_5() -> Scenario:
    base = model_from_tree("scenario5_base", "Messenger", [
        ("Chat", M, [
            ("Emoji", O, []),
            ("Stickers", O, []),
        ]),
        ("Calls", O, [
            ("Voice", OR, []),
            ("Video", OR, []),
        ]),
    ])
    other = model_from_tree("scenario5_other", "Messenger", [
        ("Chat", M, []),
        ("Calls", O, []),
    ])
    return Scenario("scenario5", "new features only", base, other, 0, (7, 5), (3, 2))


def _scenario_6() -> Scenario:
    def tree(booking, flights, hotels, profile, card, cash, pix):
        return [
            ("Booking", booking, [
                ("Flights", flights, []),
                ("Hotels", hotels, []),
            ]),
            ("Profile", profile, []),
            ("Payments", M, [
                (card, XOR, []),
                (cash, XOR, []),
                (pix, XOR, []),
            ]),
        ]
    base = model_from_tree(
        "scenario6_base", "TravelApp", tree(M, M, O, O, "Card", "Cash", "Pix")
    )
    other = model_from_tree(
        "scenario6_other", "TravelApp", tree(O, O, M, M, "Cardd", "Cashh", "Pixx")
    )
    return Scenario(
        "scenario6", "syntactic and semantic changes", base, other, 7, (9, 6), (9, 6)
    )


def write_scenario_files(directory: Path) -> list[Path]:
    """Write each scenario pair as ``<name>_base.xml`` / ``<name>_other.xml``."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for sc in build_scenarios():
        for side, model in (("base", sc.base), ("other", sc.other)):
            path = directory / f"{sc.name}_{side}.xml"
            path.write_bytes(serialize_xml(model))
            written.append(path)
    return written


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("fixtures/scenarios")
    for p in write_scenario_files(target):
        print(p)
