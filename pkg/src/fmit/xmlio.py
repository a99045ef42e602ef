"""Reading and writing of the FeatureIDE-dialect XML feature model format.

Recognized vocabulary: featureModel, struct, and, or, alt, feature,
description, constraints, rule, imp, not, conj, disj, var; attributes name,
mandatory, abstract.  Anything else is skipped with a warning.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from .model import (
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    RelKind,
    is_well_formed,
)

_STRUCT_TAGS = {"and", "or", "alt", "feature"}
_KNOWN_TAGS = _STRUCT_TAGS | {
    "featureModel",
    "struct",
    "description",
    "constraints",
    "rule",
    "imp",
    "not",
    "conj",
    "disj",
    "var",
}


class DiagnosticSeverity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: DiagnosticSeverity
    location: str
    message: str


@dataclass
class ParseResult:
    model: Optional[FeatureModel]
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return self.model is not None


def parse_xml(data: bytes, model_name: str = "model") -> ParseResult:
    """Parse XML bytes into a feature model.

    Never raises on malformed input; errors come back as diagnostics and
    suppress the model.
    """
    diags: list[ParseDiagnostic] = []

    def error(loc: str, msg: str) -> None:
        diags.append(ParseDiagnostic(DiagnosticSeverity.ERROR, loc, msg))

    def warning(loc: str, msg: str) -> None:
        diags.append(ParseDiagnostic(DiagnosticSeverity.WARNING, loc, msg))

    if isinstance(data, str):
        data = data.encode("utf-8")
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    if not data.strip():
        error("document", "empty document")
        return ParseResult(None, diags)

    try:
        doc = ET.fromstring(data)
    except ET.ParseError as exc:
        error("document", f"malformed XML: {exc}")
        return ParseResult(None, diags)

    if doc.tag != "featureModel":
        warning(doc.tag, "expected root element 'featureModel'")
    struct = doc.find("struct")
    if struct is None:
        error("featureModel", "missing 'struct' element")
        return ParseResult(None, diags)

    roots = [el for el in struct if isinstance(el.tag, str)]
    if not roots:
        error("struct", "struct holds no feature tree")
        return ParseResult(None, diags)
    if len(roots) > 1:
        warning("struct", "struct holds more than one tree; extra trees ignored")

    features: dict[str, Feature] = {}
    names_seen: set[str] = set()
    counter = iter(range(1, 1_000_000))

    def walk(el: ET.Element, parent_id: Optional[str], kind: RelKind, path: str) -> Optional[str]:
        tag = el.tag
        if tag not in _STRUCT_TAGS:
            if tag not in _KNOWN_TAGS:
                warning(path, f"unknown element '{tag}' skipped")
            elif tag != "description":
                warning(path, f"element '{tag}' unexpected here; skipped")
            return None
        name = el.get("name")
        if name is None:
            error(path, f"element '{tag}' lacks a name attribute")
            return None
        loc = f"{path}/{name}"
        if name in names_seen:
            error(loc, f"duplicate feature name {name!r}")
            return None
        names_seen.add(name)

        mandatory = el.get("mandatory") == "true"
        if parent_id is None:
            own_kind = RelKind.MANDATORY
        elif kind.is_group:
            own_kind = kind
            if el.get("mandatory") is not None:
                warning(loc, "mandatory attribute inside a group is ignored")
        else:
            own_kind = RelKind.MANDATORY if mandatory else RelKind.OPTIONAL

        fid = f"f{next(counter)}"
        abstract = el.get("abstract") == "true"
        features[fid] = Feature(fid, name, parent_id, own_kind, abstract, ())

        if tag == "feature" and len(el):
            warning(loc, "'feature' element has children; treated as 'and'")
        child_kind = {
            "or": RelKind.OR_MEMBER,
            "alt": RelKind.XOR_MEMBER,
        }.get(tag, RelKind.OPTIONAL)
        child_ids = []
        for child in el:
            if not isinstance(child.tag, str):
                continue
            cid = walk(child, fid, child_kind, loc)
            if cid is not None:
                child_ids.append(cid)
        features[fid] = Feature(fid, name, parent_id, own_kind, abstract, tuple(child_ids))
        return fid

    root_id = walk(roots[0], None, RelKind.MANDATORY, "struct")
    if root_id is None or any(d.severity is DiagnosticSeverity.ERROR for d in diags):
        return ParseResult(None, diags)

    by_name = {f.name: f.id for f in features.values()}
    constraints: list[CrossTreeConstraint] = []
    cons_el = doc.find("constraints")
    if cons_el is not None:
        for i, rule in enumerate(cons_el):
            if not isinstance(rule.tag, str):
                continue
            loc = f"constraints/rule[{i}]"
            if rule.tag != "rule":
                warning(loc, f"unknown element '{rule.tag}' skipped")
                continue
            parsed = _parse_rule(rule, loc, warning)
            if parsed is None:
                continue
            ckind, lhs_name, rhs_name = parsed
            if lhs_name not in by_name or rhs_name not in by_name:
                missing = lhs_name if lhs_name not in by_name else rhs_name
                error(loc, f"constraint references unknown feature {missing!r}")
                continue
            constraints.append(
                CrossTreeConstraint(ckind, by_name[lhs_name], by_name[rhs_name])
            )

    if any(d.severity is DiagnosticSeverity.ERROR for d in diags):
        return ParseResult(None, diags)

    model = FeatureModel(model_name, root_id, features, tuple(constraints))
    if not is_well_formed(model):
        error("document", "parsed model violates well-formedness invariants")
        return ParseResult(None, diags)
    return ParseResult(model, diags)


def _parse_rule(rule: ET.Element, loc: str, warning) -> Optional[tuple[ConstraintKind, str, str]]:
    body = [el for el in rule if isinstance(el.tag, str) and el.tag != "description"]
    if len(body) != 1:
        warning(loc, "rule must hold exactly one expression; skipped")
        return None
    expr = body[0]
    if expr.tag == "imp":
        operands = _var_operands(expr)
        if operands is None:
            warning(loc, "unsupported implication form; skipped")
            return None
        return (ConstraintKind.REQUIRES, *operands)
    if expr.tag == "not":
        inner = [el for el in expr if isinstance(el.tag, str)]
        if len(inner) == 1 and inner[0].tag == "conj":
            operands = _var_operands(inner[0])
            if operands is not None:
                return (ConstraintKind.EXCLUDES, *operands)
        warning(loc, "unsupported negation form; skipped")
        return None
    warning(loc, f"unsupported rule expression '{expr.tag}'; skipped")
    return None


def _var_operands(el: ET.Element) -> Optional[tuple[str, str]]:
    parts = [c for c in el if isinstance(c.tag, str)]
    if len(parts) != 2 or any(p.tag != "var" for p in parts):
        return None
    a, b = ((p.text or "").strip() for p in parts)
    if not a or not b:
        return None
    return a, b


def serialize_xml(model: FeatureModel) -> bytes:
    """Serialize to deterministic UTF-8 bytes with 2-space indentation."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<featureModel>", "  <struct>"]

    def attrs(f: Feature, emit_mandatory: bool) -> str:
        parts = []
        if f.abstract:
            parts.append(f"abstract={quoteattr('true')}")
        if emit_mandatory:
            parts.append(f"mandatory={quoteattr('true')}")
        parts.append(f"name={quoteattr(f.name)}")
        return " ".join(parts)

    def emit(fid: str, indent: int) -> None:
        f = model.features[fid]
        pad = "  " * indent
        emit_mandatory = (
            f.parent_id is not None
            and f.rel_kind is RelKind.MANDATORY
        )
        if not f.children:
            lines.append(f"{pad}<feature {attrs(f, emit_mandatory)}/>")
            return
        child_kinds = {model.features[c].rel_kind for c in f.children}
        if child_kinds == {RelKind.OR_MEMBER}:
            tag = "or"
        elif child_kinds == {RelKind.XOR_MEMBER}:
            tag = "alt"
        else:
            tag = "and"
        lines.append(f"{pad}<{tag} {attrs(f, emit_mandatory)}>")
        for c in f.children:
            emit(c, indent + 1)
        lines.append(f"{pad}</{tag}>")

    emit(model.root_id, 2)
    lines.append("  </struct>")
    if model.constraints:
        lines.append("  <constraints>")
        for c in model.constraints:
            lhs = escape(model.features[c.lhs].name)
            rhs = escape(model.features[c.rhs].name)
            lines.append("    <rule>")
            if c.kind is ConstraintKind.REQUIRES:
                lines.append("      <imp>")
                lines.append(f"        <var>{lhs}</var>")
                lines.append(f"        <var>{rhs}</var>")
                lines.append("      </imp>")
            else:
                lines.append("      <not>")
                lines.append("        <conj>")
                lines.append(f"          <var>{lhs}</var>")
                lines.append(f"          <var>{rhs}</var>")
                lines.append("        </conj>")
                lines.append("      </not>")
            lines.append("    </rule>")
        lines.append("  </constraints>")
    lines.append("</featureModel>")
    return ("\n".join(lines) + "\n").encode("utf-8")
