"""The on-disk trichotomic graph (entities, locutions, illocutions, scheme
applications, trust/commitment/dialogue edges) and its projection to a T-AF.

See ``docs/format.md`` for the file format.
"""
from __future__ import annotations

import graphlib
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

import jsonschema

from . import dsl
from .fuzzy import TruthGrid, parse_fraction
from .model import (ATTACK, ENTITY, ILLOCUTION, SUPPORT, TAF, BeliefPredicate, Proposition,
                    Scheme, SchemeApplication, builtin_scheme)

__all__ = [
    "FORMAT_VERSION",
    "GraphFormatError",
    "ProjectionError",
    "DuplicateCommitmentWarning",
    "Node",
    "Locution",
    "SchemeDecl",
    "ApplicationNode",
    "TrustEdge",
    "CommitmentEdge",
    "ReplyEdge",
    "TransitionEdge",
    "ForceEdge",
    "BeliefDecl",
    "TaifGraph",
    "ProjectionConfig",
    "load",
    "loads",
    "save",
    "dumps",
    "project",
    "export_dot",
    "taf_to_json",
    "taf_from_json",
    "strip_dialogue",
]

FORMAT_VERSION = 1


class GraphFormatError(ValueError):
    """Malformed graph file; ``pointer`` is a JSON pointer to the offending value."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class ProjectionError(ValueError):
    pass


class DuplicateCommitmentWarning(UserWarning):
    pass


_weight = {"oneOf": [{"type": "number", "minimum": 0, "maximum": 1},
                     {"type": "string", "pattern": r"^\s*\d+(\.\d+)?(/\d+)?\s*$"}]}
_id = {"type": "string", "minLength": 1}
_ids = {"type": "array", "items": _id}


def _obj(required, **props):
    return {"type": "object", "required": list(required), "properties": props,
            "additionalProperties": False}


SCHEMA = {
    "type": "object",
    "required": ["taif-version"],
    "additionalProperties": False,
    "properties": {
        "taif-version": {"const": FORMAT_VERSION},
        "belief-mapping": {"enum": ["tent", "table"]},
        "entities": {"type": "array", "items": _obj(["id"], id=_id, label={"type": "string"})},
        "locutions": {"type": "array",
                      "items": _obj(["id"], id=_id, text={"type": "string"}, speaker=_id)},
        "illocutions": {"type": "array", "items": _obj(["id"], id=_id, label={"type": "string"})},
        "schemes": {"type": "array", "items": _obj(
            ["id", "kind", "arity", "interpretation"], id=_id,
            kind={"enum": [ATTACK, SUPPORT]},
            arity={"type": "integer", "minimum": 1},
            exception_arity={"type": "integer", "minimum": 0},
            interpretation={"type": "string"})},
        "applications": {"type": "array", "items": _obj(
            ["id", "kind", "scheme", "premises", "conclusion"], id=_id,
            kind={"enum": [ATTACK, SUPPORT]}, scheme=_id, premises=_ids,
            exceptions=_ids, conclusion=_id)},
        "trust": {"type": "array", "items": _obj(["from", "to", "weight"],
                                                 **{"from": _id, "to": _id, "weight": _weight})},
        "commitments": {"type": "array", "items": _obj(["entity", "illocution", "weight"],
                                                       entity=_id, illocution=_id, weight=_weight)},
        "replies": {"type": "array", "items": _obj(["from", "to"], **{"from": _id, "to": _id})},
        "transitions": {"type": "array", "items": _obj(
            ["from", "to", "move"], **{"from": _id, "to": _id, "move": {"type": "string"}})},
        "force": {"type": "array", "items": _obj(
            ["locution", "illocution"], locution=_id, illocution=_id, label={"type": "string"})},
        "beliefs": {"type": "array", "items": _obj(
            ["entity", "proposition", "shape"], entity=_id, proposition=_id,
            shape={"enum": list(BeliefPredicate.SHAPES)}, value=_weight,
            table={"type": "object", "additionalProperties": _weight})},
    },
}


@dataclass(frozen=True)
class Node:
    id: str
    label: str = ""


@dataclass(frozen=True)
class Locution:
    id: str
    text: str = ""
    speaker: str | None = None


@dataclass(frozen=True)
class SchemeDecl:
    id: str
    kind: str
    arity: int
    exception_arity: int
    interpretation: str


@dataclass(frozen=True)
class ApplicationNode:
    id: str
    kind: str
    scheme: str
    premises: tuple[str, ...]
    exceptions: tuple[str, ...]
    conclusion: str


@dataclass(frozen=True)
class TrustEdge:
    source: str
    target: str
    weight: Fraction


@dataclass(frozen=True)
class CommitmentEdge:
    entity: str
    illocution: str
    weight: Fraction


@dataclass(frozen=True)
class ReplyEdge:
    source: str
    target: str


@dataclass(frozen=True)
class TransitionEdge:
    source: str
    target: str
    move: str


@dataclass(frozen=True)
class ForceEdge:
    locution: str
    illocution: str
    label: str = ""


@dataclass(frozen=True)
class BeliefDecl:
    entity: str
    proposition: str
    predicate: BeliefPredicate


@dataclass
class TaifGraph:
    entities: list[Node] = field(default_factory=list)
    locutions: list[Locution] = field(default_factory=list)
    illocutions: list[Node] = field(default_factory=list)
    schemes: list[SchemeDecl] = field(default_factory=list)
    applications: list[ApplicationNode] = field(default_factory=list)
    trust: list[TrustEdge] = field(default_factory=list)
    commitments: list[CommitmentEdge] = field(default_factory=list)
    replies: list[ReplyEdge] = field(default_factory=list)
    transitions: list[TransitionEdge] = field(default_factory=list)
    force: list[ForceEdge] = field(default_factory=list)
    beliefs: list[BeliefDecl] = field(default_factory=list)
    belief_mapping: str | None = None

    @property
    def support_nodes(self) -> list[ApplicationNode]:
        return [a for a in self.applications if a.kind == SUPPORT]

    @property
    def attack_nodes(self) -> list[ApplicationNode]:
        return [a for a in self.applications if a.kind == ATTACK]

    def node_kinds(self) -> dict[str, str]:
        kinds = {}
        for n in self.entities:
            kinds[n.id] = "E"
        for n in self.locutions:
            kinds[n.id] = "L"
        for n in self.illocutions:
            kinds[n.id] = "I"
        return kinds


# --------------------------------------------------------------------------
# Load / save

def _ptr(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _w(value, pointer: str) -> Fraction:
    try:
        w = parse_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise GraphFormatError(f"not a weight: {value!r}", pointer) from None
    if not 0 <= w <= 1:
        raise GraphFormatError(f"weight {w} outside [0, 1]", pointer)
    return w


def loads(text: str) -> TaifGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise GraphFormatError(f"invalid JSON: {err}") from None
    return from_json(data)


def load(path) -> TaifGraph:
    return loads(Path(path).read_text(encoding="utf-8"))


def from_json(data) -> TaifGraph:
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(data),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise GraphFormatError(err.message, _ptr(err.absolute_path))

    g = TaifGraph(belief_mapping=data.get("belief-mapping"))
    g.entities = [Node(d["id"], d.get("label", "")) for d in data.get("entities", [])]
    g.locutions = [Locution(d["id"], d.get("text", ""), d.get("speaker"))
                   for d in data.get("locutions", [])]
    g.illocutions = [Node(d["id"], d.get("label", "")) for d in data.get("illocutions", [])]
    g.schemes = [SchemeDecl(d["id"], d["kind"], d["arity"], d.get("exception_arity", 0),
                            d["interpretation"]) for d in data.get("schemes", [])]
    g.applications = [ApplicationNode(d["id"], d["kind"], d["scheme"], tuple(d["premises"]),
                                      tuple(d.get("exceptions", [])), d["conclusion"])
                      for d in data.get("applications", [])]
    g.trust = [TrustEdge(d["from"], d["to"], _w(d["weight"], f"/trust/{i}/weight"))
               for i, d in enumerate(data.get("trust", []))]
    g.commitments = [CommitmentEdge(d["entity"], d["illocution"],
                                    _w(d["weight"], f"/commitments/{i}/weight"))
                     for i, d in enumerate(data.get("commitments", []))]
    g.replies = [ReplyEdge(d["from"], d["to"]) for d in data.get("replies", [])]
    g.transitions = [TransitionEdge(d["from"], d["to"], d["move"])
                     for d in data.get("transitions", [])]
    g.force = [ForceEdge(d["locution"], d["illocution"], d.get("label", ""))
               for d in data.get("force", [])]
    for i, d in enumerate(data.get("beliefs", [])):
        ptr = f"/beliefs/{i}"
        try:
            if d["shape"] == "table":
                pred = BeliefPredicate.from_table(
                    {_w(a, ptr + "/table"): _w(b, f"{ptr}/table/{a}") for a, b in d.get("table", {}).items()})
            elif d["shape"] == "no-opinion":
                pred = BeliefPredicate()
            else:
                pred = BeliefPredicate(d["shape"], _w(d.get("value"), ptr + "/value"))
        except ValueError as err:
            raise GraphFormatError(str(err), ptr) from None
        g.beliefs.append(BeliefDecl(d["entity"], d["proposition"], pred))
    check(g)
    return g


def check(g: TaifGraph) -> None:
    """Referential integrity and structural rules; raises :class:`GraphFormatError`."""
    kinds: dict[str, str] = {}
    for section, nodes in (("entities", g.entities), ("locutions", g.locutions),
                           ("illocutions", g.illocutions)):
        for i, n in enumerate(nodes):
            if n.id in kinds:
                raise GraphFormatError(f"duplicate node id {n.id!r}", f"/{section}/{i}/id")
            kinds[n.id] = section[0].upper()

    def need(node_id, allowed, pointer):
        kind = kinds.get(node_id)
        if kind is None:
            raise GraphFormatError(f"dangling id {node_id!r}", pointer)
        if kind not in allowed:
            names = {"E": "entity", "L": "locution", "I": "illocution"}
            article = "an" if kind in "EI" else "a"
            raise GraphFormatError(
                f"{node_id!r} is {article} {names[kind]}; expected "
                + " or ".join(names[a] for a in allowed), pointer)

    for i, loc in enumerate(g.locutions):
        if loc.speaker is not None:
            need(loc.speaker, "E", f"/locutions/{i}/speaker")

    declared: dict[str, SchemeDecl] = {}
    for i, s in enumerate(g.schemes):
        ptr = f"/schemes/{i}"
        if s.id in declared:
            raise GraphFormatError(f"duplicate scheme id {s.id!r}", ptr + "/id")
        declared[s.id] = s
        try:
            dsl.parse(s.interpretation, s.arity, s.exception_arity)
        except dsl.SchemeError as err:
            raise GraphFormatError(str(err), ptr + "/interpretation") from None

    app_ids: set[str] = set()
    for i, a in enumerate(g.applications):
        ptr = f"/applications/{i}"
        if a.id in app_ids or a.id in kinds:
            raise GraphFormatError(f"duplicate id {a.id!r}", ptr + "/id")
        app_ids.add(a.id)
        if a.scheme in declared:
            kind = declared[a.scheme].kind
        elif a.scheme in dsl.BUILTIN_SCHEMES:
            kind = dsl.BUILTIN_SCHEMES[a.scheme][0]
        else:
            raise GraphFormatError(f"unknown scheme {a.scheme!r}", ptr + "/scheme")
        if kind != a.kind:
            raise GraphFormatError(f"scheme {a.scheme!r} is a {kind}, node says {a.kind}",
                                   ptr + "/kind")
        for j, pid in enumerate(a.premises):
            need(pid, "EIL", f"{ptr}/premises/{j}")
        for j, pid in enumerate(a.exceptions):
            need(pid, "EIL", f"{ptr}/exceptions/{j}")
        need(a.conclusion, "EIL", ptr + "/conclusion")

    for i, t in enumerate(g.trust):
        need(t.source, "E", f"/trust/{i}/from")
        need(t.target, "E", f"/trust/{i}/to")
    for i, c in enumerate(g.commitments):
        need(c.entity, "E", f"/commitments/{i}/entity")
        need(c.illocution, "I", f"/commitments/{i}/illocution")
    for i, r in enumerate(g.replies):
        need(r.source, "L", f"/replies/{i}/from")
        need(r.target, "L", f"/replies/{i}/to")
    for i, t in enumerate(g.transitions):
        need(t.source, "L", f"/transitions/{i}/from")
        need(t.target, "L", f"/transitions/{i}/to")
    for i, f in enumerate(g.force):
        need(f.locution, "L", f"/force/{i}/locution")
        need(f.illocution, "I", f"/force/{i}/illocution")
    for i, b in enumerate(g.beliefs):
        need(b.entity, "E", f"/beliefs/{i}/entity")
        need(b.proposition, "EI", f"/beliefs/{i}/proposition")

    sorter = graphlib.TopologicalSorter()
    for r in g.replies:
        sorter.add(r.source, r.target)
    try:
        sorter.prepare()
    except graphlib.CycleError as err:
        cycle = " -> ".join(err.args[1])
        raise GraphFormatError(f"reply chain is cyclic: {cycle}", "/replies") from None


def _num(w: Fraction):
    # plain JSON number when the float spelling is exact, "n/d" otherwise
    if w.denominator == 1:
        return int(w)
    f = float(w)
    if Fraction(repr(f)) == w:
        return f
    return f"{w.numerator}/{w.denominator}"


def to_json(g: TaifGraph) -> dict:
    out: dict = {"taif-version": FORMAT_VERSION}
    if g.belief_mapping is not None:
        out["belief-mapping"] = g.belief_mapping
    out["entities"] = [_drop_empty({"id": n.id, "label": n.label}) for n in g.entities]
    out["locutions"] = [_drop_empty({"id": n.id, "text": n.text, "speaker": n.speaker})
                        for n in g.locutions]
    out["illocutions"] = [_drop_empty({"id": n.id, "label": n.label}) for n in g.illocutions]
    out["schemes"] = [{"id": s.id, "kind": s.kind, "arity": s.arity,
                       "exception_arity": s.exception_arity,
                       "interpretation": s.interpretation} for s in g.schemes]
    out["applications"] = [{"id": a.id, "kind": a.kind, "scheme": a.scheme,
                            "premises": list(a.premises), "exceptions": list(a.exceptions),
                            "conclusion": a.conclusion} for a in g.applications]
    out["trust"] = [{"from": t.source, "to": t.target, "weight": _num(t.weight)} for t in g.trust]
    out["commitments"] = [{"entity": c.entity, "illocution": c.illocution,
                           "weight": _num(c.weight)} for c in g.commitments]
    out["replies"] = [{"from": r.source, "to": r.target} for r in g.replies]
    out["transitions"] = [{"from": t.source, "to": t.target, "move": t.move}
                          for t in g.transitions]
    out["force"] = [_drop_empty({"locution": f.locution, "illocution": f.illocution,
                                 "label": f.label}) for f in g.force]
    if g.beliefs:
        out["beliefs"] = []
        for b in g.beliefs:
            d = {"entity": b.entity, "proposition": b.proposition, **b.predicate.to_json()}
            out["beliefs"].append(d)
    return out


def _drop_empty(d: dict) -> dict:
    return {k: v for k, v in d.items() if v not in (None, "")}


def dumps(g: TaifGraph) -> str:
    return json.dumps(to_json(g), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save(g: TaifGraph, path) -> None:
    Path(path).write_text(dumps(g), encoding="utf-8")


# --------------------------------------------------------------------------
# Projection

@dataclass(frozen=True)
class ProjectionConfig:
    """``belief_mapping=None`` defers to the file's ``belief-mapping`` (default tent)."""

    grid: int = 4
    composition_depth: int = 2
    belief_mapping: str | None = None

    def __post_init__(self):
        if self.grid < 1:
            raise ValueError("grid resolution must be >= 1")
        if self.composition_depth < 0:
            raise ValueError("composition depth must be >= 0")
        if self.belief_mapping not in (None, "tent", "table"):
            raise ValueError(f"unknown belief mapping {self.belief_mapping!r}")


def strip_dialogue(g: TaifGraph) -> TaifGraph:
    """Copy of ``g`` without locutions and dialogue edges."""
    return TaifGraph(entities=list(g.entities), illocutions=list(g.illocutions),
                     schemes=list(g.schemes), applications=list(g.applications),
                     trust=list(g.trust), commitments=list(g.commitments),
                     beliefs=list(g.beliefs), belief_mapping=g.belief_mapping)


def project(g: TaifGraph, config: ProjectionConfig = ProjectionConfig()) -> TAF:
    """Reduce the graph to a T-AF; dialogue data (locutions, replies, transitions, force) is dropped."""
    grid = TruthGrid(config.grid)
    kinds = g.node_kinds()
    props = ([Proposition(n.id, ILLOCUTION, n.label) for n in g.illocutions]
             + [Proposition(n.id, ENTITY, n.label) for n in g.entities])

    schemes: dict[str, Scheme] = {}
    for s in g.schemes:
        schemes[s.id] = Scheme.from_text(s.id, s.kind, s.arity, s.exception_arity, s.interpretation)
    apps = []
    for a in g.applications:
        for pid in (*a.premises, *a.exceptions, a.conclusion):
            if kinds.get(pid) == "L":
                raise ProjectionError(
                    f"application {a.id!r} references locution {pid!r}; "
                    "only illocutions and entities may take part in inferences")
        if a.scheme not in schemes:
            schemes[a.scheme] = builtin_scheme(a.scheme)
        apps.append(SchemeApplication(a.scheme, a.premises, a.conclusion, a.exceptions, id=a.id))

    mapping = config.belief_mapping or g.belief_mapping or "tent"
    beliefs: dict[tuple[str, str], BeliefPredicate] = {}
    if mapping == "tent":
        seen: set[tuple[str, str]] = set()
        for c in g.commitments:
            key = (c.entity, c.illocution)
            if key in seen:
                warnings.warn(f"{c.entity} commits to {c.illocution} more than once; "
                              "keeping the last weight", DuplicateCommitmentWarning, stacklevel=2)
            seen.add(key)
            beliefs[key] = BeliefPredicate.tent(grid.round(c.weight).fraction)
        for t in g.trust:
            beliefs[(t.source, t.target)] = BeliefPredicate.tent(grid.round(t.weight).fraction)
    for b in g.beliefs:
        pred = b.predicate
        if pred.shape in ("tent", "at-least", "at-most"):
            pred = BeliefPredicate(pred.shape, grid.round(pred.param).fraction)
        beliefs[(b.entity, b.proposition)] = pred

    used = [s for s in schemes.values()]
    return TAF(props, used, apps, beliefs, grid)


# --------------------------------------------------------------------------
# T-AF serialisation

def taf_to_json(taf: TAF) -> dict:
    return {
        "taf-version": FORMAT_VERSION,
        "grid": taf.grid.k,
        "propositions": [{"id": p.id, "kind": p.kind, "label": p.label}
                         for p in taf.propositions],
        "schemes": [{"id": s.id, "kind": s.kind, "arity": s.arity,
                     "exception_arity": s.exception_arity,
                     "interpretation": dsl.to_text(s.interpretation),
                     "builtin": s.builtin} for s in taf.schemes],
        "applications": [{"id": a.id, "scheme": a.scheme, "premises": list(a.premises),
                          "exceptions": list(a.exceptions), "conclusion": a.conclusion}
                         for a in taf.applications],
        "beliefs": [{"entity": x, "proposition": p, **b.to_json()}
                    for (x, p), b in taf.beliefs.items()],
    }


def taf_from_json(data: dict) -> TAF:
    grid = TruthGrid(int(data["grid"]))
    props = [Proposition(d["id"], d["kind"], d.get("label", "")) for d in data["propositions"]]
    schemes = [Scheme.from_text(d["id"], d["kind"], d["arity"], d.get("exception_arity", 0),
                                d["interpretation"], d.get("builtin", False))
               for d in data.get("schemes", [])]
    apps = [SchemeApplication(d["scheme"], d["premises"], d["conclusion"],
                              d.get("exceptions", []), id=d.get("id"))
            for d in data.get("applications", [])]
    beliefs = {}
    for d in data.get("beliefs", []):
        shape = d["shape"]
        if shape == "table":
            pred = BeliefPredicate.from_table(d["table"])
        elif shape == "no-opinion":
            pred = BeliefPredicate()
        else:
            pred = BeliefPredicate(shape, parse_fraction(d["value"]))
        beliefs[(d["entity"], d["proposition"])] = pred
    return TAF(props, schemes, apps, beliefs, grid)


# --------------------------------------------------------------------------
# DOT

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _fmt_w(w: Fraction) -> str:
    v = _num(w)
    return str(v)


def export_dot(obj: Union[TaifGraph, TAF]) -> str:
    """Graphviz rendering: supports green, attacks red, commitment/trust dashed and weighted."""
    lines = ["digraph taif {", "  rankdir=BT;", "  node [fontname=\"Helvetica\"];"]
    if isinstance(obj, TAF):
        ents = [Node(p.id, p.label) for p in obj.propositions if p.kind == ENTITY]
        ills = [Node(p.id, p.label) for p in obj.propositions if p.kind == ILLOCUTION]
        kinds = obj.scheme_map
        apps = [ApplicationNode(a.id or f"app{i}", kinds[a.scheme].kind, a.scheme,
                                a.premises, a.exceptions, a.conclusion)
                for i, a in enumerate(obj.applications)]
        locs, weights, replies, transitions, force = [], [], [], [], []
        for (x, p), b in obj.beliefs.items():
            if b.shape == "tent":
                weights.append((x, p, b.param))
    else:
        ents, ills, locs, apps = obj.entities, obj.illocutions, obj.locutions, obj.applications
        weights = [(c.entity, c.illocution, c.weight) for c in obj.commitments]
        weights += [(t.source, t.target, t.weight) for t in obj.trust]
        replies, transitions, force = obj.replies, obj.transitions, obj.force

    for n in ents:
        lines.append(f"  {_q(n.id)} [shape=circle, label={_q(n.label or n.id)}];")
    for n in ills:
        lines.append(f"  {_q(n.id)} [shape=box, style=rounded, label={_q(n.label or n.id)}];")
    for n in locs:
        lines.append(f"  {_q(n.id)} [shape=note, label={_q(n.text or n.id)}];")
    for a in apps:
        colour = "red" if a.kind == ATTACK else "darkgreen"
        tag = "AA" if a.kind == ATTACK else "SA"
        lines.append(f"  {_q(a.id)} [shape=diamond, color={colour}, fontcolor={colour}, "
                     f"label={_q(tag + ': ' + a.scheme)}];")
    for a in apps:
        colour = "red" if a.kind == ATTACK else "darkgreen"
        for p in a.premises:
            lines.append(f"  {_q(p)} -> {_q(a.id)} [color={colour}, arrowhead=none];")
        for e in a.exceptions:
            lines.append(f"  {_q(e)} -> {_q(a.id)} [color={colour}, style=dotted, "
                         f"label=\"exception\"];")
        lines.append(f"  {_q(a.id)} -> {_q(a.conclusion)} [color={colour}];")
    for x, p, w in weights:
        lines.append(f"  {_q(x)} -> {_q(p)} [style=dashed, arrowhead=none, "
                     f"label={_q(_fmt_w(w))}];")
    for r in replies:
        lines.append(f"  {_q(r.source)} -> {_q(r.target)} [color=gray, label=\"reply\"];")
    for t in transitions:
        lines.append(f"  {_q(t.source)} -> {_q(t.target)} [color=gray, style=bold, "
                     f"label={_q(t.move)}];")
    for f in force:
        lines.append(f"  {_q(f.locution)} -> {_q(f.illocution)} [color=blue, style=dotted, "
                     f"label={_q(f.label or 'force')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
