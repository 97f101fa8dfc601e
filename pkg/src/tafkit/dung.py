"""Classical Dung abstract argumentation by exhaustive subset enumeration."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .fuzzy import TruthGrid
from .model import TAF, Proposition, SchemeApplication, builtin_scheme

__all__ = ["DungAF", "KINDS", "characteristic", "extensions", "grounded_fixpoint",
           "embed", "load_af", "MAX_ARGUMENTS"]

KINDS = ("conflict-free", "admissible", "complete", "stable", "preferred", "grounded")
MAX_ARGUMENTS = 15


@dataclass(frozen=True)
class DungAF:
    arguments: tuple[str, ...]
    attacks: frozenset[tuple[str, str]]

    def __init__(self, arguments, attacks=()):
        args = tuple(arguments)
        if len(set(args)) != len(args):
            raise ValueError("duplicate argument names")
        att = frozenset((a, b) for a, b in attacks)
        known = set(args)
        for a, b in att:
            if a not in known or b not in known:
                raise ValueError(f"attack ({a}, {b}) mentions an unknown argument")
        object.__setattr__(self, "arguments", args)
        object.__setattr__(self, "attacks", att)

    def attackers(self, x: str) -> set[str]:
        return {a for a, b in self.attacks if b == x}

    def attacks_arg(self, s, x: str) -> bool:
        return any((a, x) in self.attacks for a in s)

    def conflict_free(self, s) -> bool:
        return not any((a, b) in self.attacks for a in s for b in s)

    def defends(self, s, x: str) -> bool:
        return all(self.attacks_arg(s, y) for y in self.attackers(x))

    def to_json(self) -> dict:
        return {"arguments": list(self.arguments),
                "attacks": sorted([a, b] for a, b in self.attacks)}


def load_af(path) -> DungAF:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or "arguments" not in data:
        raise ValueError(f"{path}: expected an object with 'arguments' and 'attacks'")
    return DungAF(data["arguments"], [tuple(p) for p in data.get("attacks", [])])


def characteristic(af: DungAF, s) -> frozenset[str]:
    """Arguments defended by ``s``."""
    return frozenset(x for x in af.arguments if af.defends(s, x))


def grounded_fixpoint(af: DungAF) -> frozenset[str]:
    """Least fixed point of the characteristic function, iterated from the empty set."""
    s: frozenset[str] = frozenset()
    while True:
        nxt = characteristic(af, s)
        if nxt == s:
            return s
        s = nxt


def _subsets(af: DungAF):
    if len(af.arguments) > MAX_ARGUMENTS:
        raise ValueError(f"{len(af.arguments)} arguments exceed the exhaustive budget "
                         f"of {MAX_ARGUMENTS}")
    args = af.arguments
    for r in range(len(args) + 1):
        for combo in itertools.combinations(args, r):
            yield frozenset(combo)


def extensions(af: DungAF, kind: str) -> list[frozenset[str]]:
    """All extensions of ``kind``, by subset enumeration.

    Returned sorted by size, then by argument order, so output is stable.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown extension kind {kind!r}; choose from {KINDS}")
    cf = [s for s in _subsets(af) if af.conflict_free(s)]
    if kind == "conflict-free":
        out = cf
    elif kind == "stable":
        out = [s for s in cf
               if all(af.attacks_arg(s, x) for x in af.arguments if x not in s)]
    else:
        adm = [s for s in cf if all(af.defends(s, x) for x in s)]
        if kind == "admissible":
            out = adm
        elif kind == "preferred":
            out = [s for s in adm if not any(s < t for t in adm)]
        else:
            comp = [s for s in adm if characteristic(af, s) <= s]
            if kind == "complete":
                out = comp
            else:
                out = [s for s in comp if all(s <= t for t in comp)]
    pos = {a: i for i, a in enumerate(af.arguments)}
    return sorted(out, key=lambda s: (len(s), sorted(pos[a] for a in s)))


def embed(af: DungAF) -> TAF:
    """Crisp T-AF: one illocution per argument, one mutual-exclusion attack per pair."""
    scheme = builtin_scheme("mutual-exclusion-attack")
    apps = [SchemeApplication(scheme.id, (a,), b, id=f"{a}->{b}")
            for a, b in sorted(af.attacks, key=lambda e: (af.arguments.index(e[0]),
                                                          af.arguments.index(e[1])))]
    props = [Proposition(a, "illocution", a) for a in af.arguments]
    return TAF(props, [scheme] if apps else [], apps, {}, TruthGrid(1))
