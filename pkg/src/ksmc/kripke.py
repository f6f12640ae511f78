"""Explicit S5 Kripke models: brute-force oracle and both conversions.

Relations are stored as partitions of the world set, so reflexivity,
symmetry and transitivity hold by construction.  Model checking labels
world sets bottom-up; common knowledge closes the union of the group's
partitions into connected components; announcements shrink the live world
set.  build_kripke expands a knowledge structure into its state graph, and
from_kripke encodes any finite S5 model back into a knowledge structure by
giving each agent a block of fresh observable bits that spell out its
equivalence class.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .boolfn import EnumerationCapError, VarTable, mk_store
from .kstruct import KnowledgeStructure
from .lang import (
    And,
    Announce,
    Atom,
    Common,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Knows,
    Not,
    Or,
)

DEFAULT_WORLD_CAP = 1 << 20


class KripkeError(Exception):
    pass


@dataclass
class KripkeModel:
    var_names: tuple[str, ...]
    worlds: tuple[frozenset[str], ...]
    partitions: dict[str, tuple[tuple[int, ...], ...]]  # agent -> blocks of world ids

    def __post_init__(self):
        self.class_of: dict[str, dict[int, int]] = {}
        for agent, blocks in self.partitions.items():
            m: dict[int, int] = {}
            for b, block in enumerate(blocks):
                for w in block:
                    m[w] = b
            if sorted(m) != list(range(len(self.worlds))):
                raise KripkeError(f"partition of agent {agent!r} does not cover the worlds")
            self.class_of[agent] = m

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(self.partitions)


def build_kripke(F: KnowledgeStructure, cap_worlds: int = DEFAULT_WORLD_CAP) -> KripkeModel:
    """Expand a knowledge structure: one world per state, partitions by local state."""
    n = F.state_count()
    if n > cap_worlds:
        raise EnumerationCapError(f"{n} states exceed world cap {cap_worlds}")
    worlds = tuple(F.states(cap=len(F.variables) + 1))
    partitions: dict[str, tuple[tuple[int, ...], ...]] = {}
    for agent in F.agents:
        o = F.observables(agent)
        blocks: dict[frozenset[str], list[int]] = {}
        for i, w in enumerate(worlds):
            blocks.setdefault(w & o, []).append(i)
        partitions[agent] = tuple(tuple(b) for b in blocks.values())
    return KripkeModel(tuple(F.variables), worlds, partitions)


def _label(M: KripkeModel, alive: frozenset[int], f: Formula) -> frozenset[int]:
    if isinstance(f, Atom):
        return frozenset(w for w in alive if f.name in M.worlds[w])
    if isinstance(f, Const):
        return alive if f.value else frozenset()
    if isinstance(f, Not):
        return alive - _label(M, alive, f.sub)
    if isinstance(f, And):
        return _label(M, alive, f.left) & _label(M, alive, f.right)
    if isinstance(f, Or):
        return _label(M, alive, f.left) | _label(M, alive, f.right)
    if isinstance(f, Implies):
        return (alive - _label(M, alive, f.left)) | _label(M, alive, f.right)
    if isinstance(f, Iff):
        a = _label(M, alive, f.left)
        b = _label(M, alive, f.right)
        return (a & b) | (alive - a - b)
    if isinstance(f, (Exists, Forall)):
        # propositional forgetting: truth at a world depends only on its valuation
        return frozenset(w for w in alive if _eval_prop(f, M.worlds[w]))
    if isinstance(f, Knows):
        s = _label(M, alive, f.sub)
        cls = M.class_of[f.agent]
        by_class: dict[int, list[int]] = {}
        for w in alive:
            by_class.setdefault(cls[w], []).append(w)
        ok = {c for c, ws in by_class.items() if all(w in s for w in ws)}
        return frozenset(w for w in alive if cls[w] in ok)
    if isinstance(f, Common):
        s = _label(M, alive, f.sub)
        comp = _components(M, alive, f.agents)
        good = {root for root, ws in comp.items() if all(w in s for w in ws)}
        root_of = {w: root for root, ws in comp.items() for w in ws}
        return frozenset(w for w in alive if root_of[w] in good)
    if isinstance(f, Announce):
        sphi = _label(M, alive, f.announced)
        spsi = _label(M, sphi, f.sub)
        return (alive - sphi) | spsi
    raise KripkeError(f"cannot label {f!r}")


def _eval_prop(f: Formula, assignment: frozenset[str]) -> bool:
    if isinstance(f, Atom):
        return f.name in assignment
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _eval_prop(f.sub, assignment)
    if isinstance(f, And):
        return _eval_prop(f.left, assignment) and _eval_prop(f.right, assignment)
    if isinstance(f, Or):
        return _eval_prop(f.left, assignment) or _eval_prop(f.right, assignment)
    if isinstance(f, Implies):
        return (not _eval_prop(f.left, assignment)) or _eval_prop(f.right, assignment)
    if isinstance(f, Iff):
        return _eval_prop(f.left, assignment) == _eval_prop(f.right, assignment)
    if isinstance(f, Exists):
        return _eval_quant(f.names, f.sub, assignment, any_of=True)
    if isinstance(f, Forall):
        return _eval_quant(f.names, f.sub, assignment, any_of=False)
    raise KripkeError(f"not propositional: {f!r}")


def _eval_quant(names, sub, assignment: frozenset[str], any_of: bool) -> bool:
    base = assignment - set(names)
    combos = [frozenset()]
    for n in names:
        combos = [c for c in combos] + [c | {n} for c in combos]
    results = (_eval_prop(sub, base | c) for c in combos)
    return any(results) if any_of else all(results)


def _components(
    M: KripkeModel, alive: frozenset[int], agents: tuple[str, ...]
) -> dict[int, list[int]]:
    parent = {w: w for w in alive}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for agent in agents:
        cls = M.class_of[agent]
        first: dict[int, int] = {}
        for w in alive:
            c = cls[w]
            if c in first:
                ra, rb = find(first[c]), find(w)
                if ra != rb:
                    parent[rb] = ra
            else:
                first[c] = w
    comp: dict[int, list[int]] = {}
    for w in alive:
        comp.setdefault(find(w), []).append(w)
    return comp


def mc_kripke(M: KripkeModel, w: int, alpha: Formula) -> bool:
    """Explicit recursive model checking at one world."""
    if not (0 <= w < len(M.worlds)):
        raise KripkeError(f"unknown world {w}")
    return w in _label(M, frozenset(range(len(M.worlds))), alpha)


# ---------------------------------------------------------------------------
# S5 model -> knowledge structure (fresh observable codes per agent)
# ---------------------------------------------------------------------------


def from_kripke(M: KripkeModel, engine: str = "bdd"):
    """Encode a finite S5 model as a knowledge structure.

    Each agent gets ceil(log2(#classes)) fresh observable variables; the
    code of a world's class, by first-visit order, becomes the agent's local
    state.  The theory is the disjunction of the images' minterms, so the
    states are exactly the encoded worlds.  Returns (F, g) with g mapping
    world index to state.
    """
    table = VarTable(M.var_names)
    code_vars: dict[str, list[str]] = {}
    for agent in M.agents:
        nclasses = len(M.partitions[agent])
        bits = max(1, math.ceil(math.log2(nclasses))) if nclasses > 1 else 0
        names = []
        for b in range(bits):
            name = f"o_{agent}_{b}"
            while name in table:
                name = name + "x"
            table.add(name)
            names.append(name)
        code_vars[agent] = names
    table.freeze()
    store = mk_store(engine, table)

    g: dict[int, frozenset[str]] = {}
    for w, val in enumerate(M.worlds):
        s = set(val)
        for agent in M.agents:
            code = M.class_of[agent][w]
            for b, name in enumerate(code_vars[agent]):
                if (code >> b) & 1:
                    s.add(name)
        g[w] = frozenset(s)

    theta = store.disj(store.minterm(s, table.names) for s in set(g.values()))
    F = KnowledgeStructure(
        store,
        theta,
        M.agents,
        {a: frozenset(code_vars[a]) for a in M.agents},
    )
    return F, g


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def export_kripke(M: KripkeModel) -> str:
    lines = []
    for i, w in enumerate(M.worlds):
        names = " ".join(n for n in M.var_names if n in w)
        lines.append(f"world {i} vars:{(' ' + names) if names else ''}")
    for agent, blocks in M.partitions.items():
        shown = " ".join("{" + " ".join(str(x) for x in b) + "}" for b in blocks)
        lines.append(f"partition {agent}: {shown}")
    return "\n".join(lines) + "\n"


def parse_kripke(text: str) -> KripkeModel:
    worlds: dict[int, frozenset[str]] = {}
    partitions: dict[str, tuple[tuple[int, ...], ...]] = {}
    var_names: list[str] = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"world\s+(\d+)\s+vars:\s*(.*)", line)
        if m:
            idx = int(m.group(1))
            names = m.group(2).split()
            for n in names:
                if n not in var_names:
                    var_names.append(n)
            worlds[idx] = frozenset(names)
            continue
        m = re.fullmatch(r"partition\s+(\S+):\s*(.*)", line)
        if m:
            agent = m.group(1).rstrip(":")
            blocks = [
                tuple(int(x) for x in blk.split())
                for blk in re.findall(r"\{([^}]*)\}", m.group(2))
            ]
            partitions[agent] = tuple(blocks)
            continue
        raise KripkeError(f"line {lineno}: cannot parse {line!r}")
    if sorted(worlds) != list(range(len(worlds))):
        raise KripkeError("world ids must be dense 0..n-1")
    ordered = tuple(worlds[i] for i in range(len(worlds)))
    return KripkeModel(tuple(var_names), ordered, partitions)
