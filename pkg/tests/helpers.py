"""Shared oracles and random generators for the test suite.

Everything here is deliberately independent of the production engine:
formulas are evaluated by direct recursion over assignments, knowledge by
the textbook state-set semantics over explicitly enumerated states, QBF by
brute-force expansion, and CNF files by a small DPLL.  The tests compare
the symbolic engine against these.
"""

from __future__ import annotations

import itertools
import random

from ksmc import lang
from ksmc.kstruct import KnowledgeStructure
from ksmc.lang import (
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

# ---------------------------------------------------------------------------
# propositional evaluation by recursion (handles surface quantifiers)
# ---------------------------------------------------------------------------


def eval_prop(f: Formula, a: frozenset[str]) -> bool:
    if isinstance(f, Atom):
        return f.name in a
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not eval_prop(f.sub, a)
    if isinstance(f, And):
        return eval_prop(f.left, a) and eval_prop(f.right, a)
    if isinstance(f, Or):
        return eval_prop(f.left, a) or eval_prop(f.right, a)
    if isinstance(f, Implies):
        return (not eval_prop(f.left, a)) or eval_prop(f.right, a)
    if isinstance(f, Iff):
        return eval_prop(f.left, a) == eval_prop(f.right, a)
    if isinstance(f, (Exists, Forall)):
        combos = []
        for bits in itertools.product([False, True], repeat=len(f.names)):
            chosen = {n for n, b in zip(f.names, bits) if b}
            combos.append(eval_prop(f.sub, (a - set(f.names)) | chosen))
        return any(combos) if isinstance(f, Exists) else all(combos)
    raise TypeError(f"not propositional: {f!r}")


def assignments(names: list[str]):
    for bits in itertools.product([False, True], repeat=len(names)):
        yield frozenset(n for n, b in zip(names, bits) if b)


def truth_table(f: Formula, names: list[str]) -> tuple[bool, ...]:
    return tuple(eval_prop(f, a) for a in assignments(names))


def forget_oracle(f: Formula, names: list[str], forget: set[str], exist: bool):
    """Truth table of exists/forall(forget) f by direct enumeration."""
    out = []
    for a in assignments(names):
        vals = [
            eval_prop(f, (a - forget) | chosen)
            for chosen in map(
                frozenset, itertools.chain.from_iterable(
                    itertools.combinations(sorted(forget), r) for r in range(len(forget) + 1)
                )
            )
        ]
        out.append(any(vals) if exist else all(vals))
    return tuple(out)


# ---------------------------------------------------------------------------
# textbook scenario semantics over explicit state sets
# ---------------------------------------------------------------------------


def def9_states(F: KnowledgeStructure) -> list[frozenset[str]]:
    return [a for a in assignments(list(F.variables)) if F.store.eval_at(F.theta, a)]


def def9_check(
    states: list[frozenset[str]],
    obs: dict[str, frozenset[str]],
    s: frozenset[str],
    f: Formula,
) -> bool:
    """Satisfaction at a state by direct recursion over the state set."""
    if isinstance(f, (Atom, Const, Exists, Forall)):
        return eval_prop(f, s)
    if isinstance(f, Not):
        return not def9_check(states, obs, s, f.sub)
    if isinstance(f, And):
        return def9_check(states, obs, s, f.left) and def9_check(states, obs, s, f.right)
    if isinstance(f, Or):
        return def9_check(states, obs, s, f.left) or def9_check(states, obs, s, f.right)
    if isinstance(f, Implies):
        return (not def9_check(states, obs, s, f.left)) or def9_check(states, obs, s, f.right)
    if isinstance(f, Iff):
        return def9_check(states, obs, s, f.left) == def9_check(states, obs, s, f.right)
    if isinstance(f, Knows):
        o = obs[f.agent]
        return all(def9_check(states, obs, t, f.sub) for t in states if t & o == s & o)
    if isinstance(f, Common):
        reach = {s}
        frontier = [s]
        while frontier:
            cur = frontier.pop()
            for agent in f.agents:
                o = obs[agent]
                for t in states:
                    if t not in reach and t & o == cur & o:
                        reach.add(t)
                        frontier.append(t)
        return all(def9_check(states, obs, t, f.sub) for t in reach)
    if isinstance(f, Announce):
        if not def9_check(states, obs, s, f.announced):
            return True
        kept = [t for t in states if def9_check(states, obs, t, f.announced)]
        return def9_check(kept, obs, s, f.sub)
    raise TypeError(f"cannot check {f!r}")


# ---------------------------------------------------------------------------
# brute-force QBF
# ---------------------------------------------------------------------------


def brute_qbf(prefix, matrix: Formula, a: frozenset[str] = frozenset()) -> bool:
    if not prefix:
        return eval_prop(matrix, a)
    (quant, v), rest = prefix[0], prefix[1:]
    tv = brute_qbf(rest, matrix, a | {v})
    fv = brute_qbf(rest, matrix, a - {v})
    return (tv and fv) if quant == "forall" else (tv or fv)


# ---------------------------------------------------------------------------
# DIMACS reading + DPLL
# ---------------------------------------------------------------------------


def parse_dimacs(text: str):
    nvars = nclauses = None
    clauses = []
    names = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] == "var":
                names[int(parts[2])] = parts[3]
            continue
        if line.startswith("p"):
            _, _, nv, nc = line.split()
            nvars, nclauses = int(nv), int(nc)
            continue
        lits = [int(x) for x in line.split()]
        assert lits[-1] == 0
        clauses.append(tuple(lits[:-1]))
    assert nvars is not None and len(clauses) == nclauses
    return nvars, clauses, names


def dpll(clauses) -> bool:
    clauses = [tuple(c) for c in clauses]
    assign: dict[int, bool] = {}

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            reduced = tuple(x for x in c if x != -lit)
            if not reduced:
                return None
            out.append(reduced)
        return out

    def solve(cls):
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            cls = simplify(cls, unit)
            if cls is None:
                return False
        if not cls:
            return True
        v = abs(cls[0][0])
        for lit in (v, -v):
            nxt = simplify(cls, lit)
            if nxt is not None and solve(nxt):
                return True
        return False

    return solve(clauses)


def dimacs_sat(text: str) -> bool:
    _, clauses, _ = parse_dimacs(text)
    return dpll(clauses)


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def rand_prop(rng: random.Random, names, depth: int, quantifiers: bool = False) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.85 or not names:
            return Atom(rng.choice(names)) if names else Const(True)
        return Const(r < 0.93)
    ops = ["not", "and", "or", "implies", "iff"]
    if quantifiers and len(names) >= 1:
        ops.append("quant")
    op = rng.choice(ops)
    if op == "not":
        return Not(rand_prop(rng, names, depth - 1, quantifiers))
    if op == "quant":
        k = rng.randint(1, min(2, len(names)))
        vs = tuple(rng.sample(list(names), k))
        cls = Exists if rng.random() < 0.5 else Forall
        return cls(vs, rand_prop(rng, names, depth - 1, quantifiers=False))
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[op]
    return cls(
        rand_prop(rng, names, depth - 1, quantifiers),
        rand_prop(rng, names, depth - 1, quantifiers),
    )


def rand_pal(rng: random.Random, names, agents, depth: int, announce=True) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return rand_prop(rng, names, 1)
    choices = ["not", "and", "or", "implies", "knows", "knows"]
    if agents:
        choices.append("common")
    if announce:
        choices.append("announce")
    op = rng.choice(choices)
    if op == "not":
        return Not(rand_pal(rng, names, agents, depth - 1, announce))
    if op == "knows" and agents:
        return Knows(rng.choice(agents), rand_pal(rng, names, agents, depth - 1, announce))
    if op == "common" and agents:
        k = rng.randint(1, len(agents))
        return Common(tuple(rng.sample(agents, k)), rand_pal(rng, names, agents, depth - 1, announce))
    if op == "announce":
        return Announce(
            rand_pal(rng, names, agents, depth - 1, announce),
            rand_pal(rng, names, agents, depth - 1, announce),
        )
    cls = {"and": And, "or": Or, "implies": Implies}[op if op in ("and", "or", "implies") else "and"]
    return cls(
        rand_pal(rng, names, agents, depth - 1, announce),
        rand_pal(rng, names, agents, depth - 1, announce),
    )


def rand_positive(rng: random.Random, names, agents, depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return rand_prop(rng, names, rng.randint(0, 2))
    op = rng.choice(["and", "or", "knows", "knows", "implies"])
    if op == "knows" and agents:
        return Knows(rng.choice(agents), rand_positive(rng, names, agents, depth - 1))
    if op == "implies":
        return Implies(rand_prop(rng, names, 1), rand_positive(rng, names, agents, depth - 1))
    cls = And if op == "and" else Or
    return cls(
        rand_positive(rng, names, agents, depth - 1),
        rand_positive(rng, names, agents, depth - 1),
    )


def rand_structure(
    rng: random.Random,
    max_vars: int = 8,
    max_agents: int = 3,
    engine: str = "bdd",
    min_vars: int = 1,
    with_axioms: bool = True,
) -> KnowledgeStructure:
    nv = rng.randint(min_vars, max_vars)
    names = [f"v{i}" for i in range(nv)]
    nag = rng.randint(1, max_agents)
    agents = []
    for i in range(nag):
        size = rng.randint(0, nv)
        agents.append((f"a{i}", rng.sample(names, size)))
    axioms = []
    if with_axioms:
        axioms = [rand_prop(rng, names, rng.randint(1, 2)) for _ in range(rng.randint(0, 2))]
    while True:
        try:
            return KnowledgeStructure.build(names, agents, axioms, engine=engine)
        except Exception:
            if not axioms:
                raise
            axioms.pop()


def rand_s5_model(rng: random.Random, max_worlds: int = 12, max_vars: int = 4, max_agents: int = 3):
    """Random explicit S5 model without duplicate-equivalent worlds."""
    from ksmc.kripke import KripkeModel

    for _ in range(200):
        nw = rng.randint(1, max_worlds)
        nv = rng.randint(0, max_vars)
        names = tuple(f"x{i}" for i in range(nv))
        worlds = tuple(
            frozenset(n for n in names if rng.random() < 0.5) for _ in range(nw)
        )
        nag = rng.randint(1, max_agents)
        partitions = {}
        for a in range(nag):
            ids = list(range(nw))
            rng.shuffle(ids)
            blocks = []
            i = 0
            while i < len(ids):
                size = rng.randint(1, max(1, (len(ids) - i) // rng.randint(1, 3)))
                blocks.append(tuple(sorted(ids[i : i + size])))
                i += size
            partitions[str(a + 1)] = tuple(blocks)
        M = KripkeModel(names, worlds, partitions)
        profiles = {
            (worlds[w], tuple(M.class_of[a][w] for a in M.agents)) for w in range(nw)
        }
        if len(profiles) == nw:
            return M
    raise RuntimeError("could not build a duplicate-free S5 model")


def rand_ast(rng: random.Random, depth: int) -> Formula:
    """Arbitrary syntactically valid formula for print/parse round-trips."""
    names = ["p", "q", "r", "s_1", "t'"]
    agents = ["A", "B", "1", "2"]
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.8:
            return Atom(rng.choice(names))
        return Const(r < 0.9)
    op = rng.choice(
        ["not", "and", "or", "implies", "iff", "knows", "common", "announce", "exists", "forall"]
    )
    if op == "not":
        return Not(rand_ast(rng, depth - 1))
    if op == "knows":
        return Knows(rng.choice(agents), rand_ast(rng, depth - 1))
    if op == "common":
        k = rng.randint(1, 3)
        return Common(tuple(rng.sample(agents, k)), rand_ast(rng, depth - 1))
    if op == "announce":
        return Announce(rand_ast(rng, depth - 1), rand_ast(rng, depth - 1))
    if op in ("exists", "forall"):
        k = rng.randint(1, 2)
        vs = tuple(rng.sample(names, k))
        body = rand_prop(rng, names, depth - 1, quantifiers=True)
        return Exists(vs, body) if op == "exists" else Forall(vs, body)
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[op]
    return cls(rand_ast(rng, depth - 1), rand_ast(rng, depth - 1))


F0_TEXT = """
vars p, q
agent 1 obs p
agent 2 obs q
axiom p -> q
"""

COMM_TEXT = """
# Alice/Bob message-acknowledgement scenario
vars Alice_send_msg, Alice_recv_ack, Bob_recv_msg, Bob_send_ack
agent A obs Alice_send_msg, Alice_recv_ack
agent B obs Bob_recv_msg, Bob_send_ack
axiom Bob_recv_msg -> Alice_send_msg
axiom Bob_send_ack -> Bob_recv_msg
axiom Alice_recv_ack -> Bob_send_ack
"""

BABIES_TEXT = """
vars m, f, h, u
agent marry obs m, f
agent peter obs h, u
axiom h -> u
axiom ~(m & f)
axiom (m | f) <-> ~h
"""


def f0(engine: str = "bdd") -> KnowledgeStructure:
    return lang.parse_model(F0_TEXT, engine=engine)


def comm(engine: str = "bdd") -> KnowledgeStructure:
    return lang.parse_model(COMM_TEXT, engine=engine)


def babies(engine: str = "bdd") -> KnowledgeStructure:
    return lang.parse_model(BABIES_TEXT, engine=engine)
