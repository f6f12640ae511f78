"""Worked case studies: muddy children, Needham-Schroeder, QBF stress tests.

The muddy-children run iterates announcement restrictions.  Knowing one's
own status reduces, per round, to a single cofactor of the round theory
(forall m_i (Gamma_j => m_i) collapses to the negated m_i/false cofactor),
which is the production route; the dual strongest-necessary route is kept
for the timing comparison, and the two must return identical verdicts.

The Needham-Schroeder encoding is the fixed propositional rendering of the
protocol roles; `revised` carries the responder identity in message 2 while
`original` drops it from the corresponding inference axiom, which is the
single axiom the two variants differ in.

The QBF generator builds two-agent structures whose alternating
knows/possible chains decide validity of forall/exists-prefixed Boolean
formulas, giving an adversarial correctness workload.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from . import evaluate, lang
from .kstruct import KnowledgeStructure, State
from .lang import And, Atom, Formula, Iff, Implies, Knows, Not, Or, parse_formula


class SuiteError(Exception):
    pass


class VerificationFailure(SuiteError):
    """A claim the engine was expected to certify did not hold."""


# ---------------------------------------------------------------------------
# Muddy children
# ---------------------------------------------------------------------------


@dataclass
class MuddyInstance:
    n: int
    k: int
    F0: KnowledgeStructure
    s0: State

    @property
    def muddy_vars(self) -> list[str]:
        return [f"m{i}" for i in range(self.n)]


@dataclass
class MuddyRound:
    round: int
    answers: list[bool]
    yes: list[int]
    state_count: int
    seconds: float


@dataclass
class MuddyReport:
    n: int
    k: int
    rounds: list[MuddyRound] = field(default_factory=list)
    final_known: list[int] = field(default_factory=list)
    claims_ok: bool = True

    def to_json(self) -> str:
        # timings live in the CSV; the JSON report stays byte-deterministic
        return json.dumps(
            {
                "n": self.n,
                "k": self.k,
                "rounds": [
                    {
                        "round": r.round,
                        "answers": r.answers,
                        "yes": r.yes,
                        "states": r.state_count,
                    }
                    for r in self.rounds
                ],
                "final_known": self.final_known,
                "claims_ok": self.claims_ok,
            },
            indent=2,
        )


def muddy_build(n: int, k: int, engine: str = "bdd", max_n: int = 64) -> MuddyInstance:
    """Children 0..n-1, the first k muddy; each child sees every other forehead."""
    if not (1 <= k <= n <= max_n):
        raise SuiteError(f"need 1 <= k <= n <= {max_n}, got n={n} k={k}")
    names = [f"m{i}" for i in range(n)]
    agents = [(str(i), [v for v in names if v != f"m{i}"]) for i in range(n)]
    F0 = KnowledgeStructure.build(names, agents, [], engine=engine)
    s0 = frozenset(f"m{i}" for i in range(k))
    return MuddyInstance(n, k, F0, s0)


def _muddy_know_sets(F: KnowledgeStructure, theta, n: int):
    """Truth set of K_i m_i for each child under the round theory.

    forall m_i (theta => m_i) is the negation of theta with m_i fixed false.
    """
    st = F.store
    return [st.neg(st.cofactor(theta, f"m{i}", False)) for i in range(n)]


def muddy_run(inst: MuddyInstance) -> MuddyReport:
    """Announce "at least one muddy", then iterate "nobody knows" until round k.

    Verifies the expected per-round answers and raises VerificationFailure on
    any mismatch with the classical solution.
    """
    F, n, k, s0 = inst.F0, inst.n, inst.k, inst.s0
    st = F.store
    report = MuddyReport(n=n, k=k)
    theta = st.disj(st.var(v) for v in inst.muddy_vars)  # father's announcement
    for rnd in range(1, k + 1):
        t0 = time.perf_counter()
        knows = _muddy_know_sets(F, theta, n)
        answers = [st.eval_at(knows[i], s0) for i in range(n)]
        dt = time.perf_counter() - t0
        count = st.model_count(theta, inst.muddy_vars)
        yes = [i for i, a in enumerate(answers) if a]
        report.rounds.append(MuddyRound(rnd, answers, yes, count, dt))
        if rnd < k:
            if yes:
                report.claims_ok = False
                raise VerificationFailure(f"round {rnd}: unexpected Yes from {yes}")
            # the round's public outcome: nobody knows
            theta = theta & st.conj(st.neg(kf) for kf in knows)
        else:
            if yes != list(range(k)):
                report.claims_ok = False
                raise VerificationFailure(f"round {k}: expected children 0..{k-1}, got {yes}")
            report.final_known = yes
    return report


@dataclass
class MuddyTimingRow:
    n: int
    k: int
    round: int
    alg: int
    seconds: float


def muddy_time(inst: MuddyInstance, algorithm: int, engine: str = "bdd") -> list[MuddyTimingRow]:
    """One timing row per K_i m_i check (rounds x children), one algorithm only.

    Verdicts must match muddy_run's; a fresh store isolates each timed run.
    """
    if algorithm not in (1, 2):
        raise SuiteError("algorithm must be 1 or 2")
    fresh = muddy_build(inst.n, inst.k, engine=engine)
    F, n, k, s0 = fresh.F0, fresh.n, fresh.k, fresh.s0
    st = F.store
    rows = []
    theta = st.disj(st.var(v) for v in fresh.muddy_vars)
    psi = F.minterm(s0)
    for rnd in range(1, k + 1):
        Fj = F.restricted(theta)
        answers = []
        for i in range(n):
            m_i = st.var(f"m{i}")
            t0 = time.perf_counter()
            if algorithm == 1:
                got = Fj.holds_alg1(psi, str(i), m_i)
            else:
                got = Fj.holds_alg2(psi, str(i), m_i)
            rows.append(MuddyTimingRow(n, k, rnd, algorithm, time.perf_counter() - t0))
            answers.append(got)
        expected = [i < k for i in range(n)] if rnd == k else [False] * n
        if answers != expected:
            raise VerificationFailure(f"algorithm {algorithm} disagrees at round {rnd}")
        if rnd < k:
            knows = _muddy_know_sets(F, theta, n)
            theta = theta & st.conj(st.neg(kf) for kf in knows)
    return rows


def timing_csv(rows: list[MuddyTimingRow]) -> str:
    out = ["n,k,round,alg,seconds"]
    for r in rows:
        out.append(f"{r.n},{r.k},{r.round},{r.alg},{r.seconds:.6f}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Needham-Schroeder
# ---------------------------------------------------------------------------

NS_ATOMS = [
    "fresh_Na",
    "fresh_Nb",
    "role_Init_A",
    "role_Resp_B",
    "RespA_is_B",
    "InitB_is_A",
    "NaB_is_Na",
    "NbA_is_Nb",
    "said_B_Na",
    "said_A_Nb",
    "sees_B_Na_A_Kb",
    "sees_A_B_Na_Nb_Ka",
]

NS_SUPPLEMENTARY_ATOMS = ["said_A_Na", "said_B_Nb"]

NS_OBS_A = ["fresh_Na", "role_Init_A", "RespA_is_B"]
NS_OBS_B = ["fresh_Nb", "role_Resp_B", "InitB_is_A"]

# message-2 inference: the revised protocol names the responder, so A may
# conclude who it ran with; the original message omits it
_NS_AXIOM_4_REVISED = (
    "(role_Init_A & sees_A_B_Na_Nb_Ka & said_A_Nb & fresh_Nb)"
    " -> (RespA_is_B & NaB_is_Na & NbA_is_Nb)"
)
_NS_AXIOM_4_ORIGINAL = (
    "(role_Init_A & sees_A_B_Na_Nb_Ka & said_A_Nb & fresh_Nb)"
    " -> (NaB_is_Na & NbA_is_Nb)"
)

_NS_AXIOMS_COMMON_PRE = [
    "(sees_B_Na_A_Kb & said_B_Na & fresh_Na) -> role_Resp_B",
    "(sees_A_B_Na_Nb_Ka & said_A_Nb & fresh_Nb) -> role_Init_A",
    "(role_Resp_B & sees_B_Na_A_Kb & said_B_Na & fresh_Na) -> (InitB_is_A & NaB_is_Na)",
]
_NS_AXIOMS_COMMON_POST = [
    "(role_Init_A & RespA_is_B) -> (sees_B_Na_A_Kb & said_B_Na)",
    "(role_Resp_B & InitB_is_A) -> (sees_A_B_Na_Nb_Ka & said_A_Nb)",
    "(role_Init_A -> fresh_Na) & (role_Resp_B -> fresh_Nb)",
]

# each party's initiation/response history includes uttering its own nonce;
# the history is conditioned on being engaged with the assumed partner
_NS_AXIOMS_SUPPLEMENTARY = [
    "(role_Init_A & RespA_is_B) -> said_A_Na",
    "(role_Resp_B & InitB_is_A) -> said_B_Nb",
]

NS_SPEC_A = "(fresh_Na & role_Init_A & RespA_is_B) -> K[A] K[B] (said_A_Na & fresh_Na)"
NS_SPEC_B = "(fresh_Nb & role_Resp_B & InitB_is_A) -> K[B] K[A] (said_B_Nb & fresh_Nb)"


@dataclass
class NSInstance:
    variant: str
    repaired: bool
    F: KnowledgeStructure
    spec_a: Formula
    spec_b: Formula


def ns_build(variant: str = "revised", repaired: bool = True, engine: str = "bdd") -> NSInstance:
    if variant not in ("revised", "original"):
        raise SuiteError(f"unknown variant {variant!r}")
    axiom4 = _NS_AXIOM_4_REVISED if variant == "revised" else _NS_AXIOM_4_ORIGINAL
    axioms = _NS_AXIOMS_COMMON_PRE + [axiom4] + _NS_AXIOMS_COMMON_POST
    atoms = list(NS_ATOMS)
    if repaired:
        atoms += NS_SUPPLEMENTARY_ATOMS
        axioms = axioms + _NS_AXIOMS_SUPPLEMENTARY
    F = KnowledgeStructure.build(
        atoms,
        [("A", NS_OBS_A), ("B", NS_OBS_B)],
        [parse_formula(a) for a in axioms],
        engine=engine,
    )
    return NSInstance(variant, repaired, F, parse_formula(NS_SPEC_A), parse_formula(NS_SPEC_B))


@dataclass
class NSReport:
    variant: str
    spec_a: bool
    spec_b: bool
    counterexample_a: State | None
    counterexample_b: State | None
    routes_agree: bool

    def to_json(self) -> str:
        def cx(s):
            return sorted(s) if s is not None else None

        failed = [n for n, ok in (("Spec_A", self.spec_a), ("Spec_B", self.spec_b)) if not ok]
        return json.dumps(
            {
                "variant": self.variant,
                "spec_A": self.spec_a,
                "spec_B": self.spec_b,
                "failed": failed,
                "counterexample_A": cx(self.counterexample_a),
                "counterexample_B": cx(self.counterexample_b),
                "routes_agree": self.routes_agree,
            },
            indent=2,
        )


def _ns_nested_route(F: KnowledgeStructure, spec: Formula) -> bool:
    """Re-check `prop -> K_j K_i prop` via the iterated-projection route."""
    if not isinstance(spec, Implies):
        raise SuiteError("spec must be an implication")
    psi = lang.to_boolfn(spec.left, F.store)
    chain = []
    body = spec.right
    while isinstance(body, Knows):
        chain.append(body.agent)
        body = body.sub
    alpha = lang.to_boolfn(body, F.store)
    return F.nested_holds(psi, chain, alpha)


def ns_verify(inst: NSInstance) -> NSReport:
    """Realization of both specs, plus the independent nested-projection route."""
    res = {}
    cex = {}
    agree = True
    for name, spec in (("a", inst.spec_a), ("b", inst.spec_b)):
        holds = evaluate.realized(inst.F, spec)
        res[name] = holds
        cex[name] = None if holds else evaluate.find_countermodel(inst.F, spec)
        if holds != _ns_nested_route(inst.F, spec):
            agree = False
    if not agree:
        raise VerificationFailure("truth-set route and nested-projection route disagree")
    return NSReport(inst.variant, res["a"], res["b"], cex["a"], cex["b"], True)


# ---------------------------------------------------------------------------
# QBF reduction stress tests
# ---------------------------------------------------------------------------


@dataclass
class QbfInstance:
    m: int
    matrix: Formula
    prefix: list[tuple[str, str]]  # (quantifier, variable), outermost first
    F: KnowledgeStructure
    target: Formula
    construction: str = "counter"


def _qbf_theta(m: int) -> list[Formula]:
    d = [Atom(f"d{j}") for j in range(1, m + 1)]
    dp = [Atom(f"dp{j}") for j in range(1, m + 1)]
    p = [Atom(f"p{j}") for j in range(1, m + 1)]
    q = [Atom(f"q{j}") for j in range(1, m + 1)]
    c = Atom("c")
    axioms: list[Formula] = []
    # depth counters are downward closed
    for j in range(m - 1):
        axioms.append(Implies(d[j + 1], d[j]))
        axioms.append(Implies(dp[j + 1], dp[j]))
    # at depth exactly j, every p/q pair except the j-th is tied
    for j in range(1, m):
        tied = [Iff(p[i - 1], q[i - 1]) for i in range(1, m + 1) if i != j]
        axioms.append(Implies(And(d[j - 1], Not(d[j])), lang.conj(tied)))
    # c: both counters equal; not c: the primed counter runs one deeper
    axioms.append(Implies(c, lang.conj(Iff(d[j], dp[j]) for j in range(m))))
    shifted: list[Formula] = [Iff(And(d[m - 2], Not(d[m - 1])), dp[m - 1])]
    for j in range(1, m - 1):
        shifted.append(
            Iff(And(d[j - 1], Not(d[j])), And(dp[j], Not(dp[j + 1])))
        )
    axioms.append(Implies(Not(c), lang.conj(shifted)))
    return axioms


def _qbf_matrix(rng: random.Random, pool: list[str]) -> Formula:
    def term() -> Formula:
        v = Atom(rng.choice(pool))
        return v if rng.random() < 0.5 else Not(v)

    def combine(a: Formula, b: Formula) -> Formula:
        return rng.choice([And, Or, Implies, Iff])(a, b)

    return combine(combine(term(), term()), term())


def _qbf_counter_instance(m: int, matrix: Formula, prefix, engine: str) -> QbfInstance:
    """Depth-counter rendering with two agents and the c/d/d' bookkeeping.

    Sound for a single alternation (m = 2): the walk descends once, blind
    pairs hand the forall choice to agent 1 and the exists choice to the
    possible-successor step of agent 2.
    """
    names = (
        ["c"]
        + [f"d{j}" for j in range(1, m + 1)]
        + [f"dp{j}" for j in range(1, m + 1)]
        + [f"p{j}" for j in range(1, m + 1)]
        + [f"q{j}" for j in range(1, m + 1)]
    )
    F = KnowledgeStructure.build(
        names,
        [
            ("1", ["c"] + [f"d{j}" for j in range(1, m + 1)] + [f"q{j}" for j in range(1, m + 1)]),
            ("2", [f"dp{j}" for j in range(1, m + 1)] + [f"p{j}" for j in range(1, m + 1)]),
        ],
        _qbf_theta(m),
        engine=engine,
    )
    core: Formula = And(Atom(f"d{m}"), matrix)
    for _ in range(m - 1):
        core = Knows("1", Not(Knows("2", Not(core))))
    target = Implies(And(Atom("d1"), Not(Atom("d2"))), core)
    return QbfInstance(m, matrix, prefix, F, target, "counter")


def _qbf_chain_instance(m: int, matrix: Formula, prefix, engine: str) -> QbfInstance:
    """Exact rendering for any alternation depth: one agent per quantifier
    block, each blind to exactly its own variable, over a free theory.

    K_a, for O_a = V - {v}, computes forall v; the dual possible-successor
    step computes exists v; composing the chain therefore evaluates the
    prefix literally, so realization coincides with QBF validity.
    """
    names = [v for _, v in prefix]
    agents = []
    for idx, (_, v) in enumerate(prefix):
        agents.append((f"g{idx + 1}", [n for n in names if n != v]))
    F = KnowledgeStructure.build(names, agents, [], engine=engine)
    core: Formula = matrix
    for idx in range(len(prefix) - 1, -1, -1):
        quant, _ = prefix[idx]
        agent = f"g{idx + 1}"
        if quant == "forall":
            core = Knows(agent, core)
        else:
            core = Not(Knows(agent, Not(core)))
    return QbfInstance(m, matrix, prefix, F, core, "chain")


def qbf_generate(m: int, seed: int, engine: str = "bdd") -> QbfInstance:
    """Random alternation instance: matrix over p_1..p_{m-1}, q_2..q_m.

    m = 2 uses the two-agent depth-counter structure; deeper alternations
    use the per-block-agent rendering, whose verdict provably equals QBF
    validity (the counter machinery cannot carry committed existential
    choices past a later agent-2 step, so it is only exact for one
    alternation).
    """
    if not (2 <= m <= 4):
        raise SuiteError("m must be between 2 and 4")
    rng = random.Random(seed)
    prefix: list[tuple[str, str]] = []
    for j in range(1, m):
        prefix.append(("forall", f"p{j}"))
        prefix.append(("exists", f"q{j + 1}"))
    matrix = _qbf_matrix(rng, [v for _, v in prefix])
    if m == 2:
        return _qbf_counter_instance(m, matrix, prefix, engine)
    return _qbf_chain_instance(m, matrix, prefix, engine)


def qbf_check(inst: QbfInstance) -> bool:
    return evaluate.realized(inst.F, inst.target)
