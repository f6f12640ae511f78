"""Knowledge structures and single-agent knowledge via forgetting.

A structure is (V, theta, O_1..O_n): a variable table, one satisfiable
background function (the conjoined theory), and per-agent observable
variable sets.  States are assignments over V satisfying theta; agent i's
local state at s is s intersected with O_i.

Knowledge of an objective alpha reduces to quantifier elimination:

    K_i alpha   <->   forall(V - O_i)(theta => alpha)

and the dual existential form gives the strongest necessary condition of a
hypothesis over O_i.  Both directions of that reduction are exposed
(holds_alg1 / holds_alg2) because they trade work differently and must
always agree.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from . import lang
from .boolfn import BoolFn, VarTable, mk_store

State = frozenset[str]


class KStructError(Exception):
    pass


class UnknownAgentError(KStructError):
    pass


class NonStateError(KStructError):
    pass


class InconsistentTheoryError(KStructError):
    pass


class KnowledgeStructure:
    """Immutable after construction; queries share the owning store."""

    def __init__(
        self,
        store,
        theta: BoolFn,
        agents: Sequence[str],
        obs: dict[str, frozenset[str]],
        axioms: tuple = (),
        check_consistent: bool = True,
    ):
        self.store = store
        self.theta = theta
        self.agents = tuple(agents)
        self.obs = {a: frozenset(o) for a, o in obs.items()}
        self.axioms = tuple(axioms)
        if len(set(self.agents)) != len(self.agents):
            raise KStructError("duplicate agent names")
        declared = set(self.variables)
        for a in self.agents:
            if a not in self.obs:
                raise KStructError(f"agent {a!r} has no observable set")
            extra = self.obs[a] - declared
            if extra:
                raise KStructError(f"observables of {a!r} outside V: {sorted(extra)}")
        if check_consistent and not store.is_sat(theta):
            raise InconsistentTheoryError("background theory is unsatisfiable")

    @classmethod
    def build(
        cls,
        var_names: Sequence[str],
        agents_obs: Sequence[tuple[str, Iterable[str]]],
        axioms: Sequence[lang.Formula] = (),
        engine: str = "bdd",
    ) -> "KnowledgeStructure":
        table = VarTable(var_names)
        table.freeze()
        store = mk_store(engine, table)
        theta = store.conj(lang.to_boolfn(f, store) for f in axioms)
        if not store.is_sat(theta):
            raise InconsistentTheoryError("background theory is unsatisfiable")
        return cls(
            store,
            theta,
            [a for a, _ in agents_obs],
            {a: frozenset(o) for a, o in agents_obs},
            axioms=tuple(axioms),
        )

    # -- basic views -----------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        # table may have gained fresh '@' scratch variables; V excludes them
        return tuple(n for n in self.store.table.names if not n.startswith("@"))

    @property
    def theta_formula(self) -> lang.Formula:
        if self.axioms:
            return lang.conj(self.axioms)
        return lang.formula_from_boolfn(self.theta)

    def obs_complement(self, agent: str) -> tuple[str, ...]:
        o = self.observables(agent)
        return tuple(n for n in self.variables if n not in o)

    def observables(self, agent: str) -> frozenset[str]:
        try:
            return self.obs[agent]
        except KeyError:
            raise UnknownAgentError(f"unknown agent {agent!r}") from None

    def restricted(self, theta_new: BoolFn) -> "KnowledgeStructure":
        """Same vocabulary and agents under a stronger theory (no consistency check)."""
        return KnowledgeStructure(
            self.store, theta_new, self.agents, self.obs, self.axioms, check_consistent=False
        )

    # -- states ------------------------------------------------------------

    def check_state(self, assignment: Iterable[str]) -> State:
        s = frozenset(assignment)
        extra = s - set(self.variables)
        if extra:
            raise NonStateError(f"assignment uses variables outside V: {sorted(extra)}")
        if not self.store.eval_at(self.theta, s):
            raise NonStateError(f"assignment violates the background theory: {sorted(s)}")
        return s

    def is_state(self, assignment: Iterable[str]) -> bool:
        s = frozenset(assignment)
        return s <= set(self.variables) and self.store.eval_at(self.theta, s)

    def states(self, cap: int = 24) -> Iterator[State]:
        return self.store.enumerate_models(self.theta, self.variables, cap=cap)

    def state_count(self) -> int:
        return self.store.model_count(self.theta, self.variables)

    def minterm(self, s: Iterable[str]) -> BoolFn:
        return self.store.minterm(s, self.variables)

    # -- knowledge via forgetting -----------------------------------------

    def wsc(self, agent: str, alpha: BoolFn) -> BoolFn:
        """Weakest sufficient condition of alpha over O_agent under theta."""
        hidden = self.obs_complement(agent)
        return self.store.forget_forall(hidden, self.theta.implies(alpha))

    def snc(self, agent: str, alpha: BoolFn) -> BoolFn:
        """Strongest necessary condition of alpha over O_agent under theta."""
        hidden = self.obs_complement(agent)
        return self.store.forget_exists(hidden, self.theta & alpha)

    def knows_set(self, agent: str, alpha: BoolFn) -> BoolFn:
        """States where K_agent alpha holds, for objective alpha (as a function)."""
        return self.wsc(agent, alpha)

    def holds_on(self, psi: BoolFn, alpha_ts: BoolFn) -> bool:
        """alpha_ts holds at every state satisfying psi."""
        return self.store.is_valid((self.theta & psi).implies(alpha_ts))

    def nested_holds(self, psi: BoolFn, chain: Sequence[str], alpha: BoolFn) -> bool:
        """K_{i1}...K_{ik} alpha over the psi-states, by iterated projection.

        psi_{j+1} = exists(V - O_{i_{j+1}})(theta and psi_j); the query holds
        exactly when theta and psi_k entail alpha.
        """
        if not chain:
            raise KStructError("agent chain must be non-empty")
        cur = psi
        for agent in chain:
            cur = self.snc(agent, cur)
        return self.holds_on(cur, alpha)

    def holds_alg1(self, psi: BoolFn, agent: str, alpha: BoolFn) -> bool:
        """(theta and psi) => WSC_agent(alpha)."""
        return self.store.is_valid((self.theta & psi).implies(self.wsc(agent, alpha)))

    def holds_alg2(self, psi: BoolFn, agent: str, alpha: BoolFn) -> bool:
        """(theta and SNC_agent(psi)) => alpha."""
        return self.store.is_valid((self.theta & self.snc(agent, psi)).implies(alpha))

    def __repr__(self) -> str:
        return (
            f"<KnowledgeStructure |V|={len(self.variables)} "
            f"agents={list(self.agents)} engine={type(self.store).__name__}>"
        )


def check_state(F: KnowledgeStructure, assignment: Iterable[str]) -> State:
    return F.check_state(assignment)
