"""Group knowledge: generalized sufficient/necessary conditions, common knowledge.

The weakest condition of alpha that every agent in a group can each express
over their own observables is the greatest fixed point of

    Z  |->  alpha  and  AND_i forall(V - O_i)(theta => Z)

and the dual least fixed point gives the strongest group-expressible
consequence.  Common knowledge C_Delta(alpha) coincides with the former.
An explicit-reachability oracle over enumerated states backs both up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .boolfn import BoolFn
from .kstruct import KnowledgeStructure, KStructError, State, UnknownAgentError


@dataclass(frozen=True)
class GroupContext:
    F: KnowledgeStructure
    delta: tuple[str, ...]

    def __post_init__(self):
        if not self.delta:
            raise KStructError("agent group must be non-empty")
        if len(set(self.delta)) != len(self.delta):
            raise KStructError("duplicate agent in group")
        for a in self.delta:
            if a not in self.F.agents:
                raise UnknownAgentError(f"unknown agent {a!r}")

    @property
    def vsets(self) -> tuple[frozenset[str], ...]:
        return tuple(self.F.observables(a) for a in self.delta)


def mk_context(F: KnowledgeStructure, delta: Iterable[str]) -> GroupContext:
    return GroupContext(F, tuple(delta))


def is_definable(ctx: GroupContext, phi: BoolFn) -> bool:
    """phi is expressible over each member vocabulary, modulo the theory."""
    F = ctx.F
    st = F.store
    for agent in ctx.delta:
        local = st.forget_forall(F.obs_complement(agent), F.theta.implies(phi))
        if not st.equiv_under(F.theta, phi, local):
            return False
    return True


def wsc_group_iterates(ctx: GroupContext, alpha: BoolFn) -> list[BoolFn]:
    """Descending chain of the greatest-fixed-point iteration, last = result."""
    F = ctx.F
    st = F.store
    z = st.true
    chain = [z]
    while True:
        step = alpha
        for agent in ctx.delta:
            step = step & st.forget_forall(F.obs_complement(agent), F.theta.implies(z))
        chain.append(step)
        if step == z:
            return chain
        z = step


def snc_group_iterates(ctx: GroupContext, alpha: BoolFn) -> list[BoolFn]:
    """Ascending chain of the least-fixed-point iteration, last = result."""
    F = ctx.F
    st = F.store
    z = st.false
    chain = [z]
    while True:
        step = alpha
        for agent in ctx.delta:
            step = step | st.forget_exists(F.obs_complement(agent), F.theta & z)
        chain.append(step)
        if step == z:
            return chain
        z = step


def wsc_group(ctx: GroupContext, alpha: BoolFn) -> BoolFn:
    return wsc_group_iterates(ctx, alpha)[-1]


def snc_group(ctx: GroupContext, alpha: BoolFn) -> BoolFn:
    return snc_group_iterates(ctx, alpha)[-1]


def common_set(ctx: GroupContext, alpha_ts: BoolFn) -> BoolFn:
    """Truth set of C_Delta alpha, given alpha's truth set."""
    return wsc_group(ctx, alpha_ts)


@dataclass
class ReachabilityResult:
    wsc_states: frozenset[State]
    snc_states: frozenset[State]
    components: list[frozenset[State]] = field(default_factory=list)


def reachability_oracle(
    ctx: GroupContext, alpha: BoolFn, cap: int = 24
) -> ReachabilityResult:
    """Explicit-state answer: states whose whole (resp. some) reachability
    class satisfies alpha, under the union of the group's local-equality
    relations, transitively closed.

    Each agent's relation is an equivalence, so the closure of the union is
    plain connected components over shared local states.
    """
    F = ctx.F
    st = F.store
    states = list(F.states(cap=cap))
    parent = list(range(len(states)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for agent in ctx.delta:
        o = F.observables(agent)
        first: dict[frozenset[str], int] = {}
        for i, s in enumerate(states):
            key = s & o
            if key in first:
                union(first[key], i)
            else:
                first[key] = i

    groups: dict[int, list[int]] = {}
    for i in range(len(states)):
        groups.setdefault(find(i), []).append(i)

    sat = [st.eval_at(alpha, s) for s in states]
    wsc_states: set[State] = set()
    snc_states: set[State] = set()
    components = []
    for members in groups.values():
        comp = frozenset(states[i] for i in members)
        components.append(comp)
        if all(sat[i] for i in members):
            wsc_states.update(comp)
        if any(sat[i] for i in members):
            snc_states.update(comp)
    return ReachabilityResult(frozenset(wsc_states), frozenset(snc_states), components)
