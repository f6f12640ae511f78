"""Truth-set compiler and realization checks.

truth_set maps a formula to the function over V that holds at exactly the
states satisfying it: propositional connectives act truth-functionally,
K_i becomes forall(V - O_i)(theta => .), C_Delta becomes the group
fixed point, and [phi]psi recurses through the restricted structure.

positive_translate implements the purely propositional rendering of the
positive K-fragment: each K_i layer turns into (theta => body) with the
agent's hidden variables renamed to reserved fresh ones, so realization
reduces to propositional validity and can be handed to a SAT solver.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import group, lang, pal
from .boolfn import BoolFn
from .kstruct import KnowledgeStructure, State
from .lang import (
    And,
    Announce,
    Atom,
    Common,
    Const,
    Exists,
    Forall,
    Formula,
    Fragment,
    Iff,
    Implies,
    Knows,
    Not,
    Or,
)


class EvalError(Exception):
    pass


class BindError(EvalError):
    """Formula references a variable or agent the structure does not declare."""


class NotPositiveError(EvalError):
    pass


def bind_check(F: KnowledgeStructure, f: Formula) -> None:
    unknown_vars = lang.atoms_of(f) - set(F.variables)
    if unknown_vars:
        raise BindError(f"unbound variables: {sorted(unknown_vars)}")
    unknown_agents = lang.agents_of(f) - set(F.agents)
    if unknown_agents:
        raise BindError(f"unbound agents: {sorted(unknown_agents)}")


@dataclass
class TruthSet:
    formula: Formula
    set: BoolFn
    structure: KnowledgeStructure


def truth_set(F: KnowledgeStructure, alpha: Formula) -> TruthSet:
    bind_check(F, alpha)
    return TruthSet(alpha, _ts(F, alpha), F)


def _ts(F: KnowledgeStructure, f: Formula) -> BoolFn:
    st = F.store
    if isinstance(f, Atom):
        return st.var(f.name)
    if isinstance(f, Const):
        return st.const(f.value)
    if isinstance(f, Not):
        return st.neg(_ts(F, f.sub))
    if isinstance(f, And):
        return _ts(F, f.left) & _ts(F, f.right)
    if isinstance(f, Or):
        return _ts(F, f.left) | _ts(F, f.right)
    if isinstance(f, Implies):
        return _ts(F, f.left).implies(_ts(F, f.right))
    if isinstance(f, Iff):
        return _ts(F, f.left).iff(_ts(F, f.right))
    if isinstance(f, Exists):
        return st.forget_exists(f.names, _ts(F, f.sub))
    if isinstance(f, Forall):
        return st.forget_forall(f.names, _ts(F, f.sub))
    if isinstance(f, Knows):
        return F.knows_set(f.agent, _ts(F, f.sub))
    if isinstance(f, Common):
        ctx = group.mk_context(F, f.agents)
        return group.common_set(ctx, _ts(F, f.sub))
    if isinstance(f, Announce):
        ts_phi = _ts(F, f.announced)
        r = pal.restrict_by_set(F, ts_phi)
        if r.vacuous:
            return st.true
        return st.neg(ts_phi) | _ts(r.result, f.sub)
    raise EvalError(f"cannot evaluate {f!r}")


def realized(F: KnowledgeStructure, alpha: Formula) -> bool:
    """alpha holds at every state of F."""
    ts = truth_set(F, alpha)
    return F.store.is_valid(F.theta.implies(ts.set))


def find_countermodel(F: KnowledgeStructure, alpha: Formula) -> State | None:
    """A state where alpha fails, or None if realized."""
    ts = truth_set(F, alpha)
    bad = F.theta & F.store.neg(ts.set)
    for s in F.store.enumerate_models(bad, F.variables):
        return s
    return None


def scenario_check(F: KnowledgeStructure, s: State, alpha: Formula) -> bool:
    """Truth of alpha at one validated state."""
    s = F.check_state(s)
    ts = truth_set(F, alpha)
    return F.store.eval_at(ts.set, s)


# ---------------------------------------------------------------------------
# Positive-fragment propositional translation
# ---------------------------------------------------------------------------


@dataclass
class PositiveTranslation:
    original: Formula
    translated: BoolFn
    translated_formula: Formula
    fresh_map: dict[tuple[str, Formula], tuple[str, ...]]


def positive_translate(
    F: KnowledgeStructure, phi: Formula, per_occurrence: bool = False
) -> PositiveTranslation:
    """Rewrite a positive formula into a propositional one over V plus fresh
    variables, such that phi is realized in F exactly when theta => result
    is valid (equivalently: theta and not-result is unsatisfiable).

    By default one fresh set serves all occurrences of the same K_i-subformula;
    per_occurrence switches to strict per-occurrence allocation for
    differential testing.
    """
    bind_check(F, phi)
    if lang.classify(phi) > Fragment.POSITIVE_K:
        raise NotPositiveError(f"not in the positive K-fragment: {lang.print_formula(phi)}")

    table = F.store.table
    theta_ast = lang.expand_quantifiers(F.theta_formula)
    hidden = {a: F.obs_complement(a) for a in F.agents}
    fresh_map: dict[tuple[str, Formula], tuple[str, ...]] = {}
    occurrence = 0

    def fresh_names(agent: str, body: Formula) -> tuple[str, ...]:
        nonlocal occurrence
        key = (agent, body)
        if not per_occurrence and key in fresh_map:
            return fresh_map[key]
        tag = hashlib.sha1(
            f"{agent}|{lang.print_formula(body)}".encode()
        ).hexdigest()[:8]
        if per_occurrence:
            occurrence += 1
            tag = f"{tag}o{occurrence}"
        names = tuple(f"@{v}_{tag}" for v in hidden[agent])
        for n in names:
            table.ensure(n)
        fresh_map[key] = names
        return names

    def walk(g: Formula) -> Formula:
        if lang.is_propositional(g):
            return lang.expand_quantifiers(g)
        if isinstance(g, And):
            return And(walk(g.left), walk(g.right))
        if isinstance(g, Or):
            return Or(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            # antecedent is propositional in the positive fragment
            return Or(Not(lang.expand_quantifiers(g.left)), walk(g.right))
        if isinstance(g, Knows):
            body = walk(g.sub)
            names = fresh_names(g.agent, g.sub)
            mapping = dict(zip(hidden[g.agent], names))
            return lang.substitute_atoms(Implies(theta_ast, body), mapping)
        raise NotPositiveError(f"not in the positive K-fragment: {lang.print_formula(g)}")

    out = walk(phi)
    return PositiveTranslation(phi, lang.to_boolfn(out, F.store), out, fresh_map)


def realized_via_translation(F: KnowledgeStructure, phi: Formula, **kw) -> bool:
    """Decide realization through the propositional route (theta => ||phi||)."""
    pt = positive_translate(F, phi, **kw)
    return F.store.is_valid(F.theta.implies(pt.translated))
