"""Public announcements: structure restriction and announcement truth sets.

Announcing phi keeps exactly the states where phi held: the restricted
structure reuses V, the agents, and the observables, with the theory
strengthened by phi's truth set.  An announcement whose truth set excludes
every state yields a vacuous restriction; [phi]psi is then true everywhere
because its antecedent never holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .boolfn import BoolFn
from .kstruct import KnowledgeStructure
from .lang import Formula


class VacuousAnnouncementError(Exception):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"announcement {index} holds at no state")


@dataclass
class Restriction:
    base: KnowledgeStructure
    announced: BoolFn
    result: KnowledgeStructure
    vacuous: bool


def restrict_by_set(F: KnowledgeStructure, announced: BoolFn) -> Restriction:
    """Restrict by a precomputed truth set."""
    theta_new = F.theta & announced
    vacuous = not F.store.is_sat(theta_new)
    return Restriction(F, announced, F.restricted(theta_new), vacuous)


def restrict(F: KnowledgeStructure, phi: Formula) -> Restriction:
    from . import evaluate

    return restrict_by_set(F, evaluate.truth_set(F, phi).set)


def announce_set(F: KnowledgeStructure, phi: Formula, psi: Formula) -> BoolFn:
    """Truth set of [phi]psi: where phi fails, or psi holds after restriction."""
    from . import evaluate

    ts_phi = evaluate.truth_set(F, phi).set
    r = restrict_by_set(F, ts_phi)
    if r.vacuous:
        return F.store.true
    ts_psi = evaluate.truth_set(r.result, psi).set
    return F.store.neg(ts_phi) | ts_psi


@dataclass
class AnnounceTrace:
    result: KnowledgeStructure
    thetas: list[BoolFn]


def announce_iterate(F: KnowledgeStructure, announcements: Sequence[Formula]) -> AnnounceTrace:
    """Fold restrictions left to right, recording each intermediate theory."""
    if not announcements:
        raise ValueError("announcement list must be non-empty")
    cur = F
    thetas: list[BoolFn] = []
    for i, phi in enumerate(announcements):
        r = restrict(cur, phi)
        if r.vacuous:
            raise VacuousAnnouncementError(i)
        cur = r.result
        thetas.append(cur.theta)
    return AnnounceTrace(cur, thetas)
