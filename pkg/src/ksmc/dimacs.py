"""DIMACS CNF export via structure-preserving Tseitin encodings.

Formulas are encoded gate by gate over their AST; store functions are
encoded over their BDD graph, one auxiliary variable per node.  Both yield
an equisatisfiable CNF.  Named variables come first and are listed in
`c var <index> <name>` comments before the clauses.

Constants get fixed documented shapes: false is `p cnf 1 2` with the two
unit clauses `1 0` / `-1 0` (unsatisfiable), true is `p cnf 1 1` with the
tautological clause `1 -1 0` (satisfiable).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

from . import lang
from .boolfn import BoolFn
from .lang import And, Atom, Const, Formula, Iff, Implies, Not, Or


@dataclass
class Cnf:
    nvars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    names: dict[int, str] = field(default_factory=dict)

    def new_var(self, name: str | None = None) -> int:
        self.nvars += 1
        if name is not None:
            self.names[self.nvars] = name
        return self.nvars

    def add(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))


def cnf_from_formula(f: Formula, atom_order: list[str] | None = None) -> Cnf:
    """Tseitin over the propositional AST (surface quantifiers expanded first)."""
    f = lang.expand_quantifiers(f)
    cnf = Cnf()
    lit_of_atom: dict[str, int] = {}
    for name in atom_order or sorted(lang.atoms_of(f)):
        lit_of_atom[name] = cnf.new_var(name)
    for name in sorted(lang.atoms_of(f)):
        if name not in lit_of_atom:
            lit_of_atom[name] = cnf.new_var(name)

    const_true: list[int] = []

    def const_lit() -> int:
        if not const_true:
            v = cnf.new_var()
            cnf.add(v)
            const_true.append(v)
        return const_true[0]

    def enc(g: Formula) -> int:
        if isinstance(g, Atom):
            return lit_of_atom[g.name]
        if isinstance(g, Const):
            t = const_lit()
            return t if g.value else -t
        if isinstance(g, Not):
            return -enc(g.sub)
        a = enc(g.left)
        b = enc(g.right)
        x = cnf.new_var()
        if isinstance(g, And):
            cnf.add(-x, a)
            cnf.add(-x, b)
            cnf.add(x, -a, -b)
        elif isinstance(g, Or):
            cnf.add(x, -a)
            cnf.add(x, -b)
            cnf.add(-x, a, b)
        elif isinstance(g, Implies):
            cnf.add(x, a)
            cnf.add(x, -b)
            cnf.add(-x, -a, b)
        elif isinstance(g, Iff):
            cnf.add(-x, -a, b)
            cnf.add(-x, a, -b)
            cnf.add(x, a, b)
            cnf.add(x, -a, -b)
        else:
            raise lang.LangError(f"cannot encode {g!r}")
        return x

    root = enc(f)
    cnf.add(root)
    return cnf


def cnf_from_boolfn(f: BoolFn) -> Cnf:
    """Tseitin over the BDD graph: x_n <-> ite(v, x_hi, x_lo) per node."""
    store = f.store
    if not hasattr(store, "node"):
        return cnf_from_formula(lang.formula_from_boolfn(f))
    cnf = Cnf()
    lit_of_var: dict[str, int] = {}
    for name in store.support(f):
        lit_of_var[name] = cnf.new_var(name)

    t = cnf.new_var()
    cnf.add(t)  # constant-true anchor for the terminals

    memo: dict[int, int] = {}

    def enc(g: BoolFn) -> int:
        n = store.node(g)
        if n is True:
            return t
        if n is False:
            return -t
        if g.ref in memo:
            return memo[g.ref]
        name, lo, hi = n
        v = lit_of_var[name]
        xl = enc(lo)
        xh = enc(hi)
        x = cnf.new_var()
        cnf.add(-x, -v, xh)
        cnf.add(x, -v, -xh)
        cnf.add(-x, v, xl)
        cnf.add(x, v, -xl)
        memo[g.ref] = x
        return x

    cnf.add(enc(f))
    return cnf


def render_dimacs(cnf: Cnf) -> str:
    lines = [f"c var {i} {n}" for i, n in sorted(cnf.names.items())]
    lines.append(f"p cnf {cnf.nvars} {len(cnf.clauses)}")
    for cl in cnf.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def to_dimacs(obj, sink) -> None:
    """Write an equisatisfiable CNF for a BoolFn or a propositional Formula.

    `sink` is a path or a writable file object.  Paths are written
    atomically (temp file + rename).
    """
    if isinstance(obj, BoolFn):
        store = obj.store
        if not store.is_sat(obj):
            cnf = Cnf(nvars=1, clauses=[(1,), (-1,)])
        elif store.is_valid(obj):
            cnf = Cnf(nvars=1, clauses=[(1, -1)])
        else:
            cnf = cnf_from_boolfn(obj)
    elif isinstance(obj, Formula):
        if obj == Const(False):
            cnf = Cnf(nvars=1, clauses=[(1,), (-1,)])
        elif obj == Const(True):
            cnf = Cnf(nvars=1, clauses=[(1, -1)])
        else:
            cnf = cnf_from_formula(obj)
    else:
        raise TypeError(f"cannot export {type(obj).__name__} to DIMACS")
    text = render_dimacs(cnf)
    if hasattr(sink, "write"):
        sink.write(text)
        return
    write_atomic(sink, text)


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-dimacs-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
