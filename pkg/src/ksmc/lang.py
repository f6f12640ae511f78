"""Formula language: AST, parser, printer, fragment classification.

Concrete syntax (loosest to tightest): `<->`, `->` (right-associative),
`|`, `&`, then prefix unary (`~`, `K[a]`, `C[a,b]`, `[phi]`, `E{v ..}`,
`A{v ..}`).  `#` starts a comment.  Variable names are identifiers;
agent names may additionally be bare integers, which the worked models
and the CLI rely on.

Also hosts the knowledge-structure model file reader (`.eks`) and the
compiler from propositional formulas to store functions.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from . import boolfn
from .boolfn import BoolFn, VarTable


class LangError(Exception):
    """Parse or validation failure; carries source position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    names: tuple[str, ...]
    sub: Formula


@dataclass(frozen=True)
class Forall(Formula):
    names: tuple[str, ...]
    sub: Formula


@dataclass(frozen=True)
class Knows(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class Common(Formula):
    agents: tuple[str, ...]
    sub: Formula


@dataclass(frozen=True)
class Announce(Formula):
    announced: Formula
    sub: Formula


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


# ---------------------------------------------------------------------------
# Fragment classification
# ---------------------------------------------------------------------------


class Fragment(enum.IntEnum):
    PROPOSITIONAL = 0
    POSITIVE_K = 1
    FULL_EPISTEMIC = 2
    PAL = 3


def _scan(f: Formula, found: set[str]) -> None:
    if isinstance(f, Announce):
        found.add("announce")
        _scan(f.announced, found)
        _scan(f.sub, found)
    elif isinstance(f, Common):
        found.add("common")
        _scan(f.sub, found)
    elif isinstance(f, Knows):
        found.add("knows")
        _scan(f.sub, found)
    elif isinstance(f, Not):
        _scan(f.sub, found)
    elif isinstance(f, (And, Or, Implies, Iff)):
        _scan(f.left, found)
        _scan(f.right, found)
    elif isinstance(f, (Exists, Forall)):
        _scan(f.sub, found)


def is_propositional(f: Formula) -> bool:
    found: set[str] = set()
    _scan(f, found)
    return not found


def _is_positive(f: Formula) -> bool:
    # negative positions (negations, implication antecedents, both iff sides)
    # must be propositional; K may nest positively
    if isinstance(f, (Atom, Const)):
        return True
    if isinstance(f, Not):
        return is_propositional(f.sub)
    if isinstance(f, (And, Or)):
        return _is_positive(f.left) and _is_positive(f.right)
    if isinstance(f, Implies):
        return is_propositional(f.left) and _is_positive(f.right)
    if isinstance(f, Iff):
        return is_propositional(f.left) and is_propositional(f.right)
    if isinstance(f, (Exists, Forall)):
        return is_propositional(f.sub)
    if isinstance(f, Knows):
        return _is_positive(f.sub)
    return False


def classify(f: Formula) -> Fragment:
    found: set[str] = set()
    _scan(f, found)
    if "announce" in found:
        return Fragment.PAL
    if "common" in found:
        return Fragment.FULL_EPISTEMIC
    if "knows" not in found:
        return Fragment.PROPOSITIONAL
    return Fragment.POSITIVE_K if _is_positive(f) else Fragment.FULL_EPISTEMIC


def atoms_of(f: Formula) -> set[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Exists, Forall, Knows, Common)):
            walk(g.sub)
            if isinstance(g, (Exists, Forall)):
                out.update(g.names)
        elif isinstance(g, Announce):
            walk(g.announced)
            walk(g.sub)

    walk(f)
    return out


def agents_of(f: Formula) -> set[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Knows):
            out.add(g.agent)
            walk(g.sub)
        elif isinstance(g, Common):
            out.update(g.agents)
            walk(g.sub)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Exists, Forall)):
            walk(g.sub)
        elif isinstance(g, Announce):
            walk(g.announced)
            walk(g.sub)

    walk(f)
    return out


# ---------------------------------------------------------------------------
# Lexer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[0-9]+)
  | (?P<op><->|->|[~&|(){}\[\],])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident' | 'num' | 'op' | 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LangError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                toks.append(_Tok(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise LangError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def fail(self, msg: str) -> LangError:
        t = self.peek()
        return LangError(msg, t.line, t.col)

    # agent names may be identifiers or bare integers
    def agent_name(self) -> str:
        t = self.next()
        if t.kind in ("ident", "num"):
            return t.text
        raise LangError(f"expected agent name, found {t.text!r}", t.line, t.col)

    def var_name(self) -> str:
        t = self.next()
        if t.kind == "ident" and t.text not in _KEYWORDS:
            return t.text
        raise LangError(f"expected variable name, found {t.text!r}", t.line, t.col)

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek().text == "<->":
            self.next()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.peek().text == "->":
            self.next()
            return Implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek().text == "|":
            self.next()
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t.text == "~":
            self.next()
            return Not(self.unary())
        if t.text == "[":
            self.next()
            announced = self.formula()
            self.expect("]")
            return Announce(announced, self.unary())
        if t.kind == "ident" and t.text == "K" and self.peek(1).text == "[":
            self.next()
            self.expect("[")
            agent = self.agent_name()
            self.expect("]")
            return Knows(agent, self.unary())
        if t.kind == "ident" and t.text == "C" and self.peek(1).text == "[":
            self.next()
            self.expect("[")
            agents = [self.agent_name()]
            while self.peek().text == ",":
                self.next()
                agents.append(self.agent_name())
            self.expect("]")
            if len(set(agents)) != len(agents):
                raise LangError("duplicate agent in common-knowledge group", t.line, t.col)
            return Common(tuple(agents), self.unary())
        if t.kind == "ident" and t.text in ("E", "A") and self.peek(1).text == "{":
            self.next()
            self.expect("{")
            names = [self.var_name()]
            while self.peek().text != "}":
                if self.peek().text == ",":
                    self.next()
                names.append(self.var_name())
            self.expect("}")
            if len(set(names)) != len(names):
                raise LangError("duplicate variable in quantifier list", t.line, t.col)
            sub = self.unary()
            if not is_propositional(sub):
                raise LangError(
                    "forgetting quantifiers may wrap only propositional formulas", t.line, t.col
                )
            return Exists(tuple(names), sub) if t.text == "E" else Forall(tuple(names), sub)
        return self.atom()

    def atom(self) -> Formula:
        t = self.next()
        if t.text == "(":
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            if t.text == "true":
                return TRUE
            if t.text == "false":
                return FALSE
            return Atom(t.text)
        raise LangError(f"expected a formula, found {t.text or 'end of input'!r}", t.line, t.col)


def parse_formula(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.formula()
    t = p.peek()
    if t.kind != "eof":
        raise LangError(f"trailing input {t.text!r}", t.line, t.col)
    return f


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_LVL_IFF, _LVL_IMP, _LVL_OR, _LVL_AND, _LVL_UNARY, _LVL_ATOM = range(6)


def _level(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return _LVL_ATOM
    if isinstance(f, (Not, Knows, Common, Announce, Exists, Forall)):
        return _LVL_UNARY
    if isinstance(f, And):
        return _LVL_AND
    if isinstance(f, Or):
        return _LVL_OR
    if isinstance(f, Implies):
        return _LVL_IMP
    return _LVL_IFF


def print_formula(f: Formula) -> str:
    def p(g: Formula, minlvl: int) -> str:
        s = raw(g)
        return f"({s})" if _level(g) < minlvl else s

    def raw(g: Formula) -> str:
        if isinstance(g, Atom):
            return g.name
        if isinstance(g, Const):
            return "true" if g.value else "false"
        if isinstance(g, Not):
            return "~" + p(g.sub, _LVL_UNARY)
        if isinstance(g, Knows):
            return f"K[{g.agent}] " + p(g.sub, _LVL_UNARY)
        if isinstance(g, Common):
            return f"C[{','.join(g.agents)}] " + p(g.sub, _LVL_UNARY)
        if isinstance(g, Announce):
            return f"[{raw(g.announced)}] " + p(g.sub, _LVL_UNARY)
        if isinstance(g, Exists):
            return f"E{{{' '.join(g.names)}}} " + p(g.sub, _LVL_UNARY)
        if isinstance(g, Forall):
            return f"A{{{' '.join(g.names)}}} " + p(g.sub, _LVL_UNARY)
        if isinstance(g, And):
            return p(g.left, _LVL_AND) + " & " + p(g.right, _LVL_AND + 1)
        if isinstance(g, Or):
            return p(g.left, _LVL_OR) + " | " + p(g.right, _LVL_OR + 1)
        if isinstance(g, Implies):
            return p(g.left, _LVL_IMP + 1) + " -> " + p(g.right, _LVL_IMP)
        if isinstance(g, Iff):
            return p(g.left, _LVL_IFF) + " <-> " + p(g.right, _LVL_IFF + 1)
        raise LangError(f"cannot print {g!r}")

    return raw(f)


# ---------------------------------------------------------------------------
# Propositional compilation and rewriting
# ---------------------------------------------------------------------------


def to_boolfn(f: Formula, store) -> BoolFn:
    """Compile a propositional formula (surface quantifiers allowed)."""
    if isinstance(f, Atom):
        return store.var(f.name)
    if isinstance(f, Const):
        return store.const(f.value)
    if isinstance(f, Not):
        return store.neg(to_boolfn(f.sub, store))
    if isinstance(f, And):
        return store.apply("and", to_boolfn(f.left, store), to_boolfn(f.right, store))
    if isinstance(f, Or):
        return store.apply("or", to_boolfn(f.left, store), to_boolfn(f.right, store))
    if isinstance(f, Implies):
        return store.apply("implies", to_boolfn(f.left, store), to_boolfn(f.right, store))
    if isinstance(f, Iff):
        return store.apply("iff", to_boolfn(f.left, store), to_boolfn(f.right, store))
    if isinstance(f, Exists):
        return store.forget_exists(f.names, to_boolfn(f.sub, store))
    if isinstance(f, Forall):
        return store.forget_forall(f.names, to_boolfn(f.sub, store))
    raise LangError(f"not a propositional formula: {print_formula(f)}")


def substitute_atoms(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free atoms; input must not quantify over renamed variables."""
    if isinstance(f, Atom):
        return Atom(mapping.get(f.name, f.name))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute_atoms(f.sub, mapping))
    if isinstance(f, And):
        return And(substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping))
    if isinstance(f, Or):
        return Or(substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping))
    if isinstance(f, Implies):
        return Implies(substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping))
    if isinstance(f, (Exists, Forall)):
        if any(n in mapping for n in f.names):
            raise LangError("substitution would capture a quantified variable")
        cls = Exists if isinstance(f, Exists) else Forall
        return cls(f.names, substitute_atoms(f.sub, mapping))
    if isinstance(f, Knows):
        return Knows(f.agent, substitute_atoms(f.sub, mapping))
    if isinstance(f, Common):
        return Common(f.agents, substitute_atoms(f.sub, mapping))
    if isinstance(f, Announce):
        return Announce(
            substitute_atoms(f.announced, mapping), substitute_atoms(f.sub, mapping)
        )
    raise LangError(f"cannot substitute in {f!r}")


def substitute_atoms_const(f: Formula, mapping: dict[str, bool]) -> Formula:
    if isinstance(f, Atom):
        if f.name in mapping:
            return Const(mapping[f.name])
        return f
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute_atoms_const(f.sub, mapping))
    if isinstance(f, (And, Or, Implies, Iff)):
        cls = type(f)
        return cls(
            substitute_atoms_const(f.left, mapping), substitute_atoms_const(f.right, mapping)
        )
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in f.names}
        cls = type(f)
        return cls(f.names, substitute_atoms_const(f.sub, inner))
    raise LangError("constant substitution is defined for propositional formulas only")


def expand_quantifiers(f: Formula) -> Formula:
    """Rewrite surface E/A quantifiers into explicit case splits."""
    if isinstance(f, (Atom, Const)):
        return f
    if isinstance(f, Not):
        return Not(expand_quantifiers(f.sub))
    if isinstance(f, (And, Or, Implies, Iff)):
        cls = type(f)
        return cls(expand_quantifiers(f.left), expand_quantifiers(f.right))
    if isinstance(f, (Exists, Forall)):
        body = expand_quantifiers(f.sub)
        mk = Or if isinstance(f, Exists) else And
        for n in f.names:
            body = mk(
                substitute_atoms_const(body, {n: True}),
                substitute_atoms_const(body, {n: False}),
            )
        return body
    if isinstance(f, Knows):
        return Knows(f.agent, expand_quantifiers(f.sub))
    if isinstance(f, Common):
        return Common(f.agents, expand_quantifiers(f.sub))
    if isinstance(f, Announce):
        return Announce(expand_quantifiers(f.announced), expand_quantifiers(f.sub))
    raise LangError(f"cannot expand {f!r}")


def formula_from_boolfn(f: BoolFn) -> Formula:
    """Readable formula equivalent to a store function (for reports)."""
    store = f.store
    if store.is_valid(f):
        return TRUE
    if not store.is_sat(f):
        return FALSE
    if hasattr(store, "node"):  # BDD: Shannon expansion
        def walk(g: BoolFn) -> Formula:
            n = store.node(g)
            if n is True:
                return TRUE
            if n is False:
                return FALSE
            name, lo, hi = n
            v = Atom(name)
            lo_f, hi_f = walk(lo), walk(hi)
            if lo_f == FALSE and hi_f == TRUE:
                return v
            if lo_f == TRUE and hi_f == FALSE:
                return Not(v)
            if lo_f == FALSE:
                return v if hi_f == TRUE else And(v, hi_f)
            if hi_f == FALSE:
                return Not(v) if lo_f == TRUE else And(Not(v), lo_f)
            if lo_f == TRUE:
                return Or(Not(v), hi_f)
            if hi_f == TRUE:
                return Or(v, lo_f)
            return Or(And(v, hi_f), And(Not(v), lo_f))

        return walk(f)
    # table backend: disjunction of support minterms
    sup = store.support(f)
    terms = []
    for model in store.enumerate_models(f, sup):
        lits = [Atom(n) if n in model else Not(Atom(n)) for n in sup]
        terms.append(conj(lits))
    return disj(terms)


# ---------------------------------------------------------------------------
# Knowledge-structure model files (.eks)
# ---------------------------------------------------------------------------


def parse_model(text: str, engine: str = "bdd", var_order: list[str] | None = None):
    """Read a `.eks` model: vars / agent-obs / axiom lines.

    Validates that axioms are propositional over declared variables, that
    observable sets are declared, and that the conjoined theory is
    satisfiable.  Returns a KnowledgeStructure.
    """
    from .kstruct import KnowledgeStructure

    var_names: list[str] = []
    agents: list[str] = []
    obs: dict[str, tuple[str, ...]] = {}
    axiom_srcs: list[tuple[Formula, int]] = []

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "vars":
            names = [n.strip() for n in re.split(r"[,\s]+", rest.strip()) if n.strip()]
            if not names:
                raise LangError("empty vars declaration", lineno, 1)
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n) or n in _KEYWORDS:
                    raise LangError(f"bad variable name {n!r}", lineno, 1)
                if n in var_names:
                    raise LangError(f"variable {n!r} declared twice", lineno, 1)
                var_names.append(n)
        elif head == "agent":
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*|[0-9]+)\s+obs\b(.*)", rest.strip())
            if not m:
                raise LangError("expected: agent <name> obs <vars?>", lineno, 1)
            name, olist = m.group(1), m.group(2)
            if name in agents:
                raise LangError(f"agent {name!r} declared twice", lineno, 1)
            names = [n.strip() for n in re.split(r"[,\s]+", olist.strip()) if n.strip()]
            for n in names:
                if n not in var_names:
                    raise LangError(f"observable {n!r} is not a declared variable", lineno, 1)
            agents.append(name)
            obs[name] = tuple(names)
        elif head == "axiom":
            try:
                f = parse_formula(rest)
            except LangError as e:
                raise LangError(f"in axiom: {e}", lineno, 1) from None
            if not is_propositional(f):
                raise LangError("non-propositional axiom", lineno, 1)
            for a in atoms_of(f):
                if a not in var_names:
                    raise LangError(f"undeclared variable {a!r} in axiom", lineno, 1)
            axiom_srcs.append((f, lineno))
        else:
            raise LangError(f"unknown directive {head!r}", lineno, 1)

    if var_order is not None:
        if sorted(var_order) != sorted(var_names):
            raise LangError("variable order file must be a permutation of the declared variables")
        var_names = list(var_order)

    return KnowledgeStructure.build(
        var_names,
        [(a, obs[a]) for a in agents],
        [f for f, _ in axiom_srcs],
        engine=engine,
    )
