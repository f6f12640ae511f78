"""Canonical Boolean-function stores.

Two interchangeable backends live here: a hash-consed reduced ordered BDD
with a memoized ternary-apply core (the production engine), and a dense
truth-table store kept for oracle duty on small variable counts.  Both
guarantee canonicity: within one store, two handles are equal exactly when
the functions are logically equivalent, so equivalence checks are plain
handle comparisons.

A store owns one VarTable and is single-owner: callers serialize operations
per store.  Distinct stores are fully independent and handles never cross
stores.
"""

from __future__ import annotations

from typing import Iterable, Iterator


FRESH_PREFIX = "@"
DEFAULT_ENUM_CAP = 24
TT_MAX_VARS = 20

OPS = ("and", "or", "xor", "implies", "iff")


class BoolFnError(Exception):
    """Base class for engine errors."""


class UnknownVariableError(BoolFnError):
    pass


class DuplicateVariableError(BoolFnError):
    pass


class FrozenTableError(BoolFnError):
    pass


class StoreMismatchError(BoolFnError):
    pass


class RenameError(BoolFnError):
    pass


class EnumerationCapError(BoolFnError):
    pass


class VarTable:
    """Registry mapping variable names to dense indices.

    The index order is the global quantification/enumeration order.  It is
    append-only; after freeze() only reserved fresh names (prefix '@') may
    still be added, so user vocabularies stay fixed while scratch variables
    can be allocated later.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._frozen = False
        for n in names:
            self.add(n)

    def add(self, name: str) -> int:
        if not name:
            raise BoolFnError("empty variable name")
        if name in self._index:
            raise DuplicateVariableError(f"variable {name!r} already declared")
        if self._frozen and not name.startswith(FRESH_PREFIX):
            raise FrozenTableError(
                f"table is frozen; only {FRESH_PREFIX!r}-prefixed fresh variables may be added"
            )
        idx = len(self._names)
        self._names.append(name)
        self._index[name] = idx
        return idx

    def ensure(self, name: str) -> int:
        """Index of name, adding it if absent."""
        got = self._index.get(name)
        return got if got is not None else self.add(name)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def name(self, idx: int) -> str:
        return self._names[idx]

    def fresh_name(self, base: str) -> str:
        cand = FRESH_PREFIX + base
        k = 1
        while cand in self._index:
            k += 1
            cand = f"{FRESH_PREFIX}{base}_{k}"
        return cand

    def freeze(self) -> None:
        self._frozen = True

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)


class BoolFn:
    """Opaque handle to a canonical function in one store."""

    __slots__ = ("store", "ref")

    def __init__(self, store, ref: int):
        self.store = store
        self.ref = ref

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BoolFn)
            and other.store is self.store
            and other.ref == self.ref
        )

    def __hash__(self) -> int:
        return hash((id(self.store), self.ref))

    def __repr__(self) -> str:
        return f"<BoolFn {self.ref} in {type(self.store).__name__}>"

    # operator sugar; all delegate to the owning store
    def __and__(self, other: "BoolFn") -> "BoolFn":
        return self.store.apply("and", self, other)

    def __or__(self, other: "BoolFn") -> "BoolFn":
        return self.store.apply("or", self, other)

    def __xor__(self, other: "BoolFn") -> "BoolFn":
        return self.store.apply("xor", self, other)

    def __invert__(self) -> "BoolFn":
        return self.store.neg(self)

    def implies(self, other: "BoolFn") -> "BoolFn":
        return self.store.apply("implies", self, other)

    def iff(self, other: "BoolFn") -> "BoolFn":
        return self.store.apply("iff", self, other)

    @property
    def support(self) -> tuple[str, ...]:
        return self.store.support(self)


class _StoreBase:
    """Interface shared by both backends; subclasses fill the kernels."""

    def __init__(self, table: VarTable | None = None):
        self.table = table if table is not None else VarTable()

    # -- helpers -------------------------------------------------------

    def _wrap(self, ref: int) -> BoolFn:
        return BoolFn(self, ref)

    def _unwrap(self, f: BoolFn) -> int:
        if not isinstance(f, BoolFn) or f.store is not self:
            raise StoreMismatchError("operand belongs to a different store")
        return f.ref

    def _levels(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.table.index(n) for n in names))

    # -- constructors ----------------------------------------------------

    def mk(self, atom_or_const) -> BoolFn:
        """Variable by name, or a constant from a bool."""
        if isinstance(atom_or_const, bool):
            return self.const(atom_or_const)
        return self.var(atom_or_const)

    def const(self, value: bool) -> BoolFn:
        return self.true if value else self.false

    # -- derived operations (backend-independent) -----------------------

    def neg(self, f: BoolFn) -> BoolFn:
        return self.apply("xor", f, self.true)

    def is_valid(self, f: BoolFn) -> bool:
        return self._unwrap(f) == self.true.ref

    def is_sat(self, f: BoolFn) -> bool:
        return self._unwrap(f) != self.false.ref

    def entails(self, f: BoolFn, g: BoolFn) -> bool:
        return self.is_valid(self.apply("implies", f, g))

    def equiv_under(self, theta: BoolFn, f: BoolFn, g: BoolFn) -> bool:
        """theta => (f <=> g) is valid."""
        return self.is_valid(self.apply("implies", theta, self.apply("iff", f, g)))

    def conj(self, fns: Iterable[BoolFn]) -> BoolFn:
        acc = self.true
        for f in fns:
            acc = self.apply("and", acc, f)
        return acc

    def disj(self, fns: Iterable[BoolFn]) -> BoolFn:
        acc = self.false
        for f in fns:
            acc = self.apply("or", acc, f)
        return acc

    def minterm(self, true_vars: Iterable[str], over: Iterable[str]) -> BoolFn:
        """Conjunction fixing every variable in `over`: those listed true, rest false."""
        tv = set(true_vars)
        acc = self.true
        for n in over:
            v = self.var(n)
            acc = self.apply("and", acc, v if n in tv else self.neg(v))
        return acc

    def model_count(self, f: BoolFn, over: Iterable[str]) -> int:
        over = tuple(over)
        self._require_cover(f, over)
        total = self._count_all(self._unwrap(f))
        return total >> (len(self.table) - len(over))

    def _require_cover(self, f: BoolFn, over: tuple[str, ...]) -> None:
        over_idx = {self.table.index(n) for n in over}
        missing = [
            self.table.name(i) for i in self._support_levels(self._unwrap(f)) if i not in over_idx
        ]
        if missing:
            raise BoolFnError(f"function depends on variables outside 'over': {missing}")

    def enumerate_models(
        self, f: BoolFn, over: Iterable[str], cap: int = DEFAULT_ENUM_CAP
    ) -> Iterator[frozenset[str]]:
        """Satisfying assignments restricted to `over`, lexicographic in table order.

        The first variable of the order is the most significant bit, with
        false < true.  Requires support(f) within `over`.
        """
        over = tuple(over)
        if len(over) > cap:
            raise EnumerationCapError(f"{len(over)} variables exceed enumeration cap {cap}")
        self._require_cover(f, over)
        levels = self._levels(over)
        return self._enumerate(self._unwrap(f), levels)

    def support(self, f: BoolFn) -> tuple[str, ...]:
        return tuple(self.table.name(i) for i in self._support_levels(self._unwrap(f)))


# ---------------------------------------------------------------------------
# BDD backend
# ---------------------------------------------------------------------------

_TERMINAL_LEVEL = 1 << 30


class BddStore(_StoreBase):
    """Reduced ordered BDD store with hash-consing and an ite memo-cache.

    Node 0 is the false terminal, node 1 the true terminal.  Node levels are
    VarTable indices; levels strictly increase along every path, so a
    variable with level below a node's level cannot occur in that node's
    function.
    """

    def __init__(self, table: VarTable | None = None):
        super().__init__(table)
        self._level = [_TERMINAL_LEVEL, _TERMINAL_LEVEL]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._ite_cache: dict[tuple[int, int, int], int] = {}
        self._quant_cache: dict[tuple[int, tuple[int, ...], bool], int] = {}
        self._restrict_cache: dict[tuple[int, int, bool], int] = {}
        self._count_cache: dict[tuple[int, int], int] = {}
        self.false = self._wrap(0)
        self.true = self._wrap(1)

    # -- kernel ----------------------------------------------------------

    def _node(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        ref = self._unique.get(key)
        if ref is None:
            ref = len(self._level)
            self._level.append(level)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = ref
        return ref

    def _cof(self, f: int, level: int) -> tuple[int, int]:
        if self._level[f] == level:
            return self._lo[f], self._hi[f]
        return f, f

    def _ite(self, f: int, g: int, h: int) -> int:
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        key = (f, g, h)
        cached = self._ite_cache.get(key)
        if cached is not None:
            return cached
        level = min(self._level[f], self._level[g], self._level[h])
        f0, f1 = self._cof(f, level)
        g0, g1 = self._cof(g, level)
        h0, h1 = self._cof(h, level)
        res = self._node(level, self._ite(f0, g0, h0), self._ite(f1, g1, h1))
        self._ite_cache[key] = res
        return res

    # -- public ops ------------------------------------------------------

    def var(self, name: str) -> BoolFn:
        return self._wrap(self._node(self.table.index(name), 0, 1))

    def from_truth_table(self, names: Iterable[str], tt: int) -> BoolFn:
        """Function over `names` (first name = most significant bit of the row index)."""
        names = tuple(names)
        if not names:
            return self.const(bool(tt & 1))
        k = len(names)
        idxs = [self.table.index(n) for n in names]
        order = sorted(range(k), key=idxs.__getitem__)
        # re-key rows to table order so node levels ascend along every path
        perm = 0
        for row in range(1 << k):
            if (tt >> row) & 1:
                out = 0
                for d, j in enumerate(order):
                    if (row >> (k - 1 - j)) & 1:
                        out |= 1 << (k - 1 - d)
                perm |= 1 << out
        levels = [idxs[j] for j in order]

        def build(pos: int, lo_row: int, width: int) -> int:
            if width == 1:
                return 1 if (perm >> lo_row) & 1 else 0
            half = width // 2
            lo = build(pos + 1, lo_row, half)
            hi = build(pos + 1, lo_row + half, half)
            return self._node(levels[pos], lo, hi)

        return self._wrap(build(0, 0, 1 << k))

    def apply(self, op: str, f: BoolFn, g: BoolFn) -> BoolFn:
        a, b = self._unwrap(f), self._unwrap(g)
        if op == "and":
            return self._wrap(self._ite(a, b, 0))
        if op == "or":
            return self._wrap(self._ite(a, 1, b))
        if op == "implies":
            return self._wrap(self._ite(a, b, 1))
        if op == "xor":
            return self._wrap(self._ite(a, self._ite(b, 0, 1), b))
        if op == "iff":
            return self._wrap(self._ite(a, b, self._ite(b, 0, 1)))
        raise BoolFnError(f"unknown connective {op!r}")

    def neg(self, f: BoolFn) -> BoolFn:
        return self._wrap(self._ite(self._unwrap(f), 0, 1))

    def cofactor(self, f: BoolFn, name: str, value: bool) -> BoolFn:
        return self._wrap(self._restrict(self._unwrap(f), self.table.index(name), value))

    def _restrict(self, f: int, level: int, value: bool) -> int:
        if self._level[f] > level:
            return f
        key = (f, level, value)
        cached = self._restrict_cache.get(key)
        if cached is not None:
            return cached
        if self._level[f] == level:
            res = self._hi[f] if value else self._lo[f]
        else:
            res = self._node(
                self._level[f],
                self._restrict(self._lo[f], level, value),
                self._restrict(self._hi[f], level, value),
            )
        self._restrict_cache[key] = res
        return res

    def forget_exists(self, names: Iterable[str], f: BoolFn) -> BoolFn:
        return self._wrap(self._quant(self._unwrap(f), self._levels(names), True))

    def forget_forall(self, names: Iterable[str], f: BoolFn) -> BoolFn:
        return self._wrap(self._quant(self._unwrap(f), self._levels(names), False))

    def _quant(self, f: int, levels: tuple[int, ...], exist: bool) -> int:
        # levels sorted ascending; anything above the node's level is absent
        while levels and levels[0] < self._level[f]:
            levels = levels[1:]
        if f <= 1 or not levels:
            return f
        key = (f, levels, exist)
        cached = self._quant_cache.get(key)
        if cached is not None:
            return cached
        lv = self._level[f]
        lo, hi = self._lo[f], self._hi[f]
        if lv == levels[0]:
            rest = levels[1:]
            r0 = self._quant(lo, rest, exist)
            r1 = self._quant(hi, rest, exist)
            res = self._ite(r0, 1, r1) if exist else self._ite(r0, r1, 0)
        else:
            res = self._node(lv, self._quant(lo, levels, exist), self._quant(hi, levels, exist))
        self._quant_cache[key] = res
        return res

    def rename(self, f: BoolFn, mapping: dict[str, str]) -> BoolFn:
        ref = self._unwrap(f)
        support = set(self._support_levels(ref))
        live = {}
        for src, dst in mapping.items():
            s = self.table.index(src)
            d = self.table.index(dst)
            if s in support:
                live[s] = d
        targets = list(live.values())
        if len(set(targets)) != len(targets):
            raise RenameError("rename mapping is not injective on the function's support")
        for d in targets:
            if d in support:
                raise RenameError(
                    f"rename target {self.table.name(d)!r} already occurs in the function"
                )
        res = ref
        for s, d in live.items():
            res = self._compose(res, s, self._node(d, 0, 1))
        return self._wrap(res)

    def _compose(self, f: int, level: int, g: int) -> int:
        return self._ite(g, self._restrict(f, level, True), self._restrict(f, level, False))

    def eval_at(self, f: BoolFn, true_vars: Iterable[str]) -> bool:
        tv = {self.table.index(n) for n in true_vars}
        ref = self._unwrap(f)
        while ref > 1:
            ref = self._hi[ref] if self._level[ref] in tv else self._lo[ref]
        return ref == 1

    def _support_levels(self, ref: int) -> tuple[int, ...]:
        seen: set[int] = set()
        levels: set[int] = set()
        stack = [ref]
        while stack:
            n = stack.pop()
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            levels.add(self._level[n])
            stack.append(self._lo[n])
            stack.append(self._hi[n])
        return tuple(sorted(levels))

    def _count_all(self, ref: int) -> int:
        n = len(self.table)
        memo = self._count_cache

        def rec(f: int) -> int:
            # models over the levels strictly below level(f)
            if f == 0:
                return 0
            if f == 1:
                return 1
            key = (f, n)
            got = memo.get(key)
            if got is not None:
                return got
            lo, hi = self._lo[f], self._hi[f]
            lo_l = min(self._level[lo], n)
            hi_l = min(self._level[hi], n)
            here = self._level[f]
            val = rec(lo) * (1 << (lo_l - here - 1)) + rec(hi) * (1 << (hi_l - here - 1))
            memo[key] = val
            return val

        top = min(self._level[ref], n)
        return rec(ref) * (1 << top)

    def _enumerate(self, ref: int, levels: tuple[int, ...]) -> Iterator[frozenset[str]]:
        name = self.table.name

        def walk(f: int, pos: int, acc: list[str]) -> Iterator[frozenset[str]]:
            if pos == len(levels):
                if f == 1:
                    yield frozenset(acc)
                return
            if f == 0:
                return
            lv = levels[pos]
            if self._level[f] == lv:
                lo, hi = self._lo[f], self._hi[f]
                yield from walk(lo, pos + 1, acc)
                acc.append(name(lv))
                yield from walk(hi, pos + 1, acc)
                acc.pop()
            else:
                yield from walk(f, pos + 1, acc)
                acc.append(name(lv))
                yield from walk(f, pos + 1, acc)
                acc.pop()

        return walk(ref, 0, [])

    def node(self, f: BoolFn):
        """Structural view: True/False for terminals, else (name, lo, hi)."""
        ref = self._unwrap(f)
        if ref <= 1:
            return ref == 1
        return (
            self.table.name(self._level[ref]),
            self._wrap(self._lo[ref]),
            self._wrap(self._hi[ref]),
        )

    def __len__(self) -> int:
        return len(self._level)


# ---------------------------------------------------------------------------
# Truth-table backend
# ---------------------------------------------------------------------------


def tt_select(tt: int, k: int, j: int, value: bool) -> int:
    """Cofactor kernel: fix position j (LSB order) of a k-variable table.

    Returns a table over k-1 variables with position j deleted.
    """
    block = 1 << j
    mask = (1 << block) - 1
    out = 0
    nblocks = 1 << (k - j - 1)
    for b in range(nblocks):
        src = (tt >> (b * 2 * block + (block if value else 0))) & mask
        out |= src << (b * block)
    return out


def tt_exists(tt: int, k: int, j: int) -> int:
    return tt_select(tt, k, j, False) | tt_select(tt, k, j, True)


def tt_forall(tt: int, k: int, j: int) -> int:
    return tt_select(tt, k, j, False) & tt_select(tt, k, j, True)


def tt_stretch(tt: int, k: int, j: int) -> int:
    """Insert a don't-care variable at position j of a k-variable table."""
    block = 1 << j
    mask = (1 << block) - 1
    out = 0
    nblocks = 1 << (k - j)
    for b in range(nblocks):
        src = (tt >> (b * block)) & mask
        out |= src << (b * 2 * block)
        out |= src << (b * 2 * block + block)
    return out


class TableStore(_StoreBase):
    """Dense truth-table store; exact twin of the BDD backend for |V| <= 20.

    Canonical form is (semantic support, table over that support); equivalent
    functions intern to the same handle regardless of how the table has grown
    since they were built.  Table bit i encodes the assignment where support
    position j (LSB order) is bit j of i.
    """

    def __init__(self, table: VarTable | None = None):
        super().__init__(table)
        self._interned: dict[tuple[tuple[int, ...], int], int] = {}
        self._funcs: list[tuple[tuple[int, ...], int]] = []
        self.false = self._wrap(self._intern((), 0))
        self.true = self._wrap(self._intern((), 1))

    def _intern(self, sup: tuple[int, ...], tt: int) -> int:
        sup, tt = self._canon(sup, tt)
        key = (sup, tt)
        ref = self._interned.get(key)
        if ref is None:
            ref = len(self._funcs)
            self._funcs.append(key)
            self._interned[key] = ref
        return ref

    @staticmethod
    def _canon(sup: tuple[int, ...], tt: int) -> tuple[tuple[int, ...], int]:
        k = len(sup)
        for j in reversed(range(k)):
            lo = tt_select(tt, k, j, False)
            hi = tt_select(tt, k, j, True)
            if lo == hi:
                tt = lo
                sup = sup[:j] + sup[j + 1 :]
                k -= 1
        return sup, tt

    def _fn(self, f: BoolFn) -> tuple[tuple[int, ...], int]:
        return self._funcs[self._unwrap(f)]

    def var(self, name: str) -> BoolFn:
        idx = self.table.index(name)
        return self._wrap(self._intern((idx,), 0b10))

    def from_truth_table(self, names: Iterable[str], tt: int) -> BoolFn:
        names = tuple(names)
        idxs = [self.table.index(n) for n in names]
        k = len(names)
        # convert from "first name = MSB" rows to LSB-position-by-support order
        order = sorted(range(k), key=lambda j: idxs[j])
        out = 0
        for row in range(1 << k):
            if (tt >> row) & 1:
                pos = 0
                for newpos, j in enumerate(order):
                    if (row >> (k - 1 - j)) & 1:
                        pos |= 1 << newpos
                out |= 1 << pos
        return self._wrap(self._intern(tuple(idxs[j] for j in order), out))

    def _expand(self, sup: tuple[int, ...], tt: int, target: tuple[int, ...]) -> int:
        k = len(sup)
        si = 0
        for pos, idx in enumerate(target):
            if si < len(sup) and sup[si] == idx:
                si += 1
                continue
            tt = tt_stretch(tt, k, pos)
            k += 1
        return tt

    def apply(self, op: str, f: BoolFn, g: BoolFn) -> BoolFn:
        fsup, ftt = self._fn(f)
        gsup, gtt = self._fn(g)
        target = tuple(sorted(set(fsup) | set(gsup)))
        if len(target) > TT_MAX_VARS:
            raise BoolFnError(f"truth-table backend capped at {TT_MAX_VARS} variables")
        a = self._expand(fsup, ftt, target)
        b = self._expand(gsup, gtt, target)
        full = (1 << (1 << len(target))) - 1
        if op == "and":
            tt = a & b
        elif op == "or":
            tt = a | b
        elif op == "xor":
            tt = a ^ b
        elif op == "implies":
            tt = (a ^ full) | b
        elif op == "iff":
            tt = (a ^ b) ^ full
        else:
            raise BoolFnError(f"unknown connective {op!r}")
        return self._wrap(self._intern(target, tt))

    def neg(self, f: BoolFn) -> BoolFn:
        sup, tt = self._fn(f)
        full = (1 << (1 << len(sup))) - 1
        return self._wrap(self._intern(sup, tt ^ full))

    def cofactor(self, f: BoolFn, name: str, value: bool) -> BoolFn:
        idx = self.table.index(name)
        sup, tt = self._fn(f)
        if idx not in sup:
            return f
        j = sup.index(idx)
        return self._wrap(self._intern(sup[:j] + sup[j + 1 :], tt_select(tt, len(sup), j, value)))

    def forget_exists(self, names: Iterable[str], f: BoolFn) -> BoolFn:
        return self._quant(names, f, True)

    def forget_forall(self, names: Iterable[str], f: BoolFn) -> BoolFn:
        return self._quant(names, f, False)

    def _quant(self, names: Iterable[str], f: BoolFn, exist: bool) -> BoolFn:
        idxs = {self.table.index(n) for n in names}
        sup, tt = self._fn(f)
        for idx in sorted(idxs, reverse=True):
            if idx not in sup:
                continue
            j = sup.index(idx)
            k = len(sup)
            tt = tt_exists(tt, k, j) if exist else tt_forall(tt, k, j)
            sup = sup[:j] + sup[j + 1 :]
        return self._wrap(self._intern(sup, tt))

    def rename(self, f: BoolFn, mapping: dict[str, str]) -> BoolFn:
        sup, tt = self._fn(f)
        live = {}
        for src, dst in mapping.items():
            s = self.table.index(src)
            d = self.table.index(dst)
            if s in sup:
                live[s] = d
        targets = list(live.values())
        if len(set(targets)) != len(targets):
            raise RenameError("rename mapping is not injective on the function's support")
        for d in targets:
            if d in sup:
                raise RenameError(
                    f"rename target {self.table.name(d)!r} already occurs in the function"
                )
        new_sup_unsorted = [live.get(i, i) for i in sup]
        order = sorted(range(len(sup)), key=lambda j: new_sup_unsorted[j])
        new_sup = tuple(new_sup_unsorted[j] for j in order)
        k = len(sup)
        out = 0
        for row in range(1 << k):
            if (tt >> row) & 1:
                pos = 0
                for newpos, j in enumerate(order):
                    if (row >> j) & 1:
                        pos |= 1 << newpos
                out |= 1 << pos
        return self._wrap(self._intern(new_sup, out))

    def eval_at(self, f: BoolFn, true_vars: Iterable[str]) -> bool:
        tv = {self.table.index(n) for n in true_vars}
        sup, tt = self._fn(f)
        pos = 0
        for j, idx in enumerate(sup):
            if idx in tv:
                pos |= 1 << j
        return bool((tt >> pos) & 1)

    def _support_levels(self, ref: int) -> tuple[int, ...]:
        return self._funcs[ref][0]

    def _count_all(self, ref: int) -> int:
        sup, tt = self._funcs[ref]
        return tt.bit_count() << (len(self.table) - len(sup))

    def _enumerate(self, ref: int, levels: tuple[int, ...]) -> Iterator[frozenset[str]]:
        sup, tt = self._funcs[ref]
        pos_of = {idx: j for j, idx in enumerate(sup)}
        name = self.table.name

        def walk(pos_bits: int, i: int, acc: list[str]) -> Iterator[frozenset[str]]:
            if i == len(levels):
                if (tt >> pos_bits) & 1:
                    yield frozenset(acc)
                return
            lv = levels[i]
            j = pos_of.get(lv)
            yield from walk(pos_bits, i + 1, acc)
            acc.append(name(lv))
            yield from walk(pos_bits | (1 << j) if j is not None else pos_bits, i + 1, acc)
            acc.pop()

        return walk(0, 0, [])


def mk_store(engine: str = "bdd", table: VarTable | None = None) -> _StoreBase:
    """Factory for the two backends ('bdd' or 'enum')."""
    if engine == "bdd":
        return BddStore(table)
    if engine == "enum":
        return TableStore(table)
    raise BoolFnError(f"unknown engine {engine!r}")
