"""Many-sorted signatures, terms over a finite variable context, substitutions.

Terms are interned: structurally equal trees are the same object, so equality
is identity and hashing is precomputed. The intern tables are process-global;
terms are signature-agnostic trees and well-sortedness is a separate check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional


@dataclass(frozen=True)
class Op:
    name: str
    args: tuple[int, ...]  # argument sorts, as indices
    result: int  # result sort index

    @property
    def arity(self) -> int:
        return len(self.args)


class Signature:
    """Operation alphabet. Sorts live at integer indices in declaration order."""

    __slots__ = ("sorts", "ops", "_by_name")

    def __init__(self, sorts: Iterable[str], ops: Iterable[tuple]):
        self.sorts: tuple[str, ...] = tuple(sorts)
        if len(set(self.sorts)) != len(self.sorts):
            raise ValueError("duplicate sort names")
        if not self.sorts:
            raise ValueError("at least one sort required")
        index = {s: i for i, s in enumerate(self.sorts)}
        decls = []
        for name, arg_sorts, result_sort in ops:
            for s in (*arg_sorts, result_sort):
                if s not in index:
                    raise ValueError(f"op {name}: undeclared sort {s!r}")
            decls.append(Op(name, tuple(index[s] for s in arg_sorts), index[result_sort]))
        self.ops: tuple[Op, ...] = tuple(decls)
        self._by_name = {op.name: op for op in self.ops}
        if len(self._by_name) != len(self.ops):
            raise ValueError("duplicate op names")

    def op(self, name: str) -> Op:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"unknown op {name!r}") from None

    def has_op(self, name: str) -> bool:
        return name in self._by_name

    def sort_index(self, name: str) -> int:
        try:
            return self.sorts.index(name)
        except ValueError:
            raise ValueError(f"unknown sort {name!r}") from None

    def __repr__(self) -> str:
        return f"Signature(sorts={self.sorts!r}, ops={[op.name for op in self.ops]!r})"


class VarContext:
    """Declared finite working variable set: ordered (name, sort index) pairs."""

    __slots__ = ("vars", "_pos")

    def __init__(self, sig: Signature, vars: Iterable[tuple[str, str]]):
        self.vars: tuple[tuple[str, int], ...] = tuple(
            (name, sig.sort_index(sort)) for name, sort in vars
        )
        if not self.vars:
            raise ValueError("empty variable context")
        self._pos = {name: i for i, (name, _) in enumerate(self.vars)}
        if len(self._pos) != len(self.vars):
            raise ValueError("duplicate variable names")

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def sort_of(self, name: str) -> int:
        return self.vars[self.position(name)][1]

    def has(self, name: str) -> bool:
        return name in self._pos

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.vars)

    def __len__(self) -> int:
        return len(self.vars)

    def __repr__(self) -> str:
        return f"VarContext({list(self.names)!r})"


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("v", name))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return render(self)


class App(Term):
    __slots__ = ("op", "args", "_hash")

    def __init__(self, op: str, args: tuple[Term, ...]):
        self.op = op
        self.args = args
        self._hash = hash(("a", op, tuple(id(a) for a in args)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return render(self)


_VARS: dict[str, Var] = {}
_APPS: dict[tuple, App] = {}


def var(name: str) -> Var:
    t = _VARS.get(name)
    if t is None:
        t = _VARS[name] = Var(name)
    return t


def app(op: str, *args: Term) -> App:
    key = (op, tuple(id(a) for a in args))
    t = _APPS.get(key)
    if t is None:
        t = _APPS[key] = App(op, tuple(args))
    return t


def render(t: Term) -> str:
    """Fully parenthesized prefix form; bare symbols for variables and nullary ops."""
    if isinstance(t, Var):
        return t.name
    assert isinstance(t, App)
    if not t.args:
        return t.op
    return "(" + " ".join([t.op] + [render(a) for a in t.args]) + ")"


def term_key(t: Term) -> tuple[int, str]:
    """Canonical sortable key: (node count, rendered form)."""
    return (term_size(t), render(t))


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)  # type: ignore[union-attr]


def term_depth(t: Term) -> int:
    """Depth 0 for variables; an application is one deeper than its deepest child."""
    if isinstance(t, Var):
        return 0
    assert isinstance(t, App)
    if not t.args:
        return 1
    return 1 + max(term_depth(a) for a in t.args)


def term_vars(t: Term, acc: Optional[list[str]] = None) -> list[str]:
    """Variable names in first-occurrence order."""
    out: list[str] = [] if acc is None else acc
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    else:
        assert isinstance(t, App)
        for a in t.args:
            term_vars(a, out)
    return out


def sort_of(t: Term, sig: Signature, ctx: VarContext) -> int:
    """Sort index of a well-sorted term; raises ValueError with a diagnostic."""
    if isinstance(t, Var):
        if not ctx.has(t.name):
            raise ValueError(f"unknown variable {t.name!r}")
        return ctx.sort_of(t.name)
    assert isinstance(t, App)
    if not sig.has_op(t.op):
        raise ValueError(f"unknown op {t.op!r}")
    op = sig.op(t.op)
    if len(t.args) != op.arity:
        raise ValueError(f"op {t.op!r}: expected {op.arity} arguments, got {len(t.args)}")
    for child, want in zip(t.args, op.args):
        got = sort_of(child, sig, ctx)
        if got != want:
            raise ValueError(
                f"op {t.op!r}: argument {render(child)} has sort "
                f"{sig.sorts[got]!r}, expected {sig.sorts[want]!r}"
            )
    return op.result


def well_sorted(t: Term, sig: Signature, ctx: VarContext) -> bool:
    try:
        sort_of(t, sig, ctx)
        return True
    except ValueError:
        return False


class Substitution:
    """Sort-preserving map from variable names to terms; identity where unbound."""

    __slots__ = ("bindings",)

    def __init__(self, bindings: Mapping[str, Term]):
        self.bindings: dict[str, Term] = dict(bindings)

    def __call__(self, name: str) -> Term:
        return self.bindings.get(name) or var(name)

    def is_identity_on(self, names: Iterable[str]) -> bool:
        return all(self(n) is var(n) for n in names)

    def validate(self, sig: Signature, ctx: VarContext) -> None:
        for name, t in self.bindings.items():
            if not ctx.has(name):
                raise ValueError(f"substitution binds unknown variable {name!r}")
            if sort_of(t, sig, ctx) != ctx.sort_of(name):
                raise ValueError(f"substitution changes sort of {name!r}")

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}->{render(t)}" for n, t in sorted(self.bindings.items()))
        return f"Substitution({inner})"


IDENTITY = Substitution({})


def apply_subst(s: Substitution, t: Term, _memo: Optional[dict] = None) -> Term:
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(t))
    if hit is not None:
        return hit
    if isinstance(t, Var):
        out = s(t.name)
    else:
        assert isinstance(t, App)
        out = app(t.op, *(apply_subst(s, a, _memo) for a in t.args))
    _memo[id(t)] = out
    return out


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """compose(s1,s2) applied to t equals s1 applied to (s2 applied to t)."""
    out = {name: apply_subst(s1, t) for name, t in s2.bindings.items()}
    for name, t in s1.bindings.items():
        if name not in out:
            out[name] = t
    return Substitution(out)


def subterm_universe(terms: Iterable[Term]) -> list[Term]:
    """All subterms, deduplicated, in first-encounter preorder."""
    out: list[Term] = []
    seen: set[int] = set()

    def walk(t: Term) -> None:
        if id(t) in seen:
            return
        seen.add(id(t))
        out.append(t)
        if isinstance(t, App):
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return out


def iter_pairs_terms(pairs: Iterable[tuple[Term, Term]]) -> Iterator[Term]:
    for w, w2 in pairs:
        yield w
        yield w2


def constant_name(sig: Signature, sort: int, element: int) -> str:
    if len(sig.sorts) == 1:
        return f"c{element}"
    return f"c_{sig.sorts[sort]}_{element}"


def adjoin_constants(sig: Signature, g) -> tuple[Signature, list[tuple[Term, Term]]]:
    """Extend sig with one nullary op per element of g; return the extended
    signature and the ground pairs reading off g's operation tables.

    The pair count is sum over ops of |G|^arity, one pair per table entry.
    """
    decls = [(op.name, tuple(sig.sorts[a] for a in op.args), sig.sorts[op.result]) for op in sig.ops]
    const_term: dict[tuple[int, int], Term] = {}
    for sort in range(len(sig.sorts)):
        for element in range(g.sizes[sort]):
            name = constant_name(sig, sort, element)
            if sig.has_op(name):
                raise ValueError(f"constant name {name!r} collides with an existing op")
            decls.append((name, (), sig.sorts[sort]))
            const_term[(sort, element)] = app(name)
    sig_c = Signature(sig.sorts, decls)
    pairs: list[tuple[Term, Term]] = []
    for op in sig.ops:
        table = g.tables[op.name]
        for args in sorted(table):
            result = table[args]
            lhs = app(op.name, *(const_term[(s, a)] for s, a in zip(op.args, args)))
            pairs.append((lhs, const_term[(op.result, result)]))
    return sig_c, pairs
