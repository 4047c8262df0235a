"""Finite algebras with total operation tables, points, homomorphism search.

Elements are dense integers 0..n-1 per sort. Algebras are immutable after
validation. A Point is a tuple aligned with a VarContext's variable order;
evaluating a term at a point is the homomorphic extension W(X) -> G.
"""

from __future__ import annotations

import hashlib
import itertools
from typing import Iterable, Mapping, Optional, Sequence

from .config import check_cap
from .terms import (
    App,
    Signature,
    Term,
    Var,
    VarContext,
    app,
    sort_of,
    term_vars,
    var,
)

Point = tuple[int, ...]


class FiniteAlgebra:
    __slots__ = ("sig", "sizes", "tables", "name", "_digest")

    def __init__(
        self,
        sig: Signature,
        sizes: Sequence[int],
        tables: Mapping[str, Mapping[tuple[int, ...], int]],
        name: str = "G",
    ):
        self.sig = sig
        self.sizes = tuple(sizes)
        self.name = name
        self._digest: Optional[str] = None
        if len(self.sizes) != len(sig.sorts):
            raise ValueError("one carrier size per sort required")
        if any(n < 1 for n in self.sizes):
            raise ValueError("carriers must be nonempty")
        checked: dict[str, dict[tuple[int, ...], int]] = {}
        for op in sig.ops:
            try:
                table = dict(tables[op.name])
            except KeyError:
                raise ValueError(f"missing table for op {op.name!r}") from None
            domain = list(itertools.product(*[range(self.sizes[s]) for s in op.args]))
            if len(table) != len(domain):
                raise ValueError(f"table for {op.name!r} has {len(table)} rows, expected {len(domain)}")
            for args in domain:
                if args not in table:
                    raise ValueError(f"table for {op.name!r} missing entry {args}")
                if not 0 <= table[args] < self.sizes[op.result]:
                    raise ValueError(f"table for {op.name!r} at {args}: result out of range")
            checked[op.name] = table
        self.tables = checked

    def digest(self) -> str:
        if self._digest is None:
            h = hashlib.sha256()
            h.update(repr(self.sig.sorts).encode())
            h.update(repr(self.sizes).encode())
            for op in self.sig.ops:
                h.update(repr((op.name, op.args, op.result)).encode())
                h.update(repr(sorted(self.tables[op.name].items())).encode())
            self._digest = h.hexdigest()[:12]
        return self._digest

    def apply(self, op_name: str, args: tuple[int, ...]) -> int:
        return self.tables[op_name][args]

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name}, sizes={self.sizes})"


def unit_algebra(sig: Signature, name: str = "unit") -> FiniteAlgebra:
    sizes = (1,) * len(sig.sorts)
    tables = {op.name: {tuple([0] * op.arity): 0} for op in sig.ops}
    return FiniteAlgebra(sig, sizes, tables, name=name)


def eval_term(t: Term, point: Point, g: FiniteAlgebra, ctx: VarContext, _memo: Optional[dict] = None) -> int:
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(t))
    if hit is not None:
        return hit
    if isinstance(t, Var):
        out = point[ctx.position(t.name)]
    else:
        assert isinstance(t, App)
        out = g.tables[t.op][tuple(eval_term(a, point, g, ctx, _memo) for a in t.args)]
    _memo[id(t)] = out
    return out


def point_count(ctx: VarContext, g: FiniteAlgebra) -> int:
    n = 1
    for _, s in ctx.vars:
        n *= g.sizes[s]
    return n


def enumerate_points(ctx: VarContext, g: FiniteAlgebra, cap: Optional[int] = None) -> list[Point]:
    """All points in lexicographic order of the declared variable order."""
    check_cap("point enumeration", point_count(ctx, g), cap)
    return list(itertools.product(*[range(g.sizes[s]) for _, s in ctx.vars]))


def point_from_names(ctx: VarContext, assignment: Mapping[str, int]) -> Point:
    missing = [n for n in ctx.names if n not in assignment]
    if missing:
        raise ValueError(f"point missing variables {missing}")
    extra = [n for n in assignment if not ctx.has(n)]
    if extra:
        raise ValueError(f"point binds unknown variables {extra}")
    return tuple(assignment[n] for n in ctx.names)


class GeneratedSubalgebra:
    """Closure of a seed under all operations, with a witness term per member.

    Witnesses are over the generator variables, breadth-first shortest, ties
    broken by op declaration order then argument order.
    """

    __slots__ = ("parent", "members", "index", "witness", "gen_vars", "_alg")

    def __init__(self, parent: FiniteAlgebra, members, index, witness, gen_vars):
        self.parent = parent
        self.members: tuple[tuple[int, ...], ...] = members
        self.index: dict[tuple[int, int], int] = index
        self.witness: dict[tuple[int, int], Term] = witness
        self.gen_vars: tuple[tuple[str, int, int], ...] = gen_vars
        self._alg: Optional[FiniteAlgebra] = None

    def contains(self, sort: int, element: int) -> bool:
        return (sort, element) in self.index

    def size(self) -> int:
        return sum(len(m) for m in self.members)

    def as_algebra(self) -> FiniteAlgebra:
        if self._alg is None:
            g = self.parent
            sizes = tuple(len(m) for m in self.members)
            tables: dict[str, dict[tuple[int, ...], int]] = {}
            for op in g.sig.ops:
                table: dict[tuple[int, ...], int] = {}
                for args in itertools.product(*[self.members[s] for s in op.args]):
                    val = g.tables[op.name][args]
                    key = tuple(self.index[(s, a)] for s, a in zip(op.args, args))
                    table[key] = self.index[(op.result, val)]
                tables[op.name] = table
            self._alg = FiniteAlgebra(g.sig, sizes, tables, name=f"sub({g.name})")
        return self._alg

    def generator_context(self) -> VarContext:
        sig = self.parent.sig
        return VarContext(sig, [(name, sig.sorts[s]) for name, s, _ in self.gen_vars])

    def generator_point(self) -> Point:
        """Generator assignment into as_algebra(), aligned with generator_context()."""
        return tuple(self.index[(s, e)] for _, s, e in self.gen_vars)

    def member_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.index)


def _normalize_seed(g: FiniteAlgebra, seed) -> list[tuple[int, int]]:
    out = []
    for item in seed:
        if isinstance(item, int):
            if len(g.sig.sorts) != 1:
                raise ValueError("bare-int seed requires a single-sorted signature")
            out.append((0, item))
        else:
            out.append((int(item[0]), int(item[1])))
    for s, e in out:
        if not 0 <= e < g.sizes[s]:
            raise ValueError(f"seed element {e} out of range for sort {s}")
    return out


def subalgebra_generated(
    g: FiniteAlgebra, seed, gen_names: Optional[Sequence[str]] = None
) -> GeneratedSubalgebra:
    seeds = _normalize_seed(g, seed)
    if gen_names is not None and len(gen_names) != len(seeds):
        raise ValueError("one generator name per seed element required")
    members: list[list[int]] = [[] for _ in g.sig.sorts]
    index: dict[tuple[int, int], int] = {}
    witness: dict[tuple[int, int], Term] = {}
    gen_vars: list[tuple[str, int, int]] = []
    for i, (s, e) in enumerate(seeds):
        name = gen_names[i] if gen_names is not None else f"g{i}"
        gen_vars.append((name, s, e))
        if (s, e) not in index:
            index[(s, e)] = len(members[s])
            members[s].append(e)
            witness[(s, e)] = var(name)
    while True:
        snapshot = [list(m) for m in members]
        added = False
        for op in g.sig.ops:
            table = g.tables[op.name]
            for args in itertools.product(*[snapshot[s] for s in op.args]):
                val = table[args]
                key = (op.result, val)
                if key not in index:
                    index[key] = len(members[op.result])
                    members[op.result].append(val)
                    witness[key] = app(op.name, *(witness[(s, a)] for s, a in zip(op.args, args)))
                    added = True
        if not added:
            break
    return GeneratedSubalgebra(
        g,
        tuple(tuple(m) for m in members),
        index,
        witness,
        tuple(gen_vars),
    )


HomMap = dict[tuple[int, int], int]


def hom_extension(sub: GeneratedSubalgebra, gen_assignment: Mapping[tuple[int, int], int], b: FiniteAlgebra) -> Optional[HomMap]:
    """The unique homomorphic extension of a generator assignment, if any.

    Candidate images come from evaluating witness terms in b; the candidate is
    then verified against every operation table entry over the subalgebra.
    Absence (None) means the assignment does not respect a realized relation.
    """
    g = sub.parent
    gctx = sub.generator_context() if sub.gen_vars else _EMPTY_CTX_SENTINEL
    point = tuple(gen_assignment[(s, e)] for _, s, e in sub.gen_vars)
    mapping: HomMap = {}
    memo: dict = {}
    for s in range(len(g.sig.sorts)):
        for e in sub.members[s]:
            t = sub.witness[(s, e)]
            mapping[(s, e)] = eval_term(t, point, b, gctx, memo)
    for op in g.sig.ops:
        table_a = g.tables[op.name]
        table_b = b.tables[op.name]
        for args in itertools.product(*[sub.members[s] for s in op.args]):
            val = table_a[args]
            image_args = tuple(mapping[(s, a)] for s, a in zip(op.args, args))
            if table_b[image_args] != mapping[(op.result, val)]:
                return None
    return mapping


class _EmptyCtx:
    """Stand-in context for evaluating ground terms (no variables to resolve)."""

    def position(self, name):
        raise ValueError("no variables in an empty generator context")


_EMPTY_CTX_SENTINEL = _EmptyCtx()


def _greedy_generators(g: FiniteAlgebra) -> tuple[list[tuple[int, int]], GeneratedSubalgebra]:
    gens: list[tuple[int, int]] = []
    sub = subalgebra_generated(g, gens)
    total = sum(g.sizes)
    while sub.size() < total:
        found = None
        for s in range(len(g.sig.sorts)):
            for e in range(g.sizes[s]):
                if not sub.contains(s, e):
                    found = (s, e)
                    break
            if found:
                break
        assert found is not None
        gens.append(found)
        sub = subalgebra_generated(g, gens)
    return gens, sub


def hom_dense(mapping: HomMap, a: FiniteAlgebra) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(mapping[(s, e)] for e in range(a.sizes[s])) for s in range(len(a.sig.sorts)))


def enumerate_homs(a: FiniteAlgebra, b: FiniteAlgebra, cap: Optional[int] = None) -> list[tuple[tuple[int, ...], ...]]:
    """All homomorphisms a -> b as dense per-sort image tuples, sorted.

    Backtracks over images of a greedily chosen generating family; every
    returned map is verified against all operation tables by hom_extension.
    """
    if a.sig is not b.sig and (a.sig.sorts, a.sig.ops) != (b.sig.sorts, b.sig.ops):
        raise ValueError("homomorphisms require a common signature")
    gens, sub = _greedy_generators(a)
    count = 1
    for s, _ in gens:
        count *= b.sizes[s]
    check_cap("hom search", count, cap)
    out = []
    for images in itertools.product(*[range(b.sizes[s]) for s, _ in gens]):
        assignment = {ge: img for ge, img in zip(gens, images)}
        mapping = hom_extension(sub, assignment, b)
        if mapping is not None:
            out.append(hom_dense(mapping, a))
    out.sort()
    return out


def product(gs: Sequence[FiniteAlgebra], name: Optional[str] = None, cap: Optional[int] = None) -> FiniteAlgebra:
    if not gs:
        raise ValueError("product of an empty family is the unit algebra; build it explicitly")
    sig = gs[0].sig
    for g in gs[1:]:
        if g.sig is not sig and (g.sig.sorts, g.sig.ops) != (sig.sorts, sig.ops):
            raise ValueError("product factors must share a signature")
    sizes = tuple(
        _prod(g.sizes[s] for g in gs) for s in range(len(sig.sorts))
    )
    table_cells = sum(_prod(sizes[s] for s in op.args) for op in sig.ops)
    check_cap("product tables", table_cells, cap)
    factor_sizes = [tuple(g.sizes[s] for g in gs) for s in range(len(sig.sorts))]
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    for op in sig.ops:
        table: dict[tuple[int, ...], int] = {}
        for args in itertools.product(*[range(sizes[s]) for s in op.args]):
            comps = [index_to_tuple(arg, factor_sizes[s]) for arg, s in zip(args, op.args)]
            result = tuple(
                g.tables[op.name][tuple(comp[k] for comp in comps)] for k, g in enumerate(gs)
            )
            table[args] = tuple_to_index(result, factor_sizes[op.result])
        tables[op.name] = table
    return FiniteAlgebra(sig, sizes, tables, name=name or "x".join(g.name for g in gs))


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def tuple_to_index(tup: Sequence[int], sizes: Sequence[int]) -> int:
    i = 0
    for v, n in zip(tup, sizes):
        i = i * n + v
    return i


def index_to_tuple(i: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for n in reversed(sizes):
        out.append(i % n)
        i //= n
    return tuple(reversed(out))


def quotient(g: FiniteAlgebra, partition, name: Optional[str] = None) -> FiniteAlgebra:
    """Quotient by a partition of the carriers; rejects non-congruences.

    The partition is given as one sequence of block labels per sort (or any
    object exposing them as .block_ids). Labels are normalized by first
    occurrence; compatibility is verified while building the class tables.
    """
    raw = getattr(partition, "block_ids", partition)
    block_of: list[list[int]] = []
    counts: list[int] = []
    for s in range(len(g.sig.sorts)):
        labels = list(raw[s])
        if len(labels) != g.sizes[s]:
            raise ValueError(f"partition for sort {s} has wrong length")
        relabel: dict = {}
        dense = []
        for lab in labels:
            if lab not in relabel:
                relabel[lab] = len(relabel)
            dense.append(relabel[lab])
        block_of.append(dense)
        counts.append(len(relabel))
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    for op in g.sig.ops:
        table: dict[tuple[int, ...], int] = {}
        for args, val in g.tables[op.name].items():
            key = tuple(block_of[s][a] for s, a in zip(op.args, args))
            res = block_of[op.result][val]
            if table.setdefault(key, res) != res:
                raise ValueError(f"partition is not a congruence: op {op.name!r} splits class {key}")
        tables[op.name] = table
    return FiniteAlgebra(g.sig, counts, tables, name=name or f"{g.name}/~")


def inferred_context(sig: Signature, terms: Sequence[Term]) -> VarContext:
    """Minimal context of a term family, sorts inferred from op positions.

    A variable never appearing under an op is ambiguous unless the signature
    is single-sorted.
    """
    sorts: dict[str, int] = {}

    def walk(t: Term) -> None:
        if isinstance(t, App):
            op = sig.op(t.op)
            if len(t.args) != op.arity:
                raise ValueError(f"op {t.op!r}: arity mismatch")
            for child, s in zip(t.args, op.args):
                if isinstance(child, Var):
                    prev = sorts.setdefault(child.name, s)
                    if prev != s:
                        raise ValueError(f"variable {child.name!r} used at two sorts")
                else:
                    walk(child)

    for t in terms:
        walk(t)
    order: list[str] = []
    for t in terms:
        term_vars(t, order)
    if not order:
        order = ["x"]
        sorts.setdefault("x", 0)
    pairs = []
    for name in order:
        if name not in sorts:
            if len(sig.sorts) == 1:
                sorts[name] = 0
            else:
                raise ValueError(f"cannot infer sort of bare variable {name!r}; pass a context")
        pairs.append((name, sig.sorts[sorts[name]]))
    return VarContext(sig, pairs)


def satisfies_identity(
    g: FiniteAlgebra,
    pair: tuple[Term, Term],
    ctx: Optional[VarContext] = None,
    cap: Optional[int] = None,
) -> bool:
    """True iff both terms evaluate equal at every point of the pair's context."""
    w, w2 = pair
    if ctx is None:
        ctx = inferred_context(g.sig, [w, w2])
    if sort_of(w, g.sig, ctx) != sort_of(w2, g.sig, ctx):
        raise ValueError("identity sides have different sorts")
    for p in enumerate_points(ctx, g, cap):
        memo: dict = {}
        if eval_term(w, p, g, ctx, memo) != eval_term(w2, p, g, ctx, memo):
            return False
    return True


def ops_commute(g: FiniteAlgebra, name1: str, name2: str) -> bool:
    """The commutation law for an op pair, checked over all value matrices.

    With both ops at least unary, the law equates applying op1 along the rows
    then op2 to the row results with applying op2 down the columns then op1 to
    the column results. A nullary op commutes with an n-ary op when the n-ary
    op is constant on the nullary value; two nullary ops commute when their
    values are equal. Pairs whose law is not well-sorted (cross-sort nullaries,
    inconsistent matrix sorts) commute vacuously.
    """
    op1, op2 = g.sig.op(name1), g.sig.op(name2)
    if op1.arity == 0 and op2.arity == 0:
        if op1.result != op2.result:
            return True
        return g.tables[name1][()] == g.tables[name2][()]
    if op1.arity == 0 or op2.arity == 0:
        const, other = (op1, op2) if op1.arity == 0 else (op2, op1)
        if any(s != const.result for s in other.args) or other.result != const.result:
            return True
        c = g.tables[const.name][()]
        return g.tables[other.name][tuple([c] * other.arity)] == c
    n, m = op1.arity, op2.arity
    # matrix of m rows by n columns; entry (i,j) must inhabit both arg sorts
    if op1.result != op2.result:
        return True
    if any(s != op1.result for s in op2.args) or any(s != op2.result for s in op1.args):
        # op2 must accept op1 results and vice versa for the law to be a term
        return True
    if any(op1.args[j] != op2.args[i] for i in range(m) for j in range(n)):
        return True
    t1, t2 = g.tables[name1], g.tables[name2]
    cell_sorts = [g.sizes[op1.args[j]] for j in range(n)]
    for rows in itertools.product(*(itertools.product(*[range(k) for k in cell_sorts]) for _ in range(m))):
        lhs = t2[tuple(t1[row] for row in rows)]
        cols = tuple(tuple(rows[i][j] for i in range(m)) for j in range(n))
        rhs = t1[tuple(t2[col] for col in cols)]
        if lhs != rhs:
            return False
    return True


def is_commutative(g: FiniteAlgebra) -> bool:
    names = [op.name for op in g.sig.ops]
    for i, a in enumerate(names):
        for b in names[i:]:
            if not ops_commute(g, a, b):
                return False
    return True


def extend_with_constants(g: FiniteAlgebra, sig_c: Signature) -> FiniteAlgebra:
    """Interpret a constant-adjoined signature over g's carriers."""
    from .terms import constant_name

    tables: dict[str, Mapping[tuple[int, ...], int]] = dict(g.tables)
    for s in range(len(sig_c.sorts)):
        for e in range(g.sizes[s]):
            cname = constant_name(sig_c, s, e)
            if sig_c.has_op(cname):
                tables[cname] = {(): e}
    return FiniteAlgebra(sig_c, g.sizes, tables, name=f"{g.name}+c")


# Stock signatures and algebras. Declaration order is part of the contract:
# generated-subalgebra traversal and hom enumeration follow it.

GROUP_SIG = Signature(
    ("g",),
    (("mul", ("g", "g"), "g"), ("inv", ("g",), "g"), ("e", (), "g")),
)

SEMILATTICE_SIG = Signature(("s",), (("meet", ("s", "s"), "s"),))

RING_SIG = Signature(
    ("r",),
    (
        ("add", ("r", "r"), "r"),
        ("mul", ("r", "r"), "r"),
        ("zero", (), "r"),
        ("one", (), "r"),
        ("two", (), "r"),
    ),
)


def cyclic_group(n: int) -> FiniteAlgebra:
    if n < 1:
        raise ValueError("order must be positive")
    tables = {
        "mul": {(i, j): (i + j) % n for i in range(n) for j in range(n)},
        "inv": {(i,): (-i) % n for i in range(n)},
        "e": {(): 0},
    }
    return FiniteAlgebra(GROUP_SIG, (n,), tables, name=f"Z{n}")


def klein_four() -> FiniteAlgebra:
    # xor on two bits
    tables = {
        "mul": {(i, j): i ^ j for i in range(4) for j in range(4)},
        "inv": {(i,): i for i in range(4)},
        "e": {(): 0},
    }
    return FiniteAlgebra(GROUP_SIG, (4,), tables, name="V4")


def symmetric_group_3() -> FiniteAlgebra:
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    # mul(a, b) applies b first: (a*b)(x) = a(b(x))
    mul = {}
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            mul[(i, j)] = index[tuple(a[b[x]] for x in range(3))]
    inv = {}
    for i, a in enumerate(perms):
        back = [0, 0, 0]
        for x in range(3):
            back[a[x]] = x
        inv[(i,)] = index[tuple(back)]
    tables = {"mul": mul, "inv": inv, "e": {(): index[(0, 1, 2)]}}
    return FiniteAlgebra(GROUP_SIG, (6,), tables, name="S3")


def chain_semilattice(n: int) -> FiniteAlgebra:
    tables = {"meet": {(i, j): min(i, j) for i in range(n) for j in range(n)}}
    return FiniteAlgebra(SEMILATTICE_SIG, (n,), tables, name=f"C{n}")


def vee_semilattice() -> FiniteAlgebra:
    """Three elements: 0 below the incomparable 1 and 2."""
    meet = {(i, j): (i if i == j else 0) for i in range(3) for j in range(3)}
    return FiniteAlgebra(SEMILATTICE_SIG, (3,), {"meet": meet}, name="Vee")


def mod_ring(n: int) -> FiniteAlgebra:
    tables = {
        "add": {(i, j): (i + j) % n for i in range(n) for j in range(n)},
        "mul": {(i, j): (i * j) % n for i in range(n) for j in range(n)},
        "zero": {(): 0},
        "one": {(): 1 % n},
        "two": {(): 2 % n},
    }
    return FiniteAlgebra(RING_SIG, (n,), tables, name=f"R{n}")
