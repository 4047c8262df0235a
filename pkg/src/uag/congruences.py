"""Congruences on the term algebra and on finite algebras.

Two term-algebra representations: GroundCongruence (generated, via congruence
closure over a registered subterm-closed universe, variables treated as free
constants) and KernelCongruence (kernel of evaluation into a finite target;
membership is two evaluations). They are never converted implicitly.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .config import check_cap, get_cap
from .algebras import (
    FiniteAlgebra,
    Point,
    enumerate_homs,
    eval_term,
    hom_extension,
    product,
    subalgebra_generated,
    tuple_to_index,
    unit_algebra,
)
from .terms import App, Term, VarContext, subterm_universe, term_key


Pair = tuple[Term, Term]


def normalize_pair(pair: Pair) -> Pair:
    w, w2 = pair
    return (w, w2) if term_key(w) <= term_key(w2) else (w2, w)


class PairSet:
    """Finite symmetric set of term pairs, canonically ordered and deduplicated."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[Pair] = ()):
        seen: dict[tuple[int, int], Pair] = {}
        for p in pairs:
            w, w2 = normalize_pair(p)
            seen.setdefault((id(w), id(w2)), (w, w2))
        self.pairs: tuple[Pair, ...] = tuple(
            sorted(seen.values(), key=lambda p: (term_key(p[0]), term_key(p[1])))
        )

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: Pair) -> bool:
        w, w2 = normalize_pair(pair)
        return any(a is w and b is w2 for a, b in self.pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, PairSet) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(tuple((id(a), id(b)) for a, b in self.pairs))

    def union(self, other: "PairSet") -> "PairSet":
        return PairSet((*self.pairs, *other.pairs))

    def terms(self) -> list[Term]:
        return subterm_universe(t for p in self.pairs for t in p)

    def __repr__(self) -> str:
        return f"PairSet({len(self.pairs)} pairs)"


EMPTY_PAIRS = PairSet()


class GroundCongruence:
    """Union-find congruence closure over a registered term universe.

    Registering a term adds its whole subterm tree and re-closes, so queries
    against terms outside the original universe stay complete for ground
    consequence.
    """

    def __init__(self):
        self._parent: dict[Term, Term] = {}
        self._rank: dict[Term, int] = {}
        self._uses: dict[Term, list[App]] = {}
        self._sig_table: dict[tuple, App] = {}

    def find(self, t: Term) -> Term:
        root = t
        while self._parent[root] is not root:
            root = self._parent[root]
        while self._parent[t] is not root:
            self._parent[t], t = root, self._parent[t]
        return root

    def register(self, t: Term) -> None:
        if t in self._parent:
            return
        if isinstance(t, App):
            for a in t.args:
                self.register(a)
        self._parent[t] = t
        self._rank[t] = 0
        self._uses[t] = []
        if isinstance(t, App):
            for a in t.args:
                self._uses[self.find(a)].append(t)
            self._insert_signature(t)

    def _insert_signature(self, t: App) -> None:
        key = (t.op, tuple(self.find(a) for a in t.args))
        other = self._sig_table.get(key)
        if other is None:
            self._sig_table[key] = t
        elif self.find(other) is not self.find(t):
            self._merge(other, t)

    def merge(self, a: Term, b: Term) -> None:
        self.register(a)
        self.register(b)
        self._merge(a, b)

    def _merge(self, a: Term, b: Term) -> None:
        worklist = [(a, b)]
        while worklist:
            x, y = worklist.pop()
            rx, ry = self.find(x), self.find(y)
            if rx is ry:
                continue
            if self._rank[rx] < self._rank[ry]:
                rx, ry = ry, rx
            if self._rank[rx] == self._rank[ry]:
                self._rank[rx] += 1
            self._parent[ry] = rx
            moved = self._uses[ry]
            self._uses[ry] = []
            self._uses[rx].extend(moved)
            for u in moved:
                key = (u.op, tuple(self.find(c) for c in u.args))
                other = self._sig_table.get(key)
                if other is None:
                    self._sig_table[key] = u
                elif self.find(other) is not self.find(u):
                    worklist.append((other, u))

    def contains(self, pair: Pair) -> bool:
        w, w2 = pair
        self.register(w)
        self.register(w2)
        return self.find(w) is self.find(w2)

    def classes(self) -> list[list[Term]]:
        groups: dict[Term, list[Term]] = {}
        for t in self._parent:
            groups.setdefault(self.find(t), []).append(t)
        out = [sorted(g, key=term_key) for g in groups.values()]
        out.sort(key=lambda g: term_key(g[0]))
        return out


def ground_closure(pairs: PairSet | Iterable[Pair], extra_terms: Iterable[Term] = ()) -> GroundCongruence:
    gc = GroundCongruence()
    for t in extra_terms:
        gc.register(t)
    for w, w2 in pairs:
        gc.merge(w, w2)
    return gc


class KernelCongruence:
    """Ker of the evaluation W(ctx) -> target extending the assignment."""

    __slots__ = ("target", "ctx", "assignment")

    def __init__(self, target: FiniteAlgebra, ctx: VarContext, assignment: Point):
        if len(assignment) != len(ctx):
            raise ValueError("assignment must cover the context")
        for (_, s), e in zip(ctx.vars, assignment):
            if not 0 <= e < target.sizes[s]:
                raise ValueError("assignment element out of range")
        self.target = target
        self.ctx = ctx
        self.assignment = tuple(assignment)

    def contains(self, pair: Pair) -> bool:
        memo: dict = {}
        w, w2 = pair
        return eval_term(w, self.assignment, self.target, self.ctx, memo) == eval_term(
            w2, self.assignment, self.target, self.ctx, memo
        )

    def rows(self) -> list[tuple[int, int]]:
        return [(s, e) for (_, s), e in zip(self.ctx.vars, self.assignment)]

    def image(self):
        """The generated image subalgebra, generators named by context variables."""
        return subalgebra_generated(self.target, self.rows(), gen_names=self.ctx.names)

    def __repr__(self) -> str:
        return f"KernelCongruence(target={self.target.name}, assignment={self.assignment})"


def unit_kernel(ctx: VarContext, sig) -> KernelCongruence:
    """The all-true congruence: kernel of evaluation into a one-element algebra."""
    return KernelCongruence(unit_algebra(sig), ctx, tuple([0] * len(ctx)))


class LazyMeetKernel:
    """Meet of kernels kept as a list; membership is conjunction of memberships.

    Used when the materialized product target would exceed the cap. Exact
    comparisons need a materialized KernelCongruence; materialize() builds one
    if the cap permits.
    """

    __slots__ = ("kernels", "ctx")

    def __init__(self, kernels: Sequence[KernelCongruence]):
        if not kernels:
            raise ValueError("lazy meet needs at least one kernel")
        self.kernels = tuple(kernels)
        self.ctx = kernels[0].ctx

    def contains(self, pair: Pair) -> bool:
        return all(k.contains(pair) for k in self.kernels)

    def materialize(self, cap: Optional[int] = None) -> KernelCongruence:
        return meet_kernels(list(self.kernels), cap=cap, force=True)

    def __repr__(self) -> str:
        return f"LazyMeetKernel({len(self.kernels)} kernels)"


def meet_kernels(
    ks: Sequence[KernelCongruence],
    sig=None,
    ctx: Optional[VarContext] = None,
    cap: Optional[int] = None,
    force: bool = False,
) -> KernelCongruence | LazyMeetKernel:
    """Meet of kernel congruences; empty input yields the unit congruence.

    The product target is materialized when its tables fit under the cap,
    otherwise a lazy membership-only form is returned (force=True raises
    instead of going lazy).
    """
    if not ks:
        if sig is None or ctx is None:
            raise ValueError("empty meet needs an explicit signature and context")
        return unit_kernel(ctx, sig)
    first = ks[0]
    for k in ks[1:]:
        if k.ctx.vars != first.ctx.vars:
            raise ValueError("kernels must share a context")
    if len(ks) == 1:
        return first
    sig = first.target.sig
    sizes = [
        _prod(k.target.sizes[s] for k in ks) for s in range(len(sig.sorts))
    ]
    cells = sum(_prod(sizes[s] for s in op.args) for op in sig.ops)
    if cells > get_cap(cap):
        if force:
            check_cap("materialized kernel meet", cells, cap)
        return LazyMeetKernel(ks)
    target = product([k.target for k in ks], cap=cap)
    factor_sizes = [tuple(k.target.sizes[s] for k in ks) for s in range(len(sig.sorts))]
    assignment = tuple(
        tuple_to_index(tuple(k.assignment[i] for k in ks), factor_sizes[s])
        for i, (_, s) in enumerate(first.ctx.vars)
    )
    return KernelCongruence(target, first.ctx, assignment)


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def kernel_of_point(p: Point, g: FiniteAlgebra, ctx: VarContext) -> KernelCongruence:
    return KernelCongruence(g, ctx, p)


def kernel_leq(k1, k2, cap: Optional[int] = None) -> bool:
    """Ker(phi1) included in Ker(phi2), decided by homomorphic factorization.

    Builds the image of phi1 and attempts the extension sending each variable
    row of k1 to the corresponding row of k2; inclusion holds iff it exists.
    """
    if isinstance(k1, LazyMeetKernel):
        k1 = k1.materialize(cap)
    if isinstance(k2, LazyMeetKernel):
        k2 = k2.materialize(cap)
    if k1.ctx.vars != k2.ctx.vars:
        raise ValueError("kernel comparison needs a common context")
    assignment: dict[tuple[int, int], int] = {}
    for i, (_, s) in enumerate(k1.ctx.vars):
        src, dst = k1.assignment[i], k2.assignment[i]
        prev = assignment.setdefault((s, src), dst)
        if prev != dst:
            return False
    sub = k1.image()
    return hom_extension(sub, assignment, k2.target) is not None


class FinitePartitionCongruence:
    """A congruence on a finite algebra as dense block labels per sort."""

    __slots__ = ("algebra", "block_ids")

    def __init__(self, algebra: FiniteAlgebra, block_ids: Sequence[Sequence[int]], validate: bool = True):
        dense: list[tuple[int, ...]] = []
        for s in range(len(algebra.sig.sorts)):
            labels = list(block_ids[s])
            if len(labels) != algebra.sizes[s]:
                raise ValueError(f"partition for sort {s} has wrong length")
            relabel: dict = {}
            dense.append(tuple(relabel.setdefault(lab, len(relabel)) for lab in labels))
        self.algebra = algebra
        self.block_ids = tuple(dense)
        if validate:
            self._check_compatible()

    def _check_compatible(self) -> None:
        for op in self.algebra.sig.ops:
            seen: dict[tuple[int, ...], int] = {}
            for args, val in self.algebra.tables[op.name].items():
                key = tuple(self.block_ids[s][a] for s, a in zip(op.args, args))
                res = self.block_ids[op.result][val]
                if seen.setdefault(key, res) != res:
                    raise ValueError(f"partition is not a congruence at op {op.name!r}")

    def same(self, sort: int, x: int, y: int) -> bool:
        return self.block_ids[sort][x] == self.block_ids[sort][y]

    def block_counts(self) -> tuple[int, ...]:
        return tuple(max(b, default=-1) + 1 if b else 1 for b in self.block_ids)

    def meet(self, other: "FinitePartitionCongruence") -> "FinitePartitionCongruence":
        if other.algebra is not self.algebra and other.algebra.digest() != self.algebra.digest():
            raise ValueError("meet needs partitions of the same algebra")
        blocks = [
            [ (a, b) for a, b in zip(self.block_ids[s], other.block_ids[s]) ]
            for s in range(len(self.algebra.sig.sorts))
        ]
        return FinitePartitionCongruence(self.algebra, blocks, validate=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePartitionCongruence)
            and self.algebra.digest() == other.algebra.digest()
            and self.block_ids == other.block_ids
        )

    def __hash__(self) -> int:
        return hash((self.algebra.digest(), self.block_ids))

    def __repr__(self) -> str:
        return f"FinitePartitionCongruence(blocks={self.block_ids})"


def unit_partition(g: FiniteAlgebra) -> FinitePartitionCongruence:
    return FinitePartitionCongruence(g, [[0] * n for n in g.sizes], validate=False)


def h_ker(g: FiniteAlgebra, h: FiniteAlgebra, cap: Optional[int] = None) -> FinitePartitionCongruence:
    """Intersection of the kernels of all homomorphisms g -> h.

    With no homomorphisms at all the intersection is empty, hence the unit
    partition (everything congruent).
    """
    homs = enumerate_homs(g, h, cap)
    if not homs:
        return unit_partition(g)
    blocks = []
    for s in range(len(g.sig.sorts)):
        blocks.append([tuple(hm[s][e] for hm in homs) for e in range(g.sizes[s])])
    return FinitePartitionCongruence(g, blocks, validate=False)
