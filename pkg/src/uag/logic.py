"""First-order formulas over finite models, evaluated as point sets.

A formula's value is the set of points (assignments into the model's
algebra) at which it holds, so the Boolean connectives become set
operations and the quantifiers become cylindrifications along variables.
Substitutions act on formulas syntactically and on value sets through
composition of points; the two actions agree, which is what the
substitution lemmas below exercise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .config import check_cap
from .algebras import (
    FiniteAlgebra,
    Point,
    eval_term,
    extend_with_constants,
    index_to_tuple,
    product,
    quotient,
    subalgebra_generated,
)
from .congruences import FinitePartitionCongruence
from .geometry import act_endo_variety, random_term
from .spaces import GeoContext, PointSet
from .terms import (
    Signature,
    Substitution,
    Term,
    VarContext,
    adjoin_constants,
    app,
    apply_subst,
    constant_name,
    term_vars,
    var,
)

ValueSet = PointSet


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class And(Formula):
    items: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    items: tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    ys: tuple[str, ...]
    body: Formula


def eq_f(lhs: Term, rhs: Term) -> Eq:
    return Eq(lhs, rhs)


def rel_f(name: str, *args: Term) -> Rel:
    return Rel(name, tuple(args))


def and_f(*items: Formula) -> And:
    return And(tuple(items))


def or_f(*items: Formula) -> Or:
    return Or(tuple(items))


def not_f(body: Formula) -> Not:
    return Not(body)


def exists_f(ys: Iterable[str], body: Formula) -> Exists:
    return Exists(tuple(sorted(set(ys))), body)


def forall_f(ys: Iterable[str], body: Formula) -> Formula:
    return Not(exists_f(ys, Not(body)))


TRUE = And(())
FALSE = Or(())


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Eq):
        return frozenset(term_vars(f.lhs)) | frozenset(term_vars(f.rhs))
    if isinstance(f, Rel):
        out: set[str] = set()
        for t in f.args:
            out.update(term_vars(t))
        return frozenset(out)
    if isinstance(f, (And, Or)):
        out = set()
        for g in f.items:
            out.update(free_vars(g))
        return frozenset(out)
    if isinstance(f, Not):
        return free_vars(f.body)
    assert isinstance(f, Exists)
    return free_vars(f.body) - set(f.ys)


def is_open(f: Formula) -> bool:
    if isinstance(f, (Eq, Rel)):
        return True
    if isinstance(f, (And, Or)):
        return all(is_open(g) for g in f.items)
    if isinstance(f, Not):
        return is_open(f.body)
    return False


def is_positive(f: Formula) -> bool:
    if isinstance(f, (Eq, Rel)):
        return True
    if isinstance(f, (And, Or)):
        return all(is_positive(g) for g in f.items)
    if isinstance(f, Exists):
        return is_positive(f.body)
    return False


class RelSignature:
    """Relation names with argument sorts, resolved against a signature."""

    __slots__ = ("sig", "rels")

    def __init__(self, sig: Signature, rels: Iterable[tuple[str, Sequence[str]]] = ()):
        self.sig = sig
        out: dict[str, tuple[int, ...]] = {}
        for name, arg_sorts in rels:
            if name in out:
                raise ValueError(f"duplicate relation {name!r}")
            out[name] = tuple(sig.sort_index(s) for s in arg_sorts)
        self.rels = out

    def arity(self, name: str) -> tuple[int, ...]:
        if name not in self.rels:
            raise ValueError(f"unknown relation {name!r}")
        return self.rels[name]

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}/{len(a)}" for n, a in sorted(self.rels.items()))
        return f"RelSignature({inner})"


class Model:
    """A finite algebra together with interpreted relations."""

    __slots__ = ("algebra", "rel_sig", "relations", "name")

    def __init__(
        self,
        algebra: FiniteAlgebra,
        rel_sig: RelSignature,
        relations: Mapping[str, Iterable[tuple[int, ...]]] | None = None,
        name: Optional[str] = None,
    ):
        relations = relations or {}
        state: dict[str, frozenset[tuple[int, ...]]] = {}
        for rel in rel_sig.rels:
            rows = frozenset(tuple(r) for r in relations.get(rel, ()))
            sorts = rel_sig.rels[rel]
            for row in rows:
                if len(row) != len(sorts):
                    raise ValueError(f"relation {rel!r} row has wrong arity: {row}")
                for s, e in zip(sorts, row):
                    if not 0 <= e < algebra.sizes[s]:
                        raise ValueError(f"relation {rel!r} row out of range: {row}")
            state[rel] = rows
        for rel in relations:
            if rel not in rel_sig.rels:
                raise ValueError(f"relation {rel!r} not declared")
        self.algebra = algebra
        self.rel_sig = rel_sig
        self.relations = state
        self.name = name or algebra.name

    def __repr__(self) -> str:
        return f"Model({self.name})"


def eval_formula(m: Model, f: Formula, gctx: GeoContext) -> PointSet:
    """The value of the formula: every point at which it holds."""
    if m.algebra.digest() != gctx.g.digest():
        raise ValueError("model and geometry context use different algebras")
    ctx, g = gctx.ctx, gctx.g
    if isinstance(f, Eq):
        idxs = []
        for i, p in enumerate(gctx.points):
            memo: dict = {}
            if eval_term(f.lhs, p, g, ctx, memo) == eval_term(f.rhs, p, g, ctx, memo):
                idxs.append(i)
        return PointSet(gctx, idxs)
    if isinstance(f, Rel):
        sorts = m.rel_sig.arity(f.name)
        if len(f.args) != len(sorts):
            raise ValueError(f"relation {f.name!r} applied to {len(f.args)} terms")
        rows = m.relations[f.name]
        idxs = []
        for i, p in enumerate(gctx.points):
            memo = {}
            row = tuple(eval_term(t, p, g, ctx, memo) for t in f.args)
            if row in rows:
                idxs.append(i)
        return PointSet(gctx, idxs)
    if isinstance(f, And):
        out = gctx.full()
        for item in f.items:
            out = out.intersection(eval_formula(m, item, gctx))
        return out
    if isinstance(f, Or):
        out = gctx.empty()
        for item in f.items:
            out = out.union(eval_formula(m, item, gctx))
        return out
    if isinstance(f, Not):
        return eval_formula(m, f.body, gctx).complement()
    assert isinstance(f, Exists)
    return exists_set(eval_formula(m, f.body, gctx), f.ys)


def exists_set(a: PointSet, ys: Iterable[str]) -> PointSet:
    """Cylindrification: forget the listed coordinates, then restore them freely."""
    gctx = a.gctx
    names = set(ys)
    for y in names:
        if not gctx.ctx.has(y):
            raise ValueError(f"quantified variable {y!r} is not in the context")
    if not names:
        return PointSet(gctx, a.indices)
    keep = [i for i, (n, _) in enumerate(gctx.ctx.vars) if n not in names]
    keys = {tuple(p[i] for i in keep) for p in a.points()}
    return PointSet(
        gctx,
        (i for i, p in enumerate(gctx.points) if tuple(p[j] for j in keep) in keys),
    )


def forall_set(a: PointSet, ys: Iterable[str]) -> PointSet:
    return exists_set(a.complement(), ys).complement()


def subst_value(s: Substitution, a: PointSet) -> PointSet:
    """The substitution acting on a value set: points whose composition lies in a."""
    return act_endo_variety(s, a)


def support_set(a: PointSet) -> frozenset[str]:
    """Variables the value set genuinely depends on."""
    return frozenset(
        name for name, _ in a.gctx.ctx.vars if exists_set(a, [name]) != a
    )


def subst_formula(s: Substitution, f: Formula) -> Formula:
    """Apply a substitution to free occurrences; refuses variable capture."""
    if isinstance(f, Eq):
        return Eq(apply_subst(s, f.lhs), apply_subst(s, f.rhs))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(apply_subst(s, t) for t in f.args))
    if isinstance(f, And):
        return And(tuple(subst_formula(s, g) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(subst_formula(s, g) for g in f.items))
    if isinstance(f, Not):
        return Not(subst_formula(s, f.body))
    assert isinstance(f, Exists)
    bound = set(f.ys)
    inner = Substitution({n: t for n, t in s.bindings.items() if n not in bound})
    for n in free_vars(f.body):
        if n in bound:
            continue
        image = inner(n)
        if set(term_vars(image)) & bound:
            raise ValueError(f"substitution for {n!r} captures a bound variable")
    return Exists(f.ys, subst_formula(inner, f.body))


def halmos_axiom_violations(
    gctx: GeoContext,
    values: Sequence[PointSet],
    substitutions: Sequence[Substitution] = (),
) -> list[str]:
    """Check the quantifier and substitution axiom schemes on given data.

    Substitution schemes are tested only where their side conditions hold;
    substitutions violating the conditions are simply skipped for that pair.
    Returns human-readable descriptions of every violation found.
    """
    out: list[str] = []
    names = [n for n, _ in gctx.ctx.vars]
    subsets = []
    for r in range(len(names) + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(names, r))

    def note(msg: str) -> None:
        out.append(msg)

    for a in values:
        if exists_set(a, ()) != a:
            note(f"E(empty) changed a value set of size {len(a)}")
        for ys in subsets:
            ea = exists_set(a, ys)
            if not a.issubset(ea):
                note(f"a not below E({sorted(ys)})a")
            if exists_set(ea, ys) != ea:
                note(f"E({sorted(ys)}) not idempotent")
        for y1 in subsets:
            for y2 in subsets:
                if exists_set(a, y1 | y2) != exists_set(exists_set(a, y2), y1):
                    note(f"E({sorted(y1 | y2)}) != E({sorted(y1)})E({sorted(y2)})")
    for a in values:
        for b in values:
            for ys in subsets:
                lhs = exists_set(a.intersection(exists_set(b, ys)), ys)
                rhs = exists_set(a, ys).intersection(exists_set(b, ys))
                if lhs != rhs:
                    note(f"E({sorted(ys)}) fails the meet scheme")
    for s1 in substitutions:
        for s2 in substitutions:
            for ys in subsets:
                if any(s1(n) is not s2(n) for n in names if n not in ys):
                    continue
                for a in values:
                    ea = exists_set(a, ys)
                    if subst_value(s1, ea) != subst_value(s2, ea):
                        note(f"s1 E({sorted(ys)}) != s2 E({sorted(ys)}) for off-agreeing pair")
    for s in substitutions:
        for ys in subsets:
            pre: set[str] = set()
            ok = True
            seen_targets: dict[str, str] = {}
            for n in names:
                image = s(n)
                image_vars = term_vars(image)
                if len(image_vars) == 1 and image is var(image_vars[0]) and image_vars[0] in ys:
                    if seen_targets.setdefault(image_vars[0], n) != n:
                        ok = False
                    pre.add(n)
            if not ok:
                continue
            for n in names:
                if n not in pre and set(term_vars(s(n))) & ys:
                    ok = False
            if not ok:
                continue
            for a in values:
                lhs = exists_set(subst_value(s, a), ys)
                rhs = subst_value(s, exists_set(a, pre))
                if lhs != rhs:
                    note(f"E({sorted(ys)})s != s E({sorted(pre)}) despite side conditions")
    return out


def is_filter(family: Iterable[PointSet], gctx: GeoContext, cap: Optional[int] = None) -> bool:
    """Nonempty, meet-closed, up-closed, and closed under every universal
    quantifier; the last condition is the Halmos-side characterization."""
    fam = {a.indices for a in family}
    if not fam:
        return False
    n = len(gctx.points)
    check_cap("filter up-closure", 1 << n, cap)
    names = [nm for nm, _ in gctx.ctx.vars]
    universe = list(range(n))
    for a in list(fam):
        for b in list(fam):
            if a & b not in fam:
                return False
        rest = [i for i in universe if i not in a]
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                if a | frozenset(extra) not in fam:
                    return False
        ps = PointSet(gctx, a)
        for r in range(len(names) + 1):
            for ys in itertools.combinations(names, r):
                if forall_set(ps, ys).indices not in fam:
                    return False
    return True


def filter_generated(
    gens: Iterable[PointSet], gctx: GeoContext, cap: Optional[int] = None
) -> set[PointSet]:
    """Least filter containing the generators, by fixpoint closure."""
    n = len(gctx.points)
    check_cap("filter generation", 1 << n, cap)
    names = [nm for nm, _ in gctx.ctx.vars]
    fam: set[frozenset[int]] = {frozenset(range(n))}
    fam.update(a.indices for a in gens)
    changed = True
    while changed:
        changed = False
        current = list(fam)
        for a in current:
            for b in current:
                if a & b not in fam:
                    fam.add(a & b)
                    changed = True
        for a in current:
            ps = PointSet(gctx, a)
            for r in range(len(names) + 1):
                for ys in itertools.combinations(names, r):
                    got = forall_set(ps, ys).indices
                    if got not in fam:
                        fam.add(got)
                        changed = True
            rest = [i for i in range(n) if i not in a]
            for r in range(1, len(rest) + 1):
                for extra in itertools.combinations(rest, r):
                    up = a | frozenset(extra)
                    if up not in fam:
                        fam.add(up)
                        changed = True
    return {PointSet(gctx, a) for a in fam}


def universal_part(family: Iterable[PointSet], gctx: GeoContext) -> set[PointSet]:
    """Members whose full universal closure stays in the family."""
    fam = {a.indices for a in family}
    names = [nm for nm, _ in gctx.ctx.vars]
    return {
        PointSet(gctx, a)
        for a in fam
        if forall_set(PointSet(gctx, a), names).indices in fam
    }


class SubmodelView:
    """A submodel on an op-closed subset, with maps to and from the parent."""

    __slots__ = ("model", "to_parent", "from_parent")

    def __init__(self, model: Model, to_parent, from_parent):
        self.model = model
        self.to_parent = to_parent
        self.from_parent = from_parent

    def lift_point(self, q: Point, ctx: VarContext) -> Point:
        return tuple(self.to_parent[s][q[j]] for j, (_, s) in enumerate(ctx.vars))

    def drop_point(self, p: Point, ctx: VarContext) -> Optional[Point]:
        out = []
        for j, (_, s) in enumerate(ctx.vars):
            e = self.from_parent[s].get(p[j])
            if e is None:
                return None
            out.append(e)
        return tuple(out)


def restrict_submodel(m: Model, members: Sequence[Sequence[int]]) -> SubmodelView:
    """Restrict the model to an op-closed subset of each carrier.

    Raises if the subset is not closed under some operation. Relations keep
    exactly the rows whose entries all survive.
    """
    g = m.algebra
    to_parent = tuple(tuple(sorted(set(ms))) for ms in members)
    from_parent = tuple(
        {e: i for i, e in enumerate(ms)} for ms in to_parent
    )
    sizes = tuple(len(ms) for ms in to_parent)
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    for op in g.sig.ops:
        table: dict[tuple[int, ...], int] = {}
        for combo in itertools.product(*[range(sizes[s]) for s in op.args]):
            parent_args = tuple(to_parent[s][k] for s, k in zip(op.args, combo))
            val = g.tables[op.name][parent_args]
            sub_val = from_parent[op.result].get(val)
            if sub_val is None:
                raise ValueError(
                    f"subset is not closed under {op.name!r} at {parent_args}"
                )
            table[combo] = sub_val
        tables[op.name] = table
    sub_alg = FiniteAlgebra(g.sig, sizes, tables, name=f"sub({m.name})")
    rels: dict[str, set[tuple[int, ...]]] = {}
    for rel, rows in m.relations.items():
        sorts = m.rel_sig.rels[rel]
        kept = set()
        for row in rows:
            mapped = tuple(from_parent[s].get(e) for s, e in zip(sorts, row))
            if None not in mapped:
                kept.add(mapped)
        rels[rel] = kept
    sub_model = Model(sub_alg, m.rel_sig, rels, name=f"sub({m.name})")
    return SubmodelView(sub_model, to_parent, from_parent)


@dataclass(frozen=True)
class FundamentalReport:
    relation: str
    open_formula: bool
    positive_formula: bool
    sub_value: int
    restricted_value: int


def fundamental_check(
    m: Model,
    members: Sequence[Sequence[int]],
    u: Formula,
    ctx: VarContext,
    cap: Optional[int] = None,
) -> FundamentalReport:
    """Compare the submodel value of u with the restriction of its value.

    relation is one of "equal", "sub-below", "sub-above", "incomparable";
    open formulas must come out equal, positive ones at least "sub-below".
    """
    view = restrict_submodel(m, members)
    gctx_g = GeoContext(m.algebra, ctx, cap)
    gctx_h = GeoContext(view.model.algebra, ctx, cap)
    val_g = eval_formula(m, u, gctx_g)
    val_h = eval_formula(view.model, u, gctx_h)
    lifted = {view.lift_point(q, ctx) for q in val_h.points()}
    h_space = {view.lift_point(q, ctx) for q in gctx_h.points}
    restricted = {p for p in val_g.points() if p in h_space}
    if lifted == restricted:
        rel = "equal"
    elif lifted <= restricted:
        rel = "sub-below"
    elif restricted <= lifted:
        rel = "sub-above"
    else:
        rel = "incomparable"
    return FundamentalReport(
        relation=rel,
        open_formula=is_open(u),
        positive_formula=is_positive(u),
        sub_value=len(lifted),
        restricted_value=len(restricted),
    )


def fo_variety(m: Model, formulas: Iterable[Formula], gctx: GeoContext) -> PointSet:
    """Points satisfying every formula; the empty set of formulas cuts nothing."""
    out = gctx.full()
    for u in formulas:
        out = out.intersection(eval_formula(m, u, gctx))
    return out


def fo_closure_member(
    m: Model, formulas: Iterable[Formula], u: Formula, gctx: GeoContext
) -> bool:
    """Is u a semantic consequence of the set, i.e. valid on its variety?"""
    return fo_variety(m, formulas, gctx).issubset(eval_formula(m, u, gctx))


@dataclass(frozen=True)
class OpenVarietyReport:
    agrees: bool
    all_open: bool
    mismatches: tuple[Point, ...]


def open_variety_check(
    m: Model, formulas: Sequence[Formula], gctx: GeoContext, cap: Optional[int] = None
) -> OpenVarietyReport:
    """Open formulas see only the generated submodel of each point.

    Route one evaluates membership in the whole model; route two re-evaluates
    inside the submodel generated by the point's coordinates. For open
    formulas the two must agree at every point.
    """
    direct = fo_variety(m, formulas, gctx)
    g = m.algebra
    cache: dict[tuple, tuple] = {}
    mismatches = []
    for i, p in enumerate(gctx.points):
        sub = subalgebra_generated(
            g, [(s, p[j]) for j, (_, s) in enumerate(gctx.ctx.vars)]
        )
        key = tuple(frozenset(ms) for ms in sub.members)
        hit = cache.get(key)
        if hit is None:
            view = restrict_submodel(m, [list(ms) for ms in sub.members])
            sub_gctx = GeoContext(view.model.algebra, gctx.ctx, cap)
            value = fo_variety(view.model, formulas, sub_gctx)
            hit = (view, value)
            cache[key] = hit
        view, value = hit
        q = view.drop_point(p, gctx.ctx)
        in_sub = q is not None and q in value
        if in_sub != (i in direct.indices):
            mismatches.append(p)
    return OpenVarietyReport(
        agrees=not mismatches,
        all_open=all(is_open(u) for u in formulas),
        mismatches=tuple(mismatches),
    )


def ultrapower_model(m: Model, n: int, alpha0: int, cap: Optional[int] = None) -> Model:
    """The n-fold power with relations read through the principal index."""
    if not 0 <= alpha0 < n:
        raise ValueError("principal index out of range")
    g = m.algebra
    pw = product([g] * n, name=f"{g.name}^{n}", cap=cap)
    factor_sizes = [tuple(g.sizes[s] for _ in range(n)) for s in range(len(g.sig.sorts))]
    rels: dict[str, set[tuple[int, ...]]] = {}
    for rel, rows in m.relations.items():
        sorts = m.rel_sig.rels[rel]
        count = 1
        for s in sorts:
            count *= pw.sizes[s]
        check_cap("ultrapower relation rows", count, cap)
        kept = set()
        for combo in itertools.product(*[range(pw.sizes[s]) for s in sorts]):
            proj = tuple(
                index_to_tuple(e, factor_sizes[s])[alpha0] for s, e in zip(sorts, combo)
            )
            if proj in rows:
                kept.add(combo)
        rels[rel] = kept
    return Model(pw, m.rel_sig, rels, name=f"{m.name}^{n}@{alpha0}")


def los_check(
    m: Model,
    n: int,
    alpha0: int,
    formulas: Sequence[Formula],
    ctx: VarContext,
    cap: Optional[int] = None,
) -> list[tuple[Formula, Point]]:
    """Membership across a principal ultrapower must mirror the projected point.

    The power itself is not the ultrapower: two tuples agreeing at the
    principal coordinate are identified by the ultrafilter, so the power is
    first quotiented by that congruence. Each power point is then pushed into
    the quotient and compared against the projected base point. Returns the
    violating (formula, power point) pairs; an empty list is the expected
    outcome.
    """
    pm = ultrapower_model(m, n, alpha0, cap)
    pw = pm.algebra
    nsorts = len(pw.sig.sorts)
    factor_sizes = [
        tuple(m.algebra.sizes[s] for _ in range(n)) for s in range(nsorts)
    ]
    coord = [
        [index_to_tuple(e, factor_sizes[s])[alpha0] for e in range(pw.sizes[s])]
        for s in range(nsorts)
    ]
    part = FinitePartitionCongruence(pw, coord)
    q_alg = quotient(pw, part, name=f"{pw.name}/U")
    # dense class label -> the shared principal coordinate of its members
    class_coord: list[dict[int, int]] = [{} for _ in range(nsorts)]
    for s in range(nsorts):
        for e in range(pw.sizes[s]):
            class_coord[s].setdefault(part.block_ids[s][e], coord[s][e])
    violations: list[tuple[Formula, Point]] = []
    # relations must be saturated: membership may only depend on the class
    q_rels: dict[str, set[tuple[int, ...]]] = {}
    saturated = True
    for rel, rows in pm.relations.items():
        sorts = m.rel_sig.rels[rel]
        seen: dict[tuple[int, ...], bool] = {}
        for combo in itertools.product(*[range(pw.sizes[s]) for s in sorts]):
            key = tuple(part.block_ids[s][e] for s, e in zip(sorts, combo))
            inside = combo in rows
            if seen.setdefault(key, inside) != inside:
                saturated = False
        q_rels[rel] = {k for k, v in seen.items() if v}
    if not saturated:
        return [(u, ()) for u in formulas]
    qm = Model(q_alg, m.rel_sig, q_rels, name=f"{pm.name}/U")
    gctx_p = GeoContext(pw, ctx, cap)
    gctx_q = GeoContext(q_alg, ctx, cap)
    gctx_b = GeoContext(m.algebra, ctx, cap)
    for u in formulas:
        top = eval_formula(qm, u, gctx_q)
        base = eval_formula(m, u, gctx_b)
        for p in gctx_p.points:
            dropped = tuple(part.block_ids[s][e] for (_, s), e in zip(ctx.vars, p))
            proj = tuple(class_coord[s][c] for (_, s), c in zip(ctx.vars, dropped))
            if (dropped in top) != (proj in base):
                violations.append((u, p))
    return violations


def substitution_theorem_check(
    m: Model,
    u: Formula,
    gctx: GeoContext,
    point: Optional[Point] = None,
    cap: Optional[int] = None,
) -> bool:
    """Point membership equals validity of the constant-instantiated formula.

    Each point p induces the ground substitution x -> c_{p(x)} into the
    constant-extended model; p lies in the value of u exactly when the
    instantiated formula is valid there. Pass a point to check just one.
    """
    g = gctx.g
    sig_c, _ = adjoin_constants(g.sig, g)
    g_ext = extend_with_constants(g, sig_c)
    m_ext = Model(g_ext, RelSignature(sig_c, _rel_decls(m)), m.relations, name=f"{m.name}+c")
    gctx_ext = GeoContext(g_ext, gctx.ctx, cap)
    value = eval_formula(m, u, gctx)
    full = len(gctx_ext.points)
    targets = [tuple(point)] if point is not None else list(gctx.points)
    for p in targets:
        s_p = Substitution(
            {
                name: app(constant_name(sig_c, s, p[j]))
                for j, (name, s) in enumerate(gctx.ctx.vars)
            }
        )
        grounded = subst_formula(s_p, u)
        valid = len(eval_formula(m_ext, grounded, gctx_ext)) == full
        if valid != (p in value):
            return False
    return True


def _rel_decls(m: Model) -> list[tuple[str, list[str]]]:
    return [
        (name, [m.algebra.sig.sorts[s] for s in sorts])
        for name, sorts in m.rel_sig.rels.items()
    ]


def random_formula(
    rng: random.Random,
    sig: Signature,
    ctx: VarContext,
    rel_sig: Optional[RelSignature] = None,
    depth: int = 2,
) -> Formula:
    """A random formula; atoms are equations and declared relations."""
    def atom() -> Formula:
        rels = sorted(rel_sig.rels) if rel_sig is not None else []
        if rels and rng.random() < 0.4:
            name = rels[rng.randrange(len(rels))]
            sorts = rel_sig.rels[name]
            return Rel(
                name,
                tuple(random_term(rng, sig, ctx, rng.randint(0, 1), s) for s in sorts),
            )
        srt = ctx.vars[rng.randrange(len(ctx.vars))][1]
        return Eq(
            random_term(rng, sig, ctx, rng.randint(0, 1), srt),
            random_term(rng, sig, ctx, rng.randint(0, 1), srt),
        )

    if depth <= 0:
        return atom()
    roll = rng.random()
    if roll < 0.25:
        return atom()
    if roll < 0.45:
        return And(tuple(random_formula(rng, sig, ctx, rel_sig, depth - 1) for _ in range(2)))
    if roll < 0.65:
        return Or(tuple(random_formula(rng, sig, ctx, rel_sig, depth - 1) for _ in range(2)))
    if roll < 0.8:
        return Not(random_formula(rng, sig, ctx, rel_sig, depth - 1))
    k = rng.randint(1, max(1, len(ctx.vars) // 2 + 1))
    ys = rng.sample([n for n, _ in ctx.vars], min(k, len(ctx.vars)))
    return exists_f(ys, random_formula(rng, sig, ctx, rel_sig, depth - 1))
