"""Independent reference implementations used to cross-check the package.

Everything here recomputes results by a different route than the library:
brute-force map enumeration instead of generator extension, relabeling
fixpoints instead of union-find, definitional set semantics instead of
index algebra. Slow on purpose; only fed tiny inputs.
"""

from __future__ import annotations

import itertools

from uag.terms import App, Term, Var


def o_eval(t: Term, env: dict[str, int], tables) -> int:
    if isinstance(t, Var):
        return env[t.name]
    assert isinstance(t, App)
    return tables[t.op][tuple(o_eval(a, env, tables) for a in t.args)]


def o_points(g, ctx):
    ranges = [range(g.sizes[s]) for _, s in ctx.vars]
    return [p for p in itertools.product(*ranges)]


def o_env(ctx, p):
    return {name: p[i] for i, (name, _) in enumerate(ctx.vars)}


def o_variety(g, ctx, pairs):
    out = []
    for p in o_points(g, ctx):
        env = o_env(ctx, p)
        if all(o_eval(a, env, g.tables) == o_eval(b, env, g.tables) for a, b in pairs):
            out.append(p)
    return out


def o_identity_holds(g, ctx, pair) -> bool:
    return len(o_variety(g, ctx, [pair])) == len(o_points(g, ctx))


def o_subterms(terms):
    seen: list[Term] = []
    ids = set()

    def walk(t):
        if id(t) in ids:
            return
        ids.add(id(t))
        seen.append(t)
        if isinstance(t, App):
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return seen


def o_ground_closure_classes(pairs, extra_terms=()):
    """Congruence closure by iterated relabeling over the subterm universe."""
    universe = o_subterms([t for p in pairs for t in p] + list(extra_terms))
    label = {id(t): i for i, t in enumerate(universe)}
    by_id = {id(t): t for t in universe}

    def merge(a, b):
        la, lb = label[id(a)], label[id(b)]
        if la == lb:
            return False
        lo, hi = min(la, lb), max(la, lb)
        for k, v in label.items():
            if v == hi:
                label[k] = lo
        return True

    changed = True
    while changed:
        changed = False
        for a, b in pairs:
            if merge(a, b):
                changed = True
        for t in universe:
            for u in universe:
                if (
                    isinstance(t, App)
                    and isinstance(u, App)
                    and t is not u
                    and t.op == u.op
                    and len(t.args) == len(u.args)
                    and all(label[id(x)] == label[id(y)] for x, y in zip(t.args, u.args))
                    and merge(t, u)
                ):
                    changed = True
    out: dict[int, list[Term]] = {}
    for t in universe:
        out.setdefault(label[id(t)], []).append(t)
    return list(out.values()), label, by_id


def o_ground_same(pairs, a, b, extra_terms=()) -> bool:
    _, label, _ = o_ground_closure_classes(pairs, list(extra_terms) + [a, b])
    return label[id(a)] == label[id(b)]


def o_homs(a, b):
    """All homomorphisms a -> b by filtering every total map. Exponential."""
    per_sort_maps = []
    for s in range(len(a.sig.sorts)):
        per_sort_maps.append(
            [dict(enumerate(img)) for img in itertools.product(range(b.sizes[s]), repeat=a.sizes[s])]
        )
    out = []
    for combo in itertools.product(*per_sort_maps):
        ok = True
        for op in a.sig.ops:
            for args, val in a.tables[op.name].items():
                mapped = tuple(combo[s][x] for s, x in zip(op.args, args))
                if b.tables[op.name][mapped] != combo[op.result][val]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(tuple(m[i] for i in range(a.sizes[s])) for s, m in enumerate(combo)))
    return out


def o_h_ker_blocks(g, h):
    """Per sort: lists of elements identified by every homomorphism g -> h."""
    homs = o_homs(g, h)
    blocks = []
    for s in range(len(g.sig.sorts)):
        key = {}
        for x in range(g.sizes[s]):
            key[x] = tuple(hm[s][x] for hm in homs)
        groups: dict[tuple, list[int]] = {}
        for x in range(g.sizes[s]):
            groups.setdefault(key[x], []).append(x)
        blocks.append(sorted(groups.values()))
    return blocks


def o_row_subalgebra(g, ctx, points):
    """Subalgebra of G^points generated by the variable rows, as raw tuples."""
    rows: dict[int, set[tuple[int, ...]]] = {s: set() for s in range(len(g.sig.sorts))}
    for i, (_, s) in enumerate(ctx.vars):
        rows[s].add(tuple(p[i] for p in points))
    changed = True
    while changed:
        changed = False
        for op in g.sig.ops:
            pools = [sorted(rows[s]) for s in op.args]
            for args in itertools.product(*pools):
                val = tuple(
                    g.tables[op.name][tuple(a[j] for a in args)] for j in range(len(points))
                )
                if val not in rows[op.result]:
                    rows[op.result].add(val)
                    changed = True
    return {s: sorted(v) for s, v in rows.items()}


def o_closure_points(g, ctx, points):
    """A'' by the quotient-hom route: every hom from the row algebra back to g,
    restricted to the variable rows, is a point of the closure."""
    if not points:
        # empty set closes to the one-point-algebra solutions
        from uag.algebras import FiniteAlgebra

        sizes = [1] * len(g.sig.sorts)
        tables = {op.name: {tuple([0] * op.arity): 0} for op in g.sig.ops}
        one = FiniteAlgebra(g.sig, sizes, tables, name="one")
        return sorted(
            tuple(hm[s][0] for _, s in ctx.vars) for hm in o_homs(one, g)
        )
    rows = o_row_subalgebra(g, ctx, points)
    index = {s: {r: i for i, r in enumerate(rs)} for s, rs in rows.items()}
    from uag.algebras import FiniteAlgebra

    sizes = [len(rows[s]) for s in range(len(g.sig.sorts))]
    tables = {}
    for op in g.sig.ops:
        table = {}
        for args in itertools.product(*[rows[s] for s in op.args]):
            val = tuple(g.tables[op.name][tuple(a[j] for a in args)] for j in range(len(points)))
            table[tuple(index[s][a] for s, a in zip(op.args, args))] = index[op.result][val]
        tables[op.name] = table
    alg = FiniteAlgebra(g.sig, sizes, tables, name="rows")
    out = set()
    for hm in o_homs(alg, g):
        pt = []
        for i, (_, s) in enumerate(ctx.vars):
            row = tuple(p[i] for p in points)
            pt.append(hm[s][index[s][row]])
        out.add(tuple(pt))
    return sorted(out)


def o_closure_member(g, ctx, t_pairs, query) -> bool:
    """T'' membership definitionally: every solution of T solves the query."""
    for p in o_variety(g, ctx, t_pairs):
        env = o_env(ctx, p)
        if o_eval(query[0], env, g.tables) != o_eval(query[1], env, g.tables):
            return False
    return True


def o_commute(g, op1, op2) -> bool:
    """Matrix law, written over explicit argument matrices."""
    f, h = g.sig.op(op1), g.sig.op(op2)
    if f.result != h.result:
        return True
    if any(s != f.result for s in f.args) or any(s != h.result for s in h.args):
        return True
    n, m = f.arity, h.arity
    size = g.sizes[f.result]
    if n == 0 and m == 0:
        return g.tables[op1][()] == g.tables[op2][()]
    if n == 0:
        return g.tables[op2][tuple([g.tables[op1][()]] * m)] == g.tables[op1][()]
    if m == 0:
        return g.tables[op1][tuple([g.tables[op2][()]] * n)] == g.tables[op2][()]
    for flat in itertools.product(range(size), repeat=n * m):
        matrix = [flat[i * m : (i + 1) * m] for i in range(n)]
        row_then_f = g.tables[op2][tuple(g.tables[op1][tuple(matrix[i][j] for i in range(n))] for j in range(m))]
        col_then_h = g.tables[op1][tuple(g.tables[op2][tuple(matrix[i][j] for j in range(m))] for i in range(n))]
        if row_then_f != col_then_h:
            return False
    return True


def o_exists(points_in, ys, ctx, all_points):
    """p is in E(Y)a iff some member of a agrees with p off Y."""
    ys = set(ys)
    keep = [i for i, (name, _) in enumerate(ctx.vars) if name not in ys]
    got = set()
    member = set(points_in)
    for p in all_points:
        for q in member:
            if all(p[i] == q[i] for i in keep):
                got.add(p)
                break
    return sorted(got)


def o_forall(points_in, ys, ctx, all_points):
    ys = set(ys)
    keep = [i for i, (name, _) in enumerate(ctx.vars) if name not in ys]
    member = set(points_in)
    out = []
    for p in all_points:
        if all(q in member for q in all_points if all(p[i] == q[i] for i in keep)):
            out.append(p)
    return sorted(out)


def o_eval_formula(m, f, ctx, all_points):
    """Definitional first-order satisfaction, point by point."""
    from uag.logic import And, Eq, Exists, Not, Or, Rel

    g = m.algebra

    def sat(f, env):
        if isinstance(f, Eq):
            return o_eval(f.lhs, env, g.tables) == o_eval(f.rhs, env, g.tables)
        if isinstance(f, Rel):
            row = tuple(o_eval(t, env, g.tables) for t in f.args)
            return row in m.relations.get(f.name, frozenset())
        if isinstance(f, And):
            return all(sat(x, env) for x in f.items)
        if isinstance(f, Or):
            return any(sat(x, env) for x in f.items)
        if isinstance(f, Not):
            return not sat(f.body, env)
        assert isinstance(f, Exists)
        slots = [(y, ctx.sort_of(y)) for y in f.ys]
        for choice in itertools.product(*[range(g.sizes[s]) for _, s in slots]):
            env2 = dict(env)
            for (y, _), v in zip(slots, choice):
                env2[y] = v
            if sat(f.body, env2):
                return True
        return False

    return sorted(p for p in all_points if sat(f, o_env(ctx, p)))
