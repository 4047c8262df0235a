"""Command line front end.

Verbs operate on named objects from workspace files (see sexpr) or from the
built-in libraries (--builtin group|semilattice|ring). Output is text or
JSON; JSON output is byte-identical across runs for equal inputs and seeds.

Exit codes: 0 success (and positive verdicts), 1 definite negative verdict
or failed check, 2 usage, parse, or capacity errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional

from .algebras import (
    FiniteAlgebra,
    GROUP_SIG,
    RING_SIG,
    SEMILATTICE_SIG,
    chain_semilattice,
    cyclic_group,
    klein_four,
    mod_ring,
    subalgebra_generated,
    symmetric_group_3,
    vee_semilattice,
)
from .config import CapExceeded
from .congruences import KernelCongruence, PairSet, kernel_of_point
from .geometry import (
    NotEquivalent,
    candidate_pairs,
    closed_congruence_presentation,
    closure_variety,
    congruence_of,
    geometric_equiv,
    morphism_check,
    nullstellensatz_check,
    point_closure,
    variety_iso,
    variety_of,
    variety_of_kernel,
    verbal_variety,
)
from .logic import (
    Model,
    RelSignature,
    eval_formula,
    filter_generated,
    fo_closure_member,
    fo_variety,
    fundamental_check,
    halmos_axiom_violations,
    is_filter,
    is_open,
    random_formula,
)
from .reports import emit
from .rules import KINDS, SaturationBounds, derive_closure, holds_clause, soundness_check
from .sexpr import (
    SexprError,
    Workspace,
    load_files,
    parse_inline_pair,
    parse_inline_subst,
    parse_inline_term,
)
from .spaces import GeoContext, PointSet
from .terms import Signature, Substitution, VarContext, app, render, sort_of, var


def builtin_workspace(kind: str) -> Workspace:
    ws = Workspace()
    if kind == "group":
        sig = GROUP_SIG
        algs = [cyclic_group(n) for n in (2, 3, 4, 5, 6)] + [klein_four(), symmetric_group_3()]
    elif kind == "semilattice":
        sig = SEMILATTICE_SIG
        algs = [chain_semilattice(2), chain_semilattice(3), vee_semilattice()]
    elif kind == "ring":
        sig = RING_SIG
        algs = [mod_ring(2), mod_ring(3), mod_ring(5)]
    else:
        raise SexprError(f"unknown builtin library {kind!r}")
    ws.sorts = list(sig.sorts)
    ws.op_decls = [
        (op.name, tuple(sig.sorts[i] for i in op.args), sig.sorts[op.result]) for op in sig.ops
    ]
    ws._sig = sig
    for g in algs:
        ws.algebras[g.name] = g
    s0 = sig.sorts[0]
    ws.contexts["C1"] = VarContext(sig, [("x", s0)])
    ws.contexts["C2"] = VarContext(sig, [("x", s0), ("y", s0)])
    ws.contexts["C3"] = VarContext(sig, [("x", s0), ("y", s0), ("z", s0)])
    return ws


def build_ws(args) -> Workspace:
    ws = builtin_workspace(args.builtin) if args.builtin else Workspace()
    if args.file:
        for path in args.file:
            with open(path, "r", encoding="utf-8") as fh:
                src = fh.read()
            from .sexpr import load_workspace

            load_workspace(src, ws)
    return ws


def parse_point(text: str, ctx: VarContext, g: FiniteAlgebra):
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != len(ctx):
        raise SexprError(f"point needs {len(ctx)} values, got {len(parts)}")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise SexprError(f"point values must be integers: {text!r}")
    for v, (name, s) in zip(vals, ctx.vars):
        if not 0 <= v < g.sizes[s]:
            raise SexprError(f"value {v} for {name} out of range for {g.name}")
    return vals


def _out(args, payload: dict) -> None:
    sys.stdout.write(emit(payload, args.format))


def cmd_parse(args) -> int:
    ws = build_ws(args)
    payload = {
        "verb": "parse",
        "sorts": list(ws.sorts),
        "ops": [name for name, _, _ in ws.op_decls],
        "algebras": sorted(ws.algebras),
        "contexts": sorted(ws.contexts),
        "pairs": sorted(ws.pairsets),
        "formulas": sorted(ws.formulas),
        "models": sorted(ws.models),
        "clauses": sorted(ws.clauses),
    }
    _out(args, payload)
    return 0


def cmd_eval(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    ctx = ws.context(args.context)
    t = parse_inline_term(args.term, ws.sig())
    p = parse_point(args.point, ctx, g)
    from .algebras import eval_term

    value = eval_term(t, p, g, ctx)
    srt = sort_of(t, ws.sig(), ctx)
    payload = {
        "verb": "eval",
        "algebra": g.name,
        "term": render(t),
        "point": list(p),
        "value": value,
        "sort": ws.sig().sorts[srt],
    }
    _out(args, payload)
    return 0


def cmd_variety(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    gctx = GeoContext(g, ws.context(args.context), args.cap)
    a = variety_of(gctx, ws.pairs(args.pairs))
    _out(args, {"verb": "variety", "algebra": g.name, "count": len(a), "points": a})
    return 0


def cmd_closure(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    gctx = GeoContext(g, ws.context(args.context), args.cap)
    a = variety_of(gctx, ws.pairs(args.pairs))
    try:
        _, presentation = closed_congruence_presentation(a, args.cap)
        pres_out = presentation
    except ValueError:
        pres_out = None
    payload = {
        "verb": "closure",
        "algebra": g.name,
        "count": len(a),
        "presentation": pres_out,
    }
    code = 0
    if args.query:
        qpair = parse_inline_pair(args.query, ws.sig())
        member = congruence_of(a, args.cap).contains(qpair)
        payload["query"] = [render(qpair[0]), render(qpair[1])]
        payload["member"] = member
        code = 0 if member else 1
    _out(args, payload)
    return code


def cmd_nullsatz(args) -> int:
    ws = build_ws(args)
    h = ws.algebra(args.image)
    g = ws.algebra(args.target)
    ctx = ws.context(args.context)
    p = parse_point(args.assignment, ctx, h)
    k = KernelCongruence(h, ctx, p)
    rep = nullstellensatz_check(k, GeoContext(g, ctx, args.cap), args.cap)
    _out(args, {"verb": "nullsatz", "image": h.name, "target": g.name, "report": rep})
    return 0 if rep.agrees and rep.meet_agrees else 1


def cmd_point_closure(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    ctx = ws.context(args.context)
    gctx = GeoContext(g, ctx, args.cap)
    p = parse_point(args.point, ctx, g)
    pc = point_closure(gctx, p, args.cap)
    _out(
        args,
        {"verb": "point-closure", "algebra": g.name, "point": list(p), "count": len(pc), "points": pc},
    )
    return 0


def cmd_verbal(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    gctx = GeoContext(g, ws.context(args.context), args.cap)
    ictx = ws.context(args.ictx) if args.ictx else None
    v = verbal_variety(gctx, ws.pairs(args.pairs), ictx, args.cap)
    _out(args, {"verb": "verbal", "algebra": g.name, "count": len(v), "points": v})
    return 0


def cmd_morphism(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    a = variety_of(GeoContext(g, ws.context(args.ctx_a), args.cap), ws.pairs(args.pairs_a))
    b = variety_of(GeoContext(g, ws.context(args.ctx_b), args.cap), ws.pairs(args.pairs_b))
    s = parse_inline_subst(args.subst, ws.sig())
    rep = morphism_check(s, a, b)
    _out(args, {"verb": "morphism", "algebra": g.name, "subst": s, "report": rep})
    return 0 if rep.ok else 1


def cmd_iso(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    a = variety_of(GeoContext(g, ws.context(args.ctx_a), args.cap), ws.pairs(args.pairs_a))
    b = variety_of(GeoContext(g, ws.context(args.ctx_b), args.cap), ws.pairs(args.pairs_b))
    iso = variety_iso(a, b, args.cap, bound=args.bound)
    if iso is None:
        _out(args, {"verb": "iso", "algebra": g.name, "found": False})
        return 1
    _out(args, {"verb": "iso", "algebra": g.name, "found": True, "iso": iso})
    return 0


def cmd_equiv(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    h = ws.algebra(args.other)
    ctx = ws.context(args.context)
    verdict = geometric_equiv(
        g,
        h,
        ctx,
        mode=args.mode,
        seed=args.seed,
        samples=args.samples,
        depth=args.depth,
        cap=args.cap,
        max_points=args.max_points,
    )
    _out(
        args,
        {"verb": "equiv", "left": g.name, "right": h.name, "seed": args.seed, "verdict": verdict},
    )
    return 1 if isinstance(verdict, NotEquivalent) else 0


def cmd_derive(args) -> int:
    ws = build_ws(args)
    seeds = []
    if args.seeds:
        for name in args.seeds.split(","):
            seeds.append(ws.clause(name.strip()))
    if args.seed_pairs:
        for name in args.seed_pairs.split(","):
            seeds.extend(ws.pairs(name.strip()).pairs)
    if not seeds:
        raise SexprError("derive needs --seeds or --seed-pairs")
    ctx = ws.context(args.context) if args.context else None
    bounds = SaturationBounds(
        depth=args.depth, width=args.width, iterations=args.iterations, budget=args.budget
    )
    result = derive_closure(
        args.kind, seeds, ws.sig(), ctx=ctx, bounds=bounds, quackenbush=args.quackenbush
    )
    _out(args, {"verb": "derive", "kind": args.kind, "result": result})
    return 0


def cmd_query(args) -> int:
    ws = build_ws(args)
    g = ws.algebra(args.algebra)
    c = ws.clause(args.clause)
    ctx = ws.context(args.context) if args.context else None
    ok = holds_clause(g, c, ctx, args.cap)
    _out(args, {"verb": "query", "algebra": g.name, "clause": args.clause, "holds": ok})
    return 0 if ok else 1


def cmd_fo_variety(args) -> int:
    ws = build_ws(args)
    m = ws.model(args.model)
    ctx = ws.context(args.context)
    gctx = GeoContext(m.algebra, ctx, args.cap)
    formulas = [ws.formula(name.strip()) for name in args.formulas.split(",")]
    v = fo_variety(m, formulas, gctx)
    payload = {"verb": "fo-variety", "model": args.model, "count": len(v), "points": v}
    code = 0
    if args.closure_query:
        u = ws.formula(args.closure_query)
        member = fo_closure_member(m, formulas, u, gctx)
        payload["closure_query"] = args.closure_query
        payload["member"] = member
        code = 0 if member else 1
    _out(args, payload)
    return code


# check batteries: small seeded sweeps over the stock algebras


def _battery_galois(seed: int, trials: int, cap: Optional[int], failures: list[str]) -> None:
    for g in (cyclic_group(2), cyclic_group(4), klein_four()):
        ctx = VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])
        gctx = GeoContext(g, ctx, cap)
        pool = candidate_pairs(GROUP_SIG, ctx, depth=2, seed=seed, count=12)
        rng = random.Random((seed << 8) ^ int(g.digest(), 16) % (1 << 30))
        for trial in range(trials):
            t1 = PairSet(rng.sample(pool, min(rng.randint(0, 3), len(pool))))
            t2 = t1.union(PairSet(rng.sample(pool, min(rng.randint(0, 2), len(pool)))))
            a1, a2 = variety_of(gctx, t1), variety_of(gctx, t2)
            if not a2.issubset(a1):
                failures.append(f"galois antitone broke on {g.name} trial {trial}")
            k1 = congruence_of(a1, cap)
            if not all(k1.contains(p) for p in t1):
                failures.append(f"galois T within T'' broke on {g.name} trial {trial}")
            a1cc = closure_variety(a1, cap)
            if not a1.issubset(a1cc):
                failures.append(f"galois A within A'' broke on {g.name} trial {trial}")
            if closure_variety(a1cc, cap) != a1cc:
                failures.append(f"galois idempotence broke on {g.name} trial {trial}")


def _battery_nullsatz(seed: int, trials: int, cap: Optional[int], failures: list[str]) -> None:
    rng = random.Random(seed)
    pools = [
        [cyclic_group(2), cyclic_group(3), cyclic_group(4)],
        [chain_semilattice(2), chain_semilattice(3)],
    ]
    for pool in pools:
        sig = pool[0].sig
        ctx = VarContext(sig, [("x", sig.sorts[0]), ("y", sig.sorts[0])])
        for _ in range(trials):
            h = rng.choice(pool)
            g = rng.choice(pool)
            q = tuple(rng.randrange(h.sizes[s]) for _, s in ctx.vars)
            rep = nullstellensatz_check(kernel_of_point(q, h, ctx), GeoContext(g, ctx, cap), cap)
            if not (rep.agrees and rep.meet_agrees):
                failures.append(f"nullsatz disagreed: kernel {h.name}@{q} over {g.name}")


def _battery_halmos(seed: int, trials: int, cap: Optional[int], failures: list[str]) -> None:
    g = cyclic_group(2)
    ctx = VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])
    gctx = GeoContext(g, ctx, cap)
    n = len(gctx.points)
    values = [PointSet(gctx, [i for i in range(n) if mask >> i & 1]) for mask in range(1 << n)]
    subs = [
        Substitution({}),
        Substitution({"x": var("y"), "y": var("x")}),
        Substitution({"x": var("y")}),
        Substitution({"x": app("mul", var("x"), var("y"))}),
    ]
    for msg in halmos_axiom_violations(gctx, values, subs):
        failures.append(f"halmos: {msg}")


def _battery_rules(seed: int, trials: int, cap: Optional[int], failures: list[str]) -> None:
    from .rules import identity, pseudo, quasi, universal

    x, y = var("x"), var("y")
    comm = (app("mul", x, y), app("mul", y, x))
    sq = (app("mul", x, x), app("e"))
    pool = [cyclic_group(2), cyclic_group(3), klein_four(), symmetric_group_3()]
    seeds_by_kind = {
        "identity": [identity(comm)],
        "pseudo": [pseudo([sq])],
        "universal": [universal([comm], [])],
        "quasi": [quasi([sq], (x, app("inv", x)))],
    }
    bounds = SaturationBounds(depth=2, width=1, iterations=2, budget=1500)
    for kind in KINDS:
        seeds = seeds_by_kind[kind]
        result = derive_closure(kind, seeds, GROUP_SIG, bounds=bounds)
        for alg_name, clause in soundness_check(result.clauses, seeds, pool, cap=cap):
            failures.append(f"rules: {kind} derivation unsound on {alg_name}: {clause!r}")


def _battery_fundamental(seed: int, trials: int, cap: Optional[int], failures: list[str]) -> None:
    rng = random.Random(seed)
    g = symmetric_group_3()
    rel_sig = RelSignature(GROUP_SIG, [])
    m = Model(g, rel_sig, {})
    ctx = VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])
    for trial in range(trials):
        seeds = [(0, rng.randrange(g.sizes[0])) for _ in range(rng.randint(1, 2))]
        members = list(subalgebra_generated(g, seeds).members)
        u = None
        for _ in range(20):
            cand = random_formula(rng, GROUP_SIG, ctx, rel_sig=None, depth=2)
            if is_open(cand):
                u = cand
                break
        if u is None:
            continue
        rep = fundamental_check(m, members, u, ctx, cap)
        if rep.open_formula and rep.relation != "equal":
            failures.append(f"fundamental equality broke on trial {trial}: {rep.relation}")


_BATTERIES = {
    "galois": _battery_galois,
    "nullsatz": _battery_nullsatz,
    "halmos": _battery_halmos,
    "rules": _battery_rules,
    "fundamental": _battery_fundamental,
}


def cmd_check(args) -> int:
    names = list(_BATTERIES) if args.suite == "all" else [args.suite]
    failures: list[str] = []
    ran = []
    for name in names:
        before = len(failures)
        _BATTERIES[name](args.seed, args.trials, args.cap, failures)
        ran.append({"suite": name, "failures": len(failures) - before})
    payload = {
        "verb": "check",
        "seed": args.seed,
        "trials": args.trials,
        "suites": ran,
        "failures": failures,
        "ok": not failures,
    }
    _out(args, payload)
    return 0 if not failures else 1


def _experiment_filters(args) -> dict:
    g = cyclic_group(2)
    ctx = VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])
    gctx = GeoContext(g, ctx, args.cap)
    n = len(gctx.points)
    rows = []
    seen = set()
    for mask in range(1 << n):
        gen = PointSet(gctx, [i for i in range(n) if mask >> i & 1])
        fam = filter_generated([gen], gctx, args.cap)
        key = frozenset(ps.indices for ps in fam)
        fresh = key not in seen
        seen.add(key)
        rows.append(
            {
                "generator": [list(p) for p in gen.points()],
                "filter_size": len(fam),
                "proper": gctx.empty() not in fam,
                "is_filter": is_filter(fam, gctx, args.cap),
                "new": fresh,
            }
        )
    return {
        "space": f"{g.name}^{n}",
        "distinct_filters": len(seen),
        "proper_count": sum(1 for r in rows if r["proper"]),
        "rows": rows,
    }


def _experiment_submodels(args) -> dict:
    rng = random.Random(args.seed)
    g = symmetric_group_3()
    rel_sig = RelSignature(GROUP_SIG, [])
    m = Model(g, rel_sig, {})
    ctx = VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])
    counts: dict[str, dict[str, int]] = {}
    for _ in range(args.trials):
        seeds = [(0, rng.randrange(g.sizes[0])) for _ in range(rng.randint(1, 2))]
        members = list(subalgebra_generated(g, seeds).members)
        u = random_formula(rng, GROUP_SIG, ctx, rel_sig=None, depth=2)
        rep = fundamental_check(m, members, u, ctx, args.cap)
        klass = "open" if rep.open_formula else ("positive" if rep.positive_formula else "other")
        counts.setdefault(klass, {})
        counts[klass][rep.relation] = counts[klass].get(rep.relation, 0) + 1
    shaped = {k: dict(sorted(v.items())) for k, v in sorted(counts.items())}
    return {"model": g.name, "trials": args.trials, "relations": shaped}


def cmd_experiment(args) -> int:
    if args.name == "proper-filter-search":
        result = _experiment_filters(args)
    elif args.name == "submodel-closure":
        result = _experiment_submodels(args)
    else:
        raise SexprError(f"unknown experiment {args.name!r}")
    _out(args, {"verb": "experiment", "name": args.name, "seed": args.seed, "result": result})
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", action="append", help="workspace file (repeatable)")
    common.add_argument(
        "--builtin", choices=["group", "semilattice", "ring"], help="preload a stock library"
    )
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--cap", type=int, default=None, help="state-count guard")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=3)

    top = argparse.ArgumentParser(prog="uag", description=__doc__)
    sub = top.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(fn=fn)
        return p

    add("parse", cmd_parse, help="load workspace files and summarize")

    p = add("eval", cmd_eval, help="evaluate a term at a point")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--point", required=True, help="comma-separated values in context order")

    p = add("variety", cmd_variety, help="solution set of an equation set")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("-p", "--pairs", required=True)

    p = add("closure", cmd_closure, help="closure T'' of an equation set")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("-p", "--pairs", required=True)
    p.add_argument("--query", help="inline pair to test for membership in T''")

    p = add("nullsatz", cmd_nullsatz, help="two-route closure comparison for a point kernel")
    p.add_argument("--image", required=True, help="algebra receiving the presenting kernel")
    p.add_argument("--assignment", required=True, help="kernel point, comma-separated")
    p.add_argument("--target", required=True, help="algebra the geometry lives over")
    p.add_argument("-c", "--context", required=True)

    p = add("point-closure", cmd_point_closure, help="closure of a single point")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("--point", required=True)

    p = add("verbal", cmd_verbal, help="points whose image satisfies given identities")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("-p", "--pairs", required=True)
    p.add_argument("--ictx", help="context the identities are read in")

    p = add("morphism", cmd_morphism, help="check a substitution maps one variety into another")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("--ctx-a", required=True)
    p.add_argument("--pairs-a", required=True)
    p.add_argument("--ctx-b", required=True)
    p.add_argument("--pairs-b", required=True)
    p.add_argument("--subst", required=True, help="inline ((var term) ...)")

    p = add("iso", cmd_iso, help="search for a variety isomorphism")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("--ctx-a", required=True)
    p.add_argument("--pairs-a", required=True)
    p.add_argument("--ctx-b", required=True)
    p.add_argument("--pairs-b", required=True)
    p.add_argument("--bound", type=int, default=64)

    p = add("equiv", cmd_equiv, help="geometric equivalence of two algebras")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("-b", "--other", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--max-points", type=int, default=20)

    p = add("derive", cmd_derive, help="bounded saturation of closure rules")
    p.add_argument("--kind", choices=list(KINDS), required=True)
    p.add_argument("--seeds", help="comma-separated clause names")
    p.add_argument("--seed-pairs", help="comma-separated pairs names, lifted to clauses")
    p.add_argument("-c", "--context")
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--iterations", type=int, default=6)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--quackenbush", action="store_true")

    p = add("query", cmd_query, help="does a clause hold in an algebra")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("--clause", required=True)
    p.add_argument("-c", "--context")

    p = add("fo-variety", cmd_fo_variety, help="solution set of first-order formulas")
    p.add_argument("--model", required=True)
    p.add_argument("-c", "--context", required=True)
    p.add_argument("--formulas", required=True, help="comma-separated formula names")
    p.add_argument("--closure-query", help="formula name to test for closure membership")

    p = add("check", cmd_check, help="run internal consistency batteries")
    p.add_argument(
        "--suite",
        choices=["all"] + sorted(_BATTERIES),
        default="all",
    )
    p.add_argument("--trials", type=int, default=12)

    p = add("experiment", cmd_experiment, help="exploratory sweeps")
    p.add_argument(
        "--name", choices=["proper-filter-search", "submodel-closure"], required=True
    )
    p.add_argument("--trials", type=int, default=30)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SexprError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
