"""Syntactic derivation for identities and their clause-shaped relatives.

Four clause kinds share one carrier: an identity is a single equation, a
pseudoidentity a disjunction of equations, a universal clause a disjunction
of equations and negated equations, and a quasi-identity an implication with
a conjunction of premises. Saturation is bounded (term depth, clause width,
iteration and candidate budgets) and only ever under-approximates semantic
consequence, so everything derived stays sound; the exhausted flag reports
when a budget, not a fixpoint, stopped the run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .algebras import FiniteAlgebra, enumerate_points, eval_term, inferred_context
from .congruences import EMPTY_PAIRS, Pair, PairSet, ground_closure, normalize_pair
from .terms import (
    Substitution,
    Term,
    app,
    apply_subst,
    sort_of,
    subterm_universe,
    term_depth,
    term_key,
    var,
)

KINDS = ("identity", "pseudo", "universal", "quasi")


@dataclass(frozen=True)
class Clause:
    kind: str
    cons: Optional[Pair] = None
    pos: PairSet = EMPTY_PAIRS
    neg: PairSet = EMPTY_PAIRS
    ante: PairSet = EMPTY_PAIRS

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown clause kind {self.kind!r}")
        if self.kind == "identity":
            if self.cons is None or len(self.pos) or len(self.neg) or len(self.ante):
                raise ValueError("an identity is a single equation")
            object.__setattr__(self, "cons", normalize_pair(self.cons))
        elif self.kind == "pseudo":
            if self.cons is not None or len(self.neg) or len(self.ante) or not len(self.pos):
                raise ValueError("a pseudoidentity is a nonempty disjunction of equations")
        elif self.kind == "universal":
            if self.cons is not None or len(self.ante) or not (len(self.pos) or len(self.neg)):
                raise ValueError("a universal clause needs at least one literal")
        else:
            if len(self.pos) or len(self.neg):
                raise ValueError("a quasi-identity has premises and one conclusion")
            if self.cons is not None:
                object.__setattr__(self, "cons", normalize_pair(self.cons))

    def terms(self) -> list[Term]:
        out: list[Term] = []
        for ps in (self.pos, self.neg, self.ante):
            for w, w2 in ps:
                out.extend((w, w2))
        if self.cons is not None:
            out.extend(self.cons)
        return out

    def key(self):
        def pk(ps):
            return tuple((term_key(a), term_key(b)) for a, b in ps)

        ck = ((),) if self.cons is None else (term_key(self.cons[0]), term_key(self.cons[1]))
        return (self.kind, ck, pk(self.pos), pk(self.neg), pk(self.ante))

    def __repr__(self) -> str:
        from .terms import render

        def fmt(ps, sep):
            return sep.join(f"{render(a)}={render(b)}" for a, b in ps)

        if self.kind == "identity":
            return f"<{render(self.cons[0])} = {render(self.cons[1])}>"
        if self.kind == "pseudo":
            return f"<{fmt(self.pos, ' | ')}>"
        if self.kind == "universal":
            negs = " | ".join(f"not({render(a)}={render(b)})" for a, b in self.neg)
            mid = " | " if len(self.pos) and len(self.neg) else ""
            return f"<{fmt(self.pos, ' | ')}{mid}{negs}>"
        head = "false" if self.cons is None else f"{render(self.cons[0])}={render(self.cons[1])}"
        return f"<{fmt(self.ante, ' & ')} -> {head}>"


def identity(pair: Pair) -> Clause:
    return Clause("identity", cons=pair)


def pseudo(pairs: Iterable[Pair]) -> Clause:
    return Clause("pseudo", pos=PairSet(pairs))


def universal(pos: Iterable[Pair], neg: Iterable[Pair]) -> Clause:
    return Clause("universal", pos=PairSet(pos), neg=PairSet(neg))


def quasi(ante: Iterable[Pair], cons: Optional[Pair]) -> Clause:
    return Clause("quasi", ante=PairSet(ante), cons=cons)


def holds_clause(g: FiniteAlgebra, c: Clause, ctx=None, cap: Optional[int] = None) -> bool:
    """Truth of the clause under every assignment into g."""
    if ctx is None:
        ctx = inferred_context(g.sig, c.terms())
    for p in enumerate_points(ctx, g, cap):
        memo: dict = {}

        def eq(pair) -> bool:
            w, w2 = pair
            return eval_term(w, p, g, ctx, memo) == eval_term(w2, p, g, ctx, memo)

        if c.kind == "identity":
            if not eq(c.cons):
                return False
        elif c.kind == "pseudo":
            if not any(eq(q) for q in c.pos):
                return False
        elif c.kind == "universal":
            if not (any(eq(q) for q in c.pos) or any(not eq(q) for q in c.neg)):
                return False
        else:
            if all(eq(q) for q in c.ante):
                if c.cons is None or not eq(c.cons):
                    return False
    return True


def rho_membership(premises: Iterable[Pair], query: Pair, extra_terms: Iterable[Term] = ()) -> bool:
    """Is the query a ground consequence of the premise equations?

    Variables are treated as opaque constants, which under-approximates full
    equational consequence; every rule that consults this stays sound.
    """
    gc = ground_closure(PairSet(premises), extra_terms)
    return gc.contains(query)


def circ_pseudo_member(premises: Sequence[Clause], candidate: Clause, choice_cap: int = 10**6) -> bool:
    """The composition test: every choice of one disjunct per premise must
    ground-derive some disjunct of the candidate."""
    lists = [list(u.pos) for u in premises]
    count = 1
    for l in lists:
        count *= len(l)
        if count > choice_cap:
            return False
    for chosen in itertools.product(*lists):
        gc = ground_closure(PairSet(chosen))
        if not any(gc.contains(q) for q in candidate.pos):
            return False
    return True


def circ_universal_member(premises: Sequence[Clause], candidate: Clause, choice_cap: int = 10**6) -> bool:
    """Composition for mixed clauses: each premise contributes either one of
    its equations (kept as a premise) or one of its negated equations (kept
    as a goal); the candidate's negated side always joins the premises."""
    lists = []
    for u in premises:
        tagged = [("+", q) for q in u.pos] + [("-", q) for q in u.neg]
        lists.append(tagged)
    count = 1
    for l in lists:
        count *= len(l)
        if count > choice_cap:
            return False
    for chosen in itertools.product(*lists):
        prem = list(candidate.neg) + [q for tag, q in chosen if tag == "+"]
        goals = list(candidate.pos) + [q for tag, q in chosen if tag == "-"]
        gc = ground_closure(PairSet(prem))
        if not any(gc.contains(q) for q in goals):
            return False
    return True


@dataclass(frozen=True)
class SaturationBounds:
    depth: int = 2
    width: int = 2
    iterations: int = 6
    budget: int = 20000


@dataclass(frozen=True)
class DeriveResult:
    clauses: tuple[Clause, ...]
    exhausted: bool
    rounds: int

    def __contains__(self, c: Clause) -> bool:
        return c in set(self.clauses)


class _Budget:
    __slots__ = ("left", "exhausted")

    def __init__(self, n: int):
        self.left = n
        self.exhausted = False

    def spend(self) -> bool:
        if self.left <= 0:
            self.exhausted = True
            return False
        self.left -= 1
        return True


def _pair_universe(terms: Sequence[Term], sig, ctx, limit: int) -> list[Pair]:
    """Same-sort pairs over a term list, deduplicated, deterministic order."""
    by_sort: dict[int, list[Term]] = {}
    for t in sorted(set(terms), key=term_key):
        by_sort.setdefault(sort_of(t, sig, ctx), []).append(t)
    out: list[Pair] = []
    seen: set[tuple[int, int]] = set()
    for ts in by_sort.values():
        for a, b in itertools.combinations(ts, 2):
            a, b = normalize_pair((a, b))
            if (id(a), id(b)) not in seen:
                seen.add((id(a), id(b)))
                out.append((a, b))
                if len(out) >= limit:
                    return out
    return out


def _subterms_of(clauses: Iterable[Clause]) -> list[Term]:
    return subterm_universe(t for c in clauses for t in c.terms())


def term_universe(sig, ctx, depth: int, limit: int = 4000) -> list[Term]:
    """All well-sorted terms of bounded depth, in layered deterministic order."""
    layer: list[Term] = [var(name) for name, _ in ctx.vars]
    seen: set[int] = set(id(t) for t in layer)
    out = list(layer)
    for _ in range(depth):
        new: list[Term] = []
        for op in sig.ops:
            pools = [[t for t in out if sort_of(t, sig, ctx) == s] for s in op.args]
            for combo in itertools.product(*pools):
                t = app(op.name, *combo)
                if id(t) not in seen:
                    seen.add(id(t))
                    new.append(t)
                    if len(out) + len(new) >= limit:
                        out.extend(new)
                        return out
        out.extend(new)
        if not new:
            break
    return out


def _max_depth(c: Clause) -> int:
    return max((term_depth(t) for t in c.terms()), default=0)


def derive_closure(
    kind: str,
    seeds: Iterable,
    sig,
    ctx=None,
    bounds: SaturationBounds = SaturationBounds(),
    quackenbush: bool = False,
) -> DeriveResult:
    """Bounded saturation of the derivation rules for one clause kind.

    Seeds may be raw pairs (lifted to the kind's simplest clause) or Clauses.
    Derived clauses beyond the depth bound are dropped rather than kept, so a
    completed run is a fixpoint of the depth-bounded rule system. Falsum
    conclusions are only admitted with quackenbush=True.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown clause kind {kind!r}")
    clauses: list[Clause] = []
    for s in seeds:
        if isinstance(s, Clause):
            c = s
            if c.kind != kind:
                raise ValueError(f"seed kind {c.kind!r} does not match {kind!r}")
        elif kind == "identity":
            c = identity(s)
        elif kind == "pseudo":
            c = pseudo([s])
        elif kind == "universal":
            c = universal([s], [])
        else:
            c = quasi([], s)
        if c.kind == "quasi" and c.cons is None and not quackenbush:
            raise ValueError("falsum conclusions need quackenbush=True")
        clauses.append(c)
    if ctx is None:
        ctx = inferred_context(sig, [t for c in clauses for t in c.terms()])
    budget = _Budget(bounds.budget)
    current: dict[Clause, None] = dict.fromkeys(clauses)
    rounds = 0
    if kind == "identity":
        step = _step_identity
    elif kind == "pseudo":
        step = _step_pseudo
    elif kind == "universal":
        step = _step_universal
    else:
        step = _step_quasi
    base = _subterms_of(current)
    for _ in range(bounds.iterations):
        rounds += 1
        fresh = step(list(current), sig, ctx, bounds, budget, base, quackenbush)
        added = False
        for c in fresh:
            if c not in current:
                current[c] = None
                added = True
        if not added or budget.exhausted:
            break
    ordered = sorted(current, key=lambda c: c.key())
    return DeriveResult(tuple(ordered), budget.exhausted, rounds)


def _step_identity(cur, sig, ctx, bounds, budget, base, _qk) -> list[Clause]:
    pairs = [c.cons for c in cur]
    out: list[Clause] = []

    def keep(w, w2):
        if w is w2:
            return
        if max(term_depth(w), term_depth(w2)) > bounds.depth:
            return
        out.append(identity((w, w2)))

    # reflexive consequences are left implicit; storing w=w clauses would
    # bloat the result without adding information
    partners: dict[Term, list[Term]] = {}
    for a, b in pairs:
        partners.setdefault(a, []).append(b)
        partners.setdefault(b, []).append(a)
    for a in sorted(partners, key=term_key):
        for b in partners[a]:
            for c in partners.get(b, ()):
                if not budget.spend():
                    return out
                keep(a, c)
    for op in sig.ops:
        if op.arity == 0 or op.arity > 2:
            continue
        sorted_pairs = [
            [(w, w2) for (w, w2) in pairs if sort_of(w, sig, ctx) == s] for s in op.args
        ]
        for combo in itertools.product(*sorted_pairs):
            if not budget.spend():
                return out
            keep(
                app(op.name, *[w for w, _ in combo]),
                app(op.name, *[w2 for _, w2 in combo]),
            )
    universe = term_universe(sig, ctx, bounds.depth)
    for name, s in ctx.vars:
        for t in universe:
            if sort_of(t, sig, ctx) != s or (getattr(t, "name", None) == name):
                continue
            sub = Substitution({name: t})
            for w, w2 in pairs:
                if not budget.spend():
                    return out
                keep(apply_subst(sub, w), apply_subst(sub, w2))
    return out


def _weakenings(c: Clause, extras: Sequence[Pair], width: int, budget) -> list[Clause]:
    out = []
    for take in range(1, width + 1):
        for combo in itertools.combinations(extras, take):
            if not budget.spend():
                return out
            if c.kind == "pseudo":
                out.append(pseudo(list(c.pos) + list(combo)))
            else:
                out.append(universal(list(c.pos) + list(combo), c.neg))
    return out


def _step_pseudo(cur, sig, ctx, bounds, budget, base, _qk) -> list[Clause]:
    out: list[Clause] = []
    extras = _pair_universe(base, sig, ctx, limit=8)
    for c in cur:
        if _max_depth(c) <= bounds.depth:
            out.extend(_weakenings(c, extras, min(bounds.width, 1), budget))
    candidates = [pseudo([q]) for q in _pair_universe(base, sig, ctx, limit=24)]
    seen = set(cur)
    for cand in candidates:
        if cand in seen:
            continue
        for k in (1, 2, 3):
            hit = False
            for prem in itertools.combinations(cur, k):
                if not budget.spend():
                    return out
                if circ_pseudo_member(prem, cand):
                    out.append(cand)
                    hit = True
                    break
            if hit:
                break
    return out


def _step_universal(cur, sig, ctx, bounds, budget, base, _qk) -> list[Clause]:
    out: list[Clause] = []
    extras = _pair_universe(base, sig, ctx, limit=6)
    for c in cur:
        if _max_depth(c) <= bounds.depth:
            out.extend(_weakenings(c, extras, min(bounds.width, 1), budget))
    qs = _pair_universe(base, sig, ctx, limit=12)
    candidates = [universal([q], []) for q in qs]
    candidates += [universal([q], [r]) for q in qs[:6] for r in qs[:6] if q != r]
    seen = set(cur)
    for cand in candidates:
        if cand in seen:
            continue
        for k in (1, 2):
            hit = False
            for prem in itertools.combinations(cur, k):
                if not budget.spend():
                    return out
                if circ_universal_member(prem, cand):
                    out.append(cand)
                    hit = True
                    break
            if hit:
                break
    return out


def _step_quasi(cur, sig, ctx, bounds, budget, base, quackenbush) -> list[Clause]:
    out: list[Clause] = []
    ante_cap = max((len(c.ante) for c in cur), default=0) + bounds.width

    def keep(ante: PairSet, cons: Optional[Pair]):
        if len(ante) > ante_cap:
            return
        if cons is not None and max(term_depth(cons[0]), term_depth(cons[1])) > bounds.depth:
            return
        if cons is None and not quackenbush:
            return
        if cons is not None and cons[0] is cons[1]:
            return
        out.append(quasi(ante, cons))

    antes = sorted({c.ante for c in cur}, key=lambda ps: tuple(term_key(a) for a, _ in ps))
    for ante in antes:
        for q in ante:
            if not budget.spend():
                return out
            keep(ante, q)
    by_ante: dict[PairSet, list[Clause]] = {}
    for c in cur:
        by_ante.setdefault(c.ante, []).append(c)
    for ante, group in by_ante.items():
        eqs = [c.cons for c in group if c.cons is not None]
        partners: dict[Term, list[Term]] = {}
        for a, b in eqs:
            partners.setdefault(a, []).append(b)
            partners.setdefault(b, []).append(a)
        for a in sorted(partners, key=term_key):
            for b in partners[a]:
                for c2 in partners.get(b, ()):
                    if not budget.spend():
                        return out
                    if a is not c2:
                        keep(ante, (a, c2))
        for op in sig.ops:
            if op.arity == 0 or op.arity > 2:
                continue
            pools = [
                [(w, w2) for (w, w2) in eqs if sort_of(w, sig, ctx) == s] for s in op.args
            ]
            for combo in itertools.product(*pools):
                if not budget.spend():
                    return out
                keep(
                    ante,
                    (
                        app(op.name, *[w for w, _ in combo]),
                        app(op.name, *[w2 for _, w2 in combo]),
                    ),
                )
    for c1 in cur:
        if c1.cons is None:
            continue
        for c2 in cur:
            if c1.cons in c2.ante:
                if not budget.spend():
                    return out
                rest = PairSet(q for q in c2.ante if q != normalize_pair(c1.cons))
                keep(c1.ante.union(rest), c2.cons)
    return out


def soundness_check(
    derived: Iterable[Clause],
    seeds: Iterable[Clause],
    pool: Iterable[FiniteAlgebra],
    ctx=None,
    cap: Optional[int] = None,
) -> list[tuple[str, Clause]]:
    """Violations of derived clauses in pool algebras that satisfy the seeds."""
    derived, seeds = list(derived), list(seeds)
    violations = []
    for g in pool:
        if all(holds_clause(g, c, ctx, cap) for c in seeds):
            for c in derived:
                if not holds_clause(g, c, ctx, cap):
                    violations.append((g.name, c))
    return violations
