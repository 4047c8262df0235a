"""S-expression file format for signatures, algebras, equations and formulas.

A workspace file is a sequence of top-level forms; later forms may refer to
names introduced by earlier ones. Comments run from a semicolon to the end
of the line.

    (sort g)
    (op mul (g g) g)
    (op e () g)
    (algebra Z2 (carrier g 2) (table mul (0 0 0) (0 1 1) (1 0 1) (1 1 0)) (table e (0)))
    (context C (x g) (y g))          ; or (context C x y) when single-sorted
    (pairs T ((mul x x) e) (x y))
    (rel-sig (P g))
    (model M Z2 (rel P (1)))
    (formula q (exists (y) (not (eq x y))))
    (clause c1 identity ((mul x y) (mul y x)))
    (clause c2 pseudo (x e) (y e))
    (clause c3 universal (pos (x y)) (neg (x e)))
    (clause c4 quasi (ante ((mul x x) e)) (cons x (inv x)))

In terms, a bare atom is the application of a nullary operation if one of
that name exists, otherwise a variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .algebras import FiniteAlgebra
from .congruences import Pair, PairSet
from .logic import (
    And,
    Eq,
    Exists,
    Formula,
    Model,
    Not,
    Or,
    Rel,
    RelSignature,
    exists_f,
    forall_f,
)
from .rules import Clause, identity, pseudo, quasi, universal
from .terms import App, Signature, Term, Var, VarContext, app, render, var


class SexprError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


Node = Union[Atom, list]


def tokenize(src: str) -> list[Atom]:
    out: list[Atom] = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and src[i] != "\n":
                i += 1
        elif ch in "()":
            out.append(Atom(ch, line, col))
            col += 1
            i += 1
        else:
            start, scol = i, col
            while i < n and src[i] not in " \t\r\n();":
                i += 1
                col += 1
            out.append(Atom(src[start:i], line, scol))
    return out


def parse_nodes(src: str) -> list[Node]:
    tokens = tokenize(src)
    pos = 0

    def walk() -> Node:
        nonlocal pos
        tok = tokens[pos]
        if tok.text == "(":
            pos += 1
            items: list[Node] = []
            while True:
                if pos >= len(tokens):
                    raise SexprError("unclosed parenthesis", tok.line, tok.col)
                if tokens[pos].text == ")":
                    pos += 1
                    return items
                items.append(walk())
        if tok.text == ")":
            raise SexprError("unexpected ')'", tok.line, tok.col)
        pos += 1
        return tok

    out: list[Node] = []
    while pos < len(tokens):
        out.append(walk())
    return out


def _head(node: Node) -> str:
    if not isinstance(node, list) or not node or not isinstance(node[0], Atom):
        raise SexprError("expected a form starting with a symbol", *_pos(node))
    return node[0].text


def _pos(node: Node) -> tuple[int, int]:
    while isinstance(node, list):
        if not node:
            return (0, 0)
        node = node[0]
    return (node.line, node.col)


def _atom(node: Node, what: str) -> str:
    if not isinstance(node, Atom):
        raise SexprError(f"expected {what}", *_pos(node))
    return node.text


def _int(node: Node, what: str) -> int:
    text = _atom(node, what)
    try:
        return int(text)
    except ValueError:
        raise SexprError(f"expected an integer {what}, got {text!r}", node.line, node.col)


class Workspace:
    """Named definitions accumulated from workspace files."""

    def __init__(self):
        self.sorts: list[str] = []
        self.op_decls: list[tuple[str, tuple[str, ...], str]] = []
        self._sig: Optional[Signature] = None
        self.algebras: dict[str, FiniteAlgebra] = {}
        self.contexts: dict[str, VarContext] = {}
        self.pairsets: dict[str, PairSet] = {}
        self.formulas: dict[str, Formula] = {}
        self.models: dict[str, Model] = {}
        self.clauses: dict[str, Clause] = {}
        self.rel_decls: list[tuple[str, tuple[str, ...]]] = []
        self._rel_sig: Optional[RelSignature] = None

    def sig(self) -> Signature:
        if self._sig is None:
            if not self.sorts:
                raise SexprError("no (sort ...) declared before it was needed")
            self._sig = Signature(self.sorts, self.op_decls)
        return self._sig

    def rel_sig(self) -> RelSignature:
        if self._rel_sig is None:
            self._rel_sig = RelSignature(self.sig(), self.rel_decls)
        return self._rel_sig

    def algebra(self, name: str) -> FiniteAlgebra:
        return self._get(self.algebras, name, "algebra")

    def context(self, name: str) -> VarContext:
        return self._get(self.contexts, name, "context")

    def pairs(self, name: str) -> PairSet:
        return self._get(self.pairsets, name, "pairs")

    def formula(self, name: str) -> Formula:
        return self._get(self.formulas, name, "formula")

    def model(self, name: str) -> Model:
        return self._get(self.models, name, "model")

    def clause(self, name: str) -> Clause:
        return self._get(self.clauses, name, "clause")

    @staticmethod
    def _get(table: dict, name: str, what: str):
        if name not in table:
            known = ", ".join(sorted(table)) or "none defined"
            raise SexprError(f"unknown {what} {name!r} (known: {known})")
        return table[name]


def parse_term(node: Node, sig: Signature) -> Term:
    if isinstance(node, Atom):
        text = node.text
        if text.lstrip("-").isdigit():
            raise SexprError("a bare number is not a term", node.line, node.col)
        if sig.has_op(text):
            op = sig.op(text)
            if op.arity != 0:
                raise SexprError(
                    f"operation {text!r} takes {op.arity} arguments", node.line, node.col
                )
            return app(text)
        return var(text)
    if not node:
        raise SexprError("empty term")
    name = _atom(node[0], "an operation name")
    if not sig.has_op(name):
        raise SexprError(f"unknown operation {name!r}", node[0].line, node[0].col)
    op = sig.op(name)
    if len(node) - 1 != op.arity:
        raise SexprError(
            f"operation {name!r} takes {op.arity} arguments, got {len(node) - 1}",
            node[0].line,
            node[0].col,
        )
    return app(name, *[parse_term(a, sig) for a in node[1:]])


def parse_pair(node: Node, sig: Signature) -> Pair:
    if not isinstance(node, list) or len(node) != 2:
        raise SexprError("expected a pair (term term)", *_pos(node))
    return (parse_term(node[0], sig), parse_term(node[1], sig))


def parse_formula(node: Node, ws: Workspace) -> Formula:
    sig = ws.sig()
    if isinstance(node, Atom):
        if node.text == "true":
            return And(())
        if node.text == "false":
            return Or(())
        raise SexprError(f"bare formula atom {node.text!r}", node.line, node.col)
    head = _head(node)
    body = node[1:]
    if head == "eq":
        if len(body) != 2:
            raise SexprError("(eq term term)", *_pos(node))
        return Eq(parse_term(body[0], sig), parse_term(body[1], sig))
    if head == "rel":
        if not body:
            raise SexprError("(rel name term...)", *_pos(node))
        name = _atom(body[0], "a relation name")
        ws.rel_sig().arity(name)
        return Rel(name, tuple(parse_term(t, sig) for t in body[1:]))
    if head == "and":
        return And(tuple(parse_formula(f, ws) for f in body))
    if head == "or":
        return Or(tuple(parse_formula(f, ws) for f in body))
    if head == "not":
        if len(body) != 1:
            raise SexprError("(not formula)", *_pos(node))
        return Not(parse_formula(body[0], ws))
    if head in ("exists", "forall"):
        if len(body) != 2 or not isinstance(body[0], list):
            raise SexprError(f"({head} (vars) formula)", *_pos(node))
        names = [_atom(v, "a variable") for v in body[0]]
        inner = parse_formula(body[1], ws)
        return exists_f(names, inner) if head == "exists" else forall_f(names, inner)
    raise SexprError(f"unknown formula head {head!r}", *_pos(node))


def _parse_algebra(node: list, ws: Workspace) -> None:
    name = _atom(node[1], "an algebra name")
    sig = ws.sig()
    sizes = [0] * len(sig.sorts)
    seen_sizes = [False] * len(sig.sorts)
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    for form in node[2:]:
        head = _head(form)
        if head == "carrier":
            if len(form) != 3:
                raise SexprError("(carrier sort size)", *_pos(form))
            s = sig.sort_index(_atom(form[1], "a sort name"))
            sizes[s] = _int(form[2], "carrier size")
            seen_sizes[s] = True
        elif head == "table":
            opname = _atom(form[1], "an operation name")
            if not sig.has_op(opname):
                raise SexprError(f"unknown operation {opname!r}", *_pos(form))
            op = sig.op(opname)
            rows: dict[tuple[int, ...], int] = {}
            for row in form[2:]:
                if not isinstance(row, list) or len(row) != op.arity + 1:
                    raise SexprError(
                        f"table row for {opname!r} needs {op.arity + 1} integers",
                        *_pos(row),
                    )
                vals = [_int(x, "a table entry") for x in row]
                rows[tuple(vals[:-1])] = vals[-1]
            tables[opname] = rows
        else:
            raise SexprError(f"unknown algebra form {head!r}", *_pos(form))
    for s, ok in enumerate(seen_sizes):
        if not ok:
            raise SexprError(f"algebra {name!r} missing (carrier {sig.sorts[s]} ...)")
    ws.algebras[name] = FiniteAlgebra(sig, sizes, tables, name=name)


def _parse_context(node: list, ws: Workspace) -> None:
    name = _atom(node[1], "a context name")
    sig = ws.sig()
    decls = []
    for v in node[2:]:
        if isinstance(v, Atom):
            if len(sig.sorts) != 1:
                raise SexprError(
                    "bare context variables need a single-sorted signature", v.line, v.col
                )
            decls.append((v.text, sig.sorts[0]))
        else:
            if len(v) != 2:
                raise SexprError("(var sort)", *_pos(v))
            decls.append((_atom(v[0], "a variable"), _atom(v[1], "a sort")))
    ws.contexts[name] = VarContext(sig, decls)


def _parse_model(node: list, ws: Workspace) -> None:
    name = _atom(node[1], "a model name")
    alg = ws.algebra(_atom(node[2], "an algebra name"))
    rel_sig = ws.rel_sig()
    rels: dict[str, list[tuple[int, ...]]] = {}
    for form in node[3:]:
        if _head(form) != "rel":
            raise SexprError("model forms are (rel name rows...)", *_pos(form))
        rname = _atom(form[1], "a relation name")
        rows = []
        for row in form[2:]:
            if not isinstance(row, list):
                raise SexprError("a relation row is a list of integers", *_pos(row))
            rows.append(tuple(_int(x, "a relation entry") for x in row))
        rels.setdefault(rname, []).extend(rows)
    ws.models[name] = Model(alg, rel_sig, rels, name=name)


def _parse_clause(node: list, ws: Workspace) -> None:
    name = _atom(node[1], "a clause name")
    kind = _atom(node[2], "a clause kind")
    sig = ws.sig()
    body = node[3:]
    if kind == "identity":
        if len(body) != 1:
            raise SexprError("(clause name identity (t1 t2))", *_pos(node))
        ws.clauses[name] = identity(parse_pair(body[0], sig))
        return
    if kind == "pseudo":
        ws.clauses[name] = pseudo([parse_pair(p, sig) for p in body])
        return
    if kind == "universal":
        pos_pairs: list[Pair] = []
        neg_pairs: list[Pair] = []
        for form in body:
            head = _head(form)
            if head == "pos":
                pos_pairs.extend(parse_pair(p, sig) for p in form[1:])
            elif head == "neg":
                neg_pairs.extend(parse_pair(p, sig) for p in form[1:])
            else:
                raise SexprError("universal clause forms are (pos ...) and (neg ...)", *_pos(form))
        ws.clauses[name] = universal(pos_pairs, neg_pairs)
        return
    if kind == "quasi":
        ante: list[Pair] = []
        cons: Optional[Pair] = None
        saw_cons = False
        for form in body:
            head = _head(form)
            if head == "ante":
                ante.extend(parse_pair(p, sig) for p in form[1:])
            elif head == "cons":
                saw_cons = True
                if len(form) == 2 and isinstance(form[1], Atom) and form[1].text == "false":
                    cons = None
                elif len(form) == 3:
                    cons = (parse_term(form[1], sig), parse_term(form[2], sig))
                else:
                    raise SexprError("(cons t1 t2) or (cons false)", *_pos(form))
            else:
                raise SexprError("quasi clause forms are (ante ...) and (cons ...)", *_pos(form))
        if not saw_cons:
            raise SexprError("quasi clause needs a (cons ...) form", *_pos(node))
        ws.clauses[name] = quasi(ante, cons)
        return
    raise SexprError(f"unknown clause kind {kind!r}", *_pos(node))


def load_workspace(src: str, base: Optional[Workspace] = None) -> Workspace:
    ws = base if base is not None else Workspace()
    for node in parse_nodes(src):
        head = _head(node)
        if head == "sort":
            sname = _atom(node[1], "a sort name")
            if ws._sig is not None:
                raise SexprError("sorts must be declared before algebras or terms")
            ws.sorts.append(sname)
        elif head == "op":
            if ws._sig is not None:
                raise SexprError("operations must be declared before algebras or terms")
            if len(node) != 4 or not isinstance(node[2], list):
                raise SexprError("(op name (argsorts...) result)", *_pos(node))
            ws.op_decls.append(
                (
                    _atom(node[1], "an operation name"),
                    tuple(_atom(a, "a sort name") for a in node[2]),
                    _atom(node[3], "a sort name"),
                )
            )
        elif head == "algebra":
            _parse_algebra(node, ws)
        elif head == "context":
            _parse_context(node, ws)
        elif head == "pairs":
            name = _atom(node[1], "a pairs name")
            ws.pairsets[name] = PairSet(parse_pair(p, ws.sig()) for p in node[2:])
        elif head == "rel-sig":
            if ws._rel_sig is not None:
                raise SexprError("relations must be declared before models or formulas")
            for form in node[1:]:
                if not isinstance(form, list) or not form:
                    raise SexprError("(rel-sig (name sorts...) ...)", *_pos(form))
                ws.rel_decls.append(
                    (
                        _atom(form[0], "a relation name"),
                        tuple(_atom(s, "a sort name") for s in form[1:]),
                    )
                )
        elif head == "model":
            _parse_model(node, ws)
        elif head == "formula":
            name = _atom(node[1], "a formula name")
            ws.formulas[name] = parse_formula(node[2], ws)
        elif head == "clause":
            _parse_clause(node, ws)
        else:
            raise SexprError(f"unknown form {head!r}", *_pos(node))
    return ws


def load_files(paths: Sequence[str]) -> Workspace:
    ws = Workspace()
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            src = fh.read()
        try:
            load_workspace(src, ws)
        except SexprError as e:
            raise SexprError(f"{path}:{e}") from e
    return ws


def print_term(t: Term) -> str:
    return render(t)


def print_pair(p: Pair) -> str:
    return f"({render(p[0])} {render(p[1])})"


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(eq {render(f.lhs)} {render(f.rhs)})"
    if isinstance(f, Rel):
        inner = " ".join(render(t) for t in f.args)
        return f"(rel {f.name} {inner})" if inner else f"(rel {f.name})"
    if isinstance(f, And):
        if not f.items:
            return "true"
        return "(and " + " ".join(print_formula(g) for g in f.items) + ")"
    if isinstance(f, Or):
        if not f.items:
            return "false"
        return "(or " + " ".join(print_formula(g) for g in f.items) + ")"
    if isinstance(f, Not):
        return f"(not {print_formula(f.body)})"
    assert isinstance(f, Exists)
    return f"(exists ({' '.join(f.ys)}) {print_formula(f.body)})"


def parse_inline_term(text: str, sig: Signature) -> Term:
    nodes = parse_nodes(text)
    if len(nodes) != 1:
        raise SexprError("expected exactly one term")
    return parse_term(nodes[0], sig)


def parse_inline_pair(text: str, sig: Signature) -> Pair:
    nodes = parse_nodes(text)
    if len(nodes) == 1:
        return parse_pair(nodes[0], sig)
    if len(nodes) == 2:
        return (parse_term(nodes[0], sig), parse_term(nodes[1], sig))
    raise SexprError("expected a pair of terms")


def parse_inline_subst(text: str, sig: Signature):
    from .terms import Substitution

    nodes = parse_nodes(text)
    if len(nodes) == 1 and isinstance(nodes[0], list) and nodes[0] and isinstance(nodes[0][0], list):
        nodes = nodes[0]
    bindings = {}
    for form in nodes:
        if not isinstance(form, list) or len(form) != 2:
            raise SexprError("substitution entries are (var term)", *_pos(form))
        bindings[_atom(form[0], "a variable")] = parse_term(form[1], sig)
    return Substitution(bindings)
