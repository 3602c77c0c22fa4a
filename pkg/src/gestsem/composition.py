"""Multimodal composition: [ling] lambda terms, [vis] vector constraints, evaluation."""

from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

from .annotation import parse_annotation
from .embed import EmbedOptions, embed
from .errors import (ClosureError, InvalidArgument, ModeMismatch, NoSpatialExtension, ParseError,
                     TypeClash)
from .iconic import IconicModel, Mode, format_traj, hsq_constraint, posture_model, vectorize
from .lexicon import LexEntry, Lexicon
from .scene import Entity, Scene

__all__ = [
    "Type", "Base", "Fn", "E", "S", "T",
    "Term", "Var", "Const", "App", "Lam", "And", "Not", "Exists", "Eq",
    "conj", "type_of", "free_vars", "beta_normalize", "alpha_equivalent", "format_term",
    "VisTerm", "LogicalForm", "Leaf", "GestureLeaf", "Node",
    "parse_utterance", "load_utterance", "strip_gesture", "format_tree",
    "check_domain", "compose", "Verdict", "Evaluation", "evaluate",
]


# -- types ---------------------------------------------------------------------

class Type:
    pass


@dataclass(frozen=True)
class Base(Type):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn(Type):
    arg: Type
    res: Type

    def __str__(self):
        return f"<{self.arg},{self.res}>"


E, S, T = Base("e"), Base("s"), Base("t")


# -- terms -----------------------------------------------------------------------

class Term:
    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str
    type: Type


@dataclass(frozen=True)
class Const(Term):
    name: str
    type: Type


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Lam(Term):
    var: Var
    body: Term


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Term):
    body: Term


@dataclass(frozen=True)
class Exists(Term):
    var: Var
    body: Term


@dataclass(frozen=True)
class Eq(Term):
    left: Term
    right: Term


def conj(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = And(out, t)
    return out


def type_of(t: Term) -> Type:
    if isinstance(t, (Var, Const)):
        return t.type
    if isinstance(t, App):
        f = type_of(t.fn)
        a = type_of(t.arg)
        if not isinstance(f, Fn) or f.arg != a:
            raise TypeClash(f"cannot apply {format_term(t.fn)} : {f} to {format_term(t.arg)} : {a}")
        return f.res
    if isinstance(t, Lam):
        return Fn(t.var.type, type_of(t.body))
    if isinstance(t, (And,)):
        for side in (t.left, t.right):
            if type_of(side) != T:
                raise TypeClash(f"conjunct {format_term(side)} is not of type t")
        return T
    if isinstance(t, Not):
        if type_of(t.body) != T:
            raise TypeClash("negation of a non-truth-valued term")
        return T
    if isinstance(t, Exists):
        if type_of(t.body) != T:
            raise TypeClash("existential over a non-truth-valued body")
        return T
    if isinstance(t, Eq):
        if type_of(t.left) != type_of(t.right):
            raise TypeClash(f"equation between {type_of(t.left)} and {type_of(t.right)}")
        return T
    raise TypeError(f"not a term: {t!r}")


def free_vars(t: Term) -> set[Var]:
    if isinstance(t, Var):
        return {t}
    if isinstance(t, Const):
        return set()
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, (Lam, Exists)):
        return free_vars(t.body) - {t.var}
    if isinstance(t, (And, Eq)):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, Not):
        return free_vars(t.body)
    raise TypeError(f"not a term: {t!r}")


def _names(t: Term) -> set[str]:
    if isinstance(t, (Var, Const)):
        return {t.name}
    if isinstance(t, App):
        return _names(t.fn) | _names(t.arg)
    if isinstance(t, (Lam, Exists)):
        return _names(t.body) | {t.var.name}
    if isinstance(t, (And, Eq)):
        return _names(t.left) | _names(t.right)
    return _names(t.body)


def _fresh(base: str, taken: set[str]) -> str:
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def substitute(t: Term, v: Var, s: Term) -> Term:
    """t[s/v], renaming binders that would capture free variables of s."""
    if isinstance(t, Var):
        return s if t == v else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(substitute(t.fn, v, s), substitute(t.arg, v, s))
    if isinstance(t, (And, Eq)):
        return type(t)(substitute(t.left, v, s), substitute(t.right, v, s))
    if isinstance(t, Not):
        return Not(substitute(t.body, v, s))
    # binders
    if t.var == v:
        return t
    body, var = t.body, t.var
    if var in free_vars(s) and v in free_vars(body):
        new = Var(_fresh(var.name, _names(body) | _names(s)), var.type)
        body = substitute(body, var, new)
        var = new
    return type(t)(var, substitute(body, v, s))


def beta_normalize(t: Term) -> Term:
    if isinstance(t, App):
        fn = beta_normalize(t.fn)
        arg = beta_normalize(t.arg)
        if isinstance(fn, Lam):
            return beta_normalize(substitute(fn.body, fn.var, arg))
        return App(fn, arg)
    if isinstance(t, (Lam, Exists)):
        return type(t)(t.var, beta_normalize(t.body))
    if isinstance(t, (And, Eq)):
        return type(t)(beta_normalize(t.left), beta_normalize(t.right))
    if isinstance(t, Not):
        return Not(beta_normalize(t.body))
    return t


def _conjuncts(t: Term) -> list[Term]:
    if isinstance(t, And):
        return _conjuncts(t.left) + _conjuncts(t.right)
    return [t]


def alpha_equivalent(a: Term, b: Term) -> bool:
    """Equality up to bound-variable names and bracketing of conjunctions."""

    def eq(x, y, env: dict, depth: int) -> bool:
        if isinstance(x, And) and isinstance(y, And):
            xs, ys = _conjuncts(x), _conjuncts(y)
            return len(xs) == len(ys) and all(eq(p, q, env, depth) for p, q in zip(xs, ys))
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            bx, by = env.get(("L", x)), env.get(("R", y))
            if bx is None and by is None:
                return x == y
            return bx == by
        if isinstance(x, Const):
            return x == y
        if isinstance(x, App):
            return eq(x.fn, y.fn, env, depth) and eq(x.arg, y.arg, env, depth)
        if isinstance(x, (Lam, Exists)):
            if x.var.type != y.var.type:
                return False
            inner = dict(env)
            inner[("L", x.var)] = depth
            inner[("R", y.var)] = depth
            return eq(x.body, y.body, inner, depth + 1)
        if isinstance(x, Eq):
            return eq(x.left, y.left, env, depth) and eq(x.right, y.right, env, depth)
        if isinstance(x, Not):
            return eq(x.body, y.body, env, depth)
        return False

    return eq(a, b, {}, 0)


def format_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return f"{format_term(t.fn)}({format_term(t.arg)})"
    if isinstance(t, Lam):
        if isinstance(t.body, Lam):
            return f"λ{t.var.name}.{format_term(t.body)}"
        return f"λ{t.var.name}[{format_term(t.body)}]"
    if isinstance(t, Exists):
        return f"∃{t.var.name}[{format_term(t.body)}]"
    if isinstance(t, And):
        return " ∧ ".join(format_term(c) for c in _conjuncts(t))
    if isinstance(t, Eq):
        return f"{format_term(t.left)}={format_term(t.right)}"
    if isinstance(t, Not):
        inner = format_term(t.body)
        return f"¬({inner})" if isinstance(t.body, And) else f"¬{inner}"
    raise TypeError(f"not a term: {t!r}")


# -- vis dimension -------------------------------------------------------------------

@dataclass(frozen=True)
class VisTerm:
    """A vector constraint. Unsaturated terms are lambdas over a vector variable."""

    relation: str  # "placepath" | "axis"
    anchor: str    # event variable or entity constant
    space: str     # "event" | "entity"
    var: str = "v"
    model: IconicModel | None = None
    closed: bool = False

    @property
    def saturated(self) -> bool:
        return self.model is not None

    def apply(self, model: IconicModel) -> "VisTerm":
        return replace(self, model=model)

    def close(self) -> "VisTerm":
        return self if self.saturated else replace(self, closed=True)

    def __str__(self):
        if self.saturated:
            return f"{self.relation}({self.anchor},{_format_model(self.model)})"
        body = (f"{self.relation}({self.anchor},{self.var})" if self.relation == "placepath"
                else f"{self.relation}({self.var},{self.anchor})")
        binder = "∃" if self.closed else "λ"
        return f"{binder}{self.var}∈space({self.anchor})[{body}]"


def _format_model(m: IconicModel) -> str:
    traj = format_traj(m)
    if len(m.traj) > 1:
        traj = f"({traj})"
    if not m.traj:
        traj = "0"
    out = traj + "·k"
    if not m.perspectival:
        out += "·R(θ)"
    if m.quoted_handshape:
        out += f" ∧ HSQ({m.hs})"
    return f"[{out}]"


@dataclass(frozen=True)
class LogicalForm:
    ling: Term
    vis: tuple[VisTerm, ...] = ()
    role_map: tuple[tuple[str, str], ...] = ()  # ling symbol -> thematic role

    def vis_strings(self) -> list[str]:
        return sorted(str(v) for v in self.vis)

    def __str__(self):
        return f"[ling] {format_term(self.ling)}\n[vis]  {{{', '.join(self.vis_strings())}}}"


# -- derivation trees ------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    cat: str
    lemma: str


@dataclass(frozen=True)
class GestureLeaf:
    model: IconicModel
    mode: Mode
    annotation: str | None = None
    id: str | None = None


@dataclass(frozen=True)
class Node:
    cat: str
    children: tuple = ()


def _tokens(text: str, source) -> Iterator[tuple[str, object, int, int]]:
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, ch, line, col
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col, source)
            yield "str", text[i + 1:j], line, col
            col += j + 1 - i
            i = j + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in '()";':
            j += 1
        yield "atom", text[i:j], line, col
        col += j - i
        i = j


def _sexpr(text: str, source):
    toks = list(_tokens(text, source))
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of input", source=source)
        kind, val, line, col = toks[pos]
        pos += 1
        if kind == "(":
            items = []
            while True:
                if pos >= len(toks):
                    raise ParseError("unclosed parenthesis", line, col, source)
                if toks[pos][0] == ")":
                    pos += 1
                    return (items, line, col)
                items.append(read())
        if kind == ")":
            raise ParseError("unexpected ')'", line, col, source)
        return (val, line, col)

    out = read()
    if pos != len(toks):
        raise ParseError("trailing input after utterance", toks[pos][2], toks[pos][3], source)
    return out


def _default_resolver(base_dir):
    def resolve(name: str) -> str:
        if base_dir is not None:
            cand = os.path.join(base_dir, name)
            if os.path.exists(cand):
                with open(cand, encoding="utf-8") as fh:
                    return fh.read()
        from . import fixtures
        try:
            return fixtures.read_text(name)
        except FileNotFoundError:
            raise InvalidArgument(f"annotation file not found: {name}") from None
    return resolve


def _gesture(items, line, col, resolve, source) -> GestureLeaf:
    opts = {}
    rest = items[1:]
    if len(rest) % 2:
        raise ParseError("gesture options come in :key value pairs", line, col, source)
    for (k, kl, kc), (v, _, _) in zip(rest[::2], rest[1::2]):
        if not isinstance(k, str) or not k.startswith(":"):
            raise ParseError(f"expected a :keyword, got {k!r}", kl, kc, source)
        opts[k[1:]] = v
    if "annotation" not in opts:
        raise ParseError("gesture needs an :annotation", line, col, source)
    try:
        mode = Mode(opts.get("mode", "drawing"))
    except ValueError:
        raise ParseError(f"unknown gesture mode {opts.get('mode')!r}", line, col, source) from None
    persp = opts.get("perspectival", "false")
    if persp not in ("true", "false"):
        raise ParseError(f":perspectival must be true or false, got {persp!r}", line, col, source)
    records = parse_annotation(resolve(opts["annotation"]), source=opts["annotation"])
    gid = opts.get("id")
    picked = [r for r in records if gid is None or r.id == gid]
    if not picked:
        raise ParseError(f"no annotation record with id {gid!r}", line, col, source)
    ann = picked[0]
    if ann.is_static and mode is Mode.ACTING:
        model = posture_model(ann)
    else:
        model = vectorize(ann, mode, persp == "true")
    return GestureLeaf(model, mode, opts["annotation"], gid)


def parse_utterance(text: str, base_dir=None, resolver: Callable[[str], str] | None = None,
                    source: str | None = None):
    """Parse an s-expression derivation tree.

    ``(S (PRON he) (VP (MM (V throw) (gesture :annotation "throw.ann" :mode acting))
    (NP dagger)))``
    """
    resolve = resolver or _default_resolver(base_dir)

    def build(sx):
        items, line, col = sx
        if not isinstance(items, list):
            raise ParseError(f"expected a bracketed node, got {items!r}", line, col, source)
        if not items or not isinstance(items[0][0], str):
            raise ParseError("node without a category", line, col, source)
        cat = items[0][0]
        if cat == "gesture":
            return _gesture(items, line, col, resolve, source)
        if len(items) == 2 and isinstance(items[1][0], str):
            return Leaf(cat, items[1][0])
        return Node(cat, tuple(build(c) for c in items[1:]))

    tree = build(_sexpr(text, source))
    if sum(1 for _ in _gestures(tree)) > 1:
        raise ParseError("only one gesture per utterance is supported", source=source)
    return tree


def load_utterance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_utterance(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)),
                               source=str(path))


def _gestures(tree):
    if isinstance(tree, GestureLeaf):
        yield tree
    elif isinstance(tree, Node):
        for c in tree.children:
            yield from _gestures(c)


def strip_gesture(tree):
    """The same derivation with the gesture leaf removed."""
    if isinstance(tree, Node):
        kids = tuple(strip_gesture(c) for c in tree.children if not isinstance(c, GestureLeaf))
        if len(kids) == 1 and len(tree.children) == 2 and any(
                isinstance(c, GestureLeaf) for c in tree.children):
            return kids[0]
        return Node(tree.cat, kids)
    return tree


def format_tree(tree) -> str:
    if isinstance(tree, Leaf):
        return f"({tree.cat} {tree.lemma})"
    if isinstance(tree, GestureLeaf):
        return f"(gesture {tree.mode.value} {format_traj(tree.model)})"
    return f"({tree.cat} " + " ".join(format_tree(c) for c in tree.children) + ")"


# -- composition -------------------------------------------------------------------

_SPACE_MODES = {
    "event": {Mode.DRAWING, Mode.ACTING},
    "entity": {Mode.DRAWING, Mode.MOLDING},
}

_VAR_NAMES = ("x", "y", "w", "z")
EVENT_VAR = Var("e", S)


def check_domain(mode: Mode | str, space: str) -> bool:
    return Mode(mode) in _SPACE_MODES[space]


def _verb(entry: LexEntry):
    e = EVENT_VAR
    vars_ = [Var(_VAR_NAMES[i], E) for i in range(len(entry.roles))]
    parts: list[Term] = [App(Const(entry.ling, Fn(S, T)), e)]
    for (role, sym), v in zip(entry.roles, vars_):
        parts.append(Eq(App(Const(sym, Fn(S, E)), e), v))
    term: Term = Lam(e, conj(*parts))
    for v in vars_:  # first role ends up innermost
        term = Lam(v, term)
    vis = [VisTerm("placepath", e.name, "event", "v") for c in entry.vis if c.kind == "place-path"]
    return term, vis


def _leaf_sem(leaf: Leaf, lex: Lexicon):
    entry = lex.lookup(leaf.lemma)
    roles = [(sym, role) for role, sym in entry.roles]
    if leaf.cat.startswith("V"):
        ling, vis = _verb(entry)
    else:
        ling = Const(entry.lemma, E)
        vis = [VisTerm("axis", entry.lemma, "entity", "u") for c in entry.vis if c.kind == "axis"]
    return ling, vis, roles


def _apply(a: Term, b: Term) -> Term:
    ta, tb = type_of(a), type_of(b)
    if isinstance(ta, Fn) and ta.arg == tb:
        return beta_normalize(App(a, b))
    if isinstance(tb, Fn) and tb.arg == ta:
        return beta_normalize(App(b, a))
    raise TypeClash(f"neither {format_term(a)} : {ta} nor {format_term(b)} : {tb} applies to the other")


def _compose(node, lex):
    if isinstance(node, Leaf):
        return _leaf_sem(node, lex)
    if isinstance(node, GestureLeaf):
        raise InvalidArgument("a gesture must be the daughter of a multimodal node")
    gestures = [c for c in node.children if isinstance(c, GestureLeaf)]
    speech = [c for c in node.children if not isinstance(c, GestureLeaf)]
    parts = [_compose(c, lex) for c in speech]
    roles = [r for p in parts for r in p[2]]
    if gestures:
        if len(speech) != 1:
            raise InvalidArgument("a multimodal node has one speech and one gesture daughter")
        g = gestures[0]
        ling, vis, _ = parts[0]
        for i, v in enumerate(vis):
            if not v.saturated and check_domain(g.mode, v.space):
                vis = vis[:i] + [v.apply(g.model)] + vis[i + 1:]
                return ling, vis, roles
        spaces = sorted({v.space for v in vis}) or ["none"]
        raise ModeMismatch(f"{g.mode.value} gesture is not in the domain of the affiliate's "
                           f"vector meaning (space: {', '.join(spaces)})")
    if len(parts) == 1:
        return parts[0]
    if len(parts) != 2:
        raise InvalidArgument(f"node {node.cat} has {len(parts)} daughters; trees are binary")
    (la, va, _), (lb, vb, _) = parts
    return _apply(la, lb), va + [v for v in vb if v not in va], roles


CLOSURE_R = Var("R", Fn(S, T))
CLOSURE_C = Lam(CLOSURE_R, Exists(EVENT_VAR, App(CLOSURE_R, EVENT_VAR)))


def compose(tree, lex: Lexicon) -> LogicalForm:
    ling, vis, roles = _compose(tree, lex)
    type_of(ling)
    if isinstance(tree, Node) and tree.cat == "S" and type_of(ling) == Fn(S, T):
        ling = beta_normalize(App(CLOSURE_C, ling))
        vis = [v.close() for v in vis]
    return LogicalForm(ling, tuple(sorted(vis, key=str)), tuple(sorted(set(roles))))


# -- evaluation ----------------------------------------------------------------------

class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class Evaluation:
    verdict: Verdict
    assignment: dict | None = None
    diagnostics: tuple[str, ...] = ()

    def __str__(self):
        lines = [f"verdict: {self.verdict.value}"]
        if self.assignment:
            lines.append("witness: " + ", ".join(f"{k}={v}" for k, v in self.assignment.items()))
        lines.extend(self.diagnostics)
        return "\n".join(lines)


def _domain(s: Scene, ty: Type):
    if ty == S:
        return [ev.id for ev in s.events]
    if ty == E:
        return [en.id for en in s.entities]
    raise ClosureError(f"cannot quantify over type {ty}")


class _Model:
    def __init__(self, scene: Scene, roles: dict):
        self.s = scene
        self.roles = roles

    def value(self, t: Term, env: dict):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise ClosureError(f"unbound variable {t.name}") from None
        if isinstance(t, Const):
            if t.type == E:
                return t.name
            raise ClosureError(f"constant {t.name} has no denotation of type {t.type}")
        if isinstance(t, App) and isinstance(t.fn, Const):
            arg = self.value(t.arg, env)
            item = self.s._index.get(arg)
            if t.fn.type == Fn(S, T):
                return getattr(item, "pred", None) == t.fn.name
            if t.fn.type == Fn(E, T):
                return isinstance(item, Entity) and item.sort == t.fn.name
            if t.fn.type == Fn(S, E):
                role = self.roles.get(t.fn.name, t.fn.name)
                return item.role(role) if hasattr(item, "role") else None
        return self.holds(t, env)

    def holds(self, t: Term, env: dict) -> bool:
        if isinstance(t, And):
            return self.holds(t.left, env) and self.holds(t.right, env)
        if isinstance(t, Not):
            return not self.holds(t.body, env)
        if isinstance(t, Eq):
            a, b = self.value(t.left, env), self.value(t.right, env)
            return a is not None and a == b
        if isinstance(t, Exists):
            return any(self.holds(t.body, {**env, t.var.name: d}) for d in _domain(self.s, t.var.type))
        if isinstance(t, App):
            return bool(self.value(t, env))
        raise ClosureError(f"term {format_term(t)} is not a closed formula")


def _vis_check(v: VisTerm, s: Scene, env: dict, opts: EmbedOptions):
    """Returns (ok, embedding_failed, message)."""
    ref = env.get(v.anchor, v.anchor)
    item = s._index.get(ref)
    if item is None:
        raise ClosureError(f"vis anchor {v.anchor!r} is neither bound nor a scene entity")
    if v.space == "event":
        path = getattr(item, "place_path", None)
    else:
        path = item.main_axis if isinstance(item, Entity) else None
    if path is None:
        return False, False, f"{v}: {ref} has no spatial extension"
    if not v.saturated:
        return True, False, ""
    if v.model.traj:
        res = embed(v.model, s.to_speaker(path), opts)
        if not res.success:
            return False, True, f"{v}: no embedding ({res.diagnostics.reason})"
    if v.model.quoted_handshape and v.space == "event":
        if not hsq_constraint(v.model)(item):
            return False, False, (f"{v}: handshape {v.model.hs} does not quote "
                                  f"{item.manner_handshape or 'unrecorded'} of {ref}")
    return True, False, ""


def evaluate(lf: LogicalForm, s: Scene, opts: EmbedOptions | None = None) -> Evaluation:
    """Finite model checking of a closed multimodal logical form."""
    opts = opts or EmbedOptions()
    free = free_vars(lf.ling)
    if free:
        raise ClosureError("unbound variables: " + ", ".join(sorted(v.name for v in free)))
    if type_of(lf.ling) != T:
        raise ClosureError(f"logical form has type {type_of(lf.ling)}, not t; close it first")
    binders = []
    body = lf.ling
    while isinstance(body, Exists):
        binders.append(body.var)
        body = body.body
    model = _Model(s, dict(lf.role_map))
    bound = {b.name for b in binders}
    for v in lf.vis:
        if v.space == "event" and v.anchor not in bound:
            raise ClosureError(f"vis anchor {v.anchor!r} is not bound in [ling]")

    diags: list[str] = []
    ling_witnesses = 0
    embed_failed_all = True
    for values in itertools.product(*(_domain(s, b.type) for b in binders)):
        env = dict(zip((b.name for b in binders), values))
        if not model.holds(body, env):
            continue
        ling_witnesses += 1
        label = ", ".join(f"{k}={v}" for k, v in env.items()) or "(no witnesses)"
        ok_all, embed_fail = True, False
        for v in lf.vis:
            ok, ef, msg = _vis_check(v, s, env, opts)
            if not ok:
                ok_all = False
                embed_fail = embed_fail or ef
                diags.append(f"{label}: {msg}")
        if ok_all:
            return Evaluation(Verdict.TRUE, env, tuple(diags))
        embed_failed_all = embed_failed_all and embed_fail
    if ling_witnesses == 0:
        return Evaluation(Verdict.FALSE, None, ("[ling] not satisfied in the scene",))
    if embed_failed_all:
        return Evaluation(Verdict.MISMATCH, None, tuple(diags))
    return Evaluation(Verdict.FALSE, None, tuple(diags))
