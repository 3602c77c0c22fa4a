"""Informational evaluation of gestures.

A gesture is labelled with every predicate it *extemplifies*: the predicate's
CVM accepts the iconic model and the gesture's features (including virtual,
presupposed ones) map one-to-one onto the predicate's arguments. A label
that differs from the affiliate is related to it through a frame element
found by frame evocation.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .composition import LogicalForm, Leaf, Node, compose, format_term, strip_gesture
from .embed import EmbedOptions, embed
from .errors import (AmbiguousResolution, InvalidArgument, LexiconError, ResolutionMismatch,
                     StaleLabel)
from .geometry import Closure, OrientingLevel, Path3, closure_of
from .iconic import IconicModel, realize
from .lexicon import FEATURES, LexEntry, Lexicon, MatchMode, cvm_score

__all__ = [
    "Bijection",
    "Labeling",
    "gesture_features",
    "extemplify",
    "extemplify_report",
    "ConditionedInterpretation",
    "conditioned_interpret",
    "Pred",
    "FrameOf",
    "Equation",
    "DrsLite",
    "evoke",
    "evoke_and_resolve",
    "KindReading",
    "kind_check",
    "format_drs",
]


@dataclass(frozen=True)
class Bijection:
    pairs: tuple[tuple[str, str], ...]  # (gesture feature, predicate argument)

    def __post_init__(self):
        feats = [f for f, _ in self.pairs]
        args = [a for _, a in self.pairs]
        if len(set(feats)) != len(feats) or len(set(args)) != len(args):
            raise InvalidArgument("bijection pairs must be duplicate-free on both sides")
        for f in feats:
            if f not in FEATURES:
                raise InvalidArgument(f"unknown gesture feature {f!r}")

    def as_dict(self) -> dict[str, str]:
        return dict(self.pairs)

    def __str__(self):
        return "{" + ", ".join(f"{f}↦{a}" for f, a in self.pairs) + "}"


@dataclass(frozen=True)
class Labeling:
    predicate: str
    bijection: Bijection
    conventionality: int
    relation_R: str | None = None  # None: unresolved; "identity" or a frame element
    model: IconicModel | None = field(default=None, compare=False, repr=False)

    def __str__(self):
        r = self.relation_R or "?"
        return f"{self.predicate} {self.bijection} (conventionality {self.conventionality}, R={r})"


def gesture_features(m: IconicModel) -> frozenset[str]:
    """Form and visually presupposed features, except the per-entry CVM match."""
    feats = set()
    if m.quoted_handshape:
        feats.add("speaker-as-agent")
        if m.traj and m.closure is Closure.OPEN:
            # a stopped acting movement continues virtually and carries something
            feats.update({"virtual-object", "virtual-trajectory"})
    if not m.traj and m.between_hands:
        feats.update({"virtual-object", "free-ride-distance"})
    return frozenset(feats)


def _check(entry: LexEntry, m: IconicModel, feats) -> tuple[Bijection | None, list[str]]:
    reasons = []
    if entry.cvm is None:
        reasons.append(f"there is no {entry.lemma}-CVM")
    elif not cvm_score(entry.cvm, m):
        reasons.append(f"{entry.cvm.name} does not match")
    ex = entry.exemplification
    if ex is None:
        reasons.append("no exemplification table")
        return None, reasons
    available = set(feats)
    if entry.cvm is not None and cvm_score(entry.cvm, m):
        available.add("cvm-match")
    mapping = dict(ex.mapping)
    for feat in mapping:
        if feat not in available and feat != "cvm-match":  # already reported above
            reasons.append(f"feature {feat} not available")
    unmapped = [a for a in ex.args if a not in mapping.values()]
    if unmapped:
        reasons.append("argument " + ", ".join(unmapped) + " unmapped")
    if len(set(mapping.values())) != len(mapping):
        reasons.append("mapping is not injective")
    if reasons:
        return None, reasons
    order = {a: i for i, a in enumerate(ex.args)}
    pairs = sorted(mapping.items(), key=lambda fa: order[fa[1]])
    return Bijection(tuple(pairs)), []


def extemplify_report(m: IconicModel, lex: Lexicon):
    """Candidates plus, for every other CVM-bearing or exemplifiable entry, why it failed."""
    feats = gesture_features(m)
    found, rejected = [], {}
    for entry in lex:
        if entry.cvm is None and entry.exemplification is None:
            continue
        bij, reasons = _check(entry, m, feats)
        if bij is None:
            rejected[entry.lemma] = reasons
        else:
            found.append((entry.lemma, bij))
    n = len(found)
    labels = [Labeling(lemma, bij, n, None, m) for lemma, bij in found]
    labels.sort(key=lambda lb: (lb.conventionality, lb.predicate))
    return labels, rejected


def extemplify(m: IconicModel, lex: Lexicon) -> list[Labeling]:
    return extemplify_report(m, lex)[0]


# -- conditioned interpretation ---------------------------------------------------

@dataclass(frozen=True)
class ConditionedInterpretation:
    lf: LogicalForm
    predicate: str
    affiliate: str
    relation: str | None  # "identity" or None (R = ?)

    @property
    def term(self) -> str:
        if self.relation == "identity":
            return format_term(self.lf.ling)
        return f"R({self.predicate},{self.affiliate})"

    def __str__(self):
        if self.relation == "identity":
            return f"{self.term}  (R = identity)"
        return f"{format_term(self.lf.ling)}  [{self.term}, R=?]"


def _lemmas(tree):
    if isinstance(tree, Leaf):
        yield tree.lemma
    elif isinstance(tree, Node):
        for c in tree.children:
            yield from _lemmas(c)


def conditioned_interpret(utterance, affiliate: str, label: Labeling,
                          lex: Lexicon) -> ConditionedInterpretation:
    if label.model is None or label not in extemplify(label.model, lex):
        raise StaleLabel(f"label {label.predicate!r} is not an extemplification of its gesture")
    if affiliate not in set(_lemmas(utterance)):
        raise InvalidArgument(f"affiliate {affiliate!r} does not occur in the utterance")
    lf = compose(strip_gesture(utterance), lex)
    rel = "identity" if label.predicate == affiliate else None
    return ConditionedInterpretation(lf, label.predicate, affiliate, rel)


# -- frame evocation -------------------------------------------------------------------

@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class FrameOf:
    event: str
    frame: str

    def __str__(self):
        return f"{self.event} : {self.frame}"


@dataclass(frozen=True)
class Equation:
    lhs: str
    rhs: str | Pred | None  # None is the open slot "?"

    def __str__(self):
        return f"{self.lhs}={'?' if self.rhs is None else self.rhs}"


Cond = Pred | FrameOf | Equation


def _refs(c) -> set[str]:
    if isinstance(c, Pred):
        return set(c.args)
    if isinstance(c, FrameOf):
        return {c.event}
    out = {c.lhs}
    if isinstance(c.rhs, str):
        out.add(c.rhs)
    elif isinstance(c.rhs, Pred):
        out |= set(c.rhs.args)
    return out


@dataclass(frozen=True)
class DrsLite:
    lambdas: tuple[str, ...]
    universe: tuple[str, ...]
    implicit: tuple[str, ...]
    rows: tuple[tuple[Cond, ...], ...]
    resolved: str | None = None  # frame element that hosts the gesture predicate

    def __post_init__(self):
        declared = set(self.universe) | set(self.implicit)
        for row in self.rows:
            for c in row:
                missing = _refs(c) - declared
                if missing:
                    raise InvalidArgument(f"condition {c} uses undeclared referents {sorted(missing)}")

    @property
    def conditions(self) -> list[Cond]:
        return [c for row in self.rows for c in row]

    def slot(self, element: str) -> tuple[Cond, ...]:
        for row in self.rows:
            if isinstance(row[0], Pred) and row[0].name == element:
                return row
        raise KeyError(element)

    def __str__(self):
        return format_drs(self)


@dataclass(frozen=True)
class _PredSpec:
    lemma: str
    sort: str
    roles: tuple[tuple[str, str], ...] = ()


_ROLE_VARS = ("x", "y", "w", "v")


def _overt(entry: LexEntry):
    if entry.is_eventive:
        vars_ = {role: _ROLE_VARS[i] for i, (role, _) in enumerate(entry.roles)}
        lambdas = tuple(reversed(vars_.values())) + ("e",)
        return vars_, lambdas
    return {"self": "x"}, ("x",)


def evoke(entry: LexEntry, lex: Lexicon) -> DrsLite:
    """Frame-extended content of *entry* with every non-core slot open."""
    if not entry.frames:
        raise LexiconError(f"{entry.lemma} evokes no frame")
    vars_, lambdas = _overt(entry)
    universe = lambdas
    implicit: list[str] = []
    prefix = "z" if entry.is_eventive else "y"
    if not entry.is_eventive:
        implicit.append("e")
    rows: list[tuple] = []
    n = 0
    own = Pred(entry.ling, ("e",) if entry.is_eventive else ("x",))
    for fname in entry.frames:
        frame = lex.frame(fname)
        rows.append((FrameOf("e", frame.name),))
        if entry.is_eventive:
            rows.append((own,))
        for core in frame.core:
            ref = vars_.get(core.role, vars_.get("self", "x"))
            rows.append((Pred(core.name, ("e", ref)),))
        if not entry.is_eventive:
            rows.append((own,))
        for el in frame.non_core:
            n += 1
            ref = f"{prefix}{n}"
            implicit.append(ref)
            rows.append((Pred(el.name, ("e", ref)), Equation(ref, None)))
    return DrsLite(lambdas, universe, tuple(implicit), tuple(rows))


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def evoke_and_resolve(affiliate: LexEntry, p, lex: Lexicon) -> DrsLite:
    """Resolve R(p, affiliate) to the unique non-core element whose sort fits p."""
    if isinstance(p, LexEntry):
        spec = _PredSpec(p.lemma, p.sort or "", p.roles)
        ling = p.ling
    else:
        lemma, sort = p
        spec = _PredSpec(lemma, sort)
        ling = lemma
    drs = evoke(affiliate, lex)
    hosts = [el for fname in affiliate.frames for el in lex.frame(fname).non_core
             if el.sort == spec.sort]
    if not hosts:
        raise ResolutionMismatch(affiliate.lemma, spec.lemma, spec.sort)
    if len(hosts) > 1:
        raise AmbiguousResolution(affiliate.lemma, spec.lemma, [h.name for h in hosts])
    host = hosts[0]
    vars_, _ = _overt(affiliate)
    anchor = "e" if affiliate.is_eventive else "x"
    universe = list(drs.universe)
    taken = set(drs.universe) | set(drs.implicit)
    rows = []
    extra_rows = []
    for row in drs.rows:
        head = row[0]
        if not (isinstance(head, Pred) and head.name == host.name):
            rows.append(row)
            continue
        slot = head.args[1]
        if spec.sort == "property":
            z = _fresh("z", taken)
            universe.append(z)
            rows.append((head, Equation(slot, Pred(ling, (z,))), Equation(z, anchor)))
        elif spec.sort == "means-event":
            ev = _fresh("e'", taken)
            universe.append(ev)
            rows.append((head, Equation(slot, Pred(ling, (ev,))), Equation(ev, "e")))
            p_roles = dict(spec.roles)
            for role in host.shares:
                if role in p_roles and role in vars_:
                    v = vars_[role]
                    vp = _fresh(v + "'", taken | set(universe))
                    universe.append(vp)
                    extra_rows.append((Pred(role, (ev, vp)), Equation(vp, v)))
        else:
            rows.append((head, Equation(slot, Pred(ling, ("e",)))))
    return DrsLite(drs.lambdas, tuple(universe), drs.implicit, tuple(rows + extra_rows), host.name)


def format_drs(d: DrsLite) -> str:
    head = ", ".join(d.universe)
    if d.implicit:
        head += " | " + ", ".join(d.implicit)
    body = []
    for row in d.rows:
        body.append(", ".join(str(c) for c in row))
    width = max([len(head)] + [len(b) for b in body]) + 2
    lam = "".join(f"λ{v}." for v in d.lambdas)
    out = [lam, "┌" + "─" * width + "┐", "│ " + head.ljust(width - 1) + "│",
           "├" + "─" * width + "┤"]
    out += ["│ " + b.ljust(width - 1) + "│" for b in body]
    out.append("└" + "─" * width + "┘")
    return "\n".join(out)


# -- kind-denoting gestures ----------------------------------------------------------

class KindReading(enum.Enum):
    TOKEN = "token-reading"
    KIND = "kind-reading"
    NONE = "no-reading"


def _instances(label_entry: LexEntry, hs: str):
    c = label_entry.cvm
    if c is None or not c.traj:
        return
    slots = [i for i, a in enumerate(c.traj) if a is None]
    for fill in itertools.product(list(OrientingLevel), repeat=len(slots)):
        traj = list(c.traj)
        for i, lvl in zip(slots, fill):
            traj[i] = lvl
        m = IconicModel(hs, tuple(traj), c.connectors, Closure.OPEN,
                        perspectival=c.match_mode is MatchMode.PERSPECTIVAL,
                        quoted_handshape=c.requires_quotation)
        closure = c.closure or closure_of(realize(m))
        yield IconicModel(hs, m.traj, m.connectors, closure, m.perspectival, m.quoted_handshape)


def kind_check(m: IconicModel, label: Labeling | None, target: Path3, lex: Lexicon,
               opts: EmbedOptions | None = None) -> KindReading:
    """Token reading if *m* embeds; kind reading if some model with the same label does."""
    opts = opts or EmbedOptions()
    if embed(m, target, opts).success:
        return KindReading.TOKEN
    if label is None or label.predicate not in lex:
        return KindReading.NONE
    for proto in _instances(lex.lookup(label.predicate), m.hs):
        if embed(proto, target, opts).success:
            return KindReading.KIND
    return KindReading.NONE
