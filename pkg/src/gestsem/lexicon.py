"""Lexical entries, conceptual vector meanings (CVMs) and frames.

The lexicon is a JSON document with two top-level lists, ``frames`` and
``entries``. A CVM trajectory pattern uses the iconic text notation with
``*`` as a wildcard atom, e.g. ``"*⊥*"`` or ``"UP∘FT∘-UP"``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .errors import LexiconError, NotFound, ParseError
from .geometry import Closure, OrientingLevel, rotate
from .iconic import Connector, IconicModel, allowed_rotation_axes, atom_vector

__all__ = [
    "FEATURES",
    "MatchMode",
    "CvmTemplate",
    "VisConstraint",
    "Exemplification",
    "LexEntry",
    "CoreElement",
    "FrameElement",
    "Frame",
    "Lexicon",
    "cvm_score",
    "parse_lexicon",
    "load_lexicon",
    "default_lexicon",
    "serialize_lexicon",
    "format_pattern",
]

# gesture features available to a bijection
FEATURES = ("cvm-match", "speaker-as-agent", "virtual-object", "virtual-trajectory",
            "free-ride-distance")

VIS_KINDS = ("place-path", "axis")


class MatchMode(enum.Enum):
    ROTATION_FREE = "rotation-free"
    PERSPECTIVAL = "perspectival"


@dataclass(frozen=True)
class CvmTemplate:
    name: str
    traj: tuple[OrientingLevel | None, ...]  # None is a wildcard
    connectors: tuple[Connector, ...]
    closure: Closure | None = None  # None: either
    requires_quotation: bool = False
    match_mode: MatchMode = MatchMode.ROTATION_FREE

    def __post_init__(self):
        if not self.traj and not self.requires_quotation:
            raise LexiconError(f"{self.name}: empty template must require quotation")
        if len(self.connectors) != max(len(self.traj) - 1, 0):
            raise LexiconError(f"{self.name}: connector count does not fit trajectory")

    @property
    def wildcards(self) -> int:
        return sum(a is None for a in self.traj)


@dataclass(frozen=True)
class VisConstraint:
    kind: str
    role: str | None = None


@dataclass(frozen=True)
class Exemplification:
    args: tuple[str, ...]
    mapping: tuple[tuple[str, str], ...]  # feature -> argument


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    cat: str
    ling: str
    roles: tuple[tuple[str, str], ...] = ()  # (role, ling symbol), in argument order
    vis: tuple[VisConstraint, ...] = ()
    cvm: CvmTemplate | None = None
    frames: tuple[str, ...] = ()
    mode_affinity: str = "entity-space"
    sort: str | None = None
    exemplification: Exemplification | None = None

    @property
    def role_names(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.roles)

    @property
    def is_eventive(self) -> bool:
        return self.mode_affinity == "event-space"


@dataclass(frozen=True)
class CoreElement:
    name: str
    sort: str
    role: str  # affiliate role filling it; "self" for the described individual


@dataclass(frozen=True)
class FrameElement:
    name: str
    sort: str
    shares: tuple[str, ...] = ()  # roles an event filler shares with the frame event


@dataclass(frozen=True)
class Frame:
    name: str
    core: tuple[CoreElement, ...]
    non_core: tuple[FrameElement, ...]

    def __post_init__(self):
        names = [c.name for c in self.core] + [n.name for n in self.non_core]
        if len(set(names)) != len(names):
            raise LexiconError(f"frame {self.name}: duplicate element names")


class Lexicon:
    def __init__(self, entries, frames=()):
        self._entries: dict[str, LexEntry] = {}
        self._frames: dict[str, Frame] = {}
        for f in frames:
            if f.name in self._frames:
                raise LexiconError(f"duplicate frame {f.name!r}")
            self._frames[f.name] = f
        for e in entries:
            if e.lemma in self._entries:
                raise LexiconError(f"duplicate lemma {e.lemma!r}")
            declared = set(e.role_names)
            for v in e.vis:
                if v.role is not None and v.role not in declared:
                    raise LexiconError(
                        f"{e.lemma}: vis constraint mentions undeclared role {v.role!r}")
            for name in e.frames:
                if name not in self._frames:
                    raise LexiconError(f"{e.lemma}: unknown frame {name!r}")
            self._entries[e.lemma] = e

    def lookup(self, lemma: str) -> LexEntry:
        try:
            return self._entries[lemma]
        except KeyError:
            raise NotFound(f"no lexical entry for {lemma!r}") from None

    def __contains__(self, lemma) -> bool:
        return lemma in self._entries

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda e: e.lemma))

    def __len__(self):
        return len(self._entries)

    def frame(self, name: str) -> Frame:
        try:
            return self._frames[name]
        except KeyError:
            raise NotFound(f"no frame {name!r}") from None

    @property
    def frames(self) -> tuple[Frame, ...]:
        return tuple(self._frames.values())


# -- CVM matching ----------------------------------------------------------------

def _unit(v):
    n = v.norm()
    return v * (1.0 / n)


def _aligned(pairs, axis, theta, tol) -> bool:
    for m, t in pairs:
        if axis is not None:
            m = rotate(m, axis, theta)
        if m.dot(t) < math.cos(tol):
            return False
    return True


def cvm_score(c: CvmTemplate, m: IconicModel, tol: float = 1e-6) -> int:
    """Binary classifier: 1 iff *m* instantiates the template."""
    if c.requires_quotation and not m.quoted_handshape:
        return 0
    if len(c.traj) != len(m.traj) or c.connectors != m.connectors:
        return 0
    if c.closure is not None and c.closure is not m.closure:
        return 0
    pairs = [(_unit(atom_vector(a)), lvl.unit) for a, lvl in zip(m.traj, c.traj) if lvl is not None]
    if not pairs:
        return 1
    if _aligned(pairs, None, 0.0, tol):
        return 1
    if c.match_mode is MatchMode.PERSPECTIVAL:
        return 0
    for axis in sorted(allowed_rotation_axes(m), key=lambda a: a.value):
        a = axis.unit
        for mv, tv in pairs:
            mp = mv - a * mv.dot(a)
            tp = tv - a * tv.dot(a)
            if mp.norm() < 1e-12 or tp.norm() < 1e-12:
                continue
            theta = math.atan2(tp.dot(a.cross(mp)), tp.dot(mp))
            if _aligned(pairs, axis, theta, tol):
                return 1
    return 0


# -- file format -------------------------------------------------------------------

def format_pattern(traj, connectors) -> str:
    atoms = ["*" if a is None else a.value for a in traj]
    if not atoms:
        return ""
    out = atoms[0]
    for c, a in zip(connectors, atoms[1:]):
        out += c.value + a
    return out


def _parse_pattern(text: str, where: str):
    text = text.strip()
    if not text:
        return (), ()
    atoms, conns, buf = [], [], ""
    for ch in text + "\0":
        if ch in "⊥∘\0":
            tok = buf.strip()
            if tok == "*":
                atoms.append(None)
            else:
                try:
                    atoms.append(OrientingLevel.parse(tok))
                except ValueError:
                    raise LexiconError(f"{where}: bad template atom {tok!r}") from None
            if ch != "\0":
                conns.append(Connector(ch))
            buf = ""
        else:
            buf += ch
    return tuple(atoms), tuple(conns)


def _closure(value, where):
    if value in (None, "any"):
        return None
    try:
        return Closure(value)
    except ValueError:
        raise LexiconError(f"{where}: bad closure {value!r}") from None


def _entry(obj) -> LexEntry:
    try:
        lemma = obj["lemma"]
        where = f"entry {lemma!r}"
        cvm = None
        if obj.get("cvm") is not None:
            c = obj["cvm"]
            traj, conns = _parse_pattern(c.get("traj", ""), where)
            cvm = CvmTemplate(c["name"], traj, conns, _closure(c.get("closure"), where),
                              bool(c.get("quote", False)),
                              MatchMode(c.get("match_mode", "rotation-free")))
        ex = None
        if obj.get("exemplification") is not None:
            x = obj["exemplification"]
            args = tuple(x["args"])
            mapping = tuple(sorted(x["map"].items()))
            for feat, arg in mapping:
                if feat not in FEATURES:
                    raise LexiconError(f"{where}: unknown gesture feature {feat!r}")
                if arg not in args:
                    raise LexiconError(f"{where}: feature {feat!r} maps to unknown argument {arg!r}")
            ex = Exemplification(args, mapping)
        vis = []
        for v in obj.get("vis", []):
            if v.get("kind") not in VIS_KINDS:
                raise LexiconError(f"{where}: unknown vis constraint kind {v.get('kind')!r}")
            vis.append(VisConstraint(v["kind"], v.get("role")))
        affinity = obj.get("mode_affinity", "entity-space")
        if affinity not in ("entity-space", "event-space"):
            raise LexiconError(f"{where}: bad mode_affinity {affinity!r}")
        return LexEntry(
            lemma=lemma, cat=obj["cat"], ling=obj.get("ling", lemma),
            roles=tuple((r, s) for r, s in obj.get("roles", [])),
            vis=tuple(vis), cvm=cvm, frames=tuple(obj.get("frames", [])),
            mode_affinity=affinity, sort=obj.get("sort"), exemplification=ex,
        )
    except KeyError as exc:
        raise LexiconError(f"lexicon entry missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, LexiconError):
            raise
        raise LexiconError(str(exc)) from None


def _frame(obj) -> Frame:
    return Frame(
        obj["name"],
        tuple(CoreElement(c["name"], c["sort"], c.get("role", "self")) for c in obj.get("core", [])),
        tuple(FrameElement(n["name"], n["sort"], tuple(n.get("shares", [])))
              for n in obj.get("non_core", [])),
    )


def parse_lexicon(text: str, source: str | None = None) -> Lexicon:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    return Lexicon([_entry(e) for e in doc.get("entries", [])],
                   [_frame(f) for f in doc.get("frames", [])])


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read(), source=str(path))


def default_lexicon() -> Lexicon:
    from .fixtures import read_text
    return parse_lexicon(read_text("lexicon.json"), source="lexicon.json")


def serialize_lexicon(lex: Lexicon) -> str:
    entries = []
    for e in lex:
        d = {"lemma": e.lemma, "cat": e.cat, "ling": e.ling,
             "roles": [list(r) for r in e.roles],
             "vis": [{"kind": v.kind, **({"role": v.role} if v.role else {})} for v in e.vis],
             "frames": list(e.frames), "mode_affinity": e.mode_affinity,
             "cvm": None, "exemplification": None}
        if e.sort is not None:
            d["sort"] = e.sort
        if e.cvm is not None:
            c = e.cvm
            d["cvm"] = {"name": c.name, "traj": format_pattern(c.traj, c.connectors),
                        "closure": c.closure.value if c.closure else "any",
                        "quote": c.requires_quotation, "match_mode": c.match_mode.value}
        if e.exemplification is not None:
            d["exemplification"] = {"args": list(e.exemplification.args),
                                    "map": dict(e.exemplification.mapping)}
        entries.append(d)
    frames = [
        {"name": f.name,
         "core": [{"name": c.name, "sort": c.sort, "role": c.role} for c in f.core],
         "non_core": [{"name": n.name, "sort": n.sort, "shares": list(n.shares)}
                      for n in f.non_core]}
        for f in lex.frames
    ]
    return json.dumps({"frames": frames, "entries": entries}, indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"
