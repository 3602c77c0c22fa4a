"""Command-line front end: ``gestsem <subcommand> [options]``.

Exit status: 0 on success / true, 1 on a semantic mismatch or a false
verdict, 2 on bad input (missing file, parse error, bad option).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import composition as comp
from .annotation import KinematicAnnotation, load_annotation, serialize_annotation
from .embed import EmbedOptions, embed, model_skeleton
from .errors import (AmbiguousResolution, GestSemError, ModeMismatch, ParseError,
                     ResolutionMismatch)
from .geometry import RotationAxis
from .iconic import (Mode, Transform, format_traj, posture_model, realize, serialize_models,
                     svg_planes, transform, vectorize)
from .infeval import (KindReading, conditioned_interpret, evoke_and_resolve, extemplify_report,
                      kind_check)
from .lexicon import default_lexicon, load_lexicon, serialize_lexicon
from .scene import Entity, load_scene, serialize_scene

STRUCTURED_HEADER = "# gestsem-structured v1"

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

SUBCOMMANDS = ("parse", "vectorize", "transform", "embed", "evaluate", "label")

_REQUIRED = {
    "vectorize": ("annotation",),
    "transform": ("annotation",),
    "embed": ("annotation", "scene"),
    "evaluate": ("utterance", "scene"),
}


@dataclass
class RunConfig:
    subcommand: str
    annotation: str | None = None
    scene: str | None = None
    lexicon: str | None = None
    utterance: str | None = None
    mode: str | None = None
    perspectival: bool = False
    format: str = "text"
    out: str | None = None
    target: str | None = None
    affiliate: str | None = None
    predicate: str | None = None
    record: str | None = None
    axis: str = "Z"
    theta: float = 0.0
    k: float = 1.0
    options: EmbedOptions = field(default_factory=EmbedOptions)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        for name in _REQUIRED.get(self.subcommand, ()):
            if getattr(self, name) is None:
                raise ValueError(f"{self.subcommand} needs --{name}")
        if self.subcommand == "parse" and not any(
                (self.annotation, self.scene, self.lexicon, self.utterance)):
            raise ValueError("parse needs at least one input file")
        if self.subcommand == "label" and not (self.annotation or self.utterance):
            raise ValueError("label needs --annotation or --utterance")


def split_structured(text: str) -> str:
    """Drop the versioned header from structured output, leaving the parseable body."""
    first, _, rest = text.partition("\n")
    if first.strip() != STRUCTURED_HEADER:
        raise ParseError("missing structured-output header", 1, 1)
    return rest


class _Report:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines: list[str] = []

    def add(self, text: str = ""):
        self.lines.append(text)

    def text(self) -> str:
        body = "\n".join(self.lines).rstrip("\n") + "\n"
        if self.cfg.format == "structured":
            return STRUCTURED_HEADER + "\n" + body
        return body


def _records(cfg: RunConfig) -> list[KinematicAnnotation]:
    recs = load_annotation(cfg.annotation)
    if cfg.record is not None:
        recs = [r for r in recs if r.id == cfg.record]
        if not recs:
            raise ParseError(f"no annotation record with id {cfg.record!r}", source=cfg.annotation)
    return recs


def _model(ann: KinematicAnnotation, cfg: RunConfig):
    mode = Mode(cfg.mode) if cfg.mode else None
    if ann.is_static and mode is Mode.ACTING:
        return posture_model(ann)
    return vectorize(ann, mode, cfg.perspectival)


def _lexicon(cfg):
    return load_lexicon(cfg.lexicon) if cfg.lexicon else default_lexicon()


def _cmd_parse(cfg, rep):
    if cfg.annotation:
        rep.add(serialize_annotation(load_annotation(cfg.annotation)).rstrip("\n"))
    if cfg.scene:
        rep.add(serialize_scene(load_scene(cfg.scene)).rstrip("\n"))
    if cfg.lexicon:
        rep.add(serialize_lexicon(load_lexicon(cfg.lexicon)).rstrip("\n"))
    if cfg.utterance:
        rep.add(comp.format_tree(comp.load_utterance(cfg.utterance)))
    return EXIT_OK


def _emit_models(models, cfg, rep):
    if cfg.format == "svg":
        rep.add(svg_planes(realize(models[0])))
    elif cfg.format == "structured":
        rep.add(serialize_models(models).rstrip("\n"))
    else:
        for m in models:
            rep.add(str(m))


def _cmd_vectorize(cfg, rep):
    _emit_models([_model(a, cfg) for a in _records(cfg)], cfg, rep)
    return EXIT_OK


def _cmd_transform(cfg, rep):
    t = Transform(cfg.k, RotationAxis[cfg.axis.upper()], cfg.theta)
    _emit_models([transform(_model(a, cfg), t) for a in _records(cfg)], cfg, rep)
    return EXIT_OK


def _target_path(s, ref):
    item = s.get(ref)
    if isinstance(item, Entity):
        path = item.main_axis
    else:
        path = item.place_path
    if path is None:
        raise GestSemError(f"{ref!r} has no axis or place path")
    return s.to_speaker(path)


def _resolve_target(s, spec: str | None):
    """``id`` or ``id:axis-label``; default is the only event path or entity axis."""
    if spec:
        ref, _, label = spec.partition(":")
        item = s.get(ref)
        if label:
            if not isinstance(item, Entity) or label not in dict(item.axes):
                raise GestSemError(f"{ref!r} has no axis {label!r}")
            return s.to_speaker(dict(item.axes)[label])
        return _target_path(s, ref)
    cands = [ev.id for ev in s.events if ev.place_path is not None]
    cands += [en.id for en in s.entities if en.axes]
    if len(cands) != 1:
        raise GestSemError("scene has several candidate paths; pick one with --target "
                           + "(" + ", ".join(cands) + ")")
    return _target_path(s, cands[0])


def _cmd_embed(cfg, rep):
    s = load_scene(cfg.scene)
    target = _resolve_target(s, cfg.target)
    status = EXIT_OK
    for ann in _records(cfg):
        m = _model(ann, cfg)
        res = embed(m, target, cfg.options)
        if cfg.format == "svg":
            rep.add(svg_planes(target))
        elif cfg.format == "structured":
            rep.add(f"model: {format_traj(m)}")
            rep.add(f"success: {str(res.success).lower()}")
            if res.witness is not None:
                w = res.witness
                rep.add(f"k: {w.scale_k!r}")
                rep.add(f"axis: {w.axis.name}")
                rep.add(f"theta: {w.theta!r}")
            rep.add(f"reason: {res.diagnostics.reason or 'none'}")
        else:
            rep.add(f"model {m}")
            rep.add(f"strokes: {len(model_skeleton(m, cfg.options.angle_tolerance).strokes)}")
            if res.success:
                w = res.witness
                rep.add(f"embeds: k={w.scale_k:.4g}, rotation {w.axis.name} by {w.theta:.4f} rad")
            else:
                rep.add("no embedding")
            rep.add(res.diagnostics.describe())
        if not res.success:
            status = EXIT_MISMATCH
    return status


def _cmd_evaluate(cfg, rep):
    lex = _lexicon(cfg)
    tree = comp.load_utterance(cfg.utterance)
    s = load_scene(cfg.scene)
    lf = comp.compose(tree, lex)
    ev = comp.evaluate(lf, s, cfg.options)
    if cfg.format == "structured":
        rep.add(f"ling: {comp.format_term(lf.ling)}")
        for v in lf.vis_strings():
            rep.add(f"vis: {v}")
        rep.add(f"verdict: {ev.verdict.value}")
        if ev.assignment:
            rep.add("witness: " + ", ".join(f"{k}={v}" for k, v in ev.assignment.items()))
    else:
        rep.add(str(lf))
        rep.add(str(ev))
    return EXIT_OK if ev.verdict is comp.Verdict.TRUE else EXIT_MISMATCH


def _mm_node(tree):
    if isinstance(tree, comp.Node):
        if any(isinstance(c, comp.GestureLeaf) for c in tree.children):
            return tree
        for c in tree.children:
            found = _mm_node(c)
            if found is not None:
                return found
    return None


def _first_lemma(tree):
    if isinstance(tree, comp.Leaf):
        return tree.lemma
    if isinstance(tree, comp.Node):
        for c in tree.children:
            lemma = _first_lemma(c)
            if lemma:
                return lemma
    return None


def _cmd_label(cfg, rep):
    lex = _lexicon(cfg)
    tree = comp.load_utterance(cfg.utterance) if cfg.utterance else None
    if cfg.annotation:
        m = _model(_records(cfg)[0], cfg)
    else:
        mm = _mm_node(tree)
        if mm is None:
            raise GestSemError("utterance contains no gesture")
        m = next(c for c in mm.children if isinstance(c, comp.GestureLeaf)).model
    labels, rejected = extemplify_report(m, lex)
    rep.add(f"model: {m}")
    if labels:
        for i, lb in enumerate(labels, 1):
            rep.add(f"label {i}: {lb}")
    else:
        rep.add("labels: none (the gesture contributes only its iconic model)")
    if cfg.format == "text":
        for lemma, reasons in rejected.items():
            rep.add(f"  rejected {lemma}: " + "; ".join(reasons))
    status = EXIT_OK
    label = None
    if labels:
        label = labels[0]
        if cfg.predicate:
            picked = [lb for lb in labels if lb.predicate == cfg.predicate]
            if not picked:
                rep.add(f"{cfg.predicate} is not among the labels")
                return EXIT_MISMATCH
            label = picked[0]
    if tree is not None and label is not None:
        affiliate = cfg.affiliate
        if affiliate is None:
            mm = _mm_node(tree)
            if mm is None:
                raise GestSemError("no gesture in the utterance; name the affiliate with --affiliate")
            affiliate = _first_lemma(comp.Node(mm.cat, tuple(
                c for c in mm.children if not isinstance(c, comp.GestureLeaf))))
        ci = conditioned_interpret(tree, affiliate, label, lex)
        rep.add(f"affiliate: {affiliate}")
        rep.add(f"interpretation: {ci}")
        if ci.relation is None:
            try:
                drs = evoke_and_resolve(lex.lookup(affiliate), lex.lookup(label.predicate), lex)
            except (ResolutionMismatch, AmbiguousResolution) as exc:
                rep.add(f"resolution: {exc}")
                status = EXIT_MISMATCH
            else:
                rep.add(f"resolution: R = {drs.resolved}")
                rep.add(str(drs))
    if cfg.scene:
        s = load_scene(cfg.scene)
        reading = kind_check(m, label, _resolve_target(s, cfg.target), lex, cfg.options)
        rep.add(f"reading: {reading.value}")
        if reading is KindReading.NONE:
            status = EXIT_MISMATCH
    return status


_HANDLERS = {
    "parse": _cmd_parse,
    "vectorize": _cmd_vectorize,
    "transform": _cmd_transform,
    "embed": _cmd_embed,
    "evaluate": _cmd_evaluate,
    "label": _cmd_label,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns (exit status, report text)."""
    rep = _Report(cfg)
    try:
        status = _HANDLERS[cfg.subcommand](cfg, rep)
    except FileNotFoundError as exc:
        return EXIT_INPUT, f"error: file not found: {exc.filename}\n"
    except ParseError as exc:
        return EXIT_INPUT, f"error: parse error at {exc}\n"
    except (ModeMismatch, ResolutionMismatch) as exc:
        rep.add(f"mismatch: {exc}")
        return EXIT_MISMATCH, rep.text()
    except GestSemError as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    return status, rep.text()


def build_parser() -> argparse.ArgumentParser:
    d = EmbedOptions()
    p = argparse.ArgumentParser(prog="gestsem", description="Multimodal gesture semantics toolkit.")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--annotation", metavar="PATH")
        sp.add_argument("--record", metavar="ID", help="annotation record id")
        sp.add_argument("--scene", metavar="PATH")
        sp.add_argument("--lexicon", metavar="PATH", help="default: bundled lexicon")
        sp.add_argument("--utterance", metavar="PATH")
        sp.add_argument("--mode", choices=[m.value for m in Mode])
        sp.add_argument("--perspectival", action="store_true")
        sp.add_argument("--angle-tol", type=float, default=d.angle_tolerance, metavar="RAD",
                        help=f"per-stroke angle tolerance (default {d.angle_tolerance:.6f} = pi/8)")
        sp.add_argument("--scale-min", type=float, default=d.scale_bounds[0],
                        help=f"default {d.scale_bounds[0]}")
        sp.add_argument("--scale-max", type=float, default=d.scale_bounds[1],
                        help=f"default {d.scale_bounds[1]}")
        sp.add_argument("--format", choices=("text", "structured", "svg"), default="text")
        sp.add_argument("--out", metavar="PATH")
        if name in ("embed", "label"):
            sp.add_argument("--target", metavar="ID[:AXIS]",
                            help="entity or event whose path is the target")
        if name == "label":
            sp.add_argument("--affiliate", metavar="LEMMA")
            sp.add_argument("--predicate", metavar="LEMMA", help="label to interpret")
        if name == "transform":
            sp.add_argument("--axis", choices=("X", "Y", "Z", "x", "y", "z"), default="Z")
            sp.add_argument("--theta", type=float, default=0.0, help="radians; multiple of pi/2")
            sp.add_argument("--k", type=float, default=1.0, help="scale factor")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = EmbedOptions((ns.scale_min, ns.scale_max), ns.angle_tol)
    return RunConfig(
        subcommand=ns.subcommand, annotation=ns.annotation, scene=ns.scene, lexicon=ns.lexicon,
        utterance=ns.utterance, mode=ns.mode, perspectival=ns.perspectival, format=ns.format,
        out=ns.out, target=getattr(ns, "target", None), affiliate=getattr(ns, "affiliate", None),
        predicate=getattr(ns, "predicate", None), record=ns.record,
        axis=getattr(ns, "axis", "Z"), theta=getattr(ns, "theta", 0.0), k=getattr(ns, "k", 1.0),
        options=opts,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (ValueError, GestSemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, text = run(cfg)
    if text.startswith("error:"):
        print(text, end="", file=sys.stderr)
    elif cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
