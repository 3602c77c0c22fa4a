"""Embedding iconic models into target paths modulo rotation and scaling.

Both sides are reduced to a *skeleton*: a list of strokes (unit direction,
length) separated by sharp (⊥) or rounded (∘) joints. A model embeds into a
target when the skeletons have the same shape and some allowed rotation
brings every model stroke within the angle tolerance of its target stroke.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyTrajectory, InvalidArgument
from .geometry import Closure, Path3, PathKind, RotationAxis, Vec3, angle_between, closure_of, rotate
from .iconic import Connector, IconicModel, Transform, allowed_rotation_axes, realize

__all__ = [
    "EmbedOptions",
    "Stroke",
    "Skeleton",
    "Diagnostics",
    "EmbeddingResult",
    "skeleton",
    "model_skeleton",
    "embed",
    "brute_force_embed",
]

QUARTER = math.pi / 2
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class EmbedOptions:
    scale_bounds: tuple[float, float] = (0.01, 1000.0)
    angle_tolerance: float = math.pi / 8
    rotation_samples: int = 360

    def __post_init__(self):
        lo, hi = self.scale_bounds
        if not (0 < lo <= hi and math.isfinite(hi)):
            raise InvalidArgument(f"bad scale bounds {self.scale_bounds!r}")
        if not (0 < self.angle_tolerance < math.pi / 2):
            raise InvalidArgument("angle tolerance must lie in (0, pi/2)")
        if self.rotation_samples < 1:
            raise InvalidArgument("rotation_samples must be positive")


@dataclass(frozen=True)
class Stroke:
    direction: Vec3  # unit
    length: float


@dataclass(frozen=True)
class Skeleton:
    strokes: tuple[Stroke, ...]
    joints: tuple[Connector, ...]


@dataclass(frozen=True)
class Diagnostics:
    reason: str | None = None
    model_strokes: int = 0
    target_strokes: int = 0
    angle_residuals: tuple[float, ...] = ()
    length_residuals: tuple[float, ...] = ()  # log(k * len_model / len_target)

    def describe(self) -> str:
        head = self.reason or "ok"
        lines = [f"{head} (model strokes {self.model_strokes}, target strokes {self.target_strokes})"]
        for i, a in enumerate(self.angle_residuals):
            ln = self.length_residuals[i] if i < len(self.length_residuals) else float("nan")
            lines.append(f"  stroke {i}: angle {a:.4f} rad, log-length {ln:+.4f}")
        return "\n".join(lines)


@dataclass(frozen=True)
class EmbeddingResult:
    success: bool
    witness: Transform | None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __bool__(self):
        return self.success


# -- skeletons -------------------------------------------------------------------

def _join(a, b):
    if PathKind.ARC in (a, b):
        return PathKind.ARC
    if a is None and b is None:
        return None
    return PathKind.LINE


def _arc_run(vecs: list[Vec3]) -> tuple[list[Stroke], list[Connector]]:
    """Split a smoothly turning run into quarter-turn strokes."""
    dirs = [v.unit() for v in vecs]
    lens = [v.norm() for v in vecs]
    cum = [0.0]
    for a, b in zip(dirs, dirs[1:]):
        cum.append(cum[-1] + angle_between(a, b))
    total = cum[-1]
    n = round(total / QUARTER)
    if n == 0:
        s = Vec3(0.0, 0.0, 0.0)
        for v in vecs:
            s = s + v
        d = s.unit() if s.norm() > 1e-12 else dirs[0]
        return [Stroke(d, sum(lens))], []
    step = total / n

    def tangent(t: float) -> Vec3:
        for k in range(len(cum) - 1):
            if cum[k] <= t <= cum[k + 1]:
                span = cum[k + 1] - cum[k]
                w = 0.0 if span <= 0 else (t - cum[k]) / span
                v = dirs[k] * (1 - w) + dirs[k + 1] * w
                return v.unit() if v.norm() > 1e-12 else dirs[k]
        return dirs[-1]

    lengths = [0.0] * (n + 1)
    for c, ln in zip(cum, lens):
        lengths[min(n, max(0, math.floor(c / step + 0.5)))] += ln
    strokes = [Stroke(tangent(i * step), lengths[i]) for i in range(n + 1)]
    return strokes, [Connector.ROUND] * n


def skeleton(path: Path3, angle_tol: float = math.pi / 8) -> Skeleton:
    """Reduce a concrete path to strokes and joint kinds.

    Arc-connected runs are cut into one stroke per quarter turn. Sharp joints
    that turn by less than *angle_tol* are treated as straight continuation.
    """
    total = path.length()
    if total == 0.0:
        raise EmptyTrajectory("path has zero length")
    items: list[tuple[Vec3, PathKind | None]] = []
    carry = None
    for i, seg in enumerate(path.segments()):
        kind = _join(carry, path.connectors[i - 1] if i > 0 else None)
        if seg.norm() <= 1e-12 * total:
            carry = kind
            continue
        items.append((seg, kind if items else None))
        carry = None

    groups: list[list[Vec3]] = []
    for seg, kind in items:
        if kind is PathKind.ARC:
            groups[-1].append(seg)
        else:
            groups.append([seg])

    strokes: list[Stroke] = []
    joints: list[Connector] = []
    for g in groups:
        if len(g) == 1:
            gs, gj = [Stroke(g[0].unit(), g[0].norm())], []
        else:
            gs, gj = _arc_run(g)
        if strokes:
            prev, nxt = strokes[-1], gs[0]
            if angle_between(prev.direction, nxt.direction) < angle_tol:
                merged = prev.direction * prev.length + nxt.direction * nxt.length
                strokes[-1] = Stroke(merged.unit(), prev.length + nxt.length)
                gs = gs[1:]
            else:
                joints.append(Connector.PERP)
        strokes.extend(gs)
        joints.extend(gj)
    return Skeleton(tuple(strokes), tuple(joints))


def model_skeleton(m: IconicModel, angle_tol: float = math.pi / 8) -> Skeleton:
    return skeleton(realize(m), angle_tol)


# -- alignment -------------------------------------------------------------------

def _wrap(theta: float) -> float:
    """Map to (-pi, pi]."""
    t = math.fmod(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    elif t > math.pi:
        t -= TWO_PI
    return t


def _residuals(ms, ts, axis, theta) -> list[float]:
    return [angle_between(rotate(a.direction, axis, theta), b.direction) for a, b in zip(ms, ts)]


def _feasible_intervals(ms, ts, axis: RotationAxis, tol: float):
    """Angles theta with every stroke within *tol*, as (lo, hi) intervals in (-pi, pi].

    For one stroke t.R(theta)m = C + rho*cos(theta - alpha), so the admissible
    set is a single arc around alpha (or everything, or nothing).
    """
    a = axis.unit
    cos_tol = math.cos(tol)
    arcs = []
    for sm, st in zip(ms, ts):
        m, t = sm.direction, st.direction
        par = a * m.dot(a)
        perp = m - par
        c = t.dot(par)
        p = t.dot(perp)
        q = t.dot(a.cross(perp))
        rho = math.hypot(p, q)
        if rho < 1e-12:
            if c >= cos_tol - 1e-12:
                continue
            return []
        bound = (cos_tol - c) / rho
        if bound > 1 + 1e-12:
            return []
        if bound <= -1:
            continue
        half = math.acos(min(1.0, bound))
        arcs.append((math.atan2(q, p), half))
    intervals = [(-math.pi, math.pi)]
    for alpha, half in arcs:
        lo, hi = alpha - half, alpha + half
        pieces = []
        for shift in (-TWO_PI, 0.0, TWO_PI):
            pieces.append((lo + shift, hi + shift))
        nxt = []
        for ilo, ihi in intervals:
            for plo, phi in pieces:
                lo2, hi2 = max(ilo, plo), min(ihi, phi)
                if lo2 <= hi2:
                    nxt.append((lo2, hi2))
        intervals = nxt
        if not intervals:
            return []
    return intervals


def _best_theta(ms, ts, axis, tol):
    intervals = _feasible_intervals(ms, ts, axis, tol)
    if not intervals:
        return None
    a = axis.unit
    # sum-of-cosines optimum about the axis
    num = den = 0.0
    cands = [0.0]
    for sm, st in zip(ms, ts):
        m, t = sm.direction, st.direction
        perp = m - a * m.dot(a)
        tp = t - a * t.dot(a)
        num += tp.dot(a.cross(perp))
        den += tp.dot(perp)
        if perp.norm() > 1e-12 and tp.norm() > 1e-12:
            cands.append(math.atan2(tp.dot(a.cross(perp)), tp.dot(perp)))
    if abs(num) > 1e-15 or abs(den) > 1e-15:
        cands.append(math.atan2(num, den))
    for lo, hi in intervals:
        cands.extend((lo, hi, (lo + hi) / 2))

    def inside(th):
        return any(lo - 1e-12 <= th <= hi + 1e-12 for lo, hi in intervals)

    best = None
    for th in cands:
        th = _wrap(th)
        if not inside(th):
            continue
        res = _residuals(ms, ts, axis, th)
        if max(res) > tol + 1e-9:
            continue
        key = (round(sum(res), 12), abs(th))
        if best is None or key < best[0]:
            best = (key, th, res)
    return best


def _scale(ms, ts):
    logs = [math.log(b.length / a.length) for a, b in zip(ms, ts)]
    k = math.exp(sum(logs) / len(logs))
    return k, tuple(math.log(k * a.length / b.length) for a, b in zip(ms, ts))


def _shape_check(m: IconicModel, target: Path3, opts: EmbedOptions):
    if not m.traj:
        raise EmptyTrajectory("cannot embed an empty trajectory")
    tol = opts.angle_tolerance
    ms = model_skeleton(m, tol)
    ts = skeleton(target, tol)
    diag = Diagnostics(model_strokes=len(ms.strokes), target_strokes=len(ts.strokes))
    if len(ms.strokes) != len(ts.strokes):
        return ms, ts, Diagnostics(
            f"stroke count {len(ms.strokes)} vs {len(ts.strokes)}",
            diag.model_strokes, diag.target_strokes)
    if ms.joints != ts.joints:
        show = lambda js: "".join(j.value for j in js) or "-"
        return ms, ts, Diagnostics(
            f"joint kinds {show(ms.joints)} vs {show(ts.joints)}",
            diag.model_strokes, diag.target_strokes)
    if m.closure is not closure_of(target):
        return ms, ts, Diagnostics(
            f"closure {m.closure.value} vs {closure_of(target).value}",
            diag.model_strokes, diag.target_strokes)
    return ms, ts, None


def _axes(m: IconicModel):
    if m.perspectival:
        return []
    return sorted(allowed_rotation_axes(m), key=lambda a: a.value)


def _finish(ms, ts, axis, theta, res, opts) -> EmbeddingResult:
    k, lres = _scale(ms.strokes, ts.strokes)
    lo, hi = opts.scale_bounds
    n = len(ms.strokes)
    if not (lo <= k <= hi):
        return EmbeddingResult(False, None, Diagnostics(
            f"scale {k:.6g} outside [{lo:g}, {hi:g}]", n, n, tuple(res), lres))
    return EmbeddingResult(True, Transform(k, axis, theta),
                           Diagnostics(None, n, n, tuple(res), lres))


def embed(m: IconicModel, target: Path3, opts: EmbedOptions | None = None) -> EmbeddingResult:
    """Find a scale and allowed rotation carrying *m* onto *target*.

    *target* must already be expressed in the speaker's gesture-space frame.
    """
    opts = opts or EmbedOptions()
    ms, ts, fail = _shape_check(m, target, opts)
    if fail is not None:
        return EmbeddingResult(False, None, fail)
    tol = opts.angle_tolerance
    best = None
    for axis in _axes(m):
        found = _best_theta(ms.strokes, ts.strokes, axis, tol)
        if found is not None and (best is None or found[0] < best[0]):
            best = (found[0], axis, found[1], found[2])
    if best is None:
        res = _residuals(ms.strokes, ts.strokes, RotationAxis.Z, 0.0)
        if max(res) <= tol:
            best = (None, RotationAxis.Z, 0.0, res)
    if best is None:
        res = _residuals(ms.strokes, ts.strokes, RotationAxis.Z, 0.0)
        why = "direction outside tolerance" + (" (perspectival: no rotation)" if m.perspectival else "")
        return EmbeddingResult(False, None, Diagnostics(
            why, len(ms.strokes), len(ts.strokes), tuple(res)))
    _, axis, theta, res = best
    return _finish(ms, ts, axis, theta, res, opts)


def _grid_scale(ms, ts, opts: EmbedOptions, points: int = 4001):
    lo, hi = opts.scale_bounds
    pairs = [(a.length, b.length) for a, b in zip(ms, ts)]

    def cost(k):
        return sum(math.log(k * a / b) ** 2 for a, b in pairs)

    if lo == hi:
        grid = [lo]
    else:
        ratio = (hi / lo) ** (1 / (points - 1))
        grid = [lo * ratio ** i for i in range(points)]
    best_i = min(range(len(grid)), key=lambda i: cost(grid[i]))
    k = grid[best_i]
    if len(grid) > 1:
        step = grid[1] / grid[0]
        if best_i == 0 and cost(k / step) < cost(k):
            return None
        if best_i == len(grid) - 1 and cost(k * step) < cost(k):
            return None
    return k


def brute_force_embed(m: IconicModel, target: Path3,
                      opts: EmbedOptions | None = None) -> EmbeddingResult:
    """Exhaustive grid search over rotation angles and a geometric scale grid."""
    opts = opts or EmbedOptions()
    ms, ts, fail = _shape_check(m, target, opts)
    if fail is not None:
        return EmbeddingResult(False, None, fail)
    tol = opts.angle_tolerance
    n = opts.rotation_samples
    thetas = [-math.pi + TWO_PI * i / n for i in range(1, n + 1)] if _axes(m) else [0.0]
    if 0.0 not in thetas:
        thetas.append(0.0)
    best = None
    for axis in _axes(m) or [RotationAxis.Z]:
        for th in thetas:
            res = _residuals(ms.strokes, ts.strokes, axis, th)
            if max(res) > tol:
                continue
            key = (round(sum(res), 12), abs(th))
            if best is None or key < best[0]:
                best = (key, axis, th, res)
    count = len(ms.strokes)
    if best is None:
        return EmbeddingResult(False, None, Diagnostics("no grid angle within tolerance", count, count))
    _, axis, theta, res = best
    k = _grid_scale(ms.strokes, ts.strokes, opts)
    if k is None:
        return EmbeddingResult(False, None, Diagnostics("scale pinned at bound", count, count, tuple(res)))
    lres = tuple(math.log(k * a.length / b.length) for a, b in zip(ms.strokes, ts.strokes))
    return EmbeddingResult(True, Transform(k, axis, theta), Diagnostics(None, count, count, tuple(res), lres))
