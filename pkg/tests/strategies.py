"""Random generators shared by the property tests."""

import math
import random

from gestsem.embed import EmbedOptions
from gestsem.geometry import Closure, OrientingLevel, Path3, RotationAxis, Vec3, closure_of, rotate
from gestsem.iconic import Connector, IconicModel, allowed_rotation_axes, realize

LEVELS = list(OrientingLevel)
TOL = EmbedOptions().angle_tolerance


def random_model(rng: random.Random, max_len=4, arcs=True) -> IconicModel:
    n = rng.randint(1, max_len)
    traj = [rng.choice(LEVELS)]
    for _ in range(n - 1):
        # avoid immediate repeats so the symbolic length is the visible stroke count
        traj.append(rng.choice([lv for lv in LEVELS if lv is not traj[-1]]))
    conns = []
    for a, b in zip(traj, traj[1:]):
        perpendicular = abs(a.unit.dot(b.unit)) < 0.5
        conns.append(Connector.ROUND if arcs and perpendicular and rng.random() < 0.3
                     else Connector.PERP)
    m = IconicModel(rng.choice("BCDGOP"), tuple(traj), tuple(conns), Closure.OPEN,
                    perspectival=rng.random() < 0.25)
    closure = closure_of(realize(m))
    return IconicModel(m.hs, m.traj, m.connectors, closure, m.perspectival)


def _tilt(v: Vec3, rng: random.Random, angle: float) -> Vec3:
    """Rotate *v* by exactly *angle* towards a random perpendicular direction."""
    while True:
        r = Vec3(rng.gauss(0, 1), rng.gauss(0, 1), rng.gauss(0, 1))
        perp = r - v.unit() * r.dot(v.unit())
        if perp.norm() > 1e-3:
            break
    perp = perp.unit()
    u = v.unit()
    return (u * math.cos(angle) + perp * math.sin(angle)) * v.norm()


def target_for(m: IconicModel, rng: random.Random, *, positive: bool) -> Path3:
    """A path in gesture space built from *m* by an allowed motion.

    Positive targets tilt every segment by at most a third of the tolerance;
    negative targets tilt one segment by three tolerances, far from the
    decision boundary either way.
    """
    axes = sorted(allowed_rotation_axes(m), key=lambda a: a.value)
    axis = rng.choice(axes) if axes and not m.perspectival else RotationAxis.Z
    theta = rng.uniform(-math.pi, math.pi) if axes and not m.perspectival else 0.0
    k = math.exp(rng.uniform(-2, 2))
    base = realize(m)
    if any(c is Connector.ROUND for c in m.connectors):
        # arcs: rigid motion only; negatives come from reversing the path
        p = base.map_points(lambda q: rotate(q, axis, theta) * k)
        return p if positive else p.reversed()
    segs = [rotate(s, axis, theta) * k for s in base.segments()]
    if positive:
        segs = [_tilt(s, rng, rng.uniform(0, TOL / 3)) for s in segs]
    else:
        i = rng.randrange(len(segs))
        segs[i] = _tilt(segs[i], rng, 3 * TOL)
    pts = [Vec3(0.0, 0.0, 0.0)]
    for s in segs:
        pts.append(pts[-1] + s)
    return Path3.polyline(pts)


# -- derivation trees and scenes --------------------------------------------------

from gestsem.composition import GestureLeaf, Leaf, Node  # noqa: E402
from gestsem.iconic import Mode  # noqa: E402
from gestsem.scene import Entity, Event, Scene, IDENTITY_FRAME  # noqa: E402

INTRANSITIVE = ("be", "pull_out", "walk")
TRANSITIVE = ("throw", "push", "slap", "punish", "hold", "unscrew")
NOUNS = ("car", "dagger", "house", "light_bulb", "roof", "staircase", "he", "john", "son", "hall")


def random_tree(rng: random.Random, lex, with_gesture=True):
    """A sentence tree plus the gesture's affiliate lemma (or None)."""
    verb = rng.choice(INTRANSITIVE + TRANSITIVE)
    subj = Leaf("NP", rng.choice(NOUNS))
    v = Leaf("V", verb)
    obj = Leaf("NP", rng.choice(NOUNS)) if verb in TRANSITIVE else None
    hosts = []
    if lex.lookup(verb).vis:
        hosts.append(("v", rng.choice([Mode.ACTING, Mode.DRAWING])))
    for slot, leaf in (("subj", subj), ("obj", obj)):
        if leaf is not None and lex.lookup(leaf.lemma).vis:
            hosts.append((slot, rng.choice([Mode.DRAWING, Mode.MOLDING])))
    affiliate = None
    if with_gesture and hosts:
        slot, mode = rng.choice(hosts)
        m = random_model(rng)
        if mode is Mode.ACTING:
            m = IconicModel(m.hs, m.traj, m.connectors, m.closure, True, True)
        g = GestureLeaf(m, mode)
        leaf = {"v": v, "subj": subj, "obj": obj}[slot]
        affiliate = leaf.lemma
        wrapped = Node("MM", (leaf, g))
        if slot == "v":
            v = wrapped
        elif slot == "subj":
            subj = wrapped
        else:
            obj = wrapped
    if obj is None:
        return Node("S", (subj, v)), affiliate
    return Node("S", (subj, Node("VP", (v, obj)))), affiliate


def _gesture(tree):
    if isinstance(tree, GestureLeaf):
        return tree
    if isinstance(tree, Node):
        for c in tree.children:
            g = _gesture(c)
            if g is not None:
                return g
    return None


def _leaves(tree):
    if isinstance(tree, Leaf):
        yield tree
    elif isinstance(tree, Node):
        for c in tree.children:
            yield from _leaves(c)


def _random_path(rng):
    pts = [Vec3(rng.uniform(-5, 5), rng.uniform(1, 9), rng.uniform(0, 3))]
    for _ in range(rng.randint(1, 3)):
        pts.append(pts[-1] + Vec3(rng.gauss(0, 2), rng.gauss(0, 2), rng.gauss(0, 1)))
    return Path3.polyline(pts)


def random_scene(rng: random.Random, tree, lex) -> Scene:
    """A scene that often, but not always, verifies *tree*."""
    g = _gesture(tree)
    leaves = list(_leaves(tree))
    verb = next(lf.lemma for lf in leaves if lf.cat == "V")
    nouns = sorted({lf.lemma for lf in leaves if lf.cat != "V"})

    def fitted_path():
        if g is not None and rng.random() < 0.6:
            p = target_for(g.model, rng, positive=True)
            return p.map_points(lambda q: q + Vec3(0.0, 3.0, 0.0))
        return _random_path(rng)

    ents = [Entity("spk", "person", Vec3(0.0, 0.0, 0.0))]
    for n in nouns + ["other"]:
        axes = (("main", fitted_path()),) if rng.random() < 0.8 else ()
        ents.append(Entity(n, n, Vec3(rng.uniform(-5, 5), rng.uniform(1, 9), 0.0),
                           IDENTITY_FRAME, axes))
    entry = lex.lookup(verb)
    subj_obj = [lf.lemma for lf in leaves if lf.cat != "V"]
    events = []
    for i in range(rng.randint(1, 3)):
        pred = verb if rng.random() < 0.7 else rng.choice(INTRANSITIVE + TRANSITIVE)
        # subject fills the first role, object the second
        fillers = subj_obj if rng.random() < 0.7 else [rng.choice(nouns + ["other"]) for _ in subj_obj]
        roles = tuple(zip(entry.role_names, fillers))
        place = fitted_path() if rng.random() < 0.8 else None
        hs = g.model.hs if g is not None and rng.random() < 0.6 else rng.choice("BCDGOP")
        events.append(Event(f"e{i}", pred, roles, place, hs))
    return Scene(tuple(ents), tuple(events), "spk")
