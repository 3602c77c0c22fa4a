"""Multimodal semantics of iconic co-speech gestures.

Gesture annotations are vectorized into iconic models, composed with speech
into logical forms carrying vector constraints, model-checked against 3D
scenes, and labelled with lexical predicates through their vector meanings.
"""

from .annotation import KinematicAnnotation, load_annotation, parse_annotation, serialize_annotation
from .composition import compose, evaluate, load_utterance, parse_utterance, strip_gesture, Verdict
from .embed import EmbedOptions, EmbeddingResult, brute_force_embed, embed
from .errors import GestSemError
from .iconic import IconicModel, Mode, Transform, realize, transform, vectorize
from .infeval import (conditioned_interpret, evoke, evoke_and_resolve, extemplify, kind_check,
                      KindReading)
from .lexicon import default_lexicon, load_lexicon, parse_lexicon, serialize_lexicon
from .scene import Scene, load_scene, parse_scene, serialize_scene

__version__ = "0.1.0"
