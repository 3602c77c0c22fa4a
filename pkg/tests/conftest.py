import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gestsem.annotation import parse_annotation
from gestsem.fixtures import path as fixture_path, read_text
from gestsem.iconic import Mode, posture_model, vectorize
from gestsem.lexicon import default_lexicon
from gestsem.scene import parse_scene


def annotation(name):
    return parse_annotation(read_text(name + ".ann"), source=name)[0]


def model(name, mode=None, perspectival=False):
    ann = annotation(name)
    mode = Mode(mode) if mode else None
    if ann.is_static and mode is Mode.ACTING:
        return posture_model(ann)
    return vectorize(ann, mode, perspectival)


def scene(name):
    return parse_scene(read_text(name + ".json"), source=name)


@pytest.fixture(scope="session")
def lex():
    return default_lexicon()


@pytest.fixture
def fixture_file():
    return lambda name: str(fixture_path(name))
