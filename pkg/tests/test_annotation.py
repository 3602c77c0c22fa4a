import pytest
from hypothesis import given, strategies as st

from gestsem.annotation import (DEPTHS, SECTORS, DirectionCode, Extent, GridLocation, Hand,
                                KinematicAnnotation, SyncConfig, parse_annotation,
                                serialize_annotation)
from gestsem.errors import ArityError, ParseError
from gestsem.fixtures import names, read_text
from gestsem.geometry import OrientingLevel, PathKind

ROOF = """hand: right
handshape: D
wrist.path: line
wrist.dir: MR
sync.s-loc: CC-M
sync.e-loc: CR-M
"""


def test_roof_document():
    [r] = parse_annotation(ROOF)
    assert r.hand is Hand.RIGHT
    assert r.handshape == "D"
    assert r.wrist_dirs == (DirectionCode.MR,)
    assert r.wrist_paths == (PathKind.LINE,)


def test_u_shape_has_three_aligned_segments():
    [r] = parse_annotation(read_text("u_shape.ann"))
    assert r.wrist_paths == (PathKind.LINE,) * 3
    assert r.wrist_dirs == (DirectionCode.MR, DirectionCode.MB, DirectionCode.ML)


def test_unknown_direction_names_token():
    with pytest.raises(ParseError) as exc:
        parse_annotation(ROOF.replace("wrist.dir: MR", "wrist.dir: MQ"))
    assert "MQ" in str(exc.value)
    assert exc.value.line == 4


def test_unknown_handshape_and_grid():
    with pytest.raises(ParseError):
        parse_annotation(ROOF.replace("handshape: D", "handshape: Q9"))
    with pytest.raises(ParseError):
        parse_annotation(ROOF.replace("CR-M", "XX-M"))


def test_arity_mismatch():
    with pytest.raises(ArityError):
        parse_annotation(ROOF.replace("wrist.path: line", "wrist.path: line>line"))


def test_comments_ignored():
    text = "# roof gesture\n" + ROOF.replace("handshape: D", "handshape: D  # index")
    assert parse_annotation(text) == parse_annotation(ROOF)


def test_direction_codes_biject_levels():
    images = {d.level for d in DirectionCode}
    assert images == set(OrientingLevel)
    for d in DirectionCode:
        assert DirectionCode.from_level(d.level) is d
    assert DirectionCode.ML.level is OrientingLevel.NEG_RT
    assert DirectionCode.MB.level is OrientingLevel.NEG_FT


@pytest.mark.parametrize("name", names(".ann"))
def test_fixture_round_trip_is_byte_exact(name):
    text = read_text(name)
    records = parse_annotation(text)
    assert serialize_annotation(records) == text
    assert parse_annotation(serialize_annotation(records)) == records


grid = st.builds(GridLocation, st.sampled_from(SECTORS), st.sampled_from(DEPTHS))


@st.composite
def records(draw):
    n = draw(st.integers(0, 5))
    s = draw(grid)
    return KinematicAnnotation(
        hand=draw(st.sampled_from(list(Hand))),
        handshape=draw(st.sampled_from(sorted("BCDFGKLOPVY5"))),
        s_loc=s,
        e_loc=s if n == 0 else draw(grid),
        wrist_paths=tuple(draw(st.lists(st.sampled_from(list(PathKind)), min_size=n, max_size=n))),
        wrist_dirs=tuple(draw(st.lists(st.sampled_from(list(DirectionCode)), min_size=n, max_size=n))),
        extent=draw(st.sampled_from(list(Extent))),
        sync_config=draw(st.sampled_from(list(SyncConfig))),
        rel_mov=draw(st.sampled_from([None, "sym"])),
        palm_orient=draw(st.sampled_from([None, "PTL", "PDN"])),
        boh_orient=draw(st.sampled_from([None, "BAB", "BUP"])),
        id=draw(st.sampled_from([None, "g1", "roof"])),
    )


@given(st.lists(records(), min_size=1, max_size=3))
def test_parse_serialize_round_trip(recs):
    assert parse_annotation(serialize_annotation(recs)) == recs
