import subprocess
import sys

import pytest

from gestsem.annotation import parse_annotation
from gestsem.cli import STRUCTURED_HEADER, main, split_structured
from gestsem.fixtures import path as fixture_path, read_text
from gestsem.iconic import parse_models
from gestsem.lexicon import parse_lexicon, serialize_lexicon
from gestsem.scene import parse_scene


def fx(name):
    return str(fixture_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_evaluate_u_house_true(capsys):
    code, out, _ = run(capsys, "evaluate", "--utterance", fx("u_house.sx"),
                       "--scene", fx("u_house.json"))
    assert code == 0 and "verdict: true" in out


def test_evaluate_flat_roof_mismatch(capsys):
    code, out, _ = run(capsys, "evaluate", "--utterance", fx("u_house.sx"),
                       "--scene", fx("flat_roof.json"))
    assert code == 1 and "verdict: mismatch" in out


def test_evaluate_false_exits_one(capsys):
    code, out, _ = run(capsys, "evaluate", "--utterance", fx("throw.sx"),
                       "--scene", fx("throw_open.json"))
    assert code == 1 and "verdict: false" in out


def test_label_descriptor(capsys):
    code, out, _ = run(capsys, "label", "--utterance", fx("staircase.sx"))
    assert code == 0
    assert "R = Descriptor" in out and "spiral(z), z=x" in out


def test_label_mismatch(capsys):
    code, out, _ = run(capsys, "label", "--annotation", fx("slap.ann"), "--mode", "acting",
                       "--utterance", fx("staircase.sx"), "--affiliate", "staircase")
    assert code == 1 and "mismatch" in out


def test_label_kind_reading(capsys):
    code, out, _ = run(capsys, "label", "--annotation", fx("pointed_roof.ann"),
                       "--scene", fx("flat_roof.json"), "--target", "house:roof")
    assert code == 0 and "reading: kind-reading" in out


def test_embed_verdicts(capsys):
    args = ["embed", "--annotation", fx("car.ann"), "--perspectival", "--target", "e1"]
    assert run(capsys, *args, "--scene", fx("car_right.json"))[0] == 0
    code, out, _ = run(capsys, *args, "--scene", fx("car_left.json"))
    assert code == 1 and "no embedding" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "evaluate", "--utterance", "missing.sx", "--scene", fx("u_house.json"))
    assert code == 2 and "missing.sx" in err


def test_parse_error_location(tmp_path, capsys):
    bad = tmp_path / "bad.ann"
    text = read_text("u_shape.ann").replace("wrist.dir: MR>MB>ML", "wrist.dir: MR>MQ>ML")
    bad.write_text(text)
    code, _, err = run(capsys, "parse", "--annotation", str(bad))
    assert code == 2 and "bad.ann:7" in err


def test_bad_option_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["vectorize", "--annotation", fx("roof.ann"), "--mode", "dancing"])
    assert exc.value.code == 2
    assert main(["embed", "--annotation", fx("roof.ann")]) == 2


@pytest.mark.parametrize("flag,name,parser", [
    ("--annotation", "wheel.ann", parse_annotation),
    ("--scene", "u_house.json", parse_scene),
    ("--lexicon", "lexicon.json", parse_lexicon),
])
def test_structured_parse_round_trips(capsys, flag, name, parser):
    code, out, _ = run(capsys, "parse", flag, fx(name), "--format", "structured")
    assert code == 0 and out.startswith(STRUCTURED_HEADER + "\n")
    body = split_structured(out)
    assert body == read_text(name)
    assert parser(body) == parser(read_text(name)) or name == "lexicon.json"
    if name == "lexicon.json":
        assert serialize_lexicon(parser(body)) == read_text(name)


def test_structured_vectorize_round_trips(capsys):
    code, out, _ = run(capsys, "vectorize", "--annotation", fx("wheel.ann"), "--format", "structured")
    [m] = parse_models(split_structured(out))
    assert str(m) == "[hs: D, traj: UP∘FT∘-UP∘-FT, closed]"


def test_transform_and_svg(capsys, tmp_path):
    code, out, _ = run(capsys, "transform", "--annotation", fx("roof.ann"),
                       "--theta", "3.141592653589793")
    assert code == 0 and "traj: -RT" in out
    dest = tmp_path / "wheel.svg"
    assert main(["vectorize", "--annotation", fx("wheel.ann"), "--format", "svg",
                 "--out", str(dest)]) == 0
    assert dest.read_text().startswith("<svg")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gestsem", "vectorize", "--annotation",
                           fx("roof.ann")], capture_output=True, text=True)
    assert proc.returncode == 0 and "[hs: D, traj: RT, open]" in proc.stdout


def test_help_documents_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["embed", "--help"])
    out = capsys.readouterr().out
    assert "pi/8" in out and "0.01" in out and "1000" in out
