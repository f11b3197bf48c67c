import pytest

from sboxineq import corpus
from sboxineq.exceptions import CertificationError, ValidationError
from sboxineq.export import FORMATS, parse_model, read_model, render_model, write_model
from sboxineq.inequality import Inequality

from test_verify import load_listing


@pytest.fixture
def mibs():
    return corpus.get("MIBS").sbox, load_listing("mibs_24.txt")


@pytest.mark.parametrize("fmt", FORMATS)
def test_round_trip(tmp_path, mibs, fmt):
    sbox, model = mibs
    path = write_model(tmp_path / "m.out", model, sbox, fmt)
    assert read_model(path, 4) == model


def test_appendix_text_matches_listing_up_to_order(mibs):
    sbox, model = mibs
    text = render_model(sorted(model), 4, "appendix-text")
    ours = {line for line in text.splitlines() if not line.startswith("#")}
    listing = (load_listing.__globals__["PUBLISHED"] / "mibs_24.txt").read_text().splitlines()
    assert ours == set(listing)


def test_lp_constraints_shape(mibs):
    _, model = mibs
    text = render_model(model, 4, "lp-constraints")
    lines = text.splitlines()
    assert lines[0] == "Subject To" and lines[-1] == "End"
    assert lines[1] == " q0: - 1 x3 - 2 x2 - 2 x1 - 1 x0 + 4 y3 + 5 y2 + 5 y1 + 5 y0 >= 0"
    assert " x3 x2 x1 x0 y3 y2 y1 y0" in lines


def test_uncertified_model_is_not_written(tmp_path, mibs):
    sbox, model = mibs
    path = tmp_path / "bad.txt"
    with pytest.raises(CertificationError):
        write_model(path, model[:-1], sbox)
    assert not path.exists()


def test_format_from_suffix(tmp_path, mibs):
    sbox, model = mibs
    assert write_model(tmp_path / "m.json", model, sbox).read_text().lstrip().startswith("{")
    assert write_model(tmp_path / "m.lp", model, sbox).read_text().startswith("Subject To")


def test_bad_inputs():
    with pytest.raises(ValidationError):
        render_model([Inequality((1, 0), 0)], 1, "yaml")
    with pytest.raises(ValidationError):
        parse_model("this is not a model\n", 4)
