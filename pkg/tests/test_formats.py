import random

import pytest
from hypothesis import given, settings, strategies as st

from circus import formats as F
from circus import generate as G
from circus.errors import MissingBranch, ParseError

from conftest import FIXTURES


def tokens(text):
    return [line.split("#", 1)[0].split() for line in text.splitlines()
            if line.split("#", 1)[0].split()]


@pytest.mark.parametrize("path", sorted(FIXTURES.iterdir()), ids=lambda p: p.name)
def test_fixture_round_trip(path):
    text = path.read_text()
    doc = F.parse(text)
    out = F.serialize(doc)
    assert tokens(out) == tokens(text)
    again = F.parse(out)
    assert F.serialize(again) == out


def test_kind_check():
    with pytest.raises(ParseError, match="expected a nnf"):
        F.parse((FIXTURES / "twosource.nbdd").read_text(), kind="nnf")


@pytest.mark.parametrize("text,message", [
    ("", "line 1: missing header"),
    ("nbdd\nvars X\nedge u0 2 u1\n", "line 3: edge label must be 0, 1 or e"),
    ("nbdd\nvars X\nbogus\n", "line 3: unknown directive"),
    ("nbdd\nnode u X\nnode u X\n", "line 3: duplicate id"),
    ("nnf\nvars X\ngate g var X\n", "missing 'output'"),
    ("nnf\ngate g frob\noutput g\n", "line 2: unknown gate kind"),
    ("vtree\nleaf a X\n", "missing 'root'"),
    ("nfta\nalphabet a b\nstates q\n", "alphabet 0 1"),
    ("nfa\nalphabet 0\nstates q\n", "'initial'"),
    ("circuit\n", "unknown header"),
])
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        F.parse(text)


def test_validation_errors_forwarded():
    with pytest.raises(MissingBranch):
        F.parse("nbdd\nvars X\nnode u X\nsink t t\nedge u 0 t\n")


def test_comments_and_blank_lines():
    doc = F.parse("# lead\n\nnbdd   # header\nvars X\n  sink t t\n")
    assert doc.kind == "nbdd" and list(doc.payload.nodes) == ["t"]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trips(seed):
    rng = random.Random(seed)
    objs = [G.random_diagram(rng), G.random_dnnf(rng, rng.randint(1, 5)),
            G.random_nfa(rng, 3, 0.3), G.random_nfta(rng, 2, 0.3)]
    for obj in objs:
        text = F.serialize(obj)
        assert F.serialize(F.parse(text)) == text
