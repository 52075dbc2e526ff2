from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from thomason import desk
from thomason.complexes import koszul
from thomason.errors import ParseError
from thomason.poset import ThomasonFiltration, enumerate_filtrations
from thomason.textformat import dump_complex, dump_filtration, dump_poset, dump_ring, load, loads

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.mark.parametrize("name", ["dual_numbers", "chain", "product", "plane"])
def test_samples_load(name):
    doc = load(str(SAMPLES / ("%s.toml" % name)))
    assert doc.ring is not None and doc.poset is not None and doc.filtration is not None
    assert set(doc.poset.ids) <= set(doc.ring.primes)


def test_product_sample_contents():
    doc = load(str(SAMPLES / "product.toml"))
    R, P = doc.ring, doc.poset
    assert R.degrees == (1, 0) and R.is_artinian
    assert doc.filtration == ThomasonFiltration.tilting(P, ["a"], -1)
    assert len(doc.ideals) == 6


def test_ring_and_complex_round_trip():
    R = desk.q_x_y()
    K = koszul(R, ["x", "y"])
    doc = loads(dump_ring(R) + "\n" + dump_complex(K))
    assert doc.ring.names == R.names and doc.ring.degrees == R.degrees
    assert doc.complex.describe() == K.describe()
    P = desk.product_model()
    again = loads(dump_ring(P)).ring
    assert again.leading_monomials == P.leading_monomials and set(again.primes) == {"a", "b"}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 35))
def test_filtration_round_trip(k):
    R = desk.product_model()
    P = desk.product_poset()
    Phi = list(enumerate_filtrations(P, -2, 2))[k]
    doc = loads(dump_ring(R) + "\n" + dump_poset(P) + "\n" + dump_filtration(Phi))
    assert doc.filtration == Phi
    assert [p.singular for p in doc.poset.points] == [p.singular for p in P.points]


def test_toml_syntax_error_has_position():
    with pytest.raises(ParseError) as e:
        loads('[ring]\nfield = "Q"\nvars = ["x"\n')
    assert e.value.line is not None


def test_semantic_errors_point_at_the_key():
    text = '[ring]\nfield = "Q"\nvars = ["x"]\nrelations = ["x + w"]\n'
    with pytest.raises(ParseError) as e:
        loads(text)
    assert e.value.line == 4
    bad_poset = ('[ring]\nfield = "Q"\nvars = ["x"]\n[ring.primes]\nm = ["x"]\n'
                 '[poset]\ncovers = []\n[poset.points.q]\nsingular = false\n')
    with pytest.raises(ParseError):
        loads(bad_poset)
    bad_filtration = ('[ring]\nfield = "Q"\nvars = ["x"]\n[ring.primes]\nm = ["x"]\n'
                      '[poset]\ncovers = []\n[poset.points.m]\nsingular = false\n'
                      '[filtration]\nwindow = [0, 1]\nlevel.0 = []\nlevel.1 = ["m"]\n')
    with pytest.raises(ParseError):
        loads(bad_filtration)


def test_complex_terms_and_differentials_are_validated():
    base = '[ring]\nfield = "Q"\nvars = ["x"]\n'
    doc = loads(base + '[complex]\nterm.-1 = [1]\nterm.0 = 1\ndiff.-1 = [["x"]]\n')
    assert doc.complex.terms == {-1: (1,), 0: (0,)}
    with pytest.raises(ParseError):
        loads(base + '[complex]\nterm.-1 = [0]\nterm.0 = 1\ndiff.-1 = [["x"]]\n')
