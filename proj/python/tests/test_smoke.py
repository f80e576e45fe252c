import os

import pytest

import khdetect

DATA = os.environ.get("KHD_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def load(name):
    return khdetect.load_diagram_file(os.path.join(DATA, name))


def test_t26_table():
    groups = khdetect.khovanov(load("t26_braid.json"))["groups"]
    assert len(groups) == 10
    torsion = {(g["i"], g["j"]) for g in groups if g["torsion"]}
    assert torsion == {(3, 10), (5, 14)}
    assert sum(g["free"] for g in groups) == 8


def test_reduced_and_field_ranks():
    d = load("t26_pd.json")
    assert sum(g["free"] for g in khdetect.khovanov(d, ring="F2")["groups"]) == 12
    assert sum(g["free"] for g in khdetect.khovanov(d, ring="F2", basepoint=d.arcs[0])["groups"]) == 6


def test_lee_and_jones():
    d = load("t26_pd.json")
    assert khdetect.lee_ranks(d) == {0: 2, 6: 2}
    assert khdetect.jones(d) == {4: 1, 6: 1, 8: 1, 18: 1}
    assert d.linking_number(0, 1) == 3


def test_braid_closure():
    d = khdetect.braid_closure(2, [1] * 6)
    assert d.crossings == 6 and d.components == 2
    assert khdetect.khovanov(d) == khdetect.khovanov(load("t26_axis.json"))


def test_detect():
    report = khdetect.detect(load("t26_axis.json"))
    assert report["overall"] == "pass"
    mismatch = khdetect.detect(load("l6a2_axis.json"))
    assert mismatch["overall"] == "fail"


def test_hfl_cases():
    reports = khdetect.hfl_cases()
    assert [r["case"] for r in reports] == ["x>5/2", "5/2", "3/2", "1/2", "-1/2", "-3/2", "x<-3/2"]
    assert all(r["counterexamples"] == [] for r in reports)
    one = khdetect.hfl_cases("1/2")
    assert one[0]["admissible"] == 1


def test_errors():
    with pytest.raises(ValueError):
        khdetect.load_diagram("[[1,2,3]]")
    with pytest.raises(khdetect.ParseError):
        khdetect.load_diagram("not json")
    with pytest.raises(ArithmeticError):
        khdetect.khovanov(load("unknot.json"), ring="F4")
    with pytest.raises(khdetect.ResourceError):
        khdetect.khovanov(khdetect.braid_closure(2, [1] * 21))
