import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksbicat.bimodule import compose, identity_1cell
from ksbicat.instances import builtin_group, group_algebra, scrambled
from ksbicat.io import (
    GENERATOR_KINDS,
    InstanceFile,
    InstanceFormatError,
    atomic_write,
    dumps,
    generate,
    generate_algebra,
    load,
    loads,
    save,
)
from ksbicat.kstheory import ks_decompose, split_by_idempotent, verify_direct_sum
from ksbicat.linalg import GF, QQ

RECIPES = [
    {"kind": "group-algebra", "group": "S3"},
    {"kind": "group-algebra", "group": "C4"},
    {"kind": "matrix-algebra", "n": 2},
    {"kind": "path-algebra", "vertices": 3, "arrows": [[0, 1], [1, 2]]},
    {"kind": "product", "factors": [{"kind": "field"}, {"kind": "matrix-algebra", "n": 2}]},
    {"kind": "split", "n": 3},
    {"kind": "polynomial", "coeffs": ["1", "0", "1"]},
    {"kind": "scrambled", "of": {"kind": "group-algebra", "group": "C3"}, "seed": 7},
]


def _doc(**sections):
    return json.dumps({"field": "Q", **sections})


K2 = {"dim": 2, "unit": ["1", "1"], "mul": [[0, 0, 0, "1"], [1, 1, 1, "1"]]}


# -- loading ----------------------------------------------------------------

def test_explicit_algebra_and_elements():
    inst = loads(_doc(algebras={"K": K2}, elements={"e": ["1", "0"], "h": ["1/2", "-3/4"]}))
    A = inst.get("algebras", "K")
    assert A.dim == 2 and A.name == "K"
    assert inst.elements["h"] == (QQ("1/2"), QQ("-3/4"))
    with pytest.raises(InstanceFormatError, match="no algebra"):
        inst.get("algebras", "L")


def test_default_field_and_prime_field():
    assert loads(json.dumps({"algebras": {"K": K2}})).field == QQ
    inst = loads(json.dumps({"field": "F_5", "algebras": {"A": {"generate": {"kind": "group-algebra", "group": "C4"}}}}))
    assert inst.field == GF(5) and inst.algebras["A"].dim == 4
    assert loads(json.dumps({"field": {"kind": "prime-field", "p": 3}, "algebras": {}})).field == GF(3)


@pytest.mark.parametrize("recipe", RECIPES, ids=lambda r: r["kind"])
def test_recipes_load(recipe):
    inst = loads(_doc(algebras={"A": {"generate": recipe}}))
    assert inst.algebras["A"] == generate_algebra(QQ, recipe)


def test_recipe_can_refer_to_named_algebras():
    inst = loads(_doc(algebras={
        "B": {"generate": {"kind": "scrambled", "of": "A", "seed": 3}},
        "A": {"generate": {"kind": "group-algebra", "group": "S3"}},
    }))
    assert inst.algebras["B"] == scrambled(inst.algebras["A"], 3)


def test_bimodule_expressions():
    inst = loads(_doc(
        algebras={"K": K2},
        bimodules={"Id": {"identity": "K"}, "T": {"compose": ["Id", "Id"]}},
    ))
    K = inst.algebras["K"]
    assert inst.bimodules["Id"] is identity_1cell(K)
    assert inst.bimodules["T"] is compose(identity_1cell(K), identity_1cell(K))


def test_corner_splittings_and_decompositions():
    inst = loads(_doc(
        algebras={"K": K2},
        elements={"e": ["1", "0"], "f": ["0", "1"]},
        splittings={"Se": {"corner": {"algebra": "K", "idempotent": "e"}},
                    "Sf": {"corner": {"algebra": "K", "idempotent": "f"}},
                    "T": {"twist": {"of": "Se", "scalar": "3"}}},
        diagrams={"D": {"X": "K", "summands": ["Se", "Sf"]}},
        decompositions={"auto": {"algebra": "K"}, "given": {"algebra": "K", "summands": ["Sf", "Se"]},
                        "seeded": {"algebra": "K", "basis_seed": 5}},
    ))
    assert verify_direct_sum(inst.diagrams["D"]).passed
    assert not inst.splittings["T"].report.passed
    assert inst.decompositions["given"].complete
    assert inst.decompositions["given"].idempotents == ((0, 1), (1, 0))
    assert len(inst.decompositions["auto"]) == 2


@pytest.mark.parametrize("doc,msg", [
    ("{", "invalid JSON"),
    ("[]", "JSON object"),
    (_doc(algebras={"K": {"dim": 2, "unit": ["1"], "mul": []}}), "2 scalars"),
    (_doc(algebras={"K": {"dim": 2, "unit": ["1", "0"], "mul": [[0, 0, 5, "1"]]}}), "out of range"),
    (_doc(algebras={"K": {"dim": 2, "unit": ["1", "1"], "mul": [[0, 0, 0, 1.5]]}}), "exact"),
    (_doc(algebras={"K": {"dim": 1, "unit": ["1"], "mul": [[0, 0, 0, "2"]]}}), "K"),
    (_doc(algebras={"A": {"generate": {"kind": "scrambled", "of": "B", "seed": 1}},
                    "B": {"generate": {"kind": "scrambled", "of": "A", "seed": 1}}}), "circular"),
    (_doc(algebras={"A": {"generate": {"kind": "scrambled", "of": "Z", "seed": 1}}}), "unresolved"),
    (_doc(algebras={"A": {"generate": {"kind": "group-algebra", "table": [[0, 1], [1, 1]]}}}), "Latin"),
    (_doc(algebras={"A": {"generate": {"kind": "path-algebra", "vertices": 2, "arrows": [[0, 1], [1, 0]]}}}),
     "cycle"),
    (_doc(algebras={"A": {"generate": {"kind": "tensor"}}}), "unknown generator"),
    (_doc(algebras={"A": {"generate": {"kind": "matrix-algebra"}}}), "missing"),
    (_doc(algebras={"A": {"generate": {"kind": "matrix-algebra", "n": 9}}}), "matrix size"),
    (_doc(algebras={"K": K2}, bimodules={"M": {"left": "K", "right": "K", "dim": 1,
                                               "left_action": [[["1"]], [["1"]]],
                                               "right_action": [[["1"]], [["0"]]]}}), "M"),
    (_doc(algebras={"K": K2}, bimodules={"M": {"identity": "K"}},
          maps={"f": {"source": "M", "target": "M", "matrix": [["0", "1"], ["1", "0"]]}}), "commute"),
    (_doc(algebras={"K": K2}, splittings={"S": {"corner": {"algebra": "K", "idempotent": "e"}}}), "no element"),
    (_doc(algebras={"K": K2}, elements={"e": ["1", "1/2"]},
          splittings={"S": {"corner": {"algebra": "K", "idempotent": "e"}}}), "idempotent"),
    (_doc(algebras={"K": K2}, decompositions={"D": {"algebra": "K", "basis_seed": "x"}}), "basis_seed"),
    (_doc(algebras={"K": K2}, diagrams={"D": {"summands": []}}), "missing"),
])
def test_malformed_files(doc, msg):
    with pytest.raises(InstanceFormatError, match=msg):
        loads(doc)


def test_load_missing_file(tmp_path):
    with pytest.raises(InstanceFormatError, match="cannot read"):
        load(tmp_path / "nope.json")


# -- saving -----------------------------------------------------------------

def _instance(F, group, seed):
    A = group_algebra(F, builtin_group(group), "A")
    inst = InstanceFile(F)
    inst.algebras["A"] = A
    D = ks_decompose(A, basis_seed=seed)
    inst.decompositions["D"] = D
    for k, s in enumerate(D.summands):
        inst.splittings[f"S{k}"] = s
    inst.diagrams["sum"] = D.diagram
    inst.elements["one"] = A.unit
    inst.bimodules["Id"] = identity_1cell(A)
    return inst


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([QQ, GF(2), GF(3), GF(5)]), st.sampled_from(["C2", "C3", "S3"]), st.integers(0, 10**4))
def test_round_trip_is_bit_exact(F, group, seed):
    inst = _instance(F, group, seed)
    text = dumps(inst)
    back = loads(text)
    assert dumps(back) == text
    assert back.algebras["A"] == inst.algebras["A"]
    assert back.elements == inst.elements
    for name, s in inst.splittings.items():
        t = back.splittings[name]
        assert t.eta.matrix == s.eta.matrix and t.epsbar.matrix == s.epsbar.matrix
        assert t.Y == s.Y
    assert back.decompositions["D"].idempotents == inst.decompositions["D"].idempotents
    assert verify_direct_sum(back.diagrams["sum"]).passed


def test_scalars_are_exact_strings():
    inst = InstanceFile(QQ)
    inst.elements["x"] = (QQ("1/3"), QQ(-2))
    inst.algebras["K"] = loads(_doc(algebras={"K": K2})).algebras["K"]
    raw = json.loads(dumps(inst))
    assert raw["elements"]["x"] == ["1/3", "-2"]
    assert all(isinstance(c, str) for *_, c in raw["algebras"]["K"]["mul"])


def test_save_and_atomic_write(tmp_path):
    inst = generate("group-algebra", GF(3), {"group": "S3"}, name="G")
    path = tmp_path / "g.json"
    save(inst, path)
    assert load(path).algebras["G"] == inst.algebras["G"]
    atomic_write(path, "replaced\n")
    assert path.read_text() == "replaced\n"
    assert [p.name for p in tmp_path.iterdir()] == ["g.json"]


def test_generate_all_kinds():
    params = {"group-algebra": {"group": "C3"}, "matrix-algebra": {"n": 2},
              "path-algebra": {"vertices": 2, "arrows": [[0, 1]]},
              "product": {"factors": [{"kind": "field"}, {"kind": "field"}]},
              "scrambled": {"of": {"kind": "matrix-algebra", "n": 2}, "seed": 1},
              "split": {"n": 2}, "field": {}, "polynomial": {"coeffs": ["0", "0", "1"]}}
    assert set(params) == set(GENERATOR_KINDS)
    dims = {k: generate(k, QQ, p).algebras["A"].dim for k, p in params.items()}
    assert dims == {"group-algebra": 3, "matrix-algebra": 4, "path-algebra": 3, "product": 2,
                    "scrambled": 4, "split": 2, "field": 1, "polynomial": 2}
    assert generate("product", QQ, {"factors": [{"kind": "field"}] * 3}).algebras["A"].dim == 3


def test_split_datum_survives_explicit_round_trip():
    A = group_algebra(QQ, builtin_group("S3"), "A")
    s, _ = split_by_idempotent(A, ks_decompose(A).idempotents[2])
    inst = InstanceFile(QQ, algebras={"A": A}, splittings={"S": s})
    back = loads(dumps(inst)).splittings["S"]
    assert back.report.passed
