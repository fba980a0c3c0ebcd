import json

import pytest

from qbrst import bundled as bundled_defs
from qbrst.qlie import (
    DATA_DIR,
    ShapeError,
    StructureConstants,
    StructureError,
    build_z,
    build_z_explicit,
    check_declared_properties,
    check_yang_baxter,
    load_structure,
    parse_structure,
    solve_t_lift,
    structure_to_dict,
    validate_structure,
    z_from_jucys_murphy,
)
from qbrst.multilinear import LinOp


@pytest.mark.parametrize("name", sorted(bundled_defs.BUNDLED))
def test_shipped_json_matches_definitions(name):
    shipped = json.loads((DATA_DIR / f"{name}.json").read_text())
    assert shipped == bundled_defs.BUNDLED[name]()


def test_bundled_algebras_are_valid(algebra):
    assert validate_structure(algebra).all_passed
    assert check_yang_baxter(algebra).all_passed
    assert check_declared_properties(algebra).ok


def test_six_itemized_constraints(algebra):
    ids = [c.check_id for c in validate_structure(algebra).checks]
    assert ids == ["sigma_invertible", "sigma_eigenvalue_one", "braid_relation", "q_jacobi",
                   "c_sigma_sigma", "mixed_commutation"]


def test_single_entry_perturbation_fails_with_witness():
    doc = bundled_defs.sl2_doc()
    doc["c"][0][3] = "3"
    sc = parse_structure(doc)
    report = validate_structure(sc)
    assert not report.ok
    bad = report.failures()[0]
    assert bad.witness is not None
    assert not check_yang_baxter(sc).ok


def test_round_trip_through_the_document_layout(algebra):
    again = parse_structure(structure_to_dict(algebra))
    assert again.sigma == algebra.sigma and again.c == algebra.c


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"n": 0}, "'n'"),
        ({"field": "complex"}, "'field'"),
        ({"sigma": [[1, 2, 3]]}, "sigma[0]"),
        ({"c": [[1, 1, 9, "1"]]}, "c[0]"),
        ({"c": [[1, 1, 1, "1/x"]]}, "c[0]"),
        ({"properties": ["nice"]}, "properties"),
    ],
)
def test_parse_errors_carry_locations(patch, message):
    doc = bundled_defs.sl2_doc()
    doc.update(patch)
    with pytest.raises(StructureError, match=message.replace("[", r"\[").replace("]", r"\]")):
        parse_structure(doc)


def test_bad_files(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(StructureError):
        load_structure(p)
    with pytest.raises(StructureError):
        load_structure(tmp_path / "missing.json")


def test_shape_errors():
    with pytest.raises(ShapeError):
        StructureConstants(2, LinOp.zeros(2, 1, 1), LinOp.zeros(2, 2, 1))


@pytest.mark.parametrize("r", [2, 3, 4])
def test_three_routes_to_z(algebra, r):
    z = build_z(algebra, r)
    assert z == build_z_explicit(algebra, r)
    assert z == z_from_jucys_murphy(algebra, r)


def test_t_lift_solves_the_relation(algebra):
    lift = solve_t_lift(algebra)
    one_minus_sigma = LinOp(algebra.n, 2, 2, (algebra.sigma.scale(-1).data + _eye(algebra.n ** 2)))
    assert one_minus_sigma @ lift.t == algebra.c
    for b in range(len(lift.kernel)):
        assert one_minus_sigma @ lift.shifted({(b, 0): 1}) == algebra.c


def _eye(n):
    import numpy as np

    e = np.zeros((n, n), dtype=object)
    e[:] = 0
    for i in range(n):
        e[i, i] = 1
    return e
