import pytest

from kellerlab.classify import (
    classify,
    classify_2x2_nilpotent_cubic,
    classify_cubic_dim3_general,
    classify_cubic_rank_le2,
    classify_nilpotent_cubic,
    classify_quartic_dim3_general,
    classify_quartic_dim3_hmg,
    classify_quartic_dim4_dependent,
    factor_nilpotent_2x2,
    normalize_rkform,
)
from kellerlab.classify import families as fam
from kellerlab.classify.cubic import COLUMNS2, DIM3_AFFINE, RANK2_FORM, ROWS, TRIANGULARIZABLE, X3_QUADRATIC_SPAN
from kellerlab.classify.quartic import AFFINE_IN_X1X2, DIM4_PARABOLIC, PARABOLIC
from kellerlab.classify.quartic import RANK1_FORM as Q_RANK1
from kellerlab.classify.quartic import RANK2_FORM as Q_RANK2
from kellerlab.errors import FieldLacksInverses, HypothesisFailed, NotNilpotent, RankMismatch, Unresolved
from kellerlab.mpoly import Poly
from kellerlab.polymap import PolyMap, PolyMatrix, conjugate, general_sl_transform, jacobian
from kellerlab.problem import parse_map, parse_poly
from kellerlab.scalars import QQ, Field, Matrix

RANK2 = ["x1*x3*x4 - x2*x4^2", "x1*x3^2 - x2*x3*x4", "0", "0"]
T4 = Matrix(QQ, [[1, 2, 0, -1], [0, 1, 3, 0], [2, 0, 1, 1], [0, -1, 0, 2]])


def is_identity(T):
    return T == Matrix.identity(T.field, T.nrows)


def assert_report(rep, family):
    assert rep.family == family
    assert rep.verified
    # independent re-check of the reverse conjugation
    S = rep.S if rep.S is not None else None
    if S is None:
        assert conjugate(rep.normal_form, rep.T.inverse()) == rep.source
    else:
        assert general_sl_transform(rep.source, S, rep.T) == rep.normal_form


# normal forms of the rank of JH at a point


def test_normalize_rkform_case_ii_example():
    S, T, Ht, info = normalize_rkform(parse_map(["x2^3", "0"]))
    assert info["case"] == "ii" and info["w"] == (0, 1)
    assert T == Matrix(QQ, [[0, 1], [1, 0]])
    assert S == Matrix(QQ, [[QQ("1/3"), 0], [0, 1]])
    assert jacobian(Ht).evaluate((1, 0)) == Matrix(QQ, [[1, 0], [0, 0]])


def test_normalize_rkform_zero_map():
    S, T, Ht, info = normalize_rkform(PolyMap.zero(QQ, 3), 0)
    assert is_identity(S) and is_identity(T) and Ht.is_zero()


def test_normalize_rkform_case_i_in_characteristic_three():
    # JH x = 3H vanishes for a cubic form only when 3 = 0
    K = Field(3)
    S, T, Ht, info = normalize_rkform(parse_map(["x1^2*x2", "0"], field=K))
    assert info["case"] == "i"
    assert jacobian(Ht).evaluate((0, 1)) == Matrix(K, [[1, 0], [0, 0]])


def test_normalize_rkform_rank_mismatch():
    with pytest.raises(RankMismatch):
        normalize_rkform(parse_map(["x2^3", "0"]), 2)


# 2x2 blocks


def block(rows, n=4):
    return PolyMatrix([[parse_poly(t, n) for t in r] for r in rows])


def test_factor_nilpotent_2x2_examples():
    a, b, c, tri = factor_nilpotent_2x2(block([["x3*x4", "-x4^2"], ["x3^2", "-x3*x4"]]))
    assert (a, b, c, tri) == (parse_poly("x3", 4), parse_poly("x4", 4), parse_poly("1", 4), False)
    # with a = 0 the split of -b^2 c is not unique, so check the identity
    B = block([["0", "-x1^2"], ["0", "0"]])
    a, b, c, tri = factor_nilpotent_2x2(B)
    assert a.is_zero() and tri
    assert -(b * b * c) == B[0, 1]
    a, b, c, tri = factor_nilpotent_2x2(block([["0", "0"], ["0", "0"]]))
    assert a.is_zero() and b.is_zero() and c.is_zero() and tri
    with pytest.raises(NotNilpotent):
        factor_nilpotent_2x2(block([["x1", "0"], ["0", "0"]]))


def test_2x2_cubic_cases():
    res = classify_2x2_nilpotent_cubic(parse_map(["x4*(x3*x1 - x4*x2)", "x3*(x3*x1 - x4*x2)"], 4))
    assert res.case == "case2" and res.a == parse_poly("x3", 4) and res.b == parse_poly("x4", 4)
    assert classify_2x2_nilpotent_cubic(parse_map(["x2^3", "0"])).case == "triangular"
    res = classify_2x2_nilpotent_cubic(parse_map(["-x1^2*x2", "x1*x2^2"], field=Field(3)))
    assert res.case == "case3"
    # the third case needs 1/3 to be missing
    with pytest.raises(HypothesisFailed):
        classify_2x2_nilpotent_cubic(parse_map(["-x1^2*x2", "x1*x2^2"]))


# cubic maps with rank at most two


def test_rows_family():
    rep = classify_cubic_rank_le2(parse_map(["x2^3", "x2^3", "0"]))
    assert_report(rep, ROWS)
    assert rep.residual_params["r"] == 1


def test_x3_quadratic_span_identity():
    rep = classify_cubic_rank_le2(parse_map(["x3*x1^2", "x3*x1*x2", "x3*x2^2"]))
    assert_report(rep, X3_QUADRATIC_SPAN)
    assert is_identity(rep.T)


def test_columns2_round_trip():
    for seed in range(3):
        assert_report(classify_cubic_rank_le2(fam.sample(COLUMNS2, seed)), COLUMNS2)


def test_rank_le2_gate():
    with pytest.raises(FieldLacksInverses):
        classify_cubic_rank_le2(parse_map(["x2^3", "x2^3", "0"], field=Field(3)))


# nilpotent cubic maps


def test_rank2_form_is_its_own_normal_form():
    rep = classify_nilpotent_cubic(parse_map(RANK2))
    assert_report(rep, RANK2_FORM)
    assert is_identity(rep.T)
    assert all(t.is_zero() for t in rep.residual_params.values())


def test_rank2_form_conjugate_recovered():
    rep = classify_nilpotent_cubic(conjugate(parse_map(RANK2), T4))
    assert_report(rep, RANK2_FORM)


def test_triangular_seed_is_triangularizable():
    H = conjugate(parse_map(["0", "x1^3", "x1^2*x2 - x2^3", "x1*x2*x3"]), T4)
    assert_report(classify_nilpotent_cubic(H), TRIANGULARIZABLE)


def test_nilpotent_cubic_rejects_large_rank():
    H = parse_map(["0", "x1^3", "x2^3", "x3^3", "x4^3"])
    with pytest.raises(HypothesisFailed):
        classify_nilpotent_cubic(H)


# cubic maps in dimension three


def test_dim3_cubic_display():
    rep = classify_cubic_dim3_general(parse_map(["x1*x3 - x2", "x1*x3^2 - x2*x3", "0"]))
    assert_report(rep, DIM3_AFFINE)
    assert is_identity(rep.T)


def test_dim3_cubic_round_trip_with_shift():
    assert_report(classify_cubic_dim3_general(fam.sample(DIM3_AFFINE, 7)), DIM3_AFFINE)


def test_dim3_cubic_upper_triangular():
    rep = classify_cubic_dim3_general(parse_map(["x2^3 + x3^2", "x3^3 - x3", "0"]))
    assert_report(rep, TRIANGULARIZABLE)


# quartic maps


def test_quartic_hmg_examples():
    rep = classify_quartic_dim3_hmg(parse_map(["0", "1/4*x1^4", "x1^3*x2"]))
    assert_report(rep, Q_RANK2)
    assert is_identity(rep.T)
    assert (rep.residual_params["u3"], rep.residual_params["v3"], rep.residual_params["w3"]) == (0, 0, 0)
    rep = classify_quartic_dim3_hmg(parse_map(["0", "1/4*x1^4 + x3^4", "0"]))
    assert_report(rep, Q_RANK1)
    assert (rep.residual_params["u2"], rep.residual_params["v2"], rep.residual_params["w2"]) == (0, 0, 1)
    for family in (Q_RANK1, Q_RANK2):
        assert_report(classify_quartic_dim3_hmg(fam.sample(family, 3)), family)


def test_quartic_hmg_rank_zero_rejected():
    with pytest.raises(HypothesisFailed):
        classify_quartic_dim3_hmg(PolyMap.zero(QQ, 3))


PARABOLA = ["x2 - x1^2", "2*x1*(x2 - x1^2) + x3", "-(x2 - x1^2)^2"]


def test_quartic_general_examples():
    rep = classify_quartic_dim3_general(parse_map(PARABOLA))
    assert_report(rep, PARABOLIC)
    assert is_identity(rep.T)
    rep = classify_quartic_dim3_general(parse_map(["x3^2*(x3*x1 - x3*x2)", "x3^2*(x3*x1 - x3*x2)", "0"]))
    assert_report(rep, AFFINE_IN_X1X2)
    assert {"a", "b", "c"} <= set(rep.residual_params)
    assert_report(classify_quartic_dim3_general(fam.sample(PARABOLIC, 2)), PARABOLIC)


def test_translated_parabola_is_unresolved():
    # a translate keeps the Jacobian structure but leaves both families
    H = parse_map(PARABOLA)
    H = PolyMap([H[0], H[1] + Poly.const(QQ, 3, 1), H[2]])
    with pytest.raises(Unresolved) as info:
        classify_quartic_dim3_general(H)
    assert info.value.trace


DIM4_PARABOLA = ["x4^2*(x2*x4 - x1^2)", "2*x1*x4*(x2*x4 - x1^2) + x3*x4^3", "-(x2*x4 - x1^2)^2", "0"]


def test_quartic_dim4_examples():
    rep = classify_quartic_dim4_dependent(parse_map(DIM4_PARABOLA))
    assert_report(rep, DIM4_PARABOLIC)
    assert is_identity(rep.T)
    assert_report(classify_quartic_dim4_dependent(conjugate(parse_map(DIM4_PARABOLA), T4)), DIM4_PARABOLIC)
    with pytest.raises(HypothesisFailed):
        classify_quartic_dim4_dependent(parse_map(["x2^4", "x3^4", "x4^4", "x1^3*x2"]))


def test_dispatcher_routes():
    assert classify(parse_map(RANK2)).family == RANK2_FORM
    assert classify(parse_map(PARABOLA)).family == PARABOLIC
    assert classify(parse_map(["x2^3", "x2^3", "0"])).family == ROWS
    with pytest.raises(HypothesisFailed):
        classify(PolyMap.zero(QQ, 3))
    with pytest.raises(HypothesisFailed):
        classify(parse_map(["x1^5", "0"]))


def test_report_serialization():
    d = classify(parse_map(RANK2)).to_dict()
    assert d["family"] == RANK2_FORM and d["verified"] is True
    assert d["T"] == [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]
    assert d["normal_form"][0] == "x1*x3*x4 - x2*x4^2"
