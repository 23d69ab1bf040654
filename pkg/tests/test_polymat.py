import json

import numpy as np
import pytest

import minbasis as mb
from minbasis.polymat import (
    PolyMat,
    from_dict,
    load,
    poly_equal,
    s1_stack,
    save,
    to_dict,
)

from helpers import example1, example3, one_lambda, one_lambda_dual


def naive_evaluate(P, lam):
    out = np.zeros((P.rows, P.cols), dtype=complex)
    for i in range(P.degree_bound + 1):
        out += P.coeffs[i] * lam**i
    return out


def test_degree_reads_off_nonzero_coefficient():
    assert mb.degree(one_lambda()) == 1


def test_degree_example1_is_one():
    assert mb.degree(example1()) == 1


def test_degree_of_zero_matrix_is_zero_by_convention():
    Z = PolyMat.zeros(2, 3, 3)
    assert mb.degree(Z) == 0
    assert mb.row_degrees(Z) == [0, 0]


def test_row_degrees_examples():
    assert mb.row_degrees(example1()) == [1, 1, 1, 1, 1, 1]
    assert mb.row_degrees(example3()) == [1, 1, 1, 1, 2, 2]


def test_highest_row_degree_matrix_single_row():
    hr = mb.highest_row_degree_matrix(one_lambda())
    assert np.array_equal(hr, [[0.0, 1.0]])


def test_highest_row_degree_matrix_example1():
    hr = mb.highest_row_degree_matrix(example1())
    expected = np.zeros((6, 8))
    for b in range(3):
        expected[2 * b : 2 * b + 2, 2 * b + 2 : 2 * b + 4] = np.eye(2)
    assert np.array_equal(hr, expected)
    assert np.linalg.matrix_rank(hr) == 6


def test_highest_row_degree_matrix_example3_mixed_degrees():
    hr = mb.highest_row_degree_matrix(example3())
    M = example3()
    assert np.array_equal(hr[:4], M.coeffs[1][:4])
    assert np.array_equal(hr[4:], M.coeffs[2][4:])
    assert np.linalg.matrix_rank(hr) == 6


def test_evaluate_simple():
    assert np.array_equal(mb.evaluate(one_lambda(), 2.0), [[1.0, 2.0]])


def test_evaluate_example1_at_zero():
    M0 = mb.evaluate(example1(), 0.0)
    assert np.array_equal(M0, example1().coeffs[0])
    assert np.linalg.matrix_rank(M0) == 6


def test_evaluate_matches_naive_power_sum():
    rng = np.random.default_rng(11)
    P = PolyMat(rng.standard_normal((4, 3, 5)))
    for lam in [0.3, -1.7, 2.5 + 0.5j, rng.standard_normal()]:
        got = mb.evaluate(P, lam)
        assert np.allclose(got, naive_evaluate(P, lam), rtol=1e-12, atol=1e-12)


def test_reversal_swaps_coefficients():
    rev = mb.reversal(one_lambda(), 1)
    assert np.array_equal(rev.coeffs[0], [[0.0, 1.0]])
    assert np.array_equal(rev.coeffs[1], [[1.0, 0.0]])


def test_reversal_example1_swaps_blocks():
    M = example1()
    rev = mb.reversal(M, 1)
    assert np.array_equal(rev.coeffs[0], M.coeffs[1])
    assert np.array_equal(rev.coeffs[1], M.coeffs[0])


def test_reversal_is_involution_exactly():
    rng = np.random.default_rng(5)
    for _ in range(10):
        P = PolyMat(rng.standard_normal((3, 2, 4)))
        assert poly_equal(mb.reversal(mb.reversal(P, P.degree_bound), P.degree_bound), P)
        # At a larger grade the round trip reproduces P inside that grade.
        g = P.degree_bound + 2
        assert poly_equal(mb.reversal(mb.reversal(P, g), g), mb.embed(P, g))


def test_reversal_rejects_grade_below_degree():
    with pytest.raises(mb.ShapeError, match="grade below degree"):
        mb.reversal(one_lambda(), 0)


def test_multiply_transpose_dual_pair_is_zero():
    prod = mb.poly_multiply_transpose(one_lambda(), one_lambda_dual())
    assert not np.any(prod.coeffs)
    assert prod.degree_bound == 2


def test_multiply_transpose_example1_pair_is_zero():
    from helpers import example1_N

    prod = mb.poly_multiply_transpose(example1(), example1_N())
    assert prod.rows == 6 and prod.cols == 2
    assert not np.any(prod.coeffs)


def test_multiply_transpose_matches_pointwise_evaluation():
    rng = np.random.default_rng(23)
    A = PolyMat(rng.standard_normal((3, 2, 5)))
    B = PolyMat(rng.standard_normal((2, 3, 5)))
    prod = mb.poly_multiply_transpose(A, B)
    scale = 1.0 + np.linalg.norm(s1_stack(A)) * np.linalg.norm(s1_stack(B))
    for _ in range(10):
        lam = complex(rng.standard_normal(), rng.standard_normal())
        lhs = mb.evaluate(prod, lam)
        rhs = mb.evaluate(A, lam) @ mb.evaluate(B, lam).T
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


def test_multiply_transpose_rejects_dimension_mismatch():
    A = PolyMat.zeros(2, 4, 1)
    B = PolyMat.zeros(2, 5, 1)
    with pytest.raises(mb.ShapeError):
        mb.poly_multiply_transpose(A, B)


def test_mixed_field_operations_rejected():
    A = PolyMat.zeros(2, 4, 1, field="real")
    B = PolyMat.zeros(2, 4, 1, field="complex")
    with pytest.raises(mb.FieldMismatchError):
        mb.poly_multiply_transpose(A, B)
    with pytest.raises(mb.FieldMismatchError):
        mb.add(A, B)


def test_s1_norms_example1_spectral_is_sqrt2():
    spec, fro = mb.s1_norms(example1())
    assert abs(spec - np.sqrt(2.0)) < 1e-12
    assert abs(fro - np.sqrt(12.0)) < 1e-12


def test_s1_norms_zero_matrix():
    assert mb.s1_norms(PolyMat.zeros(2, 3, 1)) == (0.0, 0.0)


def test_s1_frobenius_is_entry_sum_root():
    rng = np.random.default_rng(7)
    P = PolyMat(rng.standard_normal((4, 3, 6)))
    _, fro = mb.s1_norms(P)
    assert abs(fro - np.sqrt((P.coeffs**2).sum())) < 1e-12


def test_spectral_below_frobenius_with_rank_one_equality():
    rng = np.random.default_rng(9)
    for _ in range(10):
        P = PolyMat(rng.standard_normal((3, 2, 4)))
        spec, fro = mb.s1_norms(P)
        assert spec <= fro + 1e-12
    u = rng.standard_normal((6, 1))
    v = rng.standard_normal((1, 4))
    rank1 = PolyMat((u @ v).reshape(3, 2, 4))
    spec, fro = mb.s1_norms(rank1)
    assert abs(spec - fro) < 1e-10 * fro


def test_s1_frobenius_transpose_invariant():
    rng = np.random.default_rng(13)
    P = PolyMat(rng.standard_normal((3, 2, 5)))
    Pt = PolyMat(np.transpose(P.coeffs, (0, 2, 1)))
    assert abs(mb.s1_norms(P)[1] - mb.s1_norms(Pt)[1]) < 1e-14


def test_construction_rejects_nan():
    with pytest.raises(mb.InputFormatError):
        PolyMat(np.array([[[np.nan, 0.0]]]))


def test_coefficients_are_immutable():
    P = example1()
    with pytest.raises(ValueError):
        P.coeffs[0, 0, 0] = 5.0


def test_embed_preserves_value_and_raises_grade():
    M = example1()
    E = mb.embed(M, 3)
    assert E.degree_bound == 3
    assert mb.degree(E) == 1
    rng = np.random.default_rng(2)
    lam = rng.standard_normal()
    assert np.allclose(mb.evaluate(E, lam), mb.evaluate(M, lam))


# -- JSON interchange ----------------------------------------------------------


def test_json_round_trip_real(tmp_path):
    M = example1()
    path = tmp_path / "m.json"
    save(M, path)
    assert poly_equal(load(path), M)


def test_json_round_trip_complex(tmp_path):
    rng = np.random.default_rng(3)
    P = PolyMat(rng.standard_normal((2, 2, 3)) + 1j * rng.standard_normal((2, 2, 3)))
    path = tmp_path / "c.json"
    save(P, path)
    Q = load(path)
    assert Q.field == "complex"
    assert poly_equal(Q, P)


def test_json_rejects_wrong_coefficient_count():
    obj = to_dict(example1())
    obj["coefficients"] = obj["coefficients"][:1]
    with pytest.raises(mb.InputFormatError, match="expected 2 matrices"):
        from_dict(obj)


def test_json_rejects_ragged_rows():
    obj = to_dict(one_lambda())
    obj["coefficients"][0][0] = [1.0]
    with pytest.raises(mb.InputFormatError, match="columns"):
        from_dict(obj)


def test_json_rejects_bad_field_tag():
    obj = to_dict(one_lambda())
    obj["field"] = "rational"
    with pytest.raises(mb.InputFormatError, match="field"):
        from_dict(obj)


def test_json_rejects_missing_key():
    obj = to_dict(one_lambda())
    del obj["rows"]
    with pytest.raises(mb.InputFormatError, match="rows"):
        from_dict(obj)


def test_load_reports_json_syntax_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json }")
    with pytest.raises(mb.InputFormatError, match="line"):
        load(path)
