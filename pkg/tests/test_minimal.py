import numpy as np
import pytest

import minbasis as mb
from minbasis.minimal import (
    REASON_DEGREE_SUM,
    REASON_HR,
    certify_full_leading,
    certify_minimal_basis,
    classical_check,
    minimal_index_sum,
    rank_profile,
    right_minimal_indices,
)
from minbasis.polymat import PolyMat

from helpers import example1, example2, example3, one_lambda


def test_rank_profile_example1():
    prof = rank_profile(example1())
    assert prof.ranks == (8, 16, 24, 30)
    assert prof.nullities == (0, 0, 0, 2)
    assert prof.d_prime == 3
    assert prof.alphas == (0, 0, 0, 2)
    assert prof.normal_rank_full


def test_rank_profile_example2():
    prof = rank_profile(example2())
    assert prof.ranks == (6, 11, 15)
    assert prof.nullities == (1, 3, 6)
    assert prof.d_prime == 2
    assert prof.alphas == (1, 1, 1)


def test_rank_profile_example3():
    prof = rank_profile(example3())
    assert prof.ranks == (8, 16, 24, 32, 38)
    assert prof.nullities == (0, 0, 0, 0, 2)
    assert prof.d_prime == 4
    assert prof.alphas == (0, 0, 0, 0, 2)


def test_rank_profile_increments_non_increasing():
    for M in (example1(), example2(), example3()):
        prof = rank_profile(M)
        incs = np.diff(np.concatenate(([0], prof.ranks)))
        assert all(a >= b for a, b in zip(incs, incs[1:]))


def test_rank_profile_nullity_identity():
    for M in (example1(), example2(), example3()):
        prof = rank_profile(M)
        q = M.cols
        for k, (r, n) in enumerate(zip(prof.ranks, prof.nullities), start=1):
            assert r + n == k * q


def test_rank_profile_rejects_tall_or_constant_input():
    with pytest.raises(mb.ShapeError):
        rank_profile(PolyMat.zeros(4, 3, 1))
    with pytest.raises(mb.ShapeError):
        rank_profile(PolyMat.zeros(2, 4, 0))


def test_rank_profile_detects_rank_deficiency():
    # Rows are parallel over the rational functions: normal rank 1 < 2.
    C0 = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    C1 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    C2 = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    M = PolyMat.from_coeff_list([C0, C1, C2])  # rows [1+lam*e2, lam*(1+lam*e2)]
    prof = rank_profile(M)
    assert not prof.normal_rank_full
    assert prof.stabilized_increment == 1
    assert prof.alphas == ()
    with pytest.raises(mb.NotFullNormalRankError) as err:
        right_minimal_indices(M)
    assert err.value.stabilized_rank == 1


def test_right_minimal_indices_examples():
    assert right_minimal_indices(example1()) == [3, 3]
    assert right_minimal_indices(example2()) == [0, 1, 2]
    assert right_minimal_indices(example3()) == [4, 4]


def test_minimal_index_sum_examples():
    assert minimal_index_sum(rank_profile(example1()), 6) == 6
    assert minimal_index_sum(rank_profile(example2()), 4) == 3
    assert minimal_index_sum(rank_profile(example3()), 6) == 8


def test_minimal_index_sum_requires_d_prime():
    prof = rank_profile(example1(), k_max=2)
    assert prof.d_prime is None
    with pytest.raises(mb.PreconditionError):
        minimal_index_sum(prof, 6)


def test_certify_example1_minimal():
    cert = certify_minimal_basis(example1())
    assert cert.is_minimal_basis
    assert cert.reason == "ok"
    assert cert.hr_rank == 6
    assert cert.degree_sum_observed == cert.degree_sum_expected == 6


def test_certify_example2_degree_sum_mismatch():
    cert = certify_minimal_basis(example2())
    assert not cert.is_minimal_basis
    assert cert.reason == REASON_DEGREE_SUM
    assert cert.degree_sum_observed == 3
    assert cert.degree_sum_expected == 4
    assert cert.hr_rank == 4


def test_certify_example3_minimal():
    cert = certify_minimal_basis(example3())
    assert cert.is_minimal_basis
    assert cert.degree_sum_observed == cert.degree_sum_expected == 8


def test_certify_detects_hr_deficiency():
    # Two rows share the same leading vector.
    C0 = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    C1 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]])
    M = PolyMat.from_coeff_list([C0, C1])
    cert = certify_minimal_basis(M)
    assert not cert.is_minimal_basis
    assert cert.reason == REASON_HR


def test_certify_common_factor_not_minimal():
    # [lam, lam^2] drops rank at lam = 0.
    M = PolyMat.from_coeff_list([[[0.0, 0.0]], [[1.0, 0.0]], [[0.0, 1.0]]])
    cert = certify_minimal_basis(M)
    assert not cert.is_minimal_basis
    assert cert.reason == REASON_DEGREE_SUM


def test_certify_full_leading_example1():
    cert = certify_full_leading(example1())
    assert cert.is_minimal_basis
    assert cert.d_prime == 3


def test_certify_full_leading_example2():
    cert = certify_full_leading(example2())
    assert not cert.is_minimal_basis
    assert cert.reason == REASON_DEGREE_SUM
    assert cert.degree_sum_observed == 3
    assert cert.degree_sum_expected == 4


def test_certify_full_leading_example3_rejects_deficient_leading():
    with pytest.raises(mb.LeadingCoefficientError, match="certify_minimal_basis"):
        certify_full_leading(example3())


def test_full_leading_agrees_with_general_certificate_on_samples():
    for seed in range(100):
        dims = [(3, 2, 2), (4, 3, 1), (2, 2, 1), (1, 3, 1)][seed % 4]
        M = mb.sample_full_sylvester(*dims, seed=seed)
        assert certify_full_leading(M).is_minimal_basis
        assert certify_minimal_basis(M).is_minimal_basis
    assert certify_full_leading(example1()).is_minimal_basis == certify_minimal_basis(
        example1()
    ).is_minimal_basis
    assert certify_full_leading(example2()).is_minimal_basis == certify_minimal_basis(
        example2()
    ).is_minimal_basis


def test_alphas_non_negative_and_sum_to_nullspace_dimension():
    for seed in range(10):
        dims = [(3, 2, 2), (4, 3, 1), (2, 5, 1)][seed % 3]
        M = mb.sample_full_sylvester(*dims, seed=seed)
        prof = rank_profile(M)
        assert all(a >= 0 for a in prof.alphas)
        assert sum(prof.alphas) == M.cols - M.rows
    for M in (example1(), example2(), example3()):
        prof = rank_profile(M)
        assert all(a >= 0 for a in prof.alphas)
        assert sum(prof.alphas) == M.cols - M.rows


def test_d_prime_bounded_by_row_degree_sum():
    for M in (example1(), example3()):
        cert = certify_minimal_basis(M)
        assert cert.is_minimal_basis
        assert cert.d_prime <= sum(mb.row_degrees(M))


def test_degree_zero_right_indices():
    # [1, 0]: the nullspace is spanned by a constant vector, d' = 0.
    M = PolyMat.from_coeff_list([[[1.0, 0.0]], [[0.0, 0.0]]])
    prof = rank_profile(M)
    assert prof.d_prime == 0
    assert right_minimal_indices(M) == [0]
    cert = certify_minimal_basis(M)
    assert cert.is_minimal_basis


def test_classical_check_example1_passes():
    res = classical_check(example1(), num_samples=200, seed=1)
    assert res.passed
    assert res.row_reduced
    assert res.rank_drops == 0
    assert res.min_sigma > 0.1


def test_classical_check_example2_inconclusive_against_certificate():
    # The sampled test sees nothing wrong, yet certification refutes
    # minimality: the sampled path alone is not authoritative.
    res = classical_check(example2(), num_samples=200, seed=1)
    assert res.row_reduced
    assert res.rank_drops == 0
    assert not certify_minimal_basis(example2()).is_minimal_basis


def test_classical_check_common_factor_smallest_sigma_near_zero_point():
    # [lam, lam^2] loses rank exactly at 0; sampling shows the dip but the
    # certificate is the ground truth.
    M = PolyMat.from_coeff_list([[[0.0, 0.0]], [[1.0, 0.0]], [[0.0, 1.0]]])
    res = classical_check(M, num_samples=400, seed=3)
    assert abs(res.min_sigma_at) < 0.25
    assert res.min_sigma < 0.3
    assert not certify_minimal_basis(M).is_minimal_basis
