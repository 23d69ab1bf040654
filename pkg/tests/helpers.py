"""Shared builders for the block-bidiagonal worked examples and random inputs."""

import numpy as np

from minbasis import PolyMat
from minbasis.polymat import s1_stack, scale


def example1() -> PolyMat:
    """6x8 degree-1 block matrix [-I2, lam*I2] staircase; a minimal basis."""
    I2 = np.eye(2)
    C0 = np.zeros((6, 8))
    C1 = np.zeros((6, 8))
    for b in range(3):
        C0[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = -I2
        C1[2 * b : 2 * b + 2, 2 * b + 2 : 2 * b + 4] = I2
    return PolyMat.from_coeff_list([C0, C1])


def example1_N() -> PolyMat:
    """2x8 dual of example1: [lam^3 I2, lam^2 I2, lam I2, I2]."""
    I2 = np.eye(2)
    coeffs = [np.zeros((2, 8)) for _ in range(4)]
    for power in range(4):
        block = 3 - power
        coeffs[power][:, 2 * block : 2 * block + 2] = I2
    return PolyMat.from_coeff_list(coeffs)


def example2() -> PolyMat:
    """4x7 degree-1 matrix that is row reduced but not a minimal basis."""
    C0 = np.zeros((4, 7))
    C1 = np.zeros((4, 7))
    C1[0, 0] = 1
    C0[1, 2] = -1
    C1[1, 3] = 1
    C0[2, 4] = -1
    C1[2, 5] = 1
    C0[3, 5] = -1
    C1[3, 6] = 1
    return PolyMat.from_coeff_list([C0, C1])


def example2_N() -> PolyMat:
    """3x7 matrix spanning the right nullspace of example2."""
    C0 = np.zeros((3, 7))
    C1 = np.zeros((3, 7))
    C2 = np.zeros((3, 7))
    C0[0, 1] = 1
    C1[1, 2] = 1
    C0[1, 3] = 1
    C2[2, 4] = 1
    C1[2, 5] = 1
    C0[2, 6] = 1
    return PolyMat.from_coeff_list([C0, C1, C2])


def example3() -> PolyMat:
    """6x8 matrix of mixed row degrees 1 and 2; minimal but fragile."""
    I2 = np.eye(2)
    C0 = np.zeros((6, 8))
    C1 = np.zeros((6, 8))
    C2 = np.zeros((6, 8))
    for b in range(3):
        C0[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = -I2
    C1[0:2, 2:4] = I2
    C1[2:4, 4:6] = I2
    C2[4:6, 6:8] = I2
    return PolyMat.from_coeff_list([C0, C1, C2])


def example3_N() -> PolyMat:
    """2x8 dual of example3: [lam^4 I2, lam^3 I2, lam^2 I2, I2]."""
    I2 = np.eye(2)
    coeffs = [np.zeros((2, 8)) for _ in range(5)]
    coeffs[4][:, 0:2] = I2
    coeffs[3][:, 2:4] = I2
    coeffs[2][:, 4:6] = I2
    coeffs[0][:, 6:8] = I2
    return PolyMat.from_coeff_list(coeffs)


def flat_1311() -> PolyMat:
    """1x4 degree-1 matrix [1, lam, 0, 0]; flat case with k' = 1, t = 2."""
    return PolyMat.from_coeff_list([[[1.0, 0.0, 0.0, 0.0]], [[0.0, 1.0, 0.0, 0.0]]])


def one_lambda() -> PolyMat:
    """1x2 minimal basis [1, lam]."""
    return PolyMat.from_coeff_list([[[1.0, 0.0]], [[0.0, 1.0]]])


def one_lambda_dual() -> PolyMat:
    """1x2 dual [-lam, 1]."""
    return PolyMat.from_coeff_list([[[0.0, 1.0]], [[-1.0, 0.0]]])


def random_perturbation(
    M: PolyMat, target_norm: float, rng: np.random.Generator
) -> PolyMat:
    """Gaussian perturbation of M's shape scaled to the given spectral norm."""
    raw = PolyMat(
        rng.standard_normal(M.coeffs.shape)
        if M.field == "real"
        else rng.standard_normal(M.coeffs.shape)
        + 1j * rng.standard_normal(M.coeffs.shape)
    )
    current = np.linalg.norm(s1_stack(raw), 2)
    return scale(raw, target_norm / current)
