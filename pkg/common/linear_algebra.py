"""The module contains dense linear algebra functions used in this project."""


from numpy import (
    abs as np_abs,
    allclose,
    clip,
    conj,
    eye,
    ndarray,
    outer,
    sqrt,
    zeros,
)
from numpy.linalg import eigh, eigvalsh, qr, svd
from scipy.linalg import hadamard

from common.constants import PSD_TOLERANCE, UNITARY_TOLERANCE


def dagger(matrix: ndarray) -> ndarray:
    """Returns conjugate transpose of the matrix."""
    return conj(matrix).T


def ket(index: int, size: int) -> ndarray:
    """Returns basis vector |index> of the space of given size."""
    vector = zeros(size, dtype=complex)
    vector[index] = 1
    return vector


def projector(vector: ndarray) -> ndarray:
    """Returns |v><v| for the vector."""
    return outer(vector, conj(vector))


def is_hermitian(matrix: ndarray, tolerance=PSD_TOLERANCE) -> bool:
    """Checks whether matrix equals its conjugate transpose."""
    return allclose(matrix, dagger(matrix), rtol=0, atol=tolerance)


def is_psd(matrix: ndarray, tolerance=PSD_TOLERANCE) -> bool:
    """Checks whether Hermitian matrix has no eigenvalue below -tolerance."""
    if not is_hermitian(matrix, tolerance):
        return False
    hermitian = (matrix + dagger(matrix)) / 2
    return eigvalsh(hermitian).min() >= -tolerance


def is_unitary(matrix: ndarray, tolerance=UNITARY_TOLERANCE) -> bool:
    """Checks U^dagger U = I."""
    rows, columns = matrix.shape
    if rows != columns:
        return False
    return allclose(
        dagger(matrix) @ matrix, eye(rows), rtol=0, atol=tolerance,
    )


def psd_sqrt(matrix: ndarray) -> ndarray:
    """Returns square root of Hermitian PSD matrix.
    Small negative eigenvalues are clipped to zero."""
    hermitian = (matrix + dagger(matrix)) / 2
    values, vectors = eigh(hermitian)
    return (vectors * sqrt(clip(values, 0, None))) @ dagger(vectors)


def trace_norm(matrix: ndarray) -> float:
    """Returns sum of singular values."""
    return float(svd(matrix, compute_uv=False).sum())


def positive_part_projector(matrix: ndarray) -> ndarray:
    """Returns projector onto eigenvectors of Hermitian matrix
    with positive eigenvalues."""
    values, vectors = eigh((matrix + dagger(matrix)) / 2)
    positive = vectors[:, values > 0]
    return positive @ dagger(positive)


def hadamard_matrix(n_bits: int) -> ndarray:
    """Returns normalized n-fold tensor power of the Hadamard gate.
    Column y is the Hadamard basis vector |y~>."""
    size = 2 ** n_bits
    return hadamard(size).astype(float) / sqrt(size)


def reduced_density(psi: ndarray) -> ndarray:
    """Returns Alice's operator Tr_{MB}|Psi><Psi| for the global state
    stored as matrix with rows indexed by A."""
    return psi @ dagger(psi)


def purifying_unitary(psi: ndarray, target: ndarray) -> ndarray:
    """
    Returns unitary R on the purifying space minimizing |psi R - target|.
    It is exact when psi and target purify the same operator on A.

    """
    left, _, right = svd(dagger(psi) @ target)
    return left @ right


def completing_unitary(column: ndarray) -> ndarray:
    """Returns unitary whose first column is the unit vector."""
    size = column.shape[0]
    pivot = int(np_abs(column).argmax())
    basis = eye(size, dtype=complex)[
        :, [pivot] + [index for index in range(size) if index != pivot]
    ]
    basis[:, 0] = column
    unitary, upper = qr(basis)
    unitary[:, 0] *= upper[0, 0]
    return unitary
