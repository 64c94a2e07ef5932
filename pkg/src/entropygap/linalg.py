"""Dense complex Hermitian linear algebra with seeded random sampling.

Matrices are plain ``numpy.ndarray`` values of dtype complex128.  A matrix is
*stored Hermitian* when ``a[i, j] == conj(a[j, i])`` holds bitwise; every
factory here routes through :func:`hermitize`, which guarantees that exactly,
and :func:`eigh` rejects inputs that do not satisfy it.  Composite indices on
tensor products are row-major, ``(a, i) -> a * d2 + i``, the convention of
``numpy.kron``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericError

# Largest composite dimension the dense routines accept.
MAX_DIM = 64


class SpectralDecomposition(NamedTuple):
    """Ascending eigenvalues and unitary eigenbasis of a Hermitian matrix."""

    eigenvalues: np.ndarray
    basis: np.ndarray


class RngStream:
    """Reproducible random stream keyed by ``(seed, stream)``.

    Two streams built from the same pair replay the same draw sequence, so a
    computation is rerun exactly by rebuilding its stream.  A stream is
    stateful and must not be shared between concurrent tasks; derive one
    stream per task instead.
    """

    def __init__(self, seed: int, stream: int = 0):
        for name, value in (("seed", seed), ("stream", stream)):
            if not 0 <= int(value) < 2**64:
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {value!r}")
        self.seed = int(seed)
        self.stream = int(stream)
        key = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.gen = np.random.Generator(np.random.PCG64(key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream})"


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")
    return a


def hermitize(a) -> np.ndarray:
    """Return the Hermitian part ``(a + a^H) / 2`` of a square matrix.

    Conjugate symmetry of the result is bitwise: both members of a symmetric
    entry pair come from the same commutative additions, and the diagonal
    imaginary parts cancel exactly.
    """
    a = _as_square(a)
    return (a + a.conj().T) / 2.0


def is_stored_hermitian(a) -> bool:
    """True when ``a`` equals its conjugate transpose entry-for-entry."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool((a == a.conj().T).all())


def check_hermitian(a, name: str = "matrix") -> np.ndarray:
    """Validate that ``a`` is stored Hermitian with finite entries."""
    a = _as_square(a, name)
    if not np.isfinite(a.view(float)).all():
        raise DomainError(f"{name} has non-finite entries")
    if not (a == a.conj().T).all():
        defect = float(np.abs(a - a.conj().T).max())
        raise DomainError(
            f"{name} is not stored Hermitian (max asymmetry {defect:.3e}); "
            "construct it with hermitize()"
        )
    return a


def eigh(a) -> SpectralDecomposition:
    """Eigendecomposition of a stored-Hermitian matrix, eigenvalues ascending."""
    a = check_hermitian(a)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver did not converge: {exc}") from exc
    return SpectralDecomposition(vals, vecs)


def kron(a, b) -> np.ndarray:
    """Kronecker product with row-major composite indices."""
    a = _as_square(a, "left factor")
    b = _as_square(b, "right factor")
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise DomainError(
            f"composite dimension {a.shape[0] * b.shape[0]} exceeds the "
            f"supported maximum {MAX_DIM}"
        )
    return np.kron(a, b)


def random_unitary(dim: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R factor's diagonal phases are divided out, which makes the
    factorization unique and the law exactly Haar.
    """
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    z = rng.gen.standard_normal((dim, dim)) + 1j * rng.gen.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


def random_pd(dim: int, rng: RngStream, eig_range: tuple[float, float] = (0.1, 3.0)) -> np.ndarray:
    """Random positive definite matrix with spectrum uniform in ``eig_range``.

    Eigenvectors are Haar-distributed; the matrix is stored Hermitian.
    """
    lo, hi = float(eig_range[0]), float(eig_range[1])
    if not lo > 0:
        raise DomainError(f"lower eigenvalue bound must be positive, got {lo}")
    if hi < lo:
        raise DomainError(f"eigenvalue range is empty: ({lo}, {hi})")
    u = random_unitary(dim, rng)
    vals = rng.gen.uniform(lo, hi, size=dim)
    return hermitize((u * vals) @ u.conj().T)


def random_hermitian(dim: int, rng: RngStream, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix with entries of magnitude at most ``scale``.

    Not necessarily definite; intended for perturbation directions.
    """
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")
    s = scale / np.sqrt(2.0)
    re = rng.gen.uniform(-s, s, size=(dim, dim))
    im = rng.gen.uniform(-s, s, size=(dim, dim))
    return hermitize(re + 1j * im)
