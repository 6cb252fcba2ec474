"""SU(n) arithmetic: Haar sampling, center elements, and su(n) with B(X, Y) = -Re tr(XY)."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.linalg

UNITARY_TOL = 1e-12
CONJUGATION_TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _orthonormalize(z: np.ndarray) -> np.ndarray:
    """Columns of ``z`` orthonormalized by Gram-Schmidt with one reorthogonalization pass.

    This is the Q factor of the QR decomposition normalized so that R has a
    positive real diagonal, computed over a stack of matrices at once.
    """
    n = z.shape[-1]
    q = np.empty_like(z)
    for j in range(n):
        v = z[..., :, j].copy()
        for _ in range(2):
            for i in range(j):
                qi = q[..., :, i]
                c = np.einsum("...k,...k->...", qi.conj(), v)
                v -= c[..., None] * qi
        norm = np.sqrt(np.einsum("...k,...k->...", v.real, v.real)
                       + np.einsum("...k,...k->...", v.imag, v.imag))
        q[..., :, j] = v / norm[..., None]
    return q


def det(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    if n == 2:
        return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    if n == 3:
        return (a[..., 0, 0] * (a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1])
                - a[..., 0, 1] * (a[..., 1, 0] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 0])
                + a[..., 0, 2] * (a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0]))
    return np.linalg.det(a)


_QUARTER_TURNS = np.array([1.0 + 0j, 1j, -1.0 + 0j, -1j])


def center_phase(n: int, k) -> np.ndarray | complex:
    """exp(2 pi i k / n), exact at multiples of a quarter turn."""
    k = np.asarray(k) % n
    theta = 2 * np.pi * k / n
    z = np.cos(theta) + 1j * np.sin(theta)
    quarter = (4 * k) % n == 0
    z = np.where(quarter, _QUARTER_TURNS[(4 * k // n) % 4], z)
    return complex(z) if z.ndim == 0 else z


def center_root(n: int, k: int) -> np.ndarray:
    return center_phase(n, k) * np.eye(n, dtype=complex)


def haar_sample(n: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-distributed SU(n) matrices; shape ``(*size, n, n)`` (or ``(n, n)``).

    A complex Ginibre matrix is orthonormalized (Haar on U(n)), divided by the
    principal n-th root of its determinant, then multiplied by a uniformly
    random central element so the principal-root choice leaves no bias.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    shape = () if size is None else ((size,) if np.ndim(size) == 0 else tuple(size))
    z = rng.standard_normal(shape + (n, n, 2)).view(np.complex128)[..., 0]
    q = _orthonormalize(z)
    root = np.exp(-1j * np.angle(det(q)) / n)
    k = rng.integers(0, n, size=shape)
    q *= (root * center_phase(n, k))[..., None, None]
    return q


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray | float:
    if a.shape[-2:] != b.shape[-2:]:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    d = a - b
    out = np.sqrt(np.sum(d.real ** 2 + d.imag ** 2, axis=(-2, -1)))
    return float(out) if np.ndim(out) == 0 else out


def defect_from_identity(a: np.ndarray) -> np.ndarray | float:
    return frobenius_distance(a, np.eye(a.shape[-1]))


def is_special_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    n = u.shape[-1]
    unitary = np.all(frobenius_distance(u @ dagger(u), np.eye(n)) <= tol)
    return bool(unitary and np.all(np.abs(det(u) - 1) <= tol))


def is_lie_algebra_element(x: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    skew = np.sqrt(np.sum(np.abs(x + dagger(x)) ** 2, axis=(-2, -1)))
    trace = np.abs(np.trace(x, axis1=-2, axis2=-1))
    return bool(np.all(skew <= tol) and np.all(trace <= tol))


def bilinear_form(x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """B(X, Y) = -Re tr(XY); positive definite on su(n)."""
    out = -np.einsum("...ij,...ji->...", x, y).real
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def _basis(n: int) -> np.ndarray:
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), complex)
            s[j, k] = s[k, j] = 1
            mats.append(s)
            a = np.zeros((n, n), complex)
            a[j, k], a[k, j] = -1j, 1j
            mats.append(a)
    for l in range(1, n):
        h = np.zeros((n, n), complex)
        h[np.arange(l), np.arange(l)] = 1
        h[l, l] = -l
        mats.append(h * np.sqrt(2.0 / (l * (l + 1))))
    # Gell-Mann normalization tr(lambda_a lambda_b) = 2 delta_ab
    basis = 1j * np.array(mats) / np.sqrt(2.0)
    basis.setflags(write=False)
    return basis


def su_basis(n: int) -> np.ndarray:
    """The n^2 - 1 skew-Hermitian Gell-Mann matrices, orthonormal under B. Shape (d, n, n)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return _basis(n)


def lie_dimension(n: int) -> int:
    return n * n - 1


def su_coordinates(x: np.ndarray) -> np.ndarray:
    """Real coordinates of su(n) elements (..., n, n) -> (..., d)."""
    basis = su_basis(x.shape[-1])
    return -np.einsum("aij,...ji->...a", basis, x).real


def su_from_coordinates(c: np.ndarray, n: int) -> np.ndarray:
    return np.einsum("...a,aij->...ij", np.asarray(c, dtype=float), su_basis(n))


def adjoint_action(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    if u.shape[-1] != x.shape[-1]:
        raise ValueError(f"dimension mismatch {u.shape} vs {x.shape}")
    return u @ x @ dagger(u)


def adjoint_matrix(u: np.ndarray) -> np.ndarray:
    """Ad(U) in su_basis coordinates, as a real (..., d, d) array."""
    basis = su_basis(u.shape[-1])
    ud = dagger(u)
    images = np.einsum("...ij,bjk,...kl->...bil", u, basis, ud)
    return -np.einsum("aij,...bji->...ab", basis, images).real


def exp_su(x: np.ndarray) -> np.ndarray:
    return scipy.linalg.expm(x)


def log_su(u: np.ndarray) -> np.ndarray:
    """Principal logarithm of a special unitary matrix, projected onto su(n)."""
    t, z = scipy.linalg.schur(u, output="complex")
    x = z @ np.diag(1j * np.angle(np.diag(t))) @ dagger(z)
    x = 0.5 * (x - dagger(x))
    return x - np.trace(x) / u.shape[-1] * np.eye(u.shape[-1])


def project_special_unitary(m: np.ndarray) -> np.ndarray:
    """Nearest unitary (polar factor) followed by a determinant phase fix."""
    u, _, vh = np.linalg.svd(m)
    q = u @ vh
    return q * np.exp(-1j * np.angle(det(q)) / q.shape[-1])
