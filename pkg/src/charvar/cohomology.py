"""Z^1, B^1, H^1 of pi with coefficients in su(n)_{Ad rho}, and the cup-product form.

Cocycles are stored as real vectors of length k*d: generator j's Lie algebra
value occupies coordinates ``j*d:(j+1)*d`` in the su_basis frame.

The symplectic pairing evaluates c1 u c2 (v, w) = B(c1(v), Ad(rho(v)) c2(w)) on
the fundamental 2-cycle of the one-relator presentation: with R = y_1 ... y_L
and prefixes p_k,

    sum_k (p_{k-1}, y_k)  -  sum_j (x_j, x_j^-1)

(degenerate (1, 1) terms vanish on cocycles). Sign convention: omega(c1, c2)
is this number as written, with B(X, Y) = -Re tr(XY).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .representations import (Representation, commutant_dimension, evaluate_word_stack,
                              letter_map, relator_defect, traverse)
from .unitary import adjoint_matrix, exp_su, lie_dimension, su_from_coordinates

RANK_TOL = 1e-8
POLISHED = 1e-12
ZERO_FLOOR = 1e-12  # maps whose largest singular value is below this are treated as zero


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TangentCocycle:
    base: Representation
    vectors: np.ndarray  # (k, d)

    @property
    def flat(self) -> np.ndarray:
        return self.vectors.reshape(-1)

    @classmethod
    def from_flat(cls, base: Representation, v: np.ndarray) -> "TangentCocycle":
        return cls(base, np.asarray(v, dtype=float).reshape(base.presentation.rank, -1))


def _check_base(rho: Representation, max_defect: float):
    if not rho.presentation.is_surface:
        raise CohomologyError("cohomology is computed for surface presentations")
    defect = relator_defect(rho)
    if defect > max_defect:
        raise CohomologyError(f"relator defect {defect:.3g} > {max_defect}; polish first")


def _null_rows(a: np.ndarray, rel_tol: float) -> np.ndarray:
    """Orthonormal basis (as rows) of the kernel of ``a``."""
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] <= ZERO_FLOOR:
        return np.eye(a.shape[1])
    rank = int(np.sum(s > rel_tol * s[0]))
    return vh[rank:]


def _range_rows(a: np.ndarray, rel_tol: float) -> np.ndarray:
    """Orthonormal basis (as rows) of the column space of ``a``."""
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] <= ZERO_FLOOR:
        return np.zeros((0, a.shape[0]))
    rank = int(np.sum(s > rel_tol * s[0]))
    return u[:, :rank].T


def cocycle_constraint(rho: Representation) -> np.ndarray:
    """The map X -> u_X(R), shape (d, k*d)."""
    _, maps = traverse(rho.matrices, rho.presentation.relator)
    return maps[-1]


def cocycle_space(rho: Representation, rel_tol: float = RANK_TOL,
                  max_defect: float = POLISHED) -> np.ndarray:
    _check_base(rho, max_defect)
    return _null_rows(cocycle_constraint(rho), rel_tol)


def coboundary_map(rho: Representation) -> np.ndarray:
    """X -> (X - Ad(rho(x_j)) X)_j, shape (k*d, d)."""
    d = lie_dimension(rho.n)
    eye = np.eye(d)
    return np.concatenate([eye - adjoint_matrix(m) for m in rho.matrices])


def coboundary_space(rho: Representation, rel_tol: float = RANK_TOL,
                     max_defect: float = POLISHED) -> np.ndarray:
    _check_base(rho, max_defect)
    return _range_rows(coboundary_map(rho), rel_tol)


def h1_representatives(rho: Representation, rel_tol: float = RANK_TOL,
                       max_defect: float = POLISHED) -> np.ndarray:
    """Orthonormal complement of B^1 inside Z^1."""
    z = cocycle_space(rho, rel_tol, max_defect)
    b = coboundary_space(rho, rel_tol, max_defect)
    if b.shape[0] == 0:
        return z
    coeffs = _null_rows(b @ z.T, rel_tol)
    return coeffs @ z


def cup_form(rho: Representation) -> np.ndarray:
    """Bilinear form on generator assignments: omega(c1, c2) = c1 @ W @ c2."""
    mats = rho.matrices
    relator = rho.presentation.relator
    prefix_ad, prefix_map = traverse(mats, relator)
    form = sum(prefix_map[i].T @ prefix_ad[i] @ letter_map(mats, y)
               for i, y in enumerate(relator.letters))
    # -(x_j, x_j^-1) terms: B(X_j, Ad(rho_j)(-Ad(rho_j)^-1 X_j)) = -B(X_j, X_j)
    return form + np.eye(form.shape[0])


def cup_symplectic(rho: Representation, c1, c2) -> float:
    for c in (c1, c2):
        if isinstance(c, TangentCocycle) and c.base is not rho:
            raise CohomologyError("cocycle is based at a different representation")
    v1 = c1.flat if isinstance(c1, TangentCocycle) else np.asarray(c1)
    v2 = c2.flat if isinstance(c2, TangentCocycle) else np.asarray(c2)
    return float(v1 @ cup_form(rho) @ v2)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    base: Representation
    basis: np.ndarray  # (h, k*d) H^1 representatives
    entries: np.ndarray  # (h, h)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    @property
    def skew_residual(self) -> float:
        """||M + M^T|| / ||M||."""
        m = self.entries
        return float(np.linalg.norm(m + m.T) / np.linalg.norm(m))

    @property
    def conditioning(self) -> float:
        s = self.singular_values
        return float(s[-1] / s[0])


def symplectic_matrix(rho: Representation, rel_tol: float = RANK_TOL,
                      irreducible_tol: float = 1e-8,
                      max_defect: float = POLISHED) -> SymplecticMatrix:
    if commutant_dimension(rho, irreducible_tol) > 1:
        raise CohomologyError("base representation is reducible")
    h = h1_representatives(rho, rel_tol, max_defect)
    return SymplecticMatrix(rho, h, h @ cup_form(rho) @ h.T)


def coboundary_pairing_residual(rho: Representation, rel_tol: float = RANK_TOL) -> float:
    """max |omega(dX, c)| / (|dX| |c|) over orthonormal bases of B^1 and Z^1."""
    z = cocycle_space(rho, rel_tol)
    b = coboundary_space(rho, rel_tol)
    if b.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(b @ cup_form(rho) @ z.T)))


def dimension_report(rho: Representation, rel_tol: float = RANK_TOL) -> dict:
    z = cocycle_space(rho, rel_tol)
    b = coboundary_space(rho, rel_tol)
    sm = symplectic_matrix(rho, rel_tol)
    s = sm.singular_values
    return {"genus": rho.presentation.genus, "n": rho.n,
            "dims": {"z1": z.shape[0], "b1": b.shape[0], "h1": sm.dimension},
            "skew_residual": sm.skew_residual, "min_sv": float(s[-1]), "max_sv": float(s[0])}


def relator_gradient_check(rho: Representation, generator: int, direction: np.ndarray,
                           steps=(1e-3, 1e-4)) -> list[float]:
    """First-order Taylor residuals of t -> rho_t(R) along exp(t X) on one generator.

    ``direction`` holds su_basis coordinates of X. Returns
    ||rho_t(R) - rho(R) - t U rho(R)|| for each t, with U the matrix of u_X(R)
    predicted by the traversal derivative; these decay like t^2.
    """
    p = rho.presentation
    k, n = p.rank, rho.n
    d = lie_dimension(n)
    full = np.zeros(k * d)
    full[(generator - 1) * d:generator * d] = direction
    u = su_from_coordinates(cocycle_constraint(rho) @ full, n)
    R = evaluate_word_stack(rho.matrices, p.relator)
    x = su_from_coordinates(direction, n)
    out = []
    for t in steps:
        mats = np.array(rho.matrices)
        mats[generator - 1] = exp_su(t * x) @ mats[generator - 1]
        Rt = evaluate_word_stack(mats, p.relator)
        out.append(float(np.linalg.norm(Rt - R - t * u @ R)))
    return out
