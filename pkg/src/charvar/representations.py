"""Points of Hom(pi, SU(n)): word evaluation, center twists, automorphism action, polishing.

Matrices are held as ``(k, n, n)`` arrays, one slice per generator. The
stacked helpers accept any leading batch shape ``(..., k, n, n)`` so that the
same code evaluates one representation or a whole sample batch.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .unitary import (adjoint_matrix, dagger, defect_from_identity, exp_su, lie_dimension,
                      log_su, project_special_unitary, center_phase, su_coordinates,
                      su_from_coordinates)
from .words import (Automorphism, HomologyClass, Presentation, Word, abelianize,
                    verify_automorphism)

IRREDUCIBLE_TOL = 1e-8


class RepresentationError(ValueError):
    pass


class PolishError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    presentation: Presentation
    matrices: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[0] != self.presentation.rank or m.shape[1] != m.shape[2]:
            raise RepresentationError(
                f"expected ({self.presentation.rank}, n, n) matrices, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def n(self) -> int:
        return self.matrices.shape[-1]

    def __getitem__(self, j: int) -> np.ndarray:
        """Matrix of generator j (1-based)."""
        return self.matrices[j - 1]

    @classmethod
    def trivial(cls, presentation: Presentation, n: int) -> "Representation":
        return cls(presentation, np.broadcast_to(np.eye(n, dtype=complex),
                                                 (presentation.rank, n, n)))


@dataclass(frozen=True)
class CenterCharacter:
    """A homomorphism pi -> Z/n given by its values on the generators."""

    coords: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.n for c in self.coords))

    def __add__(self, other: "CenterCharacter") -> "CenterCharacter":
        if other.n != self.n or len(other.coords) != len(self.coords):
            raise RepresentationError("incompatible center characters")
        return CenterCharacter(tuple(a + b for a, b in zip(self.coords, other.coords)), self.n)

    def __neg__(self) -> "CenterCharacter":
        return CenterCharacter(tuple(-a for a in self.coords), self.n)

    def phases(self) -> np.ndarray:
        return np.array([center_phase(self.n, c) for c in self.coords])

    def pair(self, c: HomologyClass) -> int:
        if c.modulus != self.n:
            raise RepresentationError(f"modulus mismatch: {self.n} vs {c.modulus}")
        return sum(a * b for a, b in zip(self.coords, c.coords)) % self.n


def all_characters(presentation: Presentation, n: int):
    for coords in itertools.product(range(n), repeat=presentation.rank):
        yield CenterCharacter(coords, n)


# ---------------------------------------------------------------------------
# Word evaluation


def evaluate_word_stack(mats: np.ndarray, word: Word) -> np.ndarray:
    """Left-to-right product over ``(..., k, n, n)`` stacks; unreduced letter sequences allowed."""
    letters = word.letters if isinstance(word, Word) else tuple(word)
    n = mats.shape[-1]
    if not letters:
        return np.broadcast_to(np.eye(n, dtype=complex), mats.shape[:-3] + (n, n)).copy()
    inverses: dict[int, np.ndarray] = {}

    def factor(x):
        m = mats[..., abs(x) - 1, :, :]
        if x > 0:
            return m
        if x not in inverses:
            inverses[x] = dagger(m)
        return inverses[x]

    out = factor(letters[0]).copy()
    for x in letters[1:]:
        out = out @ factor(x)
    return out


def evaluate_word(rho: Representation, word: Word) -> np.ndarray:
    return evaluate_word_stack(rho.matrices, word)


def relator_defect_stack(mats: np.ndarray, presentation: Presentation) -> np.ndarray:
    if not presentation.is_surface:
        raise RepresentationError("relator defect needs a surface presentation")
    return defect_from_identity(evaluate_word_stack(mats, presentation.relator))


def relator_defect(rho: Representation) -> float:
    return float(relator_defect_stack(rho.matrices, rho.presentation))


# ---------------------------------------------------------------------------
# Center twists and the automorphism action


def twist_stack(mats: np.ndarray, u: CenterCharacter) -> np.ndarray:
    if len(u.coords) != mats.shape[-3]:
        raise RepresentationError("character rank does not match generator count")
    if u.n != mats.shape[-1]:
        raise RepresentationError(f"character modulus {u.n} does not match SU({mats.shape[-1]})")
    return mats * u.phases()[:, None, None]


def twist(rho: Representation, u: CenterCharacter) -> Representation:
    """Pointwise multiplication gamma -> rho(gamma) u(gamma)."""
    return Representation(rho.presentation, twist_stack(rho.matrices, u))


def _require_verified(phi: Automorphism, presentation: Presentation):
    report = verify_automorphism(phi, presentation)
    if not report.ok:
        raise RepresentationError(f"automorphism {phi.label!r} failed verification: {report}")


def mcg_act_stack(mats: np.ndarray, phi: Automorphism, presentation: Presentation,
                  verified: bool = False) -> np.ndarray:
    if not verified:
        _require_verified(phi, presentation)
    inv = phi.inverse()
    return np.stack([evaluate_word_stack(mats, w) for w in inv.images], axis=-3)


def mcg_act(rho: Representation, phi: Automorphism) -> Representation:
    """rho o phi^-1, so that t_gamma(phi . rho) = t_{phi^-1 gamma}(rho)."""
    return Representation(rho.presentation, mcg_act_stack(rho.matrices, phi, rho.presentation))


def word_class(word: Word, presentation: Presentation, n: int) -> HomologyClass:
    return HomologyClass(tuple(abelianize(word, presentation.rank).tolist()), n)


# ---------------------------------------------------------------------------
# Irreducibility


def commutant_dimension(rho: Representation, tol: float = IRREDUCIBLE_TOL) -> int:
    """Complex dimension of the matrices commuting with every generator image."""
    n = rho.n
    eye = np.eye(n)
    # row-major vec: vec(XM) = (I kron M^T) vec X, vec(MX) = (M kron I) vec X
    system = np.concatenate([np.kron(eye, m.T) - np.kron(m, eye) for m in rho.matrices])
    s = np.linalg.svd(system, compute_uv=False)
    if s[0] == 0:
        return n * n
    return int(np.sum(s <= tol * s[0]) + (n * n - len(s)))


def is_irreducible(rho: Representation, tol: float = IRREDUCIBLE_TOL) -> bool:
    return commutant_dimension(rho, tol) == 1


# ---------------------------------------------------------------------------
# Infinitesimal deformations
#
# A generator assignment X (one su(n) element per generator) deforms rho by
# rho_t(x_j) = exp(t X_j) rho(x_j). It extends to words by
# u(vw) = u(v) + Ad(rho(v)) u(w) and u(x^-1) = -Ad(rho(x)^-1) u(x).


def letter_map(mats: np.ndarray, letter: int) -> np.ndarray:
    """Linear map X -> u(letter) in coordinates, shape (d, k*d)."""
    k, n = mats.shape[0], mats.shape[-1]
    d = lie_dimension(n)
    out = np.zeros((d, k * d))
    j = abs(letter) - 1
    block = np.eye(d) if letter > 0 else -adjoint_matrix(dagger(mats[j]))
    out[:, j * d:(j + 1) * d] = block
    return out


def traverse(mats: np.ndarray, word: Word):
    """Prefix data along ``word``.

    Returns ``(prefix_ad, prefix_map)`` with ``prefix_ad[k] = Ad(rho(p_k))`` and
    ``prefix_map[k]`` the linear map X -> u(p_k), for prefixes p_0 = 1, ..., p_L = word.
    """
    k, n = mats.shape[0], mats.shape[-1]
    d = lie_dimension(n)
    L = len(word)
    prefix_ad = np.empty((L + 1, d, d))
    prefix_map = np.zeros((L + 1, d, k * d))
    prefix_ad[0] = np.eye(d)
    p = np.eye(n, dtype=complex)
    for i, x in enumerate(word.letters, start=1):
        prefix_map[i] = prefix_map[i - 1] + prefix_ad[i - 1] @ letter_map(mats, x)
        p = p @ (mats[x - 1] if x > 0 else dagger(mats[-x - 1]))
        prefix_ad[i] = adjoint_matrix(p)
    return prefix_ad, prefix_map


def relator_derivative(rho: Representation) -> np.ndarray:
    """The (d, k*d) matrix X -> u_X(R); its kernel is the cocycle space (Fox calculus)."""
    _, maps = traverse(rho.matrices, rho.presentation.relator)
    return maps[-1]


def polish(rho: Representation, tol: float = 1e-12, max_iter: int = 60,
           max_start_defect: float = 0.5, max_step: float = 0.5) -> Representation:
    """Drive the relator defect to ``tol`` by correcting only the last handle pair.

    Damped Gauss-Newton: with R = rho(relator) = exp(Y), solve for left
    corrections exp(alpha) a_g, exp(beta) b_g whose first-order effect on R is
    -Y (minimum-norm least squares), then re-project both matrices to SU(n).
    """
    p = rho.presentation
    if not p.is_surface:
        raise RepresentationError("polish needs a surface presentation")
    start = relator_defect(rho)
    if start > max_start_defect:
        raise PolishError(f"defect {start:.3g} exceeds polishing radius {max_start_defect}")
    if start <= tol:
        return rho
    n, d = rho.n, lie_dimension(rho.n)
    ja, jb = p.rank - 2, p.rank - 1
    mats = np.array(rho.matrices)
    defect = start
    for _ in range(max_iter):
        R = evaluate_word_stack(mats, p.relator)
        target = -su_coordinates(log_su(R))
        _, maps = traverse(mats, p.relator)
        jac = maps[-1][:, ja * d:(jb + 1) * d]
        step = np.linalg.lstsq(jac, target, rcond=None)[0]
        norm = np.linalg.norm(step)
        if norm > max_step:
            step *= max_step / norm
        for j, coords in ((ja, step[:d]), (jb, step[d:])):
            mats[j] = project_special_unitary(exp_su(su_from_coordinates(coords, n)) @ mats[j])
        defect = float(relator_defect_stack(mats, p))
        if defect <= tol:
            return Representation(p, mats)
    raise PolishError(f"polish did not converge: defect {defect:.3g} after {max_iter} steps "
                      f"(start {start:.3g})")


def polish_displacement(before: Representation, after: Representation) -> float:
    """Frobenius size of the change on the last handle pair."""
    diff = after.matrices[-2:] - before.matrices[-2:]
    return float(np.sqrt(np.sum(np.abs(diff) ** 2)))
