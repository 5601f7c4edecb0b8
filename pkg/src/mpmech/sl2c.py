"""The SU(2) / lower-triangular factorization of SL(2,C), end to end.

SL(2,C) factors uniquely as SU(2) * K where K is the subgroup of
lower-triangular matrices with positive diagonal (the Iwasawa decomposition,
here parametrized by three real numbers).  At the Lie algebra level this
splits sl(2,C), viewed as a real algebra, into su(2) and the tangent algebra
of K; the mixed matrix commutators then define mutual actions that make the
two algebras a matched pair.

Both the algebra identifications and the action tensors are produced
numerically: su(2) is identified with R^3 so that the bracket becomes the
cross product, K's algebra carries [Y1, Y2] = k x (Y1 x Y2) with
k = (0, 0, 1), and the mixed commutators are projected back onto the
embedded bases by solving a real linear system.  A second, closed-form
tensor set circulating for this example ("sl2c_printed") uses the opposite
orientation for the action of su(2) on K's algebra; it fails the
compatibility conditions and ships only as an audit target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmbeddingError, InputError, ValidationError
from .lie_core import LieAlgebra, abelian, tolerance_scale
from .matched_pair import ClosedFormActions, DualPoint, MatchedPair

KHAT = np.array([0.0, 0.0, 1.0])
KHAT.setflags(write=False)

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0
_EPS.setflags(write=False)


def su2_algebra() -> LieAlgebra:
    """su(2) identified with R^3: the bracket is the cross product."""
    return LieAlgebra(_EPS, ("e1", "e2", "e3"))


def k_algebra() -> LieAlgebra:
    """The triangular factor's algebra on R^3: [Y1, Y2] = k x (Y1 x Y2)."""
    C = np.zeros((3, 3, 3))
    for m in range(3):
        C[m, m, 2] += 1.0
        C[m, 2, m] -= 1.0
    return LieAlgebra(C, ("f1", "f2", "f3"))


def su2_basis() -> list[np.ndarray]:
    """Traceless skew-hermitian matrices mapped to the unit vectors of R^3."""
    return [
        np.array([[0.0, -0.5j], [-0.5j, 0.0]]),
        np.array([[0.0, -0.5], [0.5, 0.0]]),
        np.array([[-0.5j, 0.0], [0.0, 0.5j]]),
    ]


def k_basis() -> list[np.ndarray]:
    """Tangent basis of the triangular factor at the identity."""
    return [
        np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
        np.array([[0.0, 0.0], [1.0j, 0.0]]),
        np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex),
    ]


# -- group elements -----------------------------------------------------------

@dataclass(frozen=True)
class KElement:
    """A point (a, b, c) of the triangular factor; requires c > -1."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.c > -1.0):
            raise InputError(f"K element needs c > -1, got c={self.c}")


K_IDENTITY = KElement(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SU2Element:
    """A 2x2 special unitary matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.shape != (2, 2):
            raise InputError(f"SU(2) element must be 2x2, got {M.shape}")
        tol = 1e-12 * tolerance_scale()
        if np.abs(M.conj().T @ M - np.eye(2)).max() > tol:
            raise ValidationError("matrix is not unitary")
        if abs(np.linalg.det(M) - 1.0) > tol:
            raise ValidationError("matrix does not have unit determinant")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)


def k_to_matrix(k: KElement) -> np.ndarray:
    """Matrix form (1/sqrt(1+c)) [[1+c, 0], [a+ib, 1]]; determinant is 1."""
    s = 1.0 / np.sqrt(1.0 + k.c)
    return np.array([[s * (1.0 + k.c), 0.0], [s * (k.a + 1j * k.b), s]])


def k_multiply(k1: KElement, k2: KElement) -> KElement:
    """Group law (a1,b1,c1)*(a2,b2,c2) = (a1,b1,c1)(1+c2) + (a2,b2,c2).

    Matches the matrix product: k_to_matrix(k1 * k2) = k_to_matrix(k1) @
    k_to_matrix(k2).  The result keeps 1+c = (1+c1)(1+c2) > 0.
    """
    w = 1.0 + k2.c
    out = KElement(k1.a * w + k2.a, k1.b * w + k2.b, k1.c * w + k2.c)
    assert 1.0 + out.c > 0.0
    return out


def k_inverse(k: KElement) -> KElement:
    s = 1.0 / (1.0 + k.c)
    return KElement(-k.a * s, -k.b * s, -k.c * s)


def _k_matrix_inverse(k: KElement) -> np.ndarray:
    # unit determinant: inverse by adjugate
    s = 1.0 / np.sqrt(1.0 + k.c)
    return np.array([[s, 0.0], [-s * (k.a + 1j * k.b), s * (1.0 + k.c)]])


def iwasawa_factor(M) -> tuple[SU2Element, KElement]:
    """Factor a determinant-1 matrix as (unitary) @ (triangular).

    The triangular factor is read off the positive-definite product
    P = M^dagger M: c = 1/P22 - 1 and a + ib = P21/P22, which avoids
    Gram-Schmidt cancellation for near-identity input; the unitary factor is
    then M times the inverse triangular matrix.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    det = np.linalg.det(M)
    if abs(det - 1.0) > 1e-10 * tolerance_scale():
        raise InputError(f"matrix determinant {det} is not 1")
    P = M.conj().T @ M
    p22 = float(P[1, 1].real)
    assert p22 > 0.0
    ab = P[1, 0] / p22
    b_factor = KElement(float(ab.real), float(ab.imag), 1.0 / p22 - 1.0)
    a_factor = SU2Element(M @ _k_matrix_inverse(b_factor))
    return a_factor, b_factor


def group_act(h: KElement, g: SU2Element) -> tuple[SU2Element, KElement]:
    """Mutual group actions by refactoring: k(h) @ g = (h |> g) @ k(h <| g)."""
    return iwasawa_factor(k_to_matrix(h) @ g.matrix)


def group_left_act(h: KElement, g: SU2Element) -> SU2Element:
    """h |> g: unitary part of the refactored product k(h) @ g."""
    return group_act(h, g)[0]


def group_right_act(h: KElement, g: SU2Element) -> KElement:
    """h <| g: triangular part of the refactored product k(h) @ g."""
    return group_act(h, g)[1]


# -- deriving action tensors from an embedding -------------------------------

@dataclass(frozen=True)
class EmbeddedBasis:
    """Matrix bases for the two factors of an embedded matched pair."""

    g_matrices: tuple[np.ndarray, ...]
    h_matrices: tuple[np.ndarray, ...]
    g_names: tuple[str, ...] | None = None
    h_names: tuple[str, ...] | None = None

    def __post_init__(self):
        g = tuple(np.asarray(M, dtype=complex) for M in self.g_matrices)
        h = tuple(np.asarray(M, dtype=complex) for M in self.h_matrices)
        for M in g + h:
            if M.shape != (2, 2):
                raise InputError("basis matrices must be 2x2")
        object.__setattr__(self, "g_matrices", g)
        object.__setattr__(self, "h_matrices", h)


def standard_basis() -> EmbeddedBasis:
    """The su(2) + triangular bases used by the built-in pairs."""
    return EmbeddedBasis(tuple(su2_basis()), tuple(k_basis()),
                         ("e1", "e2", "e3"), ("f1", "f2", "f3"))


def _vec(M: np.ndarray) -> np.ndarray:
    flat = M.reshape(-1)
    return np.concatenate([flat.real, flat.imag])


def derive_actions_from_embedding(basis: EmbeddedBasis) -> MatchedPair:
    """Read off a matched pair from matrix commutators.

    Every commutator of basis matrices is decomposed over the real span of
    the combined basis by least squares.  Pure g-g and h-h commutators must
    close in their own factor and give the structure constants; the mixed
    commutators [f_a, e_i] split into the left-action component (in g) and
    the right-action component (in h).  Rank deficiency or a commutator
    escaping the span raises EmbeddingError.
    """
    n, m = len(basis.g_matrices), len(basis.h_matrices)
    mats = list(basis.g_matrices) + list(basis.h_matrices)
    B = np.column_stack([_vec(M) for M in mats])
    if np.linalg.matrix_rank(B) < n + m:
        raise EmbeddingError("embedded basis matrices are not linearly independent")

    def decompose(target: np.ndarray) -> np.ndarray:
        rhs = _vec(target)
        coeffs, _, _, _ = np.linalg.lstsq(B, rhs, rcond=None)
        residual = float(np.abs(B @ coeffs - rhs).max())
        tol = 1e-10 * (1.0 + float(np.abs(target).max())) * tolerance_scale()
        if residual > tol:
            raise EmbeddingError(
                f"commutator leaves the span of the basis (residual {residual:.3e})"
            )
        return coeffs

    def comm(A, Bm):
        return A @ Bm - Bm @ A

    tol_block = 1e-10 * tolerance_scale()
    Cg = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = decompose(comm(basis.g_matrices[i], basis.g_matrices[j]))
            if np.abs(coeffs[n:]).max() > tol_block * (1.0 + np.abs(coeffs).max()):
                raise EmbeddingError("g basis is not closed under commutators")
            Cg[:, i, j] = coeffs[:n]
            Cg[:, j, i] = -coeffs[:n]
    Ch = np.zeros((m, m, m))
    for a in range(m):
        for b in range(a + 1, m):
            coeffs = decompose(comm(basis.h_matrices[a], basis.h_matrices[b]))
            if np.abs(coeffs[:n]).max() > tol_block * (1.0 + np.abs(coeffs).max()):
                raise EmbeddingError("h basis is not closed under commutators")
            Ch[:, a, b] = coeffs[n:]
            Ch[:, b, a] = -coeffs[n:]
    rho = np.zeros((n, m, n))
    sigma = np.zeros((m, m, n))
    for a in range(m):
        for i in range(n):
            coeffs = decompose(comm(basis.h_matrices[a], basis.g_matrices[i]))
            rho[:, a, i] = coeffs[:n]
            sigma[:, a, i] = coeffs[n:]
    g = LieAlgebra(Cg, basis.g_names)
    h = LieAlgebra(Ch, basis.h_names)
    return MatchedPair(g, h, rho, sigma)


# -- built-in pairs and closed forms ------------------------------------------

def _printed_tensors() -> tuple[np.ndarray, np.ndarray]:
    # closed-form convention: Y |> X = Y x (X x k), Y <| X = X x Y
    eye = np.eye(3)
    rho = np.zeros((3, 3, 3))
    sigma = np.zeros((3, 3, 3))
    for a in range(3):
        for i in range(3):
            rho[:, a, i] = np.cross(eye[a], np.cross(eye[i], KHAT))
            sigma[:, a, i] = np.cross(eye[i], eye[a])
    return rho, sigma


def builtin_pairs() -> dict[str, MatchedPair]:
    """The shipped example pairs.

    * ``sl2c_derived`` -- actions derived from 2x2 matrix commutators; the
      package default, fully validated.
    * ``sl2c_printed`` -- the closed-form tensor convention (|> as
      Y x (X x k), <| as X x Y).  Intentionally unvalidated: its right
      action has the opposite orientation and fails compatibility; it exists
      to reproduce the formula audit.
    * ``e3_heavytop`` -- the Euclidean algebra e(3) as a matched pair with a
      trivial left action (a semidirect product), for heavy-top dynamics.
    """
    derived = derive_actions_from_embedding(standard_basis())
    rho_p, sigma_p = _printed_tensors()
    printed = MatchedPair(su2_algebra(), k_algebra(), rho_p, sigma_p,
                          validate=False)
    eye = np.eye(3)
    sigma_e3 = np.zeros((3, 3, 3))
    for a in range(3):
        for i in range(3):
            sigma_e3[:, a, i] = np.cross(eye[a], eye[i])
    heavytop = MatchedPair(su2_algebra(),
                           abelian(3, ("f1", "f2", "f3")),
                           np.zeros((3, 3, 3)), sigma_e3)
    return {"sl2c_derived": derived, "sl2c_printed": printed,
            "e3_heavytop": heavytop}


def sl2c_closed_forms() -> ClosedFormActions:
    """The closed-form dual actions and vector field of the printed convention.

    These are the expressions the audit reconciles: the duals are checked
    against the pairing identities of the printed tensors, the vector field
    against the canonical coadjoint assembly on the derived pair.
    """

    def co_left(mu, eta):
        return np.cross(mu, np.cross(KHAT, eta))

    def co_right(xi, nu):
        return np.cross(nu, xi)

    def a_star_cf(eta, nu):
        return np.cross(eta, nu)

    def b_star_cf(xi, mu):
        return float(mu @ KHAT) * xi - float(mu @ xi) * KHAT

    def lp_rhs(p: DualPoint, grad):
        x, y = grad
        mu, nu = p.mu, p.nu
        mu_dot = np.cross(x + np.cross(y, KHAT), mu) + np.cross(y, nu)
        nu_dot = (float(KHAT @ y) * nu
                  - (float(nu @ y) + float(mu @ x)) * KHAT
                  + np.cross(nu, x)
                  + float(mu @ KHAT) * x)
        return mu_dot, nu_dot

    return ClosedFormActions(co_left, co_right, a_star_cf, b_star_cf, lp_rhs)


# -- seeded random sampling ---------------------------------------------------

def random_su2(rng: np.random.Generator) -> SU2Element:
    """Draw a special unitary matrix: normalize a complex normal pair
    (w, v) and complete it symplectically."""
    w = complex(rng.standard_normal() + 1j * rng.standard_normal())
    v = complex(rng.standard_normal() + 1j * rng.standard_normal())
    s = np.sqrt(abs(w) ** 2 + abs(v) ** 2)
    w, v = w / s, v / s
    return SU2Element(np.array([[w, v], [-np.conj(v), np.conj(w)]]))


def random_k_element(rng: np.random.Generator) -> KElement:
    """Draw a triangular-factor element; 1 + c is lognormal, hence positive."""
    a, b = rng.standard_normal(2)
    return KElement(float(a), float(b), float(np.exp(rng.standard_normal()) - 1.0))


def random_sl2c(rng: np.random.Generator) -> np.ndarray:
    """Draw a determinant-1 matrix as (random unitary) @ (random triangular)."""
    return random_su2(rng).matrix @ k_to_matrix(random_k_element(rng))
