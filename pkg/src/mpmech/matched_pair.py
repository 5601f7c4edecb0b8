"""Matched pairs of Lie algebras and their Lie-Poisson mechanics.

A matched pair couples two Lie algebras g and h through a left action of h
on g (tensor ``rho``) and a right action of g on h (tensor ``sigma``):

* ``rho[k, a, i]``:  f_a |> e_i = sum_k rho[k, a, i] e_k,
* ``sigma[b, a, i]``: f_a <| e_i = sum_b sigma[b, a, i] f_b.

When the two compatibility conditions hold, g (+) h carries the double
bracket

    [(x1, y1), (x2, y2)] = ([x1, x2] + y1|>x2 - y2|>x1,
                            [y1, y2] + y1<|x2 - y2<|x1)

and the dual space inherits a linear Poisson structure.  All dual-action
maps here are exact transposes of ``rho``/``sigma``, and all dynamics are
assembled from the double's structure constants via the coadjoint action;
closed-form variants of these maps found in the literature can be checked
against that canonical assembly with :func:`audit_formulas`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import lie_core
from .errors import DimensionMismatch, InputError, ValidationError
from .lie_core import LieAlgebra, _as_vector, tolerance_scale

AUDIT_TOLERANCE = 1e-10


class MatchedPair:
    """Two Lie algebras with mutual action tensors.

    ``validate=True`` (the default) checks both compatibility conditions and
    the Jacobi identity of the assembled double; pass ``validate=False`` to
    carry intentionally incompatible tensors (e.g. for audits).
    """

    def __init__(self, g: LieAlgebra, h: LieAlgebra, rho, sigma, *,
                 validate: bool = True):
        n, m = g.dim, h.dim
        rho = np.array(rho, dtype=float)
        sigma = np.array(sigma, dtype=float)
        if rho.shape != (n, m, n):
            raise DimensionMismatch(
                f"rho has shape {rho.shape}, expected {(n, m, n)}"
            )
        if sigma.shape != (m, m, n):
            raise DimensionMismatch(
                f"sigma has shape {sigma.shape}, expected {(m, m, n)}"
            )
        if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(sigma))):
            raise InputError("action tensors contain non-finite entries")
        rho.setflags(write=False)
        sigma.setflags(write=False)
        self.g = g
        self.h = h
        self.rho = rho
        self.sigma = sigma
        self._validated = False
        self._double: DoubleAlgebra | None = None
        if validate:
            self.validate()

    @property
    def validated(self) -> bool:
        return self._validated

    def scale(self) -> float:
        """1 + the largest tensor magnitude, used to scale defect tolerances."""
        mags = [np.abs(t).max() for t in (self.g.C, self.h.C, self.rho, self.sigma)]
        return 1.0 + float(max(mags))

    def validate(self) -> "MatchedPair":
        """Check compatibility and the double's Jacobi identity; cache on success."""
        if self._validated:
            return self
        self.g.validate()
        self.h.validate()
        defect = compat_defect(self)
        bound = 1e-10 * self.scale() * tolerance_scale()
        if max(defect.d1, defect.d2) > bound:
            raise ValidationError(
                f"matched-pair compatibility fails: defects "
                f"({defect.d1:.3e}, {defect.d2:.3e}) exceed {bound:.3e}; "
                f"witness {defect.witness}"
            )
        build_double(self).algebra.validate()
        self._validated = True
        return self

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"MatchedPair(g dim={self.g.dim}, h dim={self.h.dim}, "
                f"validated={self._validated})")


@dataclass(frozen=True)
class DoubleAlgebra:
    """The coupled algebra on g (+) h, with its block structure."""

    algebra: LieAlgebra
    split: tuple[int, int]
    source: MatchedPair

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass(frozen=True)
class DualPoint:
    """A point (mu, nu) of the dual of a double algebra."""

    mu: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=float))
        object.__setattr__(self, "nu", np.asarray(self.nu, dtype=float))
        if self.mu.ndim != 1 or self.nu.ndim != 1:
            raise DimensionMismatch("dual point components must be vectors")

    def concat(self) -> np.ndarray:
        return np.concatenate([self.mu, self.nu])

    @classmethod
    def from_concat(cls, z, split: tuple[int, int]) -> "DualPoint":
        z = np.asarray(z, dtype=float)
        n, m = split
        if z.shape != (n + m,):
            raise DimensionMismatch(f"state has shape {z.shape}, expected ({n + m},)")
        return cls(z[:n], z[n:])


def as_dual_point(p, split: tuple[int, int]) -> DualPoint:
    """Coerce a DualPoint, a (mu, nu) pair, or a flat vector."""
    if isinstance(p, DualPoint):
        point = p
    elif isinstance(p, (tuple, list)) and len(p) == 2:
        point = DualPoint(np.asarray(p[0], dtype=float), np.asarray(p[1], dtype=float))
    else:
        return DualPoint.from_concat(p, split)
    n, m = split
    if point.mu.shape != (n,) or point.nu.shape != (m,):
        raise DimensionMismatch(
            f"dual point has shapes ({point.mu.shape}, {point.nu.shape}), "
            f"expected (({n},), ({m},))"
        )
    return point


def _as_pair(x, split: tuple[int, int], what: str) -> tuple[np.ndarray, np.ndarray]:
    n, m = split
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return (_as_vector(x[0], n, f"{what} (g part)"),
                _as_vector(x[1], m, f"{what} (h part)"))
    flat = np.asarray(x, dtype=float)
    if flat.shape != (n + m,):
        raise DimensionMismatch(f"{what} has shape {flat.shape}, expected ({n + m},)")
    return flat[:n], flat[n:]


# -- mutual actions and their duals -----------------------------------------

def left_act(mp: MatchedPair, eta, xi) -> np.ndarray:
    """Left action of h on g: eta |> xi."""
    eta = _as_vector(eta, mp.h.dim, "h vector")
    xi = _as_vector(xi, mp.g.dim, "g vector")
    return np.einsum("kai,a,i->k", mp.rho, eta, xi)


def right_act(mp: MatchedPair, eta, xi) -> np.ndarray:
    """Right action of g on h: eta <| xi."""
    eta = _as_vector(eta, mp.h.dim, "h vector")
    xi = _as_vector(xi, mp.g.dim, "g vector")
    return np.einsum("bai,a,i->b", mp.sigma, eta, xi)


def co_left_act(mp: MatchedPair, mu, eta) -> np.ndarray:
    """Right action of h on g*, transpose of |>: <mu *<| eta, xi> = <mu, eta |> xi>."""
    mu = _as_vector(mu, mp.g.dim, "g* vector")
    eta = _as_vector(eta, mp.h.dim, "h vector")
    return np.einsum("kai,a,k->i", mp.rho, eta, mu)


def a_star(mp: MatchedPair, eta, nu) -> np.ndarray:
    """Dual of xi -> eta <| xi, valued in g*: <a*_eta nu, xi> = <nu, eta <| xi>."""
    eta = _as_vector(eta, mp.h.dim, "h vector")
    nu = _as_vector(nu, mp.h.dim, "h* vector")
    return np.einsum("bai,a,b->i", mp.sigma, eta, nu)


def co_right_act(mp: MatchedPair, xi, nu) -> np.ndarray:
    """Left action of g on h*, transpose of <|: <xi *|> nu, eta> = <nu, eta <| xi>."""
    xi = _as_vector(xi, mp.g.dim, "g vector")
    nu = _as_vector(nu, mp.h.dim, "h* vector")
    return np.einsum("bai,i,b->a", mp.sigma, xi, nu)


def b_star(mp: MatchedPair, xi, mu) -> np.ndarray:
    """Dual of eta -> eta |> xi, valued in h*: <b*_xi mu, eta> = <mu, eta |> xi>."""
    xi = _as_vector(xi, mp.g.dim, "g vector")
    mu = _as_vector(mu, mp.g.dim, "g* vector")
    return np.einsum("kai,i,k->a", mp.rho, xi, mu)


# -- compatibility -----------------------------------------------------------

@dataclass(frozen=True)
class CompatDefect:
    """Max-norm residuals of the two matched-pair compatibility conditions."""

    d1: float
    d2: float
    witness1: tuple[str, str, str]
    witness2: tuple[str, str, str]
    vector1: np.ndarray
    vector2: np.ndarray

    @property
    def witness(self) -> tuple[str, str, str]:
        """Witness triple of the larger defect."""
        return self.witness1 if self.d1 >= self.d2 else self.witness2


def _condition_tensors(mp: MatchedPair) -> tuple[np.ndarray, np.ndarray]:
    Cg, Ch, rho, sigma = mp.g.C, mp.h.C, mp.rho, mp.sigma
    # condition 1, indexed [value in g, a, i, j]:
    #   f_a|>[e_i,e_j] - [f_a|>e_i, e_j] - [e_i, f_a|>e_j]
    #   - (f_a<|e_i)|>e_j + (f_a<|e_j)|>e_i
    d1 = (
        np.einsum("mak,kij->maij", rho, Cg)
        - np.einsum("mkj,kai->maij", Cg, rho)
        - np.einsum("mik,kaj->maij", Cg, rho)
        - np.einsum("mbj,bai->maij", rho, sigma)
        + np.einsum("mbi,baj->maij", rho, sigma)
    )
    # condition 2, indexed [value in h, a, b, i]:
    #   [f_a,f_b]<|e_i - [f_a, f_b<|e_i] - [f_a<|e_i, f_b]
    #   - f_a<|(f_b|>e_i) + f_b<|(f_a|>e_i)
    d2 = (
        np.einsum("cdi,dab->cabi", sigma, Ch)
        - np.einsum("cad,dbi->cabi", Ch, sigma)
        - np.einsum("cdb,dai->cabi", Ch, sigma)
        - np.einsum("cak,kbi->cabi", sigma, rho)
        + np.einsum("cbk,kai->cabi", sigma, rho)
    )
    return d1, d2


def compat_defect(mp: MatchedPair) -> CompatDefect:
    """Residuals of the two compatibility conditions, with maximizing triples."""
    D1, D2 = _condition_tensors(mp)
    d1 = float(np.abs(D1).max())
    d2 = float(np.abs(D2).max())
    _, a1, i1, j1 = np.unravel_index(int(np.abs(D1).argmax()), D1.shape)
    _, a2, b2, i2 = np.unravel_index(int(np.abs(D2).argmax()), D2.shape)
    w1 = (mp.h.name_of(a1), mp.g.name_of(i1), mp.g.name_of(j1))
    w2 = (mp.h.name_of(a2), mp.h.name_of(b2), mp.g.name_of(i2))
    return CompatDefect(d1, d2, w1, w2, D1[:, a1, i1, j1].copy(), D2[:, a2, b2, i2].copy())


# -- the double algebra and its Poisson structure ----------------------------

def build_double(mp: MatchedPair) -> DoubleAlgebra:
    """Assemble the structure constants of the coupled algebra on g (+) h."""
    if mp._double is not None:
        return mp._double
    n, m = mp.g.dim, mp.h.dim
    C = np.zeros((n + m, n + m, n + m))
    C[:n, :n, :n] = mp.g.C
    C[n:, n:, n:] = mp.h.C
    C[:n, n:, :n] = mp.rho
    C[n:, n:, :n] = mp.sigma
    C[:n, :n, n:] = -mp.rho.transpose(0, 2, 1)
    C[n:, :n, n:] = -mp.sigma.transpose(0, 2, 1)
    names = None
    if mp.g.names is not None and mp.h.names is not None:
        names = mp.g.names + mp.h.names
    double = DoubleAlgebra(LieAlgebra(C, names, validate=False), (n, m), mp)
    mp._double = double
    return double


def cobracket_eval(double: DoubleAlgebra, p) -> np.ndarray:
    """Linear Poisson tensor at p: M[I, J] = <(mu, nu), [E_I, E_J]>.

    The matrix is antisymmetric; its kernel directions are the gradients of
    Casimir functions at p.
    """
    p = as_dual_point(p, double.split)
    return np.einsum("kij,k->ij", double.algebra.C, p.concat())


def matched_bracket_eval(double: DoubleAlgebra, p, grad_h, grad_f) -> float:
    """Lie-Poisson bracket {H, F} on the dual of the double at p."""
    p = as_dual_point(p, double.split)
    xh, yh = _as_pair(grad_h, double.split, "grad H")
    xf, yf = _as_pair(grad_f, double.split, "grad F")
    zh = np.concatenate([xh, yh])
    zf = np.concatenate([xf, yf])
    return float(zh @ cobracket_eval(double, p) @ zf)


def _require_validated(double: DoubleAlgebra) -> None:
    if not double.source.validated:
        raise ValidationError(
            "double algebra built from an unvalidated pair; call validate() first"
        )


def _rhs_raw(double: DoubleAlgebra, p: DualPoint, grad: np.ndarray) -> np.ndarray:
    """Coadjoint vector field M(p) @ grad without the validation gate."""
    return np.einsum("kij,k,j->i", double.algebra.C, p.concat(), grad)


def matched_lp_rhs(double: DoubleAlgebra, p, grad_h, convention: str = "right") -> DualPoint:
    """Lie-Poisson vector field on the dual of the double.

    In the "right" convention ``p_dot = M(p) @ grad_h`` with M the Poisson
    tensor of :func:`cobracket_eval`, so ``dF/dt = {F, H}`` along the flow and
    H is conserved exactly at the continuous level.  In components, with
    X, Y the g- and h-gradients:

        mu_dot = ad*_X mu - mu *<| Y - a*_Y nu
        nu_dot = ad*_Y nu + X *|> nu + b*_X mu

    "left" is the pointwise negation.
    """
    _require_validated(double)
    p = as_dual_point(p, double.split)
    x, y = _as_pair(grad_h, double.split, "grad H")
    rhs = _rhs_raw(double, p, np.concatenate([x, y]))
    if convention == "right":
        pass
    elif convention == "left":
        rhs = -rhs
    else:
        raise InputError(f"unknown convention {convention!r}, expected 'right' or 'left'")
    n, _ = double.split
    return DualPoint(rhs[:n], rhs[n:])


def matched_ad_star(double: DoubleAlgebra, x, p) -> DualPoint:
    """Coadjoint action of the double on its dual; alias of the right RHS."""
    return matched_lp_rhs(double, p, x, "right")


def euler_poincare_rhs(mp: MatchedPair, state, lagrangian) -> tuple[DualPoint, tuple[np.ndarray, np.ndarray]]:
    """Euler-Poincare vector field for a quadratic Lagrangian.

    ``state`` is the velocity pair (xi, eta); the momenta are mu = M_g xi,
    nu = M_h eta and evolve by

        mu_dot = -ad*_xi mu + mu *<| eta + a*_eta nu
        nu_dot = -ad*_eta nu - xi *|> nu - b*_xi mu.

    The pairing identities make <mu_dot, xi> + <nu_dot, eta> vanish
    identically, so the kinetic energy is conserved along the flow.  Returns
    the momentum derivative and the (recovered) velocity pair.
    """
    xi, eta = _as_pair(state, (mp.g.dim, mp.h.dim), "velocity state")
    metric_g = np.asarray(lagrangian.metric_g, dtype=float)
    metric_h = np.asarray(lagrangian.metric_h, dtype=float)
    if metric_g.shape != (mp.g.dim, mp.g.dim) or metric_h.shape != (mp.h.dim, mp.h.dim):
        raise DimensionMismatch("Lagrangian metric blocks do not match the pair")
    mu = metric_g @ xi
    nu = metric_h @ eta
    mu_dot = (
        -lie_core.ad_star(mp.g, xi, mu)
        + co_left_act(mp, mu, eta)
        + a_star(mp, eta, nu)
    )
    nu_dot = (
        -lie_core.ad_star(mp.h, eta, nu)
        - co_right_act(mp, xi, nu)
        - b_star(mp, xi, mu)
    )
    return DualPoint(mu_dot, nu_dot), (xi, eta)


# -- formula audit ------------------------------------------------------------

@dataclass(frozen=True)
class ClosedFormActions:
    """Closed-form expressions to reconcile against the canonical transposes.

    Each callable, when present, is compared against the pairing-identity
    dual computed from the tensors of the second audit argument; ``lp_rhs``
    is compared against the canonical coadjoint assembly on the first
    (validated) argument.
    """

    co_left: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    co_right: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    a_star: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    b_star: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    lp_rhs: Callable[[DualPoint, tuple[np.ndarray, np.ndarray]],
                     tuple[np.ndarray, np.ndarray]] | None = None


@dataclass(frozen=True)
class AuditLine:
    name: str
    max_deviation: float
    status: str
    witness: str | None = None
    detail: str | None = None


@dataclass(frozen=True)
class AuditReport:
    """MATCH/MISMATCH table produced by :func:`audit_formulas`."""

    samples: int
    seed: int
    tolerance: float
    lines: tuple[AuditLine, ...]

    def line(self, name: str) -> AuditLine:
        for line in self.lines:
            if line.name == name:
                return line
        raise KeyError(name)

    @property
    def all_match(self) -> bool:
        return all(line.status == "MATCH" for line in self.lines)

    def to_text(self) -> str:
        width = max(len(line.name) for line in self.lines)
        rows = [
            f"formula audit: {self.samples} samples, seed {self.seed}, "
            f"tolerance {self.tolerance:g}"
        ]
        for line in self.lines:
            row = f"  {line.name.ljust(width)}  {line.status:8s}  max dev {line.max_deviation:.3e}"
            if line.witness:
                row += f"  witness {line.witness}"
            if line.detail:
                row += f"  [{line.detail}]"
            rows.append(row)
        return "\n".join(rows)

    def to_json_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "lines": [
                {
                    "name": line.name,
                    "max_deviation": line.max_deviation,
                    "status": line.status,
                    "witness": line.witness,
                    "detail": line.detail,
                }
                for line in self.lines
            ],
        }


def _tensor_witness(diff: np.ndarray, left_names, right_names) -> str:
    """Basis-pair label of the largest entry of a (value, a, i) tensor."""
    _, a, i = np.unravel_index(int(np.abs(diff).argmax()), diff.shape)
    return f"({left_names(a)}, {right_names(i)})"


def audit_formulas(mp_derived: MatchedPair, mp_printed: MatchedPair,
                   samples: int = 1000, seed: int = 0,
                   closed_forms: ClosedFormActions | None = None,
                   tol: float = AUDIT_TOLERANCE) -> AuditReport:
    """Reconcile two tensor sets, and optionally closed-form expressions.

    The action rows compare the two pairs' tensors directly.  The dual rows
    check each closed form against its defining pairing identity, i.e.
    against the exact transpose of ``mp_printed``'s tensors (without closed
    forms they compare the two pairs' canonical duals, which is a trivial
    MATCH for identical tensors).  The rhs rows compare the closed-form
    vector field and the plus-sign variants of the coadjoint assembly
    against the canonical, energy-conserving one on ``mp_derived``.
    """
    if (mp_derived.g.dim, mp_derived.h.dim) != (mp_printed.g.dim, mp_printed.h.dim):
        raise DimensionMismatch("audited pairs live on different algebras")
    n, m = mp_derived.g.dim, mp_derived.h.dim
    rng = np.random.default_rng(seed)
    etas = rng.standard_normal((samples, m))
    xis = rng.standard_normal((samples, n))
    mus = rng.standard_normal((samples, n))
    nus = rng.standard_normal((samples, m))

    lines: list[AuditLine] = []

    def add(name, deviation, witness=None, detail=None):
        status = "MATCH" if deviation <= tol else "MISMATCH"
        lines.append(AuditLine(name, float(deviation), status, witness, detail))

    def sampled_dev(fn_a, fn_b, arg_pairs):
        dev = 0.0
        for u, v in arg_pairs:
            dev = max(dev, float(np.abs(fn_a(u, v) - fn_b(u, v)).max()))
        return dev

    ei = list(zip(etas, xis))
    me = list(zip(mus, etas))
    xn = list(zip(xis, nus))
    en = list(zip(etas, nus))
    xm = list(zip(xis, mus))

    # primitive actions: printed tensors against derived tensors
    dev = sampled_dev(lambda e, x: left_act(mp_printed, e, x),
                      lambda e, x: left_act(mp_derived, e, x), ei)
    add("action |>", dev,
        _tensor_witness(mp_printed.rho - mp_derived.rho,
                        mp_printed.h.name_of, mp_printed.g.name_of))

    dev = sampled_dev(lambda e, x: right_act(mp_printed, e, x),
                      lambda e, x: right_act(mp_derived, e, x), ei)
    detail = None
    if dev > tol:
        defect = compat_defect(mp_printed)
        detail = (f"compatibility condition 1 defect {defect.d1:g} at "
                  f"({', '.join(defect.witness1)})")
    add("action <|", dev,
        _tensor_witness(mp_printed.sigma - mp_derived.sigma,
                        mp_printed.h.name_of, mp_printed.g.name_of),
        detail)

    # dual maps: closed forms against their defining pairing identities
    cf = closed_forms or ClosedFormActions()
    dual_rows = [
        ("dual *<|", cf.co_left,
         lambda u, v: co_left_act(mp_printed, u, v),
         lambda u, v: co_left_act(mp_derived, u, v), me),
        ("dual *|>", cf.co_right,
         lambda u, v: co_right_act(mp_printed, u, v),
         lambda u, v: co_right_act(mp_derived, u, v), xn),
        ("dual a*", cf.a_star,
         lambda u, v: a_star(mp_printed, u, v),
         lambda u, v: a_star(mp_derived, u, v), en),
        ("dual b*", cf.b_star,
         lambda u, v: b_star(mp_printed, u, v),
         lambda u, v: b_star(mp_derived, u, v), xm),
    ]
    for name, closed, canonical_printed, canonical_derived, args in dual_rows:
        if closed is not None:
            dev = sampled_dev(closed, canonical_printed, args)
        else:
            dev = sampled_dev(canonical_printed, canonical_derived, args)
        add(name, dev)

    # vector fields on the derived double
    double = build_double(mp_derived)

    def canonical_rhs(p, grad):
        rhs = _rhs_raw(double, p, np.concatenate(grad))
        return rhs[:n], rhs[n:]

    def plus_sign_rhs(p, grad):
        x, y = grad
        mu_dot = (lie_core.ad_star(mp_derived.g, x, p.mu)
                  + co_left_act(mp_derived, p.mu, y)
                  + a_star(mp_derived, y, p.nu))
        nu_dot = (lie_core.ad_star(mp_derived.h, y, p.nu)
                  + co_right_act(mp_derived, x, p.nu)
                  + b_star(mp_derived, x, p.mu))
        return mu_dot, nu_dot

    points = [DualPoint(mus[i], nus[i]) for i in range(samples)]
    grads = [(xis[i], etas[i]) for i in range(samples)]

    if cf.lp_rhs is not None:
        dev_mu = dev_nu = 0.0
        for p, grad in zip(points, grads):
            closed_mu, closed_nu = cf.lp_rhs(p, grad)
            can_mu, can_nu = canonical_rhs(p, grad)
            dev_mu = max(dev_mu, float(np.abs(closed_mu - can_mu).max()))
            dev_nu = max(dev_nu, float(np.abs(closed_nu - can_nu).max()))
        add("closed-form rhs (mu)", dev_mu)
        add("closed-form rhs (nu)", dev_nu)
    else:
        printed_double = build_double(mp_printed)
        dev = 0.0
        for p, grad in zip(points, grads):
            a = _rhs_raw(printed_double, p, np.concatenate(grad))
            b = _rhs_raw(double, p, np.concatenate(grad))
            dev = max(dev, float(np.abs(a - b).max()))
        add("canonical rhs (tensor sets)", dev)

    energy_dev = 0.0
    for p, grad in zip(points, grads):
        mu_dot, nu_dot = canonical_rhs(p, grad)
        energy_dev = max(energy_dev, abs(float(mu_dot @ grad[0] + nu_dot @ grad[1])))
    add("canonical rhs energy rate", energy_dev)

    if closed_forms is not None:
        dev = rate = 0.0
        for p, grad in zip(points, grads):
            plus_mu, plus_nu = plus_sign_rhs(p, grad)
            can_mu, can_nu = canonical_rhs(p, grad)
            dev = max(dev, float(np.abs(plus_mu - can_mu).max()),
                      float(np.abs(plus_nu - can_nu).max()))
            rate = max(rate, abs(float(plus_mu @ grad[0] + plus_nu @ grad[1])))
        add("plus-sign rhs vs canonical", dev)
        add("plus-sign rhs energy rate", rate)

    return AuditReport(samples, seed, tol, tuple(lines))
