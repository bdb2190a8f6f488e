"""The standard contact model on R^{2n+1}.

Coordinates are ordered ``(x_1..x_n, y_1..y_n, z)`` and the contact form is
``alpha = dz - sum_i y_i dx_i``.  Its Reeb field is ``d/dz``; the contact
planes are spanned by the frame

    e_{x,i} = d/dx_i + y_i d/dz,     e_{y,i} = d/dy_i,

in which ``d alpha`` is the constant matrix ``[[0, I], [-I, 0]]``.  Vectors
of xi are therefore handled by their 2n frame coefficients ``(a, b)``; for an
ambient vector ``v`` these are simply ``a = v_x`` and ``b = v_y``.

All functions broadcast over leading axes: a point array of shape
``(..., 2n+1)`` pairs with a vector array of the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import ContractViolation, DegenerateInputError

#: Gram-determinant threshold used to decide that two directions are parallel.
PARALLEL_TOL = 1e-9


@dataclass(frozen=True)
class TangentVector:
    """An element of T_pM: a base point together with ambient components."""

    base: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        comp = np.asarray(self.components, dtype=float)
        if base.shape != comp.shape:
            raise ContractViolation("base and components must have the same shape")
        if not (np.all(np.isfinite(base)) and np.all(np.isfinite(comp))):
            raise ContractViolation("tangent vector must be finite")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "components", comp)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


@dataclass(frozen=True)
class LinePlaneDecomposition:
    """Splitting ``v = xi_part + reeb_part * R`` of TM = xi + <R>.

    ``xi_part`` holds frame coefficients ``(a_1..a_n, b_1..b_n)``.
    """

    xi_part: np.ndarray
    reeb_part: np.ndarray | float


@dataclass(frozen=True)
class ContactModel:
    """Standard contact structure ``ker(dz - sum y_i dx_i)`` on R^{2n+1}."""

    n: int = 1
    omega: np.ndarray = field(init=False, repr=False, compare=False)
    J: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ContractViolation(f"half-dimension must be a positive integer, got {self.n!r}")
        n = int(self.n)
        eye, zero = np.eye(n), np.zeros((n, n))
        omega = np.block([[zero, eye], [-eye, zero]])
        # J e_x = e_y, J e_y = -e_x
        J = np.block([[zero, -eye], [eye, zero]])
        omega.setflags(write=False)
        J.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    # -- coordinate helpers -------------------------------------------------

    def _check(self, *arrays):
        out = []
        for a in arrays:
            a = np.asarray(a, dtype=float)
            if a.shape[-1:] != (self.dim,):
                raise ContractViolation(
                    f"expected trailing dimension {self.dim}, got shape {a.shape}"
                )
            out.append(a)
        return out if len(out) > 1 else out[0]

    def xs(self, p):
        return np.asarray(p)[..., : self.n]

    def ys(self, p):
        return np.asarray(p)[..., self.n : 2 * self.n]

    # -- the contact form and friends --------------------------------------

    def alpha(self, p, v):
        """``alpha_p(v) = v_z - sum_i y_i(p) v_{x,i}``."""
        p, v = self._check(p, v)
        return v[..., -1] - np.sum(self.ys(p) * self.xs(v), axis=-1)

    def reeb(self, p):
        p = self._check(p)
        r = np.zeros_like(p)
        r[..., -1] = 1.0
        return r

    def xi_frame(self, p):
        """Ambient frame ``(e_{x,1}..e_{x,n}, e_{y,1}..e_{y,n})`` at ``p``.

        Returns an array of shape ``(..., 2n, 2n+1)``.
        """
        p = self._check(p)
        n = self.n
        frame = np.zeros(p.shape[:-1] + (2 * n, self.dim))
        for i in range(n):
            frame[..., i, i] = 1.0
            frame[..., i, -1] = p[..., n + i]
            frame[..., n + i, n + i] = 1.0
        return frame

    def to_ambient(self, p, coeffs):
        """Ambient components of the xi-vector with frame coefficients ``coeffs``."""
        p = self._check(p)
        coeffs = np.asarray(coeffs, dtype=float)
        n = self.n
        v = np.zeros(np.broadcast_shapes(p.shape, coeffs.shape[:-1] + (self.dim,)))
        v[..., : 2 * n] = coeffs
        v[..., -1] = np.sum(self.ys(p) * coeffs[..., :n], axis=-1)
        return v

    def project(self, p, v) -> LinePlaneDecomposition:
        """Decompose ``v`` along ``TM = xi + <R>``."""
        p, v = self._check(p, v)
        return LinePlaneDecomposition(
            xi_part=np.array(v[..., : 2 * self.n], dtype=float),
            reeb_part=self.alpha(p, v),
        )

    def dalpha(self, u, w):
        """``d alpha`` on frame coefficients (constant symplectic pairing)."""
        u, w = np.asarray(u, float), np.asarray(w, float)
        return np.einsum("...i,ij,...j->...", u, self.omega, w)

    def dalpha_ambient(self, u, w):
        """``d alpha = sum dx_i ^ dy_i`` on ambient vectors."""
        u, w = np.asarray(u, float), np.asarray(w, float)
        n = self.n
        return np.sum(u[..., :n] * w[..., n : 2 * n] - u[..., n : 2 * n] * w[..., :n], axis=-1)

    def apply_J(self, coeffs):
        return np.einsum("ij,...j->...i", self.J, np.asarray(coeffs, float))

    def metric(self, u, w):
        """Compatible metric ``g_J(u, w) = d alpha(u, J w)`` on xi."""
        return self.dalpha(u, self.apply_J(w))

    def ambient_metric(self, p, u, w):
        """Extension of ``g_J`` to TM declaring R a unit normal to xi."""
        du, dw = self.project(p, u), self.project(p, w)
        return self.metric(du.xi_part, dw.xi_part) + du.reeb_part * dw.reeb_part

    # -- the bundle E -------------------------------------------------------

    def reeb_parallel(self, p, tangents) -> bool:
        """True when R lies (numerically) in the span of ``tangents``.

        Uses the Gram determinant of the normalised vectors
        ``[t_1, .., t_k, R]`` which is scale invariant.
        """
        tangents = np.atleast_2d(self._check(tangents))
        vecs = np.vstack([tangents, self.reeb(p)[None, :]])
        norms = np.linalg.norm(vecs, axis=1)
        if np.any(norms == 0):
            return True
        vecs = vecs / norms[:, None]
        return bool(np.linalg.det(vecs @ vecs.T) < PARALLEL_TOL)

    def bundle_E(self, p, tangents):
        """Frame coefficients of a basis of ``E_p = (pi T_pL)^{perp_dalpha}``.

        ``tangents`` holds one or more ambient vectors spanning ``T_pL``.
        Returns an array of shape ``(k, 2n)`` whose rows span ``E_p``; for a
        curve in the 3-dimensional model this is the normalised line
        ``pi(T_pL)`` itself.
        """
        p = self._check(p)
        tangents = np.atleast_2d(self._check(tangents))
        if self.reeb_parallel(p, tangents):
            raise DegenerateInputError("Reeb field is tangent to the submanifold at p")
        proj = self.project(p, tangents).xi_part  # (k, 2n)
        # w in E  <=>  omega(w, u_j) = 0 for all j  <=>  (omega u_j) . w = 0
        basis = null_space(proj @ self.omega.T)
        return basis.T

    def is_legendrian_at(self, p, tangents, tol: float = 1e-9) -> bool:
        """``E_p == T_pL`` test; equivalent to ``alpha`` vanishing on T_pL."""
        tangents = np.atleast_2d(self._check(tangents))
        if tangents.shape[0] != self.n:
            raise ContractViolation("need exactly n tangent vectors for an n-dimensional L")
        E = self.bundle_E(p, tangents)
        T = self.project(p, tangents).xi_part
        # E has rank n; T_pL equals E iff T_pL sits in xi and pi(T_pL) spans E.
        alpha_part = np.abs(self.alpha(p, tangents)) / np.linalg.norm(tangents, axis=1)
        residual = T - (T @ E.T) @ E
        return bool(np.all(alpha_part < tol) and np.linalg.norm(residual) < tol * max(1.0, np.linalg.norm(T)))


STANDARD = ContactModel(1)


def alpha_eval(p, v, model: ContactModel = STANDARD):
    return model.alpha(p, v)


def project_pi(p, v, model: ContactModel = STANDARD) -> LinePlaneDecomposition:
    return model.project(p, v)


def complex_structure_J(p, v, model: ContactModel = STANDARD):
    """Apply J to the xi-vector with frame coefficients ``v`` (``p`` unused: J is constant in the frame)."""
    return model.apply_J(v)


def bundle_E(p, tangent_line, model: ContactModel = STANDARD):
    """Spanning vector(s) of E_p; a single vector for the 3-dimensional model."""
    basis = model.bundle_E(p, tangent_line)
    return basis[0] if basis.shape[0] == 1 else basis
