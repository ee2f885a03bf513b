"""Gauge fields on the double complex: curvature, gauge transformations,
the Bianchi identity, the Yang-Mills residual, and self-duality.

A connection is an su(2)-valued 1-form A, a gauge field an SU(2)-valued
0-form h.  The curvature F = dA + A u A is gl(2, C)-valued: the quadratic
part A^i_k A^j_{tau_i k} - A^j_k A^i_{tau_j k} leaves the algebra, so no
projection is applied to F.

The discretized gauge transform A' = h u d(h^-1) + h u A u h^-1 is only
approximately su(2)-valued (h_k h^-1_{tau_i k} - I has a Hermitian trace
part whenever the two group elements differ); gauge_transform measures the
deviation instead of assuming membership.
"""

from __future__ import annotations

import numpy as np

from . import algebra as alg
from .calculus import (
    coboundary,
    copy_swap,
    cup,
    dual,
    norm,
    shift_plus,
    star,
)
from .cochain import Cochain, ValidationError, add, interior, scale, sub
from .complex4 import MASKS_BY_DEGREE, mask_axes

# ordered axis pairs matching the degree-2 direction sets (ascending masks)
DIR_PAIRS = tuple(mask_axes(m) for m in MASKS_BY_DEGREE[2])


def curvature(A: Cochain) -> Cochain:
    """F = coboundary(A) + cup(A, A); degree 2, general gl(2, C) coefficients."""
    if A.degree != 1:
        raise ValueError("curvature needs a degree-1 form")
    return add(coboundary(A), cup(A, A))


def curvature_components(A: Cochain) -> Cochain:
    """Curvature assembled directly from the component stencil.

    F^{ij}_k = (A^j_{tau_i k} - A^j_k) - (A^i_{tau_j k} - A^i_k)
               + A^i_k A^j_{tau_i k} - A^j_k A^i_{tau_j k}

    Independent evaluation route used by the solver kernel; must agree with
    curvature() to machine precision.
    """
    out = Cochain.zeros(A.domain, 2, A.copy)
    v = A.values
    for d, (i, j) in enumerate(DIR_PAIRS):
        ai = v[..., i - 1, :, :]
        aj = v[..., j - 1, :, :]
        aj_i = shift_plus(A.domain, aj, i)
        ai_j = shift_plus(A.domain, ai, j)
        out.values[..., d, :, :] = (aj_i - aj) - (ai_j - ai) + ai @ aj_i - aj @ ai_j
    return out


def covariant_d(A: Cochain, omega: Cochain) -> Cochain:
    """d omega + A u omega + (-1)^{r+1} omega u A for an r-form omega."""
    if omega.degree > 3:
        raise ValueError("covariant differential needs degree <= 3")
    sign = 1 if omega.degree % 2 else -1
    return add(coboundary(omega), add(cup(A, omega), scale(cup(omega, A), sign)))


def gauge_inverse(h: Cochain) -> Cochain:
    """0-form with pointwise inverted coefficients."""
    if h.degree != 0:
        raise ValueError("gauge inverse needs a degree-0 form")
    return h.like(alg.inv2(h.values))


def gauge_transform(A: Cochain, h: Cochain, su2_tol=None) -> Cochain:
    """A' = h u d(h^-1) + h u A u h^-1.

    With su2_tol set, raises ValidationError when the result strays from
    su(2) by more than the tolerance; by default the deviation is left to
    the caller (see algebra.su2_algebra_deviation).
    """
    hinv = gauge_inverse(h)
    out = add(cup(h, coboundary(hinv)), cup(h, cup(A, hinv)))
    if su2_tol is not None:
        dev = alg.su2_algebra_deviation(out.values[interior(out.domain)])
        if dev > su2_tol:
            raise ValidationError("transformed connection left su(2)", dev)
    return out


def bianchi_residual(A: Cochain) -> float:
    """Norm of the covariant differential of the curvature.

    d F + A u F - F u A vanishes identically for F = dA + A u A: the
    combinatorial Bianchi identity.
    """
    return norm(covariant_d(A, curvature(A)))


def yang_mills_residual(A: Cochain) -> Cochain:
    """The field-equation 3-form: covariant differential of the dual curvature."""
    return covariant_d(A, dual(curvature(A)))


def yang_mills_residual_norm(A: Cochain) -> float:
    return norm(yang_mills_residual(A))


# axis-pair partners: the three paired double shifts whose agreement makes a
# gauge commute with the dual under right cup multiplication
SHIFT_PAIRS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def dual_compat_defects(h: Cochain):
    """Max coefficient mismatch of h(tau_a k) vs h(tau_b k) for the three
    complementary axis pairs, over interior cells."""
    if h.degree != 0:
        raise ValueError("needs a degree-0 form")
    sl = interior(h.domain)
    out = []
    for (a1, a2), (b1, b2) in SHIFT_PAIRS:
        left = shift_plus(h.domain, shift_plus(h.domain, h.values, a1), a2)
        right = shift_plus(h.domain, shift_plus(h.domain, h.values, b1), b2)
        out.append(float(np.abs(left[sl] - right[sl]).max()))
    return tuple(out)


def is_dual_compatible(h: Cochain, tol: float = 1e-12) -> bool:
    """True iff all three paired-shift identities hold at every interior cell."""
    return max(dual_compat_defects(h)) <= tol


def left_cup_dual_defect(h: Cochain, f: Cochain) -> float:
    """Defect of mirror-star(h u f) = h u mirror-star(f); zero for every h."""
    return norm(sub(copy_swap(star(cup(h, f))), cup(h, copy_swap(star(f)))))


def right_cup_dual_defect(h: Cochain, f: Cochain) -> float:
    """Defect of mirror-star(f u h) = mirror-star(f) u h for a 2-form f.

    Vanishes iff h satisfies the paired-shift conditions (an iff: a gauge
    violating them produces a positive defect on generic f).
    """
    if f.degree != 2:
        raise ValueError("needs a degree-2 form")
    return norm(sub(copy_swap(star(cup(f, h))), cup(copy_swap(star(f)), h)))


def self_dual_part(F: Cochain) -> Cochain:
    """(F + dual F) / 2; fixed by the dual map."""
    return scale(add(F, dual(F)), 0.5)


def anti_self_dual_part(F: Cochain) -> Cochain:
    """(F - dual F) / 2; negated by the dual map."""
    return scale(sub(F, dual(F)), 0.5)


def sd_residual(F: Cochain) -> float:
    """Norm of F - dual F, zero exactly on self-dual forms."""
    if F.degree != 2:
        raise ValueError("needs a degree-2 form")
    return norm(sub(F, dual(F)))


def sd_component_defects(F: Cochain, anti: bool = False):
    """Norms of the three componentwise self-duality equations
    F^{12} = F^{34}, F^{13} = -F^{24}, F^{14} = F^{23}
    (right-hand sides negated when anti is set)."""
    idx = {pair: n for n, pair in enumerate(DIR_PAIRS)}
    sl = interior(F.domain)
    v = F.values[sl]
    out = []
    for (a, b, sign) in (((1, 2), (3, 4), 1), ((1, 3), (2, 4), -1), ((1, 4), (2, 3), 1)):
        if anti:
            sign = -sign
        diff = v[..., idx[a], :, :] - sign * v[..., idx[b], :, :]
        out.append(float(np.sqrt(np.sum(np.abs(diff) ** 2))))
    return tuple(out)
