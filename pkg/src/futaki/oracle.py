"""Floating-point quadrature over the simplex, used only as a test oracle.

The l-simplex is parametrized by x in R^l with x_i >= 0, sum x_i <= 1 and
barycentric coordinates L_0 = 1 - sum x_i, L_i = x_i.  A collapsed (Duffy)
map sends the unit cube onto it, and a tensor Gauss-Legendre rule of fixed
order integrates polynomial integrands up to rounding.

This is the only module in the package that uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bundle import DerivedInvariants
from .moments import moment_table_closed

MAX_DIM = 5
MAX_ORDER = 64
DEFAULT_ORDER = 16


class DepthExceeded(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    estimated_error: float
    samples_or_depth: int


def _nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


def _rule(ell: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric points (shape (l+1, N)) and weights for the l-simplex."""
    t, w = _nodes(order)
    grids = np.meshgrid(*([t] * ell), indexing="ij")
    wgrids = np.meshgrid(*([w] * ell), indexing="ij")
    ts = [g.ravel() for g in grids]
    # x_i = t_i prod_{s<i} (1 - t_s); the Jacobian is the product of those prefixes
    xs = []
    jac = np.ones_like(ts[0])
    rest = np.ones_like(ts[0])
    for ti in ts:
        xs.append(rest * ti)
        jac = jac * rest
        rest = rest * (1 - ti)
    weight = np.ones_like(ts[0])
    for wg in wgrids:
        weight = weight * wg.ravel()
    L0 = 1 - np.sum(xs, axis=0)
    return np.vstack([L0, *xs]), weight * jac


def simplex_quadrature(f: Callable[[np.ndarray], np.ndarray], ell: int, depth: int = DEFAULT_ORDER) -> QuadratureResult:
    """Integrate f(L) over the l-simplex; f maps an (l+1, N) array to N values.

    The error estimate compares against a rule four points coarser.
    """
    if ell < 0 or ell > MAX_DIM:
        raise DepthExceeded(f"dimension {ell} outside 0..{MAX_DIM}")
    if depth < 5 or depth > MAX_ORDER:
        raise DepthExceeded(f"order {depth} outside 5..{MAX_ORDER}")
    if ell == 0:
        v = float(np.asarray(f(np.ones((1, 1))))[0])
        return QuadratureResult(v, 0.0, depth)
    pts, wts = _rule(ell, depth)
    value = float(np.dot(wts, f(pts)))
    pts2, wts2 = _rule(ell, depth - 4)
    coarse = float(np.dot(wts2, f(pts2)))
    err = abs(value - coarse) + 1e-15 * max(1.0, abs(value)) * len(wts)
    return QuadratureResult(value, err, depth)


def monomial(exponents) -> Callable[[np.ndarray], np.ndarray]:
    e = list(exponents)

    def f(L):
        out = np.ones(L.shape[1])
        for row, k in zip(L, e):
            out = out * row**k
        return out

    return f


def facet_quadrature(f: Callable[[np.ndarray], np.ndarray], ell: int, j: int, depth: int = DEFAULT_ORDER) -> QuadratureResult:
    """Integrate f over the facet {L_j = 0}, itself an (l-1)-simplex."""

    def lifted(P):
        L = np.insert(P, j, 0.0, axis=0)
        return f(L)

    return simplex_quadrature(lifted, ell - 1, depth)


def _densities(inv: DerivedInvariants, c: float):
    r = list(inv.ranks)
    mu = [float(x) for x in inv.mu]
    n = len(r)

    def affine(L):
        return c - sum(m * row for m, row in zip(mu, L))

    def base(L, skip=None):
        out = np.ones(L.shape[1])
        for k, row in enumerate(L):
            e = r[k] - 1 - (1 if k == skip else 0)
            if e:
                out = out * row**e
        return out

    def p(L):
        return affine(L) * base(L)

    def bulk(L):
        out = 2 * (1 - inv.genus) * base(L)
        for k in range(n):
            if r[k] >= 2:
                out = out + r[k] * (r[k] - 1) * affine(L) * base(L, skip=k)
        return out

    return p, bulk, r


def moment_table_numeric(inv: DerivedInvariants, c, depth: int = DEFAULT_ORDER) -> dict:
    """Every moment entry by quadrature, keyed like ``MomentTable`` fields."""
    cf = float(c)
    ell = inv.ell
    p, bulk, r = _densities(inv, cf)
    q = lambda f: simplex_quadrature(f, ell, depth).value  # noqa: E731

    def weighted(g, *idx):
        def f(L):
            out = g(L)
            for i in idx:
                out = out * L[i]
            return out

        return f

    def boundary(*idx):
        total = 0.0
        for j in range(len(r)):
            if r[j] != 1 or j in idx:
                continue
            total += facet_quadrature(weighted(p, *idx), ell, j, depth).value
        return total

    out = {
        "alpha0": q(p),
        "alpha": [q(weighted(p, j)) for j in range(1, ell + 1)],
        "alpha2": [[q(weighted(p, j, k)) for k in range(1, ell + 1)] for j in range(1, ell + 1)],
        "beta0": q(bulk) + boundary(),
        "beta": [q(weighted(bulk, j)) + boundary(j) for j in range(1, ell + 1)],
    }
    return out


def moment_table_numeric_check(inv: DerivedInvariants, c, depth: int = DEFAULT_ORDER) -> float:
    """Largest relative deviation between quadrature and the exact table at c."""
    exact = moment_table_closed(inv, c)
    num = moment_table_numeric(inv, c, depth)
    pairs = [(num["alpha0"], exact.alpha0), (num["beta0"], exact.beta0)]
    for j in range(1, inv.ell + 1):
        pairs.append((num["alpha"][j - 1], exact.a(j)))
        pairs.append((num["beta"][j - 1], exact.b(j)))
        for k in range(1, inv.ell + 1):
            pairs.append((num["alpha2"][j - 1][k - 1], exact.a2(j, k)))
    worst = 0.0
    for approx, ex in pairs:
        exf = float(ex)
        scale = abs(exf) if exf != 0 else 1.0
        worst = max(worst, abs(approx - exf) / scale)
    return worst
