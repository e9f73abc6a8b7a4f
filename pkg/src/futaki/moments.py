"""Weighted moment integrals over the simplex.

The coefficients alpha_0, alpha_j, alpha_jk, beta_0, beta_j are produced by two independent routes:

* ``moment_table_direct`` integrates the density
  p_c = (c - sum mu_k L_k) prod L_k^(r_k - 1) monomial by monomial with the
  Dirichlet formula, plus facet integrals for rank-one summands;
* ``moment_table_closed`` evaluates the closed-form expressions.

Both accept ``c=None`` for symbolic mode, in which every entry is a ``Poly``
in c.  Indices j, k run over 1..l; the accessors ``a``, ``a2`` and ``b`` take
those 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import mul
from typing import Sequence

from gmpy2 import lcm, mpq

from .bundle import DerivedInvariants
from .exactnum import BigRational, Poly, Q, factorial

_ZERO = Q(0)


class InternalMismatch(AssertionError):
    """Two routes that must agree exactly did not."""


@dataclass(frozen=True)
class MomentTable:
    alpha0: object
    alpha: tuple
    alpha2: tuple
    beta0: object
    beta: tuple

    @property
    def ell(self) -> int:
        return len(self.alpha)

    @property
    def symbolic(self) -> bool:
        return isinstance(self.alpha0, Poly)

    def a(self, j: int):
        return self.alpha[j - 1]

    def a2(self, j: int, k: int):
        return self.alpha2[j - 1][k - 1]

    def b(self, j: int):
        return self.beta[j - 1]

    def entries(self) -> list:
        out = [self.alpha0, *self.alpha, self.beta0, *self.beta]
        for row in self.alpha2:
            out.extend(row)
        return out

    def evaluate(self, c) -> "MomentTable":
        """Numeric table at rational c from a symbolic one."""
        if not self.symbolic:
            return self
        c = Q(c)
        return MomentTable(
            self.alpha0(c),
            tuple(x(c) for x in self.alpha),
            tuple(tuple(x(c) for x in row) for row in self.alpha2),
            self.beta0(c),
            tuple(x(c) for x in self.beta),
        )

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, Poly) else str(x)

        return {
            "alpha0": enc(self.alpha0),
            "alpha": [enc(x) for x in self.alpha],
            "alpha2": [[enc(x) for x in row] for row in self.alpha2],
            "beta0": enc(self.beta0),
            "beta": [enc(x) for x in self.beta],
        }


def _c_value(c):
    return Poly.var() if c is None else Q(c)


def _wrap(x, symbolic: bool):
    return Poly.coerce(x) if symbolic else x


# -- route A: direct integration ------------------------------------------------

def simplex_monomial_integral(exponents: Sequence[int]) -> BigRational:
    """Integral of prod L_k^(m_k) over the standard simplex of dimension len - 1."""
    if any(m < 0 for m in exponents):
        raise ValueError("exponents must be non-negative")
    ell = len(exponents) - 1
    num = 1
    for m in exponents:
        num *= factorial(m)
    return Q(num, factorial(sum(exponents) + ell))


def _facet_integral(exponents: Sequence[int], j: int) -> BigRational:
    # facet {L_j = 0}: the remaining barycentric coordinates span a simplex one
    # dimension lower
    if exponents[j] > 0:
        return _ZERO
    rest = [m for i, m in enumerate(exponents) if i != j]
    if not rest:
        return _ZERO
    return simplex_monomial_integral(rest)


def _bump(e: tuple, *deltas: tuple[int, int]) -> tuple:
    out = list(e)
    for i, s in deltas:
        out[i] += s
    return tuple(out)


@lru_cache(maxsize=4096)
def _direct_forms(ranks: tuple[int, ...]) -> tuple:
    """Route-A integrals as linear forms in (c, mu_0..mu_l, 1-g).

    Each form is a pair: the coefficient of c, and the tuple of coefficients
    of mu_0, ..., mu_l and (1 - g).  The density is linear in those parameters, so one pass per rank
    vector covers every degree vector and genus.
    """
    n = len(ranks)
    ell = n - 1
    base = tuple(r - 1 for r in ranks)
    width = n + 2

    def p_form(extra: tuple) -> list:
        e = tuple(b + x for b, x in zip(base, extra))
        f = [_ZERO] * width
        f[0] = simplex_monomial_integral(e)
        for k in range(n):
            f[1 + k] = -simplex_monomial_integral(_bump(e, (k, 1)))
        return f

    def bulk_form(extra: tuple) -> list:
        e = tuple(b + x for b, x in zip(base, extra))
        f = [_ZERO] * width
        f[-1] = 2 * simplex_monomial_integral(e)
        for k in range(n):
            rk = ranks[k]
            if rk < 2:
                continue
            w = rk * (rk - 1)
            ek = _bump(e, (k, -1))
            f[0] += w * simplex_monomial_integral(ek)
            for i in range(n):
                f[1 + i] -= w * simplex_monomial_integral(_bump(ek, (i, 1)))
        return f

    def boundary_form(extra: tuple) -> list:
        f = [_ZERO] * width
        if ell < 1:
            return f
        e = tuple(b + x for b, x in zip(base, extra))
        for j in range(n):
            if ranks[j] != 1:
                continue
            f[0] += _facet_integral(e, j)
            for k in range(n):
                if k != j:
                    f[1 + k] -= _facet_integral(_bump(e, (k, 1)), j)
        return f

    def unit(*idx: int) -> tuple:
        return _bump((0,) * n, *[(i, 1) for i in idx])

    def pack(f: list) -> tuple:
        return (f[0], tuple(f[1:]))

    zero = unit()
    a0 = p_form(zero)
    a = [p_form(unit(j)) for j in range(1, n)]
    a2 = [[p_form(unit(j, k)) for k in range(1, n)] for j in range(1, n)]
    b0 = [x + y for x, y in zip(bulk_form(zero), boundary_form(zero))]
    b = [[x + y for x, y in zip(bulk_form(unit(j)), boundary_form(unit(j)))] for j in range(1, n)]
    return (
        pack(a0),
        tuple(pack(x) for x in a),
        tuple(tuple(pack(x) for x in row) for row in a2),
        pack(b0),
        tuple(pack(x) for x in b),
    )


def _apply_form(form: tuple, params: tuple, c, symbolic: bool):
    # form = (coefficient of c, coefficient of mu_0, ..., mu_l, 1 - g);
    # params = (mu_0, ..., mu_l, 1 - g)
    const = sum(map(mul, form[1], params), _ZERO)
    if symbolic:
        return _affine(const, form[0])
    return form[0] * c + const


def _reshape(flat: list, ell: int) -> MomentTable:
    # flat order: alpha0, alpha_1..l, alpha_jk row-major, beta0, beta_1..l
    a2 = flat[1 + ell : 1 + ell + ell * ell]
    return MomentTable(
        flat[0],
        tuple(flat[1 : 1 + ell]),
        tuple([tuple(a2[j * ell : (j + 1) * ell]) for j in range(ell)]),
        flat[1 + ell + ell * ell],
        tuple(flat[2 + ell + ell * ell :]),
    )


@lru_cache(maxsize=4096)
def _flat_direct_forms(ranks: tuple[int, ...]) -> tuple:
    # rewritten against (d_0..d_l, 1-g) since mu_k = d_k / r_k, and stored as
    # (slope, integer numerators, common denominator) so integer degrees stay in Z
    a0f, af, a2f, b0f, bf = _direct_forms(ranks)
    scale = (*[Q(1, r) for r in ranks], Q(1))

    def by_degree(f):
        coeffs = tuple(map(mul, f[1], scale))
        den = int(reduce(lcm, (x.denominator for x in coeffs), 1))
        return f[0], tuple(int(x * den) for x in coeffs), den

    return tuple(by_degree(f) for f in (a0f, *af, *[f for row in a2f for f in row], b0f, *bf))


def moment_table_direct(inv: DerivedInvariants, c=None) -> MomentTable:
    """Moment table by integrating the expanded density over the simplex."""
    forms = _flat_direct_forms(inv.ranks)
    if all(d.denominator == 1 for d in inv.degrees):
        params = [int(d) for d in inv.degrees]
        params.append(1 - inv.genus)
    else:
        params = [*inv.degrees, Q(1 - inv.genus)]
    consts = [mpq(sum(map(mul, nums, params)), den) for _, nums, den in forms]
    if c is None:
        flat = [_affine(a, f[0]) for a, f in zip(consts, forms)]
    else:
        cv = Q(c)
        flat = [f[0] * cv + a for a, f in zip(consts, forms)]
    return _reshape(flat, inv.ell)


# -- route B: closed forms -------------------------------------------------------

_new = object.__new__


def _affine(a, b) -> Poly:
    # a + b*c; the hot path of both routes, so it bypasses the Poly constructor
    if not b:
        return Poly.from_trusted((a,))
    p = _new(Poly)
    p.coeffs = (a, b)
    return p


def _poly_in_c(coeffs: tuple, c):
    """Ascending coefficients -> Poly (c is None) or value at c."""
    if c is None:
        if len(coeffs) == 2:
            return _affine(*coeffs)
        return Poly.from_trusted(coeffs)
    acc = _ZERO
    for a in reversed(coeffs):
        acc = acc * c + a
    return acc


@lru_cache(maxsize=4096)
def _closed_prefactors(ranks: tuple[int, ...]) -> tuple:
    rV = sum(ranks)
    pi = 1
    for r in ranks:
        pi *= factorial(r - 1)
    n = len(ranks)
    k0, k1, k2 = Q(pi, factorial(rV)), Q(pi, factorial(rV + 1)), Q(pi, factorial(rV + 2))
    km1 = Q(pi, factorial(rV - 1))
    fa = tuple(k1 * ranks[j] for j in range(1, n))
    fa2 = tuple(
        k2 * (ranks[j] * (ranks[j] + 1) if j == k else ranks[j] * ranks[k])
        for j in range(1, n)
        for k in range(1, n)
    )
    fb = tuple(k0 * ranks[j] for j in range(1, n))
    # coefficients of c, in the flat entry order used by _reshape
    slopes = (
        rV * k0,
        *[(rV + 1) * f for f in fa],
        *[(rV + 2) * f for f in fa2],
        (rV - 1) * rV * km1,
        *[rV * (rV - 1) * f for f in fb],
    )
    # constant terms carry mu_j = d_j / r_j; multiplying through by r_j (or r_j r_k)
    # leaves an integer combination of degrees times these prefactors
    k2_diag = tuple(k2 * (ranks[j] + 1) for j in range(1, n))
    return rV, k0, k1, k2, k2_diag, km1, slopes


def moment_table_closed(inv: DerivedInvariants, c=None) -> MomentTable:
    rV, k0, k1, k2, k2_diag, km1, slopes = _closed_prefactors(inv.ranks)
    r = inv.ranks
    if all(x.denominator == 1 for x in inv.degrees):
        d = [int(x) for x in inv.degrees]
    else:
        d = list(inv.degrees)
    dV = sum(d)
    ell = len(r) - 1
    omg2 = 2 * (1 - inv.genus)
    js = range(1, ell + 1)

    # every entry is affine in c: prefactor * (constant + slope * c), where
    # alpha_j:  (-d_V - mu_j) r_j k1
    # alpha_jk: (-d_V - mu_j - mu_k) r_j r_k k2, with r_j (r_j + 1) on the diagonal
    # beta_j:   (2(1-g) - d_V (r_V-2) - r_V mu_j) r_j k0
    consts = [-dV * k0]
    consts += [-(dV * r[j] + d[j]) * k1 for j in js]
    for j in js:
        for k in js:
            if j == k:
                consts.append(-(dV * r[j] + 2 * d[j]) * k2_diag[j - 1])
            else:
                consts.append(-(dV * r[j] * r[k] + d[j] * r[k] + d[k] * r[j]) * k2)
    consts.append((omg2 - (rV - 1) * dV) * km1)
    consts += [((omg2 - dV * (rV - 2)) * r[j] - rV * d[j]) * k0 for j in js]
    if c is None:
        flat = [_affine(a, b) for a, b in zip(consts, slopes)]
    else:
        cv = Q(c)
        flat = [a + b * cv for a, b in zip(consts, slopes)]
    return _reshape(flat, ell)


def boundary_integrals(inv: DerivedInvariants, c=None) -> tuple:
    """Closed forms of the facet integrals of p_c and x_j p_c (j = 1..l)."""
    symbolic = c is None
    c = _c_value(c)
    rV, pi = inv.r_V, inv.pi_R
    d, r = inv.degrees, inv.ranks
    kap, kk, kp = inv.kappa, inv.kappa_k, inv.kappa_pair
    n = len(r)
    if rV >= 1 and kap:
        s = sum((d[k] * kk[k] for k in range(n)), _ZERO)
        total = (c * ((rV - 1) * kap) - s) * Q(pi, factorial(rV - 1))
    else:
        total = c * 0
    per = []
    for j in range(1, n):
        s = sum((d[k] * kp[k][j] for k in range(n)), _ZERO)
        per.append((c * (r[j] * rV * kk[j]) - r[j] * s - kk[j] * d[j]) * Q(pi, factorial(rV)))
    return _wrap(total, symbolic), tuple(_wrap(x, symbolic) for x in per)


def boundary_integrals_direct(inv: DerivedInvariants, c=None) -> tuple:
    """Facet integrals of p_c and x_j p_c by direct summation over facets."""
    symbolic = c is None
    cv = None if symbolic else Q(c)
    ranks = inv.ranks
    n = len(ranks)
    base = tuple(r - 1 for r in ranks)

    def one(extra):
        e = tuple(b + x for b, x in zip(base, extra))
        form = [_ZERO] * (n + 2)
        params = (*inv.mu, _ZERO)
        if n < 2:
            return _apply_form((form[0], tuple(form[1:])), params, cv, symbolic)
        for j in range(n):
            if ranks[j] != 1:
                continue
            form[0] += _facet_integral(e, j)
            for k in range(n):
                if k != j:
                    form[1 + k] -= _facet_integral(_bump(e, (k, 1)), j)
        return _apply_form((form[0], tuple(form[1:])), params, cv, symbolic)

    zero = (0,) * n
    per = tuple(one(_bump(zero, (j, 1))) for j in range(1, n))
    return one(zero), per


# -- product identities ----------------------------------------------------------

def gamma_closed(inv: DerivedInvariants, c=None) -> tuple:
    """Closed forms gamma_jk (j, k = 1..l) and gamma'_j as nested tuples."""
    if c is not None:
        c = Q(c)
    rV, dV, pi = inv.r_V, inv.d_V, inv.pi_R
    r, mu = inv.ranks, inv.mu
    n = len(r)
    f1 = factorial(rV + 1)
    base = Q(pi * pi, f1 * f1 * (rV + 2))
    lead = -(rV + 1) * (rV + 2)
    gam = []
    for j in range(1, n):
        row = []
        for k in range(1, n):
            s = mu[k] + mu[j] + dV
            f = base * (r[j] * r[k])
            # f * (lead c^2 + 2 s (1 + r_V) c - s d_V - (r_V + 2) mu_j mu_k)
            coeffs = (f * (-s * dV - (rV + 2) * mu[j] * mu[k]), f * (2 * s * (1 + rV)), f * lead)
            row.append(_poly_in_c(coeffs, c))
        gam.append(tuple(row))
    gp = []
    basep = Q(pi * pi, factorial(rV) * factorial(rV + 2))
    for j in range(1, n):
        f = basep * r[j]
        # f * (r_V (r_V + 2) c^2 - 2 (d_V (r_V + 1) + r_V mu_j) c + d_V (2 mu_j + d_V))
        coeffs = (f * (dV * (2 * mu[j] + dV)), f * (-2 * (dV * (rV + 1) + rV * mu[j])), f * (rV * (rV + 2)))
        gp.append(_poly_in_c(coeffs, c))
    return tuple(gam), tuple(gp)


@dataclass(frozen=True)
class GammaCheck:
    product: tuple
    closed: tuple
    closed_prime: tuple


def gamma_terms(table: MomentTable, inv: DerivedInvariants, c=None) -> GammaCheck:
    """Compare alpha_0 alpha_jk - alpha_j alpha_k with the gamma closed forms.

    ``c`` must match the mode of ``table`` (None for a symbolic table).
    """
    gam, gp = gamma_closed(inv, c)
    ell = table.ell
    prod = []
    for j in range(1, ell + 1):
        row = []
        for k in range(1, ell + 1):
            lhs = table.alpha0 * table.a2(j, k) - table.a(j) * table.a(k)
            rhs = gam[j - 1][k - 1] + (gp[j - 1] if j == k else 0)
            if lhs != rhs:
                raise InternalMismatch(
                    f"gamma identity fails at (j,k)=({j},{k}) for ranks {inv.ranks}, "
                    f"degrees {[str(x) for x in inv.degrees]}: {lhs} != {rhs}"
                )
            row.append(lhs)
        prod.append(tuple(row))
    return GammaCheck(tuple(prod), gam, gp)


def beta_alpha_closed(inv: DerivedInvariants, c=None) -> tuple:
    symbolic = c is None
    c = _c_value(c)
    rV, dV, pi, g = inv.r_V, inv.d_V, inv.pi_R, inv.genus
    r, d = inv.ranks, inv.degrees
    pref = Q(pi * pi, factorial(rV) * factorial(rV + 1))
    out = []
    for k in range(1, len(r)):
        t = r[k] * dV - rV * d[k]
        out.append(_wrap((c * (2 * rV * t) + 2 * (g - 1 - dV) * t) * pref, symbolic))
    return tuple(out)


def beta_alpha_sum_closed(inv: DerivedInvariants, c=None):
    """Closed form of sum_{k>=2} (beta_k alpha_0 - beta_0 alpha_k)."""
    symbolic = c is None
    c = _c_value(c)
    rV, dV, pi, g = inv.r_V, inv.d_V, inv.pi_R, inv.genus
    r, d = inv.ranks, inv.degrees
    X = rV * (d[0] + d[1]) - dV * (r[0] + r[1])
    expr = c * (2 * X) * Q(pi * pi, factorial(rV - 1) * factorial(rV + 1)) + 2 * (g - 1 - dV) * X * Q(
        pi * pi, factorial(rV) * factorial(rV + 1)
    )
    return _wrap(expr, symbolic)


def beta_alpha_cross(table: MomentTable, inv: DerivedInvariants, c=None) -> tuple:
    """Products beta_k alpha_0 - beta_0 alpha_k, checked against their closed forms."""
    closed = beta_alpha_closed(inv, c)
    out = []
    for k in range(1, table.ell + 1):
        lhs = table.b(k) * table.alpha0 - table.beta0 * table.a(k)
        if lhs != closed[k - 1]:
            raise InternalMismatch(
                f"beta/alpha cross identity fails at k={k} for ranks {inv.ranks}: {lhs} != {closed[k - 1]}"
            )
        out.append(lhs)
    if table.ell >= 2:
        s = sum(out[1:], _ZERO)
        if s != beta_alpha_sum_closed(inv, c):
            raise InternalMismatch(f"summed beta/alpha identity fails for ranks {inv.ranks}")
    return tuple(out)


def tables_equal(t1: MomentTable, t2: MomentTable) -> bool:
    return (
        t1.alpha0 == t2.alpha0
        and t1.alpha == t2.alpha
        and t1.alpha2 == t2.alpha2
        and t1.beta0 == t2.beta0
        and t1.beta == t2.beta
    )


def positivity_violations(table: MomentTable) -> list[str]:
    """Cauchy-Schwarz positivity checks on a numeric table."""
    bad = []
    if not table.alpha0 > 0:
        bad.append("alpha0 <= 0")
    for j in range(1, table.ell + 1):
        if not table.a2(j, j) > 0:
            bad.append(f"alpha_{j}{j} <= 0")
        if not table.alpha0 * table.a2(j, j) - table.a(j) ** 2 > 0:
            bad.append(f"alpha0*alpha_{j}{j} - alpha_{j}^2 <= 0")
    return bad
