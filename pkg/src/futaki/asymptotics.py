"""Large-c behaviour of the relative invariant (slope-zero normalized data).

With d_V = 0 and a_j the extremal coefficients, set S1 = sum_{j>=2} a_j r_j and
S2 = sum_{j>=2} a_j d_j.  Two linear relations over Q(c) determine them:

  ((r_V+2) c^2 - 2 m01 c) S1 + (-2c + (r_V+2)/(r_V+1) m01) S2 = 4 r_V (r_V+2) m01 (r_V c + g - 1)
  -(d_V - d_0 - d_1)/r_V S1 + (1 + H) S2 = T

where m01 = (d_0 + d_1)/(r_0 + r_1) and T, H are explicit sums over k >= 2.
``sigma_exact`` solves them in closed form; ``uv_recursion`` produces the
Laurent coefficients independently by a term-by-term recursion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundle import DerivedInvariants
from .exactnum import BigRational, LaurentTail, Poly, Q, RatFunc, factorial, laurent_expand
from .moments import moment_table_closed
from .relative import WrongArity, futaki_value, solve_extremal


class NotNormalized(ValueError):
    """Input must have total degree zero (apply normalize_slope_zero first)."""


def _require_normalized(inv: DerivedInvariants, min_ell: int = 1) -> None:
    if inv.d_V != 0:
        raise NotNormalized(f"total degree is {inv.d_V}, expected 0")
    if inv.ell < min_ell:
        raise WrongArity(f"needs at least {min_ell + 1} summands, got {inv.ell + 1}")


_C = Poly.var()


def _rf(num, den=1) -> RatFunc:
    return RatFunc(num, den)


@dataclass(frozen=True)
class SigmaPair:
    sigma1: RatFunc
    sigma2: RatFunc
    u: LaurentTail
    v: LaurentTail


@dataclass(frozen=True)
class FutExpansion:
    fut1: BigRational
    fut2: BigRational
    higher: tuple = ()

    def series(self) -> LaurentTail:
        """Fut1 c + Fut2 + Fut3/c + ... as a LaurentTail."""
        order = len(self.higher)
        coeffs = [self.fut1, self.fut2, *self.higher]
        return LaurentTail(-1, coeffs, order)


def _T_and_H(inv: DerivedInvariants) -> tuple[RatFunc, RatFunc]:
    """T and H of the second linear relation, as rational functions of c."""
    rV, g = inv.r_V, inv.genus
    r, d = inv.ranks, inv.degrees
    T = RatFunc(0)
    H = RatFunc(0)
    for k in range(2, len(r)):
        lin = Poly((-2 * d[k], r[k] * (rV + 2)))  # r_k (r_V+2) c - 2 d_k
        den = _C * lin
        T = T - RatFunc(Poly((g - 1, rV)) * (4 * (rV + 2) * d[k] ** 2), den)
        H = H + RatFunc(
            Poly((-(rV + 2) * d[k], 2 * r[k] * (1 + rV))) * d[k],
            den * ((rV + 1) * rV),
        )
    return T, H


def sigma_exact(inv: DerivedInvariants, order: int = 8) -> SigmaPair:
    """Closed rational functions S1, S2 and their Laurent tails to ``order``."""
    _require_normalized(inv, 2)
    rV, g, pi = inv.r_V, inv.genus, inv.pi_R
    r = inv.ranks
    m01 = inv.mu01
    table = moment_table_closed(inv)
    cross = Poly()
    for k in range(2, inv.ell + 1):
        cross = cross + (table.b(k) * table.alpha0 - table.beta0 * table.a(k))
    rhs1 = cross * Q(2 * factorial(rV) * factorial(rV + 1) * (rV + 2), pi * pi * (r[0] + r[1]))
    p11 = Poly((0, -2 * m01, rV + 2))
    p12 = Poly((Q(rV + 2, rV + 1) * m01, -2))
    T, H = _T_and_H(inv)
    q21 = -(inv.d_V - inv.degrees[0] - inv.degrees[1]) / rV
    q22 = H + 1
    # Cramer over Q(c)
    det = q22 * p11 - p12 * q21
    s1 = (q22 * rhs1 - T * p12) / det
    s2 = (T * p11 - rhs1 * q21) / det
    return SigmaPair(s1, s2, laurent_expand(s1, order), laurent_expand(s2, order))


def sigma_from_extremal(inv: DerivedInvariants, c) -> tuple[BigRational, BigRational]:
    """S1, S2 at rational c from the exact extremal solve."""
    table = moment_table_closed(inv, c)
    sol = solve_extremal(table)
    s1 = sum((sol.coeff(j) * inv.ranks[j] for j in range(2, inv.ell + 1)), Q(0))
    s2 = sum((sol.coeff(j) * inv.degrees[j] for j in range(2, inv.ell + 1)), Q(0))
    return s1, s2


def uv_recursion(inv: DerivedInvariants, order: int) -> tuple[LaurentTail, LaurentTail]:
    """u_i, v_i (i <= order) by the term-by-term recursion.

    u_1 = 4 r_V^2 m01 and, for n >= 2,
      (r_V+2) u_n = 2 m01 u_{n-1} + 2 v_{n-1} - (r_V+2)/(r_V+1) m01 v_{n-2} + [n = 2] 4 (r_V+2)(g-1) r_V m01;
    v_n comes from the second relation, v_n = T_n + q u_n - sum_{j>=1} H_j v_{n-j}.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    _require_normalized(inv, 1)
    rV, g = inv.r_V, inv.genus
    m01 = inv.mu01
    zeros = [Q(0)] * (order + 1)
    if inv.ell < 2:
        return LaurentTail(0, zeros, order), LaurentTail(0, zeros, order)
    T, H = _T_and_H(inv)
    Tt = laurent_expand(T, order)
    Ht = laurent_expand(H, order)
    q = (inv.d_V - inv.degrees[0] - inv.degrees[1]) / rV
    u = [Q(0)] * (order + 1)
    v = [Q(0)] * (order + 1)
    for n in range(1, order + 1):
        if n == 1:
            u[1] = 4 * rV * rV * m01
        else:
            acc = 2 * m01 * u[n - 1] + 2 * v[n - 1] - Q(rV + 2, rV + 1) * m01 * v[n - 2]
            if n == 2:
                acc += 4 * (rV + 2) * (g - 1) * rV * m01
            u[n] = acc / (rV + 2)
        acc = Tt.coeff(n) + q * u[n]
        for j in range(1, n + 1):
            acc -= Ht.coeff(j) * v[n - j]
        v[n] = acc
    return LaurentTail(0, u, order), LaurentTail(0, v, order)


def v1_closed(inv: DerivedInvariants) -> BigRational:
    """-4 r_V ((d_0+d_1)^2/(r_0+r_1) + sum_{j>=2} d_j^2/r_j)."""
    return -4 * inv.r_V * _square_sum(inv)


def u2_closed(inv: DerivedInvariants) -> BigRational:
    rV, m01 = inv.r_V, inv.mu01
    return -Q(8 * rV, rV + 2) * _square_sum(inv) + 4 * rV * m01 * (inv.genus - 1 + Q(2 * rV, rV + 2) * m01)


def _square_sum(inv: DerivedInvariants) -> BigRational:
    r, d = inv.ranks, inv.degrees
    s = (d[0] + d[1]) ** 2 / (r[0] + r[1])
    for j in range(2, len(r)):
        s += d[j] ** 2 / r[j]
    return s


def _fut_prefactor(inv: DerivedInvariants) -> BigRational:
    rV, pi = inv.r_V, inv.pi_R
    r0, r1 = inv.ranks[0], inv.ranks[1]
    return Q(pi * pi * r0 * r1, 2 * factorial(rV + 1) ** 2 * (rV + 2) * (r0 + r1))


def fut_expansion(inv: DerivedInvariants, order: int = 5) -> FutExpansion:
    """Coefficients of F/(mu_0 - mu_1) = Fut1 c + Fut2 + sum_{i>=1} Fut_{i+2} c^-i up to c^-order."""
    _require_normalized(inv, 1)
    rV, pi, g = inv.r_V, inv.pi_R, inv.genus
    r0, r1 = inv.ranks[0], inv.ranks[1]
    m01 = inv.mu01
    fut1 = Q(2 * pi * pi * rV * r0 * r1, factorial(rV - 1) * factorial(rV + 1) * (r0 + r1))
    fut2 = Q(2 * r0 * r1 * pi * pi, factorial(rV - 1) * factorial(rV + 2) * (r0 + r1)) * (
        (rV + 2) * (g - 1) + 2 * rV * m01
    )
    higher = []
    if order >= 1:
        u, v = uv_recursion(inv, order + 1)
        K = _fut_prefactor(inv)
        for i in range(1, order + 1):
            higher.append(K * (2 * (rV + 1) * u.coeff(i + 1) - v.coeff(i) * (rV + 2)))
    return FutExpansion(fut1, fut2, tuple(higher))


def stripped_futaki(inv: DerivedInvariants) -> RatFunc:
    """F/(mu_0 - mu_1) as a rational function of c (needs mu_0 != mu_1)."""
    gap = inv.mu[0] - inv.mu[1]
    if gap == 0:
        raise ZeroDivisionError("mu_0 = mu_1: the invariant vanishes identically")
    return RatFunc.coerce(futaki_value(moment_table_closed(inv))) / gap


def factored_futaki(inv: DerivedInvariants) -> RatFunc:
    """K [4 r_V (r_V+1)(r_V+2)(r_V c + g - 1) + 2 (r_V+1) c S1 - (r_V+2) S2]."""
    _require_normalized(inv, 1)
    rV, g = inv.r_V, inv.genus
    base = RatFunc(Poly((g - 1, rV)) * (4 * rV * (rV + 1) * (rV + 2)))
    if inv.ell >= 2:
        sp = sigma_exact(inv, 0)
        base = base + sp.sigma1 * _C * (2 * (rV + 1)) - sp.sigma2 * (rV + 2)
    return base * _fut_prefactor(inv)


# -- positivity certificate -----------------------------------------------------------

NONNEG_D01 = "d0+d1>=0"
NONPOS_D01 = "d0+d1<0"


@dataclass
class PositivityCertificate:
    c: BigRational
    case: str
    delta_sigma2: BigRational
    delta_sigma2_positive: bool
    witness: list = field(default_factory=list)  # per k: (k, weight w_k, B_k, gathered numerator)
    decomposition_ok: bool = True
    minus_sigma2: BigRational = Q(0)
    minus_sigma2_nonneg: bool = True
    bracket: BigRational = Q(0)
    bracket_form: BigRational = Q(0)
    bracket_positive: bool = True
    gap_factor: BigRational = Q(1)  # 2(r_V-r_0-r_1)(r_V+1)c + (r_V+2)(d_0+d_1), shared denominator of B_k

    @property
    def positive(self) -> bool:
        return (
            self.delta_sigma2_positive
            and self.gap_factor > 0
            and self.decomposition_ok
            and self.minus_sigma2_nonneg
            and self.bracket_positive
            and self.bracket == self.bracket_form
        )

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "case": self.case,
            "delta_sigma2": str(self.delta_sigma2),
            "delta_sigma2_positive": self.delta_sigma2_positive,
            "minus_sigma2": str(self.minus_sigma2),
            "bracket": str(self.bracket),
            "bracket_positive": self.bracket_positive,
            "gap_factor": str(self.gap_factor),
            "witness": [
                {"k": k, "weight": str(w), "B": None if b is None else str(b), "numerator": str(nb)} for k, w, b, nb in self.witness
            ],
        }


def delta_sigma2(inv: DerivedInvariants, c) -> BigRational:
    rV = inv.r_V
    r, d = inv.ranks, inv.degrees
    m01 = inv.mu01
    c = Q(c)
    out = Q(0)
    for k in range(2, len(r)):
        out += d[k] * (2 * r[k] * (1 + rV) * c - (rV + 2) * d[k]) / ((rV + 1) * rV * c * (r[k] * (rV + 2) * c - 2 * d[k]))
    R = _R(inv, c)
    out += R / (rV * (rV + 1) * c * ((rV + 2) * c - 2 * m01))
    return out


def _R(inv, c):
    rV, r, d, m01 = inv.r_V, inv.ranks, inv.degrees, inv.mu01
    return rV * (rV + 2) * (rV + 1) * c * c - 2 * (rV + 1) * (rV - r[0] - r[1]) * m01 * c - (rV + 2) * (d[0] + d[1]) * m01


def _W(inv, c):
    rV, r, d = inv.r_V, inv.ranks, inv.degrees
    return 2 * (rV - r[0] - r[1]) * (rV + 1) * c + (rV + 2) * (d[0] + d[1])


def numer_b(inv: DerivedInvariants, k: int, c) -> BigRational:
    """Numerator of B_k after gathering its two terms, up to the factor (r_V+2) c."""
    rV, r, d, m01 = inv.r_V, inv.ranks, inv.degrees, inv.mu01
    r01, d01 = r[0] + r[1], d[0] + d[1]
    rk, dk = r[k], d[k]
    return (
        2 * (rV + 1) * (rV * rk * (c - m01) + (rk * c - dk) * r01) * c
        + (c - m01) * d01 * (rV + 2) * rk
        + (rV + 1) * rk * (rV * rV - 2 * r01) * c * c
        + d01 * (rV * rk * c + (rV + 2) * dk)
    )


def sigma2_closed_at(inv: DerivedInvariants, c) -> BigRational:
    """S2 = -N / Delta at rational c, with N the explicit numerator."""
    rV, g, r, d, m01 = inv.r_V, inv.genus, inv.ranks, inv.degrees, inv.mu01
    c = Q(c)
    num = Q(0)
    for k in range(2, len(r)):
        num += 4 * (rV + 2) * d[k] ** 2 * (rV * c + g - 1) / (c * (r[k] * (rV + 2) * c - 2 * d[k]))
    num += 4 * (rV + 2) * (d[0] + d[1]) * m01 * (c * rV + g - 1) / ((rV + 2) * c * c - 2 * m01 * c)
    return -num / delta_sigma2(inv, c)


def positivity_certificate(inv: DerivedInvariants, c) -> PositivityCertificate:
    """Evaluate the positivity argument for the large bracket at rational c."""
    _require_normalized(inv, 2)
    c = Q(c)
    if not c > inv.max_slope:
        raise ValueError(f"c = {c} is not admissible")
    rV, g, r, d, m01 = inv.r_V, inv.genus, inv.ranks, inv.degrees, inv.mu01
    case = NONNEG_D01 if d[0] + d[1] >= 0 else NONPOS_D01
    delta = delta_sigma2(inv, c)
    W, R = _W(inv, c), _R(inv, c)
    witness = []
    total = Q(0)
    ok_gather = True
    for k in range(2, len(r)):
        lin = r[k] * (rV + 2) * c - 2 * d[k]
        w = (2 * r[k] * (1 + rV) * c - (rV + 2) * d[k]) / ((rV + 1) * rV * c)
        B = d[k] / lin + R / (W * ((rV + 2) * c - 2 * m01)) if W else None
        nb = numer_b(inv, k, c)
        gathered = d[k] * W * ((rV + 2) * c - 2 * m01) + R * lin
        ok_gather = ok_gather and gathered == (rV + 2) * c * nb
        witness.append((k, w, B, nb))
        total += w * B if W else 0
    s2 = sigma2_closed_at(inv, c)
    s1, s2x = sigma_from_extremal(inv, c)
    bracket = 4 * rV * (rV + 1) * (rV + 2) * (rV * c + g - 1) + 2 * (rV + 1) * c * s1 - (rV + 2) * s2x
    den = (rV + 2) * c - 2 * m01
    form = 4 * rV * (rV + 1) * (rV + 2) ** 2 * (c * rV + g - 1) * c / den + (-s2) * (c * rV * rV / den)
    return PositivityCertificate(
        c=c,
        case=case,
        delta_sigma2=delta,
        delta_sigma2_positive=delta > 0,
        witness=witness,
        decomposition_ok=bool(W) and ok_gather and total == delta and s2 == s2x,
        minus_sigma2=-s2,
        minus_sigma2_nonneg=-s2 >= 0,
        bracket=bracket,
        bracket_form=form,
        bracket_positive=bracket > 0,
        gap_factor=W,
    )


def sigma2_vanishes_identically(inv: DerivedInvariants) -> bool:
    """S2 = 0 exactly when d_k = 0 for k >= 2 and d_0 + d_1 = 0 (given d_V = 0)."""
    d = inv.degrees
    return d[0] + d[1] == 0 and all(x == 0 for x in d[2:])
