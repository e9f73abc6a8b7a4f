"""Algebraic route: Hilbert and weight polynomials of the central fibre.

With n = r_V, the space of sections of L^k is H^0(C, S^k V* (x) O(mk)).  Its
dimension d_k and the traces w_k of the generators are polynomials in k whose
top coefficients (the tilde coefficients) must reproduce the moment integrals:

    t_alpha0 = alpha_0 / pi_R      t_beta0 = beta_0 / (2 pi_R)
    t_alpha_i = alpha_i / pi_R     t_beta_i = beta_i / (2 pi_R)
    t_alpha_ij = alpha_ij / pi_R

Everything is built from the symmetric-power Chern character coefficients,
expanded exactly as polynomials in k.

Sign convention: a weight vector (l_0, ..., l_l) acts on V_i with weight l_i
and the generator on V is -Lambda, so the dual action on V* has curvature
-F_V/(2 pi) + Lambda.  Alternate conventions are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .bundle import DerivedInvariants
from .exactnum import BigRational, Poly, Q, binomial, binomial_in_k
from .linsolve import solve
from .moments import MomentTable, moment_table_closed
from .relative import Sign, futaki_value, solve_extremal


@dataclass(frozen=True)
class WeightVector:
    lambdas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(int(x) for x in self.lambdas))

    @classmethod
    def basis(cls, i: int, size: int) -> "WeightVector":
        return cls(tuple(1 if j == i else 0 for j in range(size)))

    def __len__(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class SymPowerChern:
    """Coefficients expressing ch(S^k E) through the classes of a rank-r bundle E.

    rank; c1 is the multiple of c1(E); ch2 = (coef of ch2(E), coef of c1(E)^2);
    ch3 = (coef of c1^3, coef of c1 ch2, coef of ch3).  Entries are numbers for a
    fixed k, or polynomials in k from ``sym_power_chern_poly``.
    """

    rank: object
    c1: object
    ch2: tuple
    ch3: tuple


def sym_power_chern(r: int, k: int) -> SymPowerChern:
    if r < 1 or k < 0:
        raise ValueError("need r >= 1 and k >= 0")
    b = binomial
    return SymPowerChern(
        rank=Q(b(r - 1 + k, k)),
        c1=Q(b(r - 1 + k, k - 1)),
        ch2=(Q(b(r + k, k - 1)), Q(b(r - 1 + k, k - 2), 2)),
        ch3=(Q(b(r - 1 + k, k - 3), 6), Q(b(r + k, k - 2)), Q(b(r + 1 + k, k - 1) + b(r + k, k - 2))),
    )


@lru_cache(maxsize=64)
def sym_power_chern_poly(r: int) -> SymPowerChern:
    """Same coefficients as polynomials in k (exact for k >= 3)."""
    if r < 1:
        raise ValueError("need r >= 1")
    p = binomial_in_k
    return SymPowerChern(
        rank=p(r - 1, 0),
        c1=p(r - 1, 1),
        ch2=(p(r, 1), p(r - 1, 2) * Q(1, 2)),
        ch3=(p(r - 1, 3) * Q(1, 6), p(r, 2), p(r + 1, 1) + p(r, 2)),
    )


@dataclass(frozen=True)
class TildeCoefficients:
    t_alpha0: BigRational
    t_beta0: BigRational
    t_alpha: tuple
    t_beta: tuple
    t_alpha2: tuple

    def matches(self, table: MomentTable, pi_R: int) -> bool:
        ell = len(self.t_alpha) - 1
        if self.t_alpha0 * pi_R != table.alpha0 or 2 * self.t_beta0 * pi_R != table.beta0:
            return False
        for i in range(1, ell + 1):
            if self.t_alpha[i] * pi_R != table.a(i) or 2 * self.t_beta[i] * pi_R != table.b(i):
                return False
            for j in range(1, ell + 1):
                if self.t_alpha2[i][j] * pi_R != table.a2(i, j):
                    return False
        return True



_K = Poly.var()


@lru_cache(maxsize=64)
def _shifted(r: int) -> tuple[Poly, Poly, Poly, Poly]:
    """k times the ch2, c1 and rank coefficients, reused across instances."""
    sp = sym_power_chern_poly(r)
    return sp.ch2[0] * _K, sp.ch2[1] * _K, sp.c1 * _K, sp.rank * _K


# Each polynomial in k below is a combination sum(s * P) of a few fixed
# polynomials P (depending only on n = r_V) with instance-dependent scalars s.
# Keeping the combination lets callers read single coefficients exactly
# without multiplying out the whole polynomial.

def _combine(terms: list) -> Poly:
    out = Poly()
    for s, p in terms:
        out = out + p * s
    return out


def _coeff(terms: list, j: int) -> BigRational:
    return sum((s * p[j] for s, p in terms), Q(0))


def _dk_terms(inv: DerivedInvariants, m) -> list:
    sp = sym_power_chern_poly(inv.r_V)
    return [(Q(1 - inv.genus), sp.rank), (Q(m) - inv.mu_V, _shifted(inv.r_V)[3])]


def hilbert_dk_poly(inv: DerivedInvariants, m) -> Poly:
    """d_k = C(n-1+k, k) (k (m - mu(V)) + 1 - g) as a polynomial in k."""
    return _combine(_dk_terms(inv, m))


def hilbert_dk(inv: DerivedInvariants, m, k: int) -> BigRational:
    """d_k evaluated directly from the binomial formula at integer k."""
    n = inv.r_V
    return binomial(n - 1 + k, k) * (k * (Q(m) - inv.mu_V) + 1 - inv.genus)


def _wk_terms(inv: DerivedInvariants, m, rho: WeightVector) -> list:
    if len(rho) != inv.ell + 1:
        raise ValueError("weight vector length must equal the number of summands")
    sp = sym_power_chern_poly(inv.r_V)
    kc1 = _shifted(inv.r_V)[2]
    s_r = sum(l * r for l, r in zip(rho.lambdas, inv.ranks))
    s_d = sum((l * d for l, d in zip(rho.lambdas, inv.degrees)), Q(0))
    # the c1 term carries the factor (1 - g) + k m
    return [
        (-s_d, sp.ch2[0]),
        (-2 * s_r * inv.d_V, sp.ch2[1]),
        (Q(m) * s_r, kc1),
        (Q((1 - inv.genus) * s_r), sp.c1),
    ]


def weight_wk_poly(inv: DerivedInvariants, m, rho: WeightVector) -> Poly:
    """w_k(rho) = -C(n+k,k-1) S_d - C(n-1+k,k-2) S_r d_V + C(n-1+k,k-1) S_r ((1-g) + km)."""
    return _combine(_wk_terms(inv, m, rho))


def weight_wk(inv: DerivedInvariants, m, rho: WeightVector, k: int) -> BigRational:
    n = inv.r_V
    s_r = sum(l * r for l, r in zip(rho.lambdas, inv.ranks))
    s_d = sum((l * d for l, d in zip(rho.lambdas, inv.degrees)), Q(0))
    return (
        -binomial(n + k, k - 1) * s_d
        - binomial(n - 1 + k, k - 2) * s_r * inv.d_V
        + binomial(n - 1 + k, k - 1) * s_r * ((1 - inv.genus) + k * Q(m))
    )


def _pair_terms(inv: DerivedInvariants, m, rho: WeightVector, rho2: WeightVector) -> list:
    lam, lam2 = rho.lambdas, rho2.lambdas
    r, d = inv.ranks, inv.degrees
    sums = (
        sum(l * x for l, x in zip(lam, r)),
        sum(l * x for l, x in zip(lam2, r)),
        sum((l * x for l, x in zip(lam, d)), Q(0)),
        sum((l * x for l, x in zip(lam2, d)), Q(0)),
        sum(a * b * x for a, b, x in zip(lam, lam2, r)),
        sum((a * b * x for a, b, x in zip(lam, lam2, d)), Q(0)),
    )
    return _pair_terms_from_sums(inv, m, *sums)


def _basis_pair_terms(inv: DerivedInvariants, m, i: int, j: int) -> list:
    # rho_i, rho_j are coordinate vectors, so the weighted sums are single entries
    r, d = inv.ranks, inv.degrees
    same = i == j
    return _pair_terms_from_sums(inv, m, r[i], r[j], d[i], d[j], r[i] if same else 0, d[i] if same else Q(0))


def _pair_terms_from_sums(inv: DerivedInvariants, m, s_r, s_r2, s_d, s_d2, s_rr, s_dd) -> list:
    sp = sym_power_chern_poly(inv.r_V)
    dV = inv.d_V
    k20, k21, _, _ = _shifted(inv.r_V)
    m, h = Q(m), Q(1 - inv.genus)
    return [
        # curvature part
        (-6 * s_r * s_r2 * dV, sp.ch3[0]),
        (-(s_d * s_r2 + s_d2 * s_r + s_rr * dV), sp.ch3[1]),
        (-s_dd, sp.ch3[2]),
        # (1/2) deg c1(C) = 1 - g pairs with mk in the Todd factor
        (m * s_rr, k20),
        (h * s_rr, sp.ch2[0]),
        (2 * m * s_r * s_r2, k21),
        (2 * h * s_r * s_r2, sp.ch2[1]),
    ]


def weight_pair_poly(inv: DerivedInvariants, m, rho: WeightVector, rho2: WeightVector) -> Poly:
    """tr(A_k B_k) up to O(k^(n+1)): the degree-3 part of the doubly equivariant character."""
    return _combine(_pair_terms(inv, m, rho, rho2))


def tilde_coefficients(inv: DerivedInvariants, m) -> TildeCoefficients:
    """Top coefficients of d_k, w_k(rho_i), w_k(rho_i, rho_j) in k (index 0 of the per-summand lists is rho_0)."""
    n, size = inv.r_V, inv.ell + 1
    dk = _dk_terms(inv, m)
    basis = [WeightVector.basis(i, size) for i in range(size)]
    ws = [_wk_terms(inv, m, b) for b in basis]
    t_a2 = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            v = _coeff(_basis_pair_terms(inv, m, i, j), n + 2)
            t_a2[i][j] = t_a2[j][i] = v
    return TildeCoefficients(
        t_alpha0=_coeff(dk, n),
        t_beta0=_coeff(dk, n - 1),
        t_alpha=tuple(_coeff(w, n + 1) for w in ws),
        t_beta=tuple(_coeff(w, n) for w in ws),
        t_alpha2=tuple(tuple(row) for row in t_a2),
    )


def weight_pairwise(inv: DerivedInvariants, m, i: int, j: int) -> BigRational:
    return weight_pair_poly(inv, m, WeightVector.basis(i, inv.ell + 1), WeightVector.basis(j, inv.ell + 1))[inv.r_V + 2]


@dataclass(frozen=True)
class AlgebraicFutaki:
    value: BigRational            # algebraic relative invariant of rho_1
    a_tilde: tuple                # extremal coefficients for rho_2..rho_l
    differential: BigRational     # the moment-route invariant at c = m
    tilde_match: bool             # tilde coefficients reproduce the moment table
    a_tilde_quarter: bool         # a_tilde = a / 4 against the extremal solve
    ratio: BigRational | None     # differential / algebraic (= 2 pi_R alpha_0)
    normalized_ratio: BigRational | None  # ratio / (pi_R alpha_0)

    @property
    def sign_match(self) -> bool:
        return Sign.of(self.value) == Sign.of(self.differential)

    @property
    def match(self) -> bool:
        return self.tilde_match and self.a_tilde_quarter and self.sign_match and (
            self.normalized_ratio is None or self.normalized_ratio == NORMALIZED_RATIO
        )

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "ratio": None if self.normalized_ratio is None else str(self.normalized_ratio),
            "raw_ratio": None if self.ratio is None else str(self.ratio),
            "algebraic_value": str(self.value),
        }


NORMALIZED_RATIO = Q(2)


def algebraic_relative_futaki(inv: DerivedInvariants, m, table: MomentTable | None = None) -> AlgebraicFutaki:
    """Relative invariant of rho_1 from the tilde coefficients alone.

    The extremal coefficients solve <rho_ex, rho_i> = F(rho_i) (i = 2..l) with
    <rho_i, rho_j> = t_alpha_ij - t_alpha_i t_alpha_j / t_alpha0 and
    F(rho) = t_beta_rho - t_alpha_rho t_beta0 / t_alpha0.
    """
    m = Q(m)
    t = tilde_coefficients(inv, m)
    ell = inv.ell
    ta0, tb0 = t.t_alpha0, t.t_beta0

    def inner(i, j):
        return t.t_alpha2[i][j] - t.t_alpha[i] * t.t_alpha[j] / ta0

    def classical(i):
        return t.t_beta[i] - t.t_alpha[i] * tb0 / ta0

    idx = list(range(2, ell + 1))
    a_tilde = solve([[inner(i, j) for j in idx] for i in idx], [classical(i) for i in idx]) if idx else []
    value = classical(1) - sum((a * inner(j, 1) for a, j in zip(a_tilde, idx)), Q(0))

    if table is None:
        table = moment_table_closed(inv, m)
    diff = futaki_value(table)
    sol = solve_extremal(table)
    quarter = all(a == sol.coeff(j) / 4 for a, j in zip(a_tilde, idx))
    ratio = norm = None
    if value != 0:
        ratio = diff / value
        norm = ratio / (inv.pi_R * table.alpha0)
    return AlgebraicFutaki(
        value=value,
        a_tilde=tuple(a_tilde),
        differential=diff,
        tilde_match=t.matches(table, inv.pi_R),
        a_tilde_quarter=quarter,
        ratio=ratio,
        normalized_ratio=norm,
    )


def chern_identity_case(r: int) -> bool:
    """At k = 1 the symmetric power is E itself."""
    s = sym_power_chern(r, 1)
    return s.rank == r and s.c1 == 1 and s.ch2 == (1, 0) and s.ch3 == (0, 0, 1)


def extract_top(poly: Poly, degree: int) -> Sequence[BigRational]:
    """(coefficient of k^degree, coefficient of k^(degree-1))."""
    return poly[degree], poly[degree - 1]
