"""Relative Donaldson-Futaki invariant of the graded central fibre.

The value computed here is

    F = (a0 b1 - a1 b0) - sum_{j,r>=2} (A^-1)_{rj} (a0 b_r - a_r b0)(a_j1 - a1 a_j / a0)

with A_ij = a_ij - a_i a_j / a0 (a = alpha, b = beta).  It is evaluated through
the polynomial Gram matrix G = a0 * A, and cross-checked against an
independent solve of the extremal system for (a_0, a_2, ..., a_l).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .bundle import DerivedInvariants
from .exactnum import BigRational, Poly, Q, RatFunc, factorial
from .linsolve import SingularSystem, leading_minors, solve
from .moments import MomentTable


class WrongArity(ValueError):
    """The requested closed form only exists for a different number of summands."""


class IdentityMismatch(AssertionError):
    pass


class Sign(str, Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    NEGATIVE = "Negative"

    @classmethod
    def of(cls, x) -> "Sign":
        if x > 0:
            return cls.POSITIVE
        if x < 0:
            return cls.NEGATIVE
        return cls.ZERO


class Verdict(str, Enum):
    NOT_DESTABILIZED = "NotDestabilized"
    DESTABILIZED = "Destabilized"
    BORDERLINE = "Borderline"

    @classmethod
    def from_sign(cls, s: Sign) -> "Verdict":
        return {
            Sign.POSITIVE: cls.NOT_DESTABILIZED,
            Sign.NEGATIVE: cls.DESTABILIZED,
            Sign.ZERO: cls.BORDERLINE,
        }[s]


@dataclass(frozen=True)
class ExtremalSolution:
    a0: object
    a: tuple  # a_2, ..., a_l

    def coeff(self, j: int):
        return self.a[j - 2]


@dataclass(frozen=True)
class Certificate:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class FutakiReport:
    value: object
    extremal: ExtremalSolution
    sign: Sign | None
    verdict: Verdict | None
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates)


def _lift(x, symbolic: bool):
    return RatFunc.coerce(x) if symbolic else x


def sign_at(value, c) -> Sign:
    """Sign of a scalar, Poly or RatFunc value at rational c (exact evaluation)."""
    if isinstance(value, RatFunc):
        num = value.num(Q(c))
        den = value.den(Q(c))
        if den == 0:
            raise ZeroDivisionError("sign requested at a pole")
        return Sign.of(num * den)
    if isinstance(value, Poly):
        return Sign.of(value(Q(c)))
    return Sign.of(value)


# -- linear algebra pieces ----------------------------------------------------------

def gram_matrix(table: MomentTable) -> list[list]:
    """G_ij = a0 a_ij - a_i a_j for 2 <= i, j <= l (that is, alpha_0 times A)."""
    ell = table.ell
    a0 = table.alpha0
    return [
        [a0 * table.a2(i, j) - table.a(i) * table.a(j) for j in range(2, ell + 1)]
        for i in range(2, ell + 1)
    ]


def a_matrix(table: MomentTable) -> list[list]:
    """A_ij = a_ij - a_i a_j / a0 for 2 <= i, j <= l."""
    symbolic = table.symbolic
    a0 = _lift(table.alpha0, symbolic)
    return [[_lift(g, symbolic) / a0 for g in row] for row in gram_matrix(table)]


def posdef_certificate(table: MomentTable) -> Certificate:
    """Leading principal minors of A are positive (numeric tables only)."""
    if table.symbolic:
        raise ValueError("positivity is checked at a rational c; evaluate the table first")
    if table.ell < 2:
        return Certificate("A positive definite", True, "empty matrix")
    A = a_matrix(table)
    minors = leading_minors(A)
    ok = all(m > 0 for m in minors)
    sym = all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(len(A)))
    return Certificate(
        "A positive definite",
        ok and sym,
        "leading minors " + ", ".join(str(m) for m in minors),
    )


def solve_extremal(table: MomentTable) -> ExtremalSolution:
    """Solve the extremal system for (a_0, a_2, ..., a_l).

        a_0 alpha_0 + sum_j a_j alpha_j  = 2 beta_0
        a_0 alpha_k + sum_j a_j alpha_jk = 2 beta_k   (k = 2..l)
    """
    ell = table.ell
    if ell < 1:
        raise WrongArity("the extremal system needs at least two summands")
    rows = [[table.alpha0] + [table.a(j) for j in range(2, ell + 1)]]
    rhs = [2 * table.beta0]
    for k in range(2, ell + 1):
        rows.append([table.a(k)] + [table.a2(j, k) for j in range(2, ell + 1)])
        rhs.append(2 * table.b(k))
    x = solve(rows, rhs)
    return ExtremalSolution(x[0], tuple(x[1:]))


def extremal_residual(table: MomentTable, sol: ExtremalSolution) -> list:
    ell = table.ell
    symbolic = table.symbolic

    def L(v):
        return _lift(v, symbolic)

    res = [L(table.alpha0) * sol.a0 + sum((L(table.a(j)) * sol.coeff(j) for j in range(2, ell + 1)), Q(0)) - L(2 * table.beta0)]
    for k in range(2, ell + 1):
        res.append(
            L(table.a(k)) * sol.a0
            + sum((L(table.a2(j, k)) * sol.coeff(j) for j in range(2, ell + 1)), Q(0))
            - L(2 * table.b(k))
        )
    return res


def classical_term(table: MomentTable):
    """alpha_0 beta_1 - alpha_1 beta_0."""
    return table.alpha0 * table.b(1) - table.a(1) * table.beta0


def futaki_value(table: MomentTable):
    """The relative invariant via the Gram-matrix route."""
    ell = table.ell
    if ell < 1:
        raise WrongArity("the invariant needs at least two summands in the central fibre")
    symbolic = table.symbolic
    f1 = classical_term(table)
    if ell == 1:
        return _lift(f1, symbolic)
    a0, b0 = table.alpha0, table.beta0
    G = gram_matrix(table)
    rhs = [a0 * table.b(r) - table.a(r) * b0 for r in range(2, ell + 1)]
    h = [a0 * table.a2(j, 1) - table.a(1) * table.a(j) for j in range(2, ell + 1)]
    y = solve(G, rhs)
    out = _lift(f1, symbolic)
    for yj, hj in zip(y, h):
        out = out - yj * _lift(hj, symbolic)
    return out


def futaki_from_extremal(table: MomentTable, sol: ExtremalSolution):
    """F = (a0 b1 - a1 b0) - 1/2 sum_j a_j (a0 a_j1 - a1 a_j)."""
    symbolic = table.symbolic
    out = _lift(classical_term(table), symbolic)
    for j in range(2, table.ell + 1):
        hj = table.alpha0 * table.a2(j, 1) - table.a(1) * table.a(j)
        out = out - sol.coeff(j) * _lift(hj, symbolic) * Q(1, 2)
    return out


def relative_futaki(table: MomentTable, inv: DerivedInvariants | None = None, at=None) -> FutakiReport:
    """Relative invariant with sign, verdict and certificates.

    For a symbolic table pass ``at`` (a rational c) to obtain a sign; the
    positivity certificates are always checked at a rational point.
    """
    value = futaki_value(table)
    sol = solve_extremal(table)
    certs = []
    other = futaki_from_extremal(table, sol)
    certs.append(Certificate("route agreement", other == value, "Gram solve vs extremal system"))
    resid = extremal_residual(table, sol)
    certs.append(Certificate("extremal residual zero", all(r == 0 for r in resid)))
    point = None
    if table.symbolic:
        if at is not None:
            point = table.evaluate(at)
    else:
        point = table
    sign = verdict = None
    if point is not None:
        certs.append(posdef_certificate(point))
        dens = [point.alpha0]
        if point.ell >= 2:
            dens.append(leading_minors(gram_matrix(point))[-1])
        certs.append(
            Certificate(
                "denominators positive",
                all(d > 0 for d in dens),
                "alpha0 and det(alpha0*A)",
            )
        )
        sign = sign_at(value, at) if table.symbolic else Sign.of(value)
        verdict = Verdict.from_sign(sign)
    return FutakiReport(value, sol, sign, verdict, certs)


# -- closed forms ---------------------------------------------------------------------

def futaki_ell1_closed(inv: DerivedInvariants, c=None):
    """Two summands: 2 pi_R^2 r_V r_L / (r_V!(r_V+1)!) (mu(E) - mu(L)) (r_V c - d_V + g - 1)."""
    if inv.ell != 1:
        raise WrongArity(f"closed form needs exactly two summands, got {inv.ell + 1}")
    rV, dV, pi = inv.r_V, inv.d_V, inv.pi_R
    rL, muL = inv.ranks[1], inv.mu[1]
    k = Q(2 * pi * pi * rV * rL, factorial(rV) * factorial(rV + 1)) * (inv.mu_V - muL)
    lin = Poly.from_trusted((k * (inv.genus - 1 - dV), k * rV))
    return lin if c is None else lin(Q(c))


def gamma1_closed(inv: DerivedInvariants) -> BigRational:
    """Constant of the three-summand factorization (as derived)."""
    rV, pi = inv.r_V, inv.pi_R
    r0, r1, r2 = inv.ranks
    return Q(2 * pi**4 * r0 * r1 * r2, factorial(rV + 2) * factorial(rV + 1) * factorial(rV) ** 2)


def gamma1_printed(inv: DerivedInvariants) -> BigRational:
    """The constant as usually printed, with an extra prod (r_i - 1)!^4 factor."""
    r0, r1, r2 = inv.ranks
    extra = (factorial(r0 - 1) * factorial(r1 - 1) * factorial(r2 - 1)) ** 4
    return gamma1_closed(inv) * extra


@dataclass(frozen=True)
class Ell2Factorization:
    gamma0: Poly
    slope_gap: BigRational
    gamma1: BigRational
    gamma1_printed: BigRational
    printed_matches: bool
    lhs: Poly  # (a0 a22 - a2^2) F, a polynomial in c


def futaki_ell2_factorized(inv: DerivedInvariants, table: MomentTable | None = None) -> Ell2Factorization:
    """Verify (a0 a22 - a2^2) F = Gamma_0 (mu_0 - mu_1) as an identity in c.

    Gamma_0 = D (D + g - 1)(D + 2(c - mu_2)) Gamma_1 with D = r_V c - d_V.  The
    constant Gamma_1 is obtained by exact division and compared with its
    closed form.
    """
    if inv.ell != 2:
        raise WrongArity(f"factorization needs exactly three summands, got {inv.ell + 1}")
    from .moments import moment_table_closed

    if table is None:
        table = moment_table_closed(inv)
    if not table.symbolic:
        raise ValueError("a symbolic table is required")
    F = futaki_value(table)
    g22 = table.alpha0 * table.a2(2, 2) - table.a(2) ** 2
    prod = RatFunc.coerce(g22) * F
    if not prod.is_poly():
        raise IdentityMismatch("(a0 a22 - a2^2) F is not a polynomial in c")
    lhs = prod.num
    D = inv.delta_c
    shape = D * (D + (inv.genus - 1)) * (D + Poly((-2 * inv.mu[2], 2)))
    gap = inv.mu[0] - inv.mu[1]
    expected = gamma1_closed(inv)
    if gap != 0:
        q, rem = lhs.divmod(shape * gap)
        if not rem.is_zero() or q.degree > 0:
            raise IdentityMismatch(f"quotient is not a constant: {q} remainder {rem}")
        gamma1 = q[0]
        if gamma1 != expected:
            raise IdentityMismatch(f"derived constant {gamma1} differs from closed form {expected}")
    else:
        if not lhs.is_zero():
            raise IdentityMismatch("equal slopes but nonzero product")
        gamma1 = expected
    printed = gamma1_printed(inv)
    return Ell2Factorization(shape * gamma1, gap, gamma1, printed, printed == gamma1, lhs)


@dataclass(frozen=True)
class ClassicalFutaki:
    value: object
    factorization_holds: bool  # value = K (mu(V) - mu_1)(D + g - 1)
    printed_form_holds: bool | None  # three summands: value = K' (D + g - 1)(mu_2 - mu_1)


def classical_futaki(table: MomentTable, inv: DerivedInvariants, c=None) -> ClassicalFutaki:
    """alpha_0 beta_1 - alpha_1 beta_0 with its slope factorization.

    For a numeric table, ``c`` must be the point it was computed at.
    """
    value = classical_term(table)
    rV, pi = inv.r_V, inv.pi_R
    K = Q(2 * pi * pi * inv.ranks[1] * rV, factorial(rV) * factorial(rV + 1))
    tail = inv.delta_c + (inv.genus - 1)
    expected = tail * (K * (inv.mu_V - inv.mu[1]))
    printed = None
    if inv.ell == 2:
        r0, r1, r2 = inv.ranks
        Kp = Q(
            2 * pi**4 * r1 * r2 * (factorial(r1 - 1) * factorial(r2 - 1) * factorial(r0 - 1)) ** 2,
            factorial(rV + 1) * factorial(rV),
        )
        printed_val = tail * (Kp * (inv.mu[2] - inv.mu[1]))
    if table.symbolic:
        holds = value == expected
        if inv.ell == 2:
            printed = value == printed_val
    else:
        if c is None:
            raise ValueError("numeric table needs its c value")
        holds = value == expected(Q(c))
        if inv.ell == 2:
            printed = value == printed_val(Q(c))
    return ClassicalFutaki(value, holds, printed)
