"""Identity suites over enumerated corpora of central fibres.

Each suite walks a corpus of (ranks, degrees, genus) instances, checks one
family of exact identities, and stops at the first counterexample.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import moments
from .asymptotics import (
    fut_expansion,
    positivity_certificate,
    sigma_exact,
    stripped_futaki,
    u2_closed,
    uv_recursion,
    v1_closed,
)
from .bundle import CentralFiber, DerivedInvariants, derive_invariants, normalize_slope_zero
from .equirr import algebraic_relative_futaki
from .exactnum import Q, laurent_expand, qstr
from .relative import Sign, futaki_ell2_factorized, futaki_value

C_OFFSETS = (Q(1, 7), Q(1), Q(7, 2))


def compositions(total: int, max_parts: int | None = None, min_parts: int = 2) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``total`` into positive parts."""
    top = total if max_parts is None else min(total, max_parts)
    for parts in range(min_parts, top + 1):
        for cuts in itertools.combinations(range(1, total), parts - 1):
            bounds = (0, *cuts, total)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def rank_vectors(max_rank: int, max_parts: int | None = None) -> list[tuple[int, ...]]:
    out = []
    for total in range(2, max_rank + 1):
        out.extend(compositions(total, max_parts))
    return out


@dataclass(frozen=True)
class Corpus:
    max_rank: int = 5
    max_parts: int | None = None
    max_degree: int = 2
    genera: tuple[int, ...] = (1, 2)

    def __iter__(self) -> Iterator[DerivedInvariants]:
        # integer degrees need no validation, so build the invariants directly
        span = [Q(d) for d in range(-self.max_degree, self.max_degree + 1)]
        for ranks in rank_vectors(self.max_rank, self.max_parts):
            for degrees in itertools.product(span, repeat=len(ranks)):
                for g in self.genera:
                    yield DerivedInvariants(g, ranks, degrees)

    def size(self) -> int:
        n = 0
        for ranks in rank_vectors(self.max_rank, self.max_parts):
            n += (2 * self.max_degree + 1) ** len(ranks)
        return n * len(self.genera)


def normalized(corpus: Iterable[DerivedInvariants]) -> Iterator[DerivedInvariants]:
    """Distinct slope-zero twists of the corpus instances."""
    seen = set()
    for inv in corpus:
        cf = CentralFiber.from_pairs(inv.genus, list(zip(inv.ranks, inv.degrees)))
        cf_n, _ = normalize_slope_zero(cf, 0)
        key = (inv.genus, inv.ranks, tuple(x.degree for x in cf_n.summands))
        if key in seen:
            continue
        seen.add(key)
        yield derive_invariants(cf_n)


def sample_c(inv: DerivedInvariants) -> list:
    return [inv.max_slope + off for off in C_OFFSETS]


def describe(inv: DerivedInvariants) -> str:
    return f"ranks={list(inv.ranks)} degrees={[qstr(d) for d in inv.degrees]} genus={inv.genus}"


class Counterexample(AssertionError):
    pass


def _require(cond: bool, what: str, inv: DerivedInvariants) -> None:
    if not cond:
        raise Counterexample(f"{what} fails for {describe(inv)}")


# -- per-instance checks -------------------------------------------------------------

def check_moments(inv: DerivedInvariants) -> None:
    direct = moments.moment_table_direct(inv)
    closed = moments.moment_table_closed(inv)
    _require(moments.tables_equal(direct, closed), "direct vs closed moment table", inv)
    _require(
        moments.boundary_integrals(inv) == moments.boundary_integrals_direct(inv),
        "facet integrals closed vs direct",
        inv,
    )


def check_gamma(inv: DerivedInvariants) -> None:
    try:
        moments.gamma_terms(moments.moment_table_closed(inv), inv)
    except moments.InternalMismatch as exc:
        raise Counterexample(str(exc)) from exc


def check_betakalpha0(inv: DerivedInvariants) -> None:
    try:
        moments.beta_alpha_cross(moments.moment_table_closed(inv), inv)
    except moments.InternalMismatch as exc:
        raise Counterexample(str(exc)) from exc


def check_resleq2(inv: DerivedInvariants) -> None:
    if inv.ell != 2:
        return
    fac = futaki_ell2_factorized(inv)
    _require(fac.lhs == fac.gamma0 * fac.slope_gap, "three-summand factorization", inv)
    if inv.genus >= 1:
        F = futaki_value(moments.moment_table_closed(inv))
        for c in sample_c(inv):
            num = F.num(c) * F.den(c)
            _require(Sign.of(num) == Sign.of(fac.slope_gap), f"sign at c={qstr(c)}", inv)


def check_recursion(inv: DerivedInvariants, order: int = 8) -> None:
    if inv.ell < 2:
        return
    sp = sigma_exact(inv, order)
    u, v = uv_recursion(inv, order)
    for i in range(order + 1):
        _require(u.coeff(i) == sp.u.coeff(i), f"u_{i} recursion vs expansion", inv)
        _require(v.coeff(i) == sp.v.coeff(i), f"v_{i} recursion vs expansion", inv)
    _require(u.coeff(1) == 4 * inv.r_V**2 * inv.mu01, "u_1 closed form", inv)
    _require(v.coeff(1) == v1_closed(inv), "v_1 closed form", inv)
    _require(u.coeff(2) == u2_closed(inv), "u_2 closed form", inv)


def check_expansion(inv: DerivedInvariants, order: int = 5) -> None:
    if inv.mu[0] == inv.mu[1]:
        return
    exp = fut_expansion(inv, order)
    _require(exp.fut1 > 0, "Fut1 > 0", inv)
    ref = laurent_expand(stripped_futaki(inv), order)
    ser = exp.series()
    for i in range(-1, order + 1):
        _require(ser.coeff(i) == ref.coeff(i), f"expansion coefficient of c^{-i}", inv)


def check_rr(inv: DerivedInvariants) -> None:
    for m in sample_c(inv)[:2]:
        res = algebraic_relative_futaki(inv, m)
        _require(res.match, f"algebraic cross-check at m={qstr(m)}", inv)


def check_positivity(inv: DerivedInvariants) -> None:
    if inv.ell < 2 or inv.genus < 1:
        return
    for c in sample_c(inv):
        pc = positivity_certificate(inv, c)
        _require(pc.positive, f"positivity certificate at c={qstr(c)}", inv)


@dataclass(frozen=True)
class Suite:
    name: str
    check: Callable[[DerivedInvariants], None]
    normalize: bool = False


SUITES = {
    s.name: s
    for s in (
        Suite("moments", check_moments),
        Suite("gamma", check_gamma),
        Suite("betakalpha0", check_betakalpha0),
        Suite("resleq2", check_resleq2),
        Suite("recursion", check_recursion, normalize=True),
        Suite("expansion", check_expansion, normalize=True),
        Suite("rr", check_rr),
        Suite("positivity", check_positivity, normalize=True),
    )
}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    seconds: float
    counterexample: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{self.name}: {status} ({self.checked} instances, {self.seconds:.1f}s)"
        if self.counterexample:
            out += f"\n  counterexample: {self.counterexample}"
        return out


def run_suite(name: str, corpus: Iterable[DerivedInvariants]) -> SuiteResult:
    suite = SUITES[name]
    items = normalized(corpus) if suite.normalize else corpus
    start = time.perf_counter()
    n = 0
    for inv in items:
        n += 1
        try:
            suite.check(inv)
        except Counterexample as exc:
            return SuiteResult(name, False, n, time.perf_counter() - start, str(exc))
        except ArithmeticError as exc:
            return SuiteResult(name, False, n, time.perf_counter() - start, f"{describe(inv)}: {exc!r}")
    return SuiteResult(name, True, n, time.perf_counter() - start)


def run_all(corpus: Corpus, names: Iterable[str] | None = None) -> list[SuiteResult]:
    names = list(SUITES) if names is None else list(names)
    return [run_suite(n, corpus) for n in names]
