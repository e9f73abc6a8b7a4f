"""Input data model: a split bundle over a curve, a candidate sub-bundle, and
the graded central fibre obtained by degenerating the tested summand.

Degrees are kept as exact rationals throughout, so the slope-zero shift
(which produces fractional degrees) can feed every downstream formula.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exactnum import BigRational, Poly, Q, factorial, parse_rational, qstr


class BundleError(ValueError):
    """Base class for malformed bundle data."""


class InvalidDestabilizer(BundleError):
    pass


class InadmissiblePolarization(BundleError):
    def __init__(self, m, max_slope, index):
        self.m, self.max_slope, self.index = m, max_slope, index
        super().__init__(
            f"polarization m = {qstr(m)} is not admissible: need m > {qstr(max_slope)} "
            f"(slope of summand V_{index})"
        )


class MalformedInput(BundleError):
    pass


@dataclass(frozen=True)
class SummandSpec:
    rank: int
    degree: BigRational

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise BundleError(f"rank must be a positive integer, got {self.rank!r}")
        object.__setattr__(self, "degree", Q(self.degree))

    @property
    def slope(self) -> BigRational:
        return self.degree / self.rank


@dataclass(frozen=True)
class BundleSpec:
    genus: int
    summands: tuple[SummandSpec, ...]

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise BundleError(f"genus must be a non-negative integer, got {self.genus!r}")
        object.__setattr__(self, "summands", tuple(self.summands))
        if not self.summands:
            raise BundleError("bundle needs at least one summand")

    @property
    def rank(self) -> int:
        return sum(s.rank for s in self.summands)

    @property
    def degree(self) -> BigRational:
        return sum((s.degree for s in self.summands), Q(0))


@dataclass(frozen=True)
class DestabilizerSpec:
    target_index: int
    sub_rank: int
    sub_degree: BigRational

    def __post_init__(self):
        object.__setattr__(self, "sub_degree", Q(self.sub_degree))


@dataclass(frozen=True)
class CentralFiber:
    """Graded object V_0 + ... + V_l with V_0 = U_0/L and V_1 = L."""

    genus: int
    summands: tuple[SummandSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if not self.summands:
            raise BundleError("central fibre needs at least one summand")

    @classmethod
    def from_pairs(cls, genus: int, pairs: Sequence[tuple]) -> "CentralFiber":
        return cls(genus, tuple(SummandSpec(int(r), d) for r, d in pairs))

    @property
    def ell(self) -> int:
        return len(self.summands) - 1

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(s.rank for s in self.summands)

    @property
    def degrees(self) -> tuple[BigRational, ...]:
        return tuple(s.degree for s in self.summands)

    def pairs(self) -> list[tuple[int, BigRational]]:
        return [(s.rank, s.degree) for s in self.summands]


@dataclass(frozen=True)
class Polarization:
    m: BigRational


def build_central_fiber(spec: BundleSpec, dest: DestabilizerSpec) -> CentralFiber:
    """Split the tested summand U into (U/L, L); other summands keep input order."""
    n = len(spec.summands)
    if not isinstance(dest.target_index, int) or not 0 <= dest.target_index < n:
        raise InvalidDestabilizer(f"target index {dest.target_index} out of range 0..{n - 1}")
    u0 = spec.summands[dest.target_index]
    if not isinstance(dest.sub_rank, int) or not 1 <= dest.sub_rank < u0.rank:
        raise InvalidDestabilizer(
            f"sub-bundle rank must satisfy 1 <= r_L < {u0.rank}, got {dest.sub_rank}"
        )
    quotient = SummandSpec(u0.rank - dest.sub_rank, u0.degree - dest.sub_degree)
    sub = SummandSpec(dest.sub_rank, dest.sub_degree)
    rest = [s for i, s in enumerate(spec.summands) if i != dest.target_index]
    return CentralFiber(spec.genus, (quotient, sub, *rest))


@dataclass(frozen=True)
class DerivedInvariants:
    """Combinatorial data of a central fibre used by every closed form."""

    genus: int
    ranks: tuple[int, ...]
    degrees: tuple[BigRational, ...]

    @classmethod
    def of(cls, cf: CentralFiber) -> "DerivedInvariants":
        return cls(cf.genus, cf.ranks, cf.degrees)

    @property
    def ell(self) -> int:
        return len(self.ranks) - 1

    @cached_property
    def r_V(self) -> int:
        return sum(self.ranks)

    @cached_property
    def d_V(self) -> BigRational:
        return sum(self.degrees, Q(0))

    @cached_property
    def mu(self) -> tuple[BigRational, ...]:
        return tuple(d / r for r, d in zip(self.ranks, self.degrees))

    @cached_property
    def mu_V(self) -> BigRational:
        return self.d_V / self.r_V

    @cached_property
    def pi_R(self) -> int:
        out = 1
        for r in self.ranks:
            out *= factorial(r - 1)
        return out

    @cached_property
    def kappa(self) -> int:
        return sum(1 for r in self.ranks if r == 1)

    @cached_property
    def kappa_k(self) -> tuple[int, ...]:
        return tuple(self.kappa - (1 if r == 1 else 0) for r in self.ranks)

    @cached_property
    def kappa_pair(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.ranks)
        rows = []
        for a in range(n):
            row = []
            for b in range(n):
                excluded = {a, b}
                row.append(self.kappa - sum(1 for j in excluded if self.ranks[j] == 1))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def mu01(self) -> BigRational:
        if self.ell < 1:
            raise ValueError("mu01 needs at least two summands")
        return (self.degrees[0] + self.degrees[1]) / (self.ranks[0] + self.ranks[1])

    @cached_property
    def delta_c(self) -> Poly:
        return Poly((-self.d_V, self.r_V))

    @cached_property
    def dV_plus(self) -> BigRational:
        return sum((d for d in self.degrees if d >= 0), Q(0))

    @property
    def max_slope(self) -> BigRational:
        return max(self.mu)


def derive_invariants(cf: CentralFiber) -> DerivedInvariants:
    return DerivedInvariants.of(cf)


def normalize_slope_zero(cf: CentralFiber, c) -> tuple[CentralFiber, BigRational]:
    """Twist by the rational line bundle of degree -mu(V): d_i -> d_i - r_i mu(V), c -> c - mu(V)."""
    inv = DerivedInvariants.of(cf)
    s = inv.mu_V
    shifted = CentralFiber(cf.genus, tuple(SummandSpec(x.rank, x.degree - x.rank * s) for x in cf.summands))
    return shifted, Q(c) - s


def validate_polarization(cf: CentralFiber, m) -> Polarization:
    """Accept m iff it is strictly larger than every slope of the central fibre."""
    m = Q(m)
    for i, s in enumerate(cf.summands):
        if not m > s.slope:
            worst = max(range(len(cf.summands)), key=lambda j: cf.summands[j].slope)
            raise InadmissiblePolarization(m, cf.summands[worst].slope, worst)
    return Polarization(m)


def is_admissible(inv: DerivedInvariants, c) -> bool:
    return Q(c) > inv.max_slope


# -- JSON input ----------------------------------------------------------------

@dataclass
class CheckInput:
    bundle: BundleSpec
    destabilizer: DestabilizerSpec
    polarization: BigRational | None = None
    extra: dict = field(default_factory=dict)


def _int_field(obj: dict, key: str) -> int:
    if key not in obj:
        raise MalformedInput(f"missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedInput(f"field {key!r} must be an integer, got {v!r}")
    return v


def parse_input(data: dict) -> CheckInput:
    """Validate and convert the JSON input object."""
    if not isinstance(data, dict):
        raise MalformedInput("top-level JSON value must be an object")
    try:
        genus = _int_field(data, "genus")
        raw = data.get("summands")
        if not isinstance(raw, list) or not raw:
            raise MalformedInput("'summands' must be a nonempty list")
        summands = []
        for s in raw:
            if not isinstance(s, dict):
                raise MalformedInput("each summand must be an object with 'rank' and 'degree'")
            summands.append(SummandSpec(_int_field(s, "rank"), _int_field(s, "degree")))
        d = data.get("destabilizer")
        if not isinstance(d, dict):
            raise MalformedInput("missing 'destabilizer' object")
        dest = DestabilizerSpec(_int_field(d, "target"), _int_field(d, "rank"), _int_field(d, "degree"))
        pol = data.get("polarization")
        m = None
        if pol is not None:
            if not isinstance(pol, (str, int)) or isinstance(pol, bool):
                raise MalformedInput("'polarization' must be a 'p/q' string")
            m = parse_rational(str(pol))
        bundle = BundleSpec(genus, tuple(summands))
    except MalformedInput:
        raise
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    return CheckInput(bundle, dest, m)


def load_input(path: str) -> CheckInput:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    return parse_input(data)
