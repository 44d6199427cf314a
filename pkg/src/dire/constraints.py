"""Candidate groups, voter populations, and the constraint side of an instance.

Diversity bounds require at least ``l`` committee members from a candidate
group; representation bounds require at least ``l`` members from a voter
population's winning committee.  Bounds live in [1, min(k, |G|)] and [1, k]
respectively; zero bounds (no-op constraints) are rejected unless the
instance is built with ``allow_zero_bounds`` for theory experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from dire.profiles import Committee, PreferenceProfile
from dire.rules import DEFAULT_ORACLE_CAP, Rule, kborda, population_winning_committee


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Attribute:
    """One attribute: a named partition of entities into labeled groups."""

    name: str
    groups: tuple[tuple[str, tuple[int, ...]], ...]  # (label, sorted member ids)

    def __init__(self, name: str, groups: Mapping[str, Iterable[int]]):
        object.__setattr__(self, "name", name)
        object.__setattr__(
            self,
            "groups",
            tuple((label, tuple(sorted(members))) for label, members in groups.items()),
        )

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.groups)

    def members(self, label: str) -> tuple[int, ...]:
        for lab, mem in self.groups:
            if lab == label:
                return mem
        raise KeyError(f"attribute {self.name!r} has no group {label!r}")

    def validate_partition(self, count: int, entity: str) -> None:
        seen: set[int] = set()
        for label, members in self.groups:
            if not members:
                raise InstanceError(f"{entity} attribute {self.name!r}: group {label!r} is empty")
            for e in members:
                if not 0 <= e < count:
                    raise InstanceError(
                        f"{entity} attribute {self.name!r}: group {label!r} has out-of-range id {e}"
                    )
                if e in seen:
                    raise InstanceError(
                        f"{entity} attribute {self.name!r}: id {e} appears in two groups"
                    )
                seen.add(e)
        if len(seen) != count:
            missing = min(set(range(count)) - seen)
            raise InstanceError(
                f"{entity} attribute {self.name!r} does not cover id {missing}"
            )


@dataclass(frozen=True)
class AttributeScheme:
    """Per-attribute partitions of candidates into groups and voters into populations."""

    candidate_attributes: tuple[Attribute, ...] = ()
    voter_attributes: tuple[Attribute, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "candidate_attributes", tuple(self.candidate_attributes))
        object.__setattr__(self, "voter_attributes", tuple(self.voter_attributes))

    @property
    def mu(self) -> int:
        return len(self.candidate_attributes)

    @property
    def pi(self) -> int:
        return len(self.voter_attributes)

    def validate(self, m: int, n: int) -> None:
        for kind, attrs, count, entity in (
            ("candidate", self.candidate_attributes, m, "candidate"),
            ("voter", self.voter_attributes, n, "voter"),
        ):
            names = [a.name for a in attrs]
            if len(set(names)) != len(names):
                raise InstanceError(f"duplicate {kind} attribute names in {names}")
            for attr in attrs:
                attr.validate_partition(count, entity)


@dataclass(frozen=True)
class UnaryConstraint:
    """One lower-bound constraint with a stable key for reporting.

    Keys look like ``D:<attr>:<group>`` for diversity and ``R:<attr>:<pop>``
    for representation.  ``domain`` is the candidate set the bound counts
    against (the group itself, or the population's winning committee).
    """

    key: str
    domain: frozenset[int]
    bound: int


@dataclass(frozen=True)
class DiReInstance:
    """A committee-selection instance with diversity/representation bounds.

    ``diversity_bounds`` maps (attribute name, group label) to the bound;
    ``representation_bounds`` likewise for populations.
    ``winning_committees`` maps (attribute name, population label) to that
    population's size-k winning committee, either supplied explicitly (as
    reduction-generated instances do) or computed under ``rule`` at build
    time by :func:`make_instance`.
    """

    profile: PreferenceProfile
    scheme: AttributeScheme
    k: int
    rule: Rule = field(default_factory=kborda)
    diversity_bounds: Mapping[tuple[str, str], int] = field(default_factory=dict)
    representation_bounds: Mapping[tuple[str, str], int] = field(default_factory=dict)
    winning_committees: Mapping[tuple[str, str], tuple[int, ...]] = field(default_factory=dict)
    allow_zero_bounds: bool = False

    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def mu(self) -> int:
        return self.scheme.mu

    @property
    def pi(self) -> int:
        return self.scheme.pi

    def validate(self) -> None:
        if not 1 <= self.k <= self.m:
            raise InstanceError(f"committee size {self.k} out of range [1, {self.m}]")
        self.scheme.validate(self.m, self.n)
        lowest = 0 if self.allow_zero_bounds else 1
        for attr in self.scheme.candidate_attributes:
            for label, members in attr.groups:
                bound = self.diversity_bounds.get((attr.name, label))
                if bound is None:
                    raise InstanceError(f"missing diversity bound for {attr.name}:{label}")
                top = min(self.k, len(members))
                if not lowest <= bound <= top:
                    raise InstanceError(
                        f"diversity bound {bound} for {attr.name}:{label} outside [{lowest}, {top}]"
                    )
        for attr in self.scheme.voter_attributes:
            for label, _ in attr.groups:
                bound = self.representation_bounds.get((attr.name, label))
                if bound is None:
                    raise InstanceError(f"missing representation bound for {attr.name}:{label}")
                if not lowest <= bound <= self.k:
                    raise InstanceError(
                        f"representation bound {bound} for {attr.name}:{label} outside [{lowest}, {self.k}]"
                    )
                wc = self.winning_committees.get((attr.name, label))
                if wc is None:
                    raise InstanceError(f"missing winning committee for population {attr.name}:{label}")
                if len(set(wc)) != self.k:
                    raise InstanceError(
                        f"winning committee for {attr.name}:{label} has size {len(set(wc))}, expected k={self.k}"
                    )
                if any(not 0 <= c < self.m for c in wc):
                    raise InstanceError(f"winning committee for {attr.name}:{label} has bad candidate ids")

    def constraints(self) -> list[UnaryConstraint]:
        """All active (bound >= 1) unary constraints, diversity first."""
        out = []
        for attr in self.scheme.candidate_attributes:
            for label, members in attr.groups:
                bound = self.diversity_bounds[(attr.name, label)]
                if bound >= 1:
                    out.append(UnaryConstraint(f"D:{attr.name}:{label}", frozenset(members), bound))
        for attr in self.scheme.voter_attributes:
            for label, _ in attr.groups:
                bound = self.representation_bounds[(attr.name, label)]
                if bound >= 1:
                    out.append(
                        UnaryConstraint(
                            f"R:{attr.name}:{label}",
                            frozenset(self.winning_committees[(attr.name, label)]),
                            bound,
                        )
                    )
        return out


def make_instance(
    profile: PreferenceProfile,
    scheme: AttributeScheme,
    k: int,
    rule: Rule | None = None,
    diversity_bounds: Mapping[tuple[str, str], int] | None = None,
    representation_bounds: Mapping[tuple[str, str], int] | None = None,
    winning_committees: Mapping[tuple[str, str], Sequence[int]] | None = None,
    allow_zero_bounds: bool = False,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> DiReInstance:
    """Build and validate an instance, computing missing winning committees.

    Winning committees not supplied explicitly are materialized here under
    the instance rule, so constraint checking never recomputes them.
    """
    rule = rule or kborda()
    supplied = {key: tuple(val) for key, val in (winning_committees or {}).items()}
    computed: dict[tuple[str, str], tuple[int, ...]] = {}
    for attr in scheme.voter_attributes:
        for label, voters in attr.groups:
            key = (attr.name, label)
            if key in supplied:
                computed[key] = supplied[key]
            else:
                wc = population_winning_committee(profile, voters, rule, k, oracle_cap)
                computed[key] = wc.members
    instance = DiReInstance(
        profile=profile,
        scheme=scheme,
        k=k,
        rule=rule,
        diversity_bounds=dict(diversity_bounds or {}),
        representation_bounds=dict(representation_bounds or {}),
        winning_committees=computed,
        allow_zero_bounds=allow_zero_bounds,
    )
    instance.validate()
    return instance


@dataclass(frozen=True)
class SatisfactionResult:
    ok: bool
    violations: tuple[tuple[str, int], ...]  # (constraint key, shortfall)

    def __bool__(self) -> bool:
        return self.ok


def satisfies(instance: DiReInstance, committee: Iterable[int]) -> SatisfactionResult:
    """Check every diversity and representation bound against a committee.

    Returns the verdict together with each unmet constraint's key and its
    shortfall (bound minus achieved intersection).
    """
    members = set(committee)
    if len(members) != instance.k:
        raise InstanceError(f"committee size {len(members)} != k={instance.k}")
    violations = []
    for constraint in instance.constraints():
        have = len(members & constraint.domain)
        if have < constraint.bound:
            violations.append((constraint.key, constraint.bound - have))
    return SatisfactionResult(not violations, tuple(violations))


def unsatisfied_fraction(instance: DiReInstance, committee: Iterable[int]) -> Fraction:
    """Fraction of active constraints a committee violates (0 if there are none)."""
    constraints = instance.constraints()
    if not constraints:
        return Fraction(0)
    result = satisfies(instance, committee)
    return Fraction(len(result.violations), len(constraints))


def apportionment_bounds(instance: DiReInstance, attribute: str) -> dict[str, int]:
    """Lower-quota representation bounds for one voter attribute.

    Each population gets floor(|P| / n * k).  Populations too small for a
    single seat violate the model's precondition and raise.
    """
    for attr in instance.scheme.voter_attributes:
        if attr.name == attribute:
            bounds = {}
            for label, voters in attr.groups:
                quota = (len(voters) * instance.k) // instance.n
                if quota == 0:
                    raise InstanceError(
                        f"quota-zero: population {attribute}:{label} has |P|/n < 1/k "
                        f"({len(voters)}/{instance.n} with k={instance.k})"
                    )
                bounds[label] = quota
            return bounds
    raise KeyError(f"no voter attribute named {attribute!r}")


@dataclass(frozen=True)
class AttributeCondition:
    attribute: str
    bound_sum: int
    overpacked: bool  # True when the attribute alone proves infeasibility


@dataclass(frozen=True)
class NecessaryConditionReport:
    """Advisory packing check: within one candidate attribute the groups are
    disjoint, so their bounds must sum to at most k for any committee to
    exist.  Does not decide feasibility on its own."""

    per_attribute: tuple[AttributeCondition, ...]
    total_bound_sum: int
    mu_times_k: int

    @property
    def any_overpacked(self) -> bool:
        return any(cond.overpacked for cond in self.per_attribute)


def necessary_condition_report(instance: DiReInstance) -> NecessaryConditionReport:
    conditions = []
    for attr in instance.scheme.candidate_attributes:
        total = sum(instance.diversity_bounds[(attr.name, label)] for label, _ in attr.groups)
        conditions.append(AttributeCondition(attr.name, total, total > instance.k))
    grand_total = sum(c.bound for c in instance.constraints())
    return NecessaryConditionReport(
        per_attribute=tuple(conditions),
        total_bound_sum=grand_total,
        mu_times_k=instance.mu * instance.k,
    )


def example_committee_key(committee: Iterable[int]) -> tuple[int, ...]:
    """Canonical (sorted) form used for lexicographic committee tie-breaking."""
    return tuple(sorted(committee))


def as_committee(instance: DiReInstance, members: Iterable[int]) -> Committee:
    committee = Committee(members)
    if committee.k != instance.k:
        raise InstanceError(f"committee size {committee.k} != k={instance.k}")
    return committee
