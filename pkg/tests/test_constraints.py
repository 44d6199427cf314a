import itertools
import random
from fractions import Fraction

import pytest

from dire.constraints import (
    Attribute,
    AttributeScheme,
    InstanceError,
    apportionment_bounds,
    make_instance,
    necessary_condition_report,
    satisfies,
    unsatisfied_fraction,
)
from dire.profiles import make_profile
from conftest import random_instance


def test_example1_satisfies_cases(example1):
    assert satisfies(example1, (1, 2)).ok
    bad_gender = satisfies(example1, (0, 1))
    assert not bad_gender.ok
    assert bad_gender.violations == (("D:gender:female", 1),)
    bad_state = satisfies(example1, (0, 2))
    assert not bad_state.ok
    assert bad_state.violations == (("R:state:IL", 1),)


def test_satisfies_rejects_wrong_size(example1):
    with pytest.raises(InstanceError):
        satisfies(example1, (0, 1, 2))


def test_unsatisfied_fraction_examples(example1):
    assert unsatisfied_fraction(example1, (1, 2)) == 0
    assert unsatisfied_fraction(example1, (0, 1)) == Fraction(1, 4)


def test_unsatisfied_fraction_vacuous():
    profile = make_profile(3, [[0, 1, 2]])
    instance = make_instance(profile, AttributeScheme(), k=2)
    assert unsatisfied_fraction(instance, (0, 1)) == 0


def test_satisfies_iff_fraction_zero():
    for seed in range(15):
        instance = random_instance(seed)
        for combo in itertools.islice(itertools.combinations(range(instance.m), instance.k), 40):
            ok = satisfies(instance, combo).ok
            assert ok == (unsatisfied_fraction(instance, combo) == 0)


def _apportionment_instance(sizes, k):
    n = sum(sizes)
    profile = make_profile(12, [list(range(12))] * n)
    voters = iter(range(n))
    populations = {f"p{i}": [next(voters) for _ in range(size)] for i, size in enumerate(sizes)}
    scheme = AttributeScheme(voter_attributes=(Attribute("region", populations),))
    bounds = {("region", label): 1 for label in populations}
    return make_instance(profile, scheme, k=k, representation_bounds=bounds)


def test_apportionment_formula():
    instance = _apportionment_instance([60, 40], k=5)
    assert apportionment_bounds(instance, "region") == {"p0": 3, "p1": 2}


def test_apportionment_single_population_gets_k():
    instance = _apportionment_instance([10], k=3)
    assert apportionment_bounds(instance, "region") == {"p0": 3}


def test_apportionment_even_split():
    instance = _apportionment_instance([50, 50], k=2)
    assert apportionment_bounds(instance, "region") == {"p0": 1, "p1": 1}


def test_apportionment_quota_zero_rejected():
    instance = _apportionment_instance([99, 1], k=2)
    with pytest.raises(InstanceError, match="quota-zero"):
        apportionment_bounds(instance, "region")


def test_apportionment_bounds_within_model_range():
    rng = random.Random(2)
    for _ in range(20):
        parts = [rng.randint(5, 40) for _ in range(rng.randint(1, 4))]
        n = sum(parts)
        k = rng.randint(max(1, (n // min(parts)) + 1), 12)  # ensure |P|/n >= 1/k
        if any(size * k < n for size in parts):
            continue
        instance = _apportionment_instance(parts, k=k)
        bounds = apportionment_bounds(instance, "region")
        assert all(1 <= b <= k for b in bounds.values())
        assert sum(bounds.values()) <= k


def _packed_instance(bounds, k):
    profile = make_profile(4, [[0, 1, 2, 3], [3, 2, 1, 0]])
    scheme = AttributeScheme(
        candidate_attributes=(Attribute("A", {"g1": [0, 1], "g2": [2, 3]}),)
    )
    return make_instance(
        profile,
        scheme,
        k=k,
        diversity_bounds={("A", "g1"): bounds[0], ("A", "g2"): bounds[1]},
    )


def test_necessary_condition_flags_overpacked():
    report = necessary_condition_report(_packed_instance((2, 1), k=2))
    assert report.any_overpacked
    assert report.per_attribute[0].bound_sum == 3


def test_necessary_condition_passes_when_packable():
    report = necessary_condition_report(_packed_instance((1, 1), k=2))
    assert not report.any_overpacked


def test_necessary_condition_example1(example1):
    report = necessary_condition_report(example1)
    assert not report.any_overpacked
    assert report.mu_times_k == 2
    assert report.total_bound_sum == 4  # two diversity + two representation bounds


def test_overpacked_attribute_has_no_feasible_committee():
    instance = _packed_instance((2, 1), k=2)
    for combo in itertools.combinations(range(instance.m), instance.k):
        assert not satisfies(instance, combo).ok


def test_zero_bound_rejected_without_flag():
    profile = make_profile(4, [[0, 1, 2, 3]])
    scheme = AttributeScheme(
        candidate_attributes=(Attribute("A", {"g1": [0, 1], "g2": [2, 3]}),)
    )
    bounds = {("A", "g1"): 0, ("A", "g2"): 1}
    with pytest.raises(InstanceError):
        make_instance(profile, scheme, k=2, diversity_bounds=bounds)
    instance = make_instance(profile, scheme, k=2, diversity_bounds=bounds, allow_zero_bounds=True)
    # the zero-bound group is not an active constraint
    assert [c.key for c in instance.constraints()] == ["D:A:g2"]


def test_bound_above_group_size_rejected():
    profile = make_profile(4, [[0, 1, 2, 3]])
    scheme = AttributeScheme(
        candidate_attributes=(Attribute("A", {"g1": [0], "g2": [1, 2, 3]}),)
    )
    with pytest.raises(InstanceError):
        make_instance(profile, scheme, k=2, diversity_bounds={("A", "g1"): 2, ("A", "g2"): 1})


def test_representation_bound_above_k_rejected():
    profile = make_profile(4, [[0, 1, 2, 3]] * 2)
    scheme = AttributeScheme(voter_attributes=(Attribute("B", {"p1": [0], "p2": [1]}),))
    with pytest.raises(InstanceError):
        make_instance(profile, scheme, k=2,
                      representation_bounds={("B", "p1"): 3, ("B", "p2"): 1})


def test_overlapping_groups_within_attribute_rejected():
    with pytest.raises(InstanceError, match="two groups"):
        Attribute("A", {"g1": [0, 1], "g2": [1, 2]}).validate_partition(3, "candidate")


def test_partition_must_cover_everyone():
    with pytest.raises(InstanceError, match="does not cover"):
        Attribute("A", {"g1": [0]}).validate_partition(2, "candidate")


def test_winning_committee_size_enforced(example1):
    profile = make_profile(4, [[0, 1, 2, 3]] * 2)
    scheme = AttributeScheme(voter_attributes=(Attribute("B", {"p1": [0], "p2": [1]}),))
    with pytest.raises(InstanceError, match="size"):
        make_instance(
            profile,
            scheme,
            k=2,
            representation_bounds={("B", "p1"): 1, ("B", "p2"): 1},
            winning_committees={("B", "p1"): (0,), ("B", "p2"): (0, 1)},
        )


def test_winning_committees_materialized(example1):
    assert example1.winning_committees == {
        ("state", "CA"): (0, 1),
        ("state", "IL"): (1, 3),
    }


def test_supplied_winning_committee_kept():
    profile = make_profile(4, [[0, 1, 2, 3]] * 2)
    scheme = AttributeScheme(voter_attributes=(Attribute("B", {"p1": [0], "p2": [1]}),))
    instance = make_instance(
        profile,
        scheme,
        k=2,
        representation_bounds={("B", "p1"): 1, ("B", "p2"): 1},
        winning_committees={("B", "p1"): (2, 3)},  # pinned, p2 computed
    )
    assert instance.winning_committees[("B", "p1")] == (2, 3)
    assert instance.winning_committees[("B", "p2")] == (0, 1)


def test_constraint_keys_are_stable(example1):
    assert [c.key for c in example1.constraints()] == [
        "D:gender:male",
        "D:gender:female",
        "R:state:CA",
        "R:state:IL",
    ]
