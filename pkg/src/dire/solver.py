"""Two-stage feasibility solver over the four-level constraint graph.

Stage one (preprocessing) checks every pair of unary constraints with a
necessary packing condition and prunes candidate domains that provably
cannot appear in a feasible committee.  Stage two is depth-first
backtracking that repeatedly picks the tightest unsatisfied constraint
(fewest remaining values per missing seat) and tries its candidates in
order of how many constraints they touch.  Restarting with a rotated root
ordering harvests multiple feasible committees; a separate exhaustive mode
enumerates the complete feasible set for oracle-scale instances.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from dire.constraints import DiReInstance, satisfies
from dire.rules import borda_vector, candidate_score


class SolverTimeout(Exception):
    pass


class SolverError(ValueError):
    pass


@dataclass
class DiReGraph:
    """Constraint graph for one instance.

    Level A is the committee size ``k``; level B the candidates 0..m-1;
    level C one node per unary constraint with a candidate domain and a
    lower bound.  An edge (candidate, constraint) exists iff the candidate
    is in the constraint's domain.  Domains shrink during preprocessing;
    in-flow counters live inside each search run, so a preprocessed graph
    can back concurrent searches.
    """

    k: int
    m: int
    keys: list[str]
    domains: list[frozenset[int]]
    bounds: list[int]
    priority: tuple[int, ...]
    scores: tuple[int, ...]  # Borda candidate scores, used for solution padding

    def out_degree(self, candidate: int) -> int:
        return sum(1 for domain in self.domains if candidate in domain)

    def priority_rank(self, candidate: int) -> int:
        return self._priority_rank[candidate]

    def __post_init__(self):
        rank = [0] * self.m
        for idx, cand in enumerate(self.priority):
            rank[cand] = idx
        self._priority_rank = rank


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for one solver run.

    ``timeout`` is wall-clock seconds (the experiments' default budget).
    ``domain_reduce_combo_cap`` bounds the subset pairs examined per
    (candidate, constraint-pair) during domain reduction; over the cap the
    reduction for that candidate is skipped, which is sound because
    reduction only accelerates the search.  ``seed`` switches heuristic
    tie-breaking from deterministic order to seeded randomization.
    """

    timeout: float = 2000.0
    max_committees: int = 100_000
    domain_reduce_combo_cap: int = 100_000
    seed: int | None = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise SolverError("timeout must be positive")
        if self.max_committees < 1 or self.domain_reduce_combo_cap < 1:
            raise SolverError("caps must be >= 1")


def build_diregraph(instance: DiReInstance) -> DiReGraph:
    """One level-C node per group (domain = members, bound = diversity bound)
    and per population (domain = winning committee, bound = representation
    bound)."""
    constraints = instance.constraints()
    if instance.rule.separable:
        vector = instance.rule.vector(instance.m)
    else:
        vector = borda_vector(instance.m)
    scores = tuple(candidate_score(instance.profile, vector, c) for c in range(instance.m))
    return DiReGraph(
        k=instance.k,
        m=instance.m,
        keys=[c.key for c in constraints],
        domains=[frozenset(c.domain) for c in constraints],
        bounds=[c.bound for c in constraints],
        priority=instance.profile.priority,
        scores=scores,
    )


Node = tuple[str, int]  # ("B", candidate id) or ("C", constraint index)


def components(graph: DiReGraph) -> list[frozenset[Node]]:
    """Connected components of the undirected bipartite subgraph on levels B and C."""
    adjacency: dict[Node, set[Node]] = {("B", c): set() for c in range(graph.m)}
    for idx, domain in enumerate(graph.domains):
        node = ("C", idx)
        adjacency[node] = set()
        for cand in domain:
            adjacency[node].add(("B", cand))
            adjacency[("B", cand)].add(node)
    seen: set[Node] = set()
    result = []
    for start in adjacency:
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            node = stack.pop()
            if node in comp:
                continue
            comp.add(node)
            stack.extend(adjacency[node] - comp)
        seen |= comp
        result.append(frozenset(comp))
    return result


def pairwise_feasible(graph: DiReGraph, i: int, j: int) -> bool:
    """Necessary condition for constraints i and j to be jointly satisfiable.

    Any k-committee with >= S_i members in D_i and >= S_j in D_j must put at
    least S_i + S_j - k members in the overlap, so a smaller overlap proves
    joint infeasibility.  Passing is not sufficient for feasibility.
    """
    if i == j:
        raise SolverError("pairwise check needs two distinct constraints")
    overlap = len(graph.domains[i] & graph.domains[j])
    return overlap >= graph.bounds[i] + graph.bounds[j] - graph.k


def domain_reduce(
    graph: DiReGraph, i: int, j: int, config: SolverConfig
) -> tuple[bool, list[tuple[str, int]]]:
    """Drop candidates of D_i that cannot co-exist with constraint j.

    A candidate d survives iff some S_i-sized subset of D_i containing d and
    some S_j-sized subset of D_j jointly fit in k seats.  Candidates whose
    combination count exceeds the config cap are skipped (recorded, not
    reduced).  Returns (domain changed, skip events).
    """
    d_i, d_j = graph.domains[i], graph.domains[j]
    s_i, s_j = graph.bounds[i], graph.bounds[j]
    skips: list[tuple[str, int]] = []
    if s_i > len(d_i) or s_j > len(d_j):
        # The domain cannot meet its own bound; empty it to signal infeasibility.
        graph.domains[i] = frozenset()
        return True, skips

    survivors = set()
    members_i = sorted(d_i)
    subsets_j = None
    for d in members_i:
        combos = comb(len(d_i) - 1, s_i - 1) * comb(len(d_j), s_j)
        if combos > config.domain_reduce_combo_cap:
            skips.append((graph.keys[i], d))
            survivors.add(d)
            continue
        if subsets_j is None:
            subsets_j = [frozenset(b) for b in itertools.combinations(sorted(d_j), s_j)]
        rest = [c for c in members_i if c != d]
        found = False
        for a_rest in itertools.combinations(rest, s_i - 1):
            a = frozenset(a_rest) | {d}
            for b in subsets_j:
                if len(a | b) <= graph.k:
                    found = True
                    break
            if found:
                break
        if found:
            survivors.add(d)
    changed = len(survivors) != len(d_i)
    if changed:
        graph.domains[i] = frozenset(survivors)
    return changed, skips


@dataclass
class PreprocessResult:
    feasible: bool  # False means provable infeasibility
    reason: str | None = None
    pruned_pairs: list[tuple[str, str]] = field(default_factory=list)
    emptied_domains: list[str] = field(default_factory=list)
    reductions: list[tuple[str, int]] = field(default_factory=list)  # (key, removed count)
    skips: list[tuple[str, int]] = field(default_factory=list)


def preprocess(graph: DiReGraph, config: SolverConfig | None = None,
               deadline: float | None = None) -> PreprocessResult:
    """Run inter-component pairwise checks, then the intra-component
    reduction queue, mutating the graph's domains in place."""
    config = config or SolverConfig()
    result = PreprocessResult(feasible=True)
    n_constraints = len(graph.domains)
    if n_constraints == 0:
        return result

    comp_of = {}
    for comp_idx, comp in enumerate(components(graph)):
        for kind, ident in comp:
            if kind == "C":
                comp_of[ident] = comp_idx

    for i, j in itertools.combinations(range(n_constraints), 2):
        if comp_of[i] != comp_of[j] and not pairwise_feasible(graph, i, j):
            result.feasible = False
            result.reason = f"pairwise infeasible: {graph.keys[i]} vs {graph.keys[j]}"
            result.pruned_pairs.append((graph.keys[i], graph.keys[j]))
            return result

    by_component: dict[int, list[int]] = {}
    for idx in range(n_constraints):
        by_component.setdefault(comp_of[idx], []).append(idx)

    for members in by_component.values():
        if len(members) < 2:
            continue
        queue = list(itertools.permutations(members, 2))
        queued = set(queue)
        while queue:
            if deadline is not None and time.monotonic() > deadline:
                raise SolverTimeout("preprocessing timed out")
            i, j = queue.pop(0)
            queued.discard((i, j))
            if not pairwise_feasible(graph, i, j):
                result.feasible = False
                result.reason = f"pairwise infeasible: {graph.keys[i]} vs {graph.keys[j]}"
                result.pruned_pairs.append((graph.keys[i], graph.keys[j]))
                return result
            before = len(graph.domains[i])
            changed, skips = domain_reduce(graph, i, j, config)
            result.skips.extend(skips)
            if changed:
                result.reductions.append((graph.keys[i], before - len(graph.domains[i])))
                if not graph.domains[i]:
                    result.feasible = False
                    result.reason = f"domain emptied: {graph.keys[i]}"
                    result.emptied_domains.append(graph.keys[i])
                    return result
                for x in members:
                    if x not in (i, j) and (x, i) not in queued:
                        queue.append((x, i))
                        queued.add((x, i))
    return result


def _mfc_order(graph: DiReGraph, rng: random.Random | None) -> list[int]:
    """Candidates by descending constraint out-degree (most-favorite first)."""
    degree = {c: graph.out_degree(c) for c in range(graph.m)}
    order = sorted(range(graph.m), key=lambda c: (-degree[c], graph.priority_rank(c)))
    if rng is not None:
        # shuffle within exact-degree ties only
        shuffled: list[int] = []
        for _, group in itertools.groupby(order, key=lambda c: degree[c]):
            block = list(group)
            rng.shuffle(block)
            shuffled.extend(block)
        order = shuffled
    return order


def _pad_solution(graph: DiReGraph, solution: Iterable[int]) -> tuple[int, ...]:
    """Fill a partial solution up to k with the best-scoring unused candidates."""
    chosen = set(solution)
    if len(chosen) < graph.k:
        spare = sorted(
            (c for c in range(graph.m) if c not in chosen),
            key=lambda c: (-graph.scores[c], graph.priority_rank(c)),
        )
        chosen.update(spare[: graph.k - len(chosen)])
    return tuple(sorted(chosen))


def heuristic_backtrack(
    graph: DiReGraph,
    config: SolverConfig | None = None,
    rotation: int = 0,
    deadline: float | None = None,
) -> tuple[int, ...] | None:
    """Depth-first search for one feasible committee, or None if none exists.

    Variable choice: the constraint minimizing |D_i| / max(S_i - inflow, 1)
    among unsatisfied constraints (ties by constraint order, or seeded
    random).  Value order: candidates by descending out-degree; the root
    ordering is rotated left by ``rotation`` so restarts explore different
    corners.  A partial solution is accepted once every constraint's
    in-flow meets its bound, then padded to exactly k members.

    Infeasibility is returned only after the reduced search space is
    exhausted; hitting the deadline raises :class:`SolverTimeout` instead.
    """
    config = config or SolverConfig()
    if deadline is None:
        deadline = time.monotonic() + config.timeout
    rng = random.Random(config.seed) if config.seed is not None else None
    base_order = _mfc_order(graph, rng)
    rank_of = {c: idx for idx, c in enumerate(base_order)}
    n_constraints = len(graph.domains)
    inflow = [0] * n_constraints
    member_of = [
        [idx for idx in range(n_constraints) if cand in graph.domains[idx]]
        for cand in range(graph.m)
    ]
    solution: list[int] = []
    in_solution = set()

    def select_variable() -> int | None:
        best, best_ratio = None, None
        ties: list[int] = []
        for idx in range(n_constraints):
            missing = graph.bounds[idx] - inflow[idx]
            if missing <= 0:
                continue
            ratio = (len(graph.domains[idx]), max(missing, 1))
            value = ratio[0] / ratio[1]
            if best_ratio is None or value < best_ratio:
                best_ratio, best, ties = value, idx, [idx]
            elif value == best_ratio:
                ties.append(idx)
        if best is None:
            return None
        if rng is not None and len(ties) > 1:
            return rng.choice(ties)
        return best

    def ordered_domain(idx: int, at_root: bool) -> list[int]:
        cands = sorted(graph.domains[idx], key=lambda c: rank_of[c])
        if at_root and rotation:
            r = rotation % len(cands) if cands else 0
            cands = cands[r:] + cands[:r]
        return cands

    def search(at_root: bool) -> list[int] | None:
        if time.monotonic() > deadline:
            raise SolverTimeout("backtracking timed out")
        variable = select_variable()
        if variable is None:
            return list(solution)  # every bound met, |solution| <= k by construction
        for cand in ordered_domain(variable, at_root):
            if cand in in_solution:
                continue
            if len(solution) + 1 > graph.k:
                continue
            solution.append(cand)
            in_solution.add(cand)
            for idx in member_of[cand]:
                inflow[idx] += 1
            found = search(False)
            if found is not None:
                return found
            solution.pop()
            in_solution.discard(cand)
            for idx in member_of[cand]:
                inflow[idx] -= 1
        return None

    found = search(True)
    if found is None:
        return None
    return _pad_solution(graph, found)


def _enumerate_exhaustive(
    graph: DiReGraph, config: SolverConfig, deadline: float
) -> tuple[list[tuple[int, ...]], bool, bool]:
    """Complete include/exclude DFS over candidates; returns every feasible
    k-committee (up to the enumeration cap) plus (truncated, timed_out)
    flags.  On timeout the committees found so far are still returned."""
    order = _mfc_order(graph, None)
    n_constraints = len(graph.domains)
    # suffix_counts[i][pos]: members of D_i at position >= pos in the order
    suffix_counts = []
    for domain in graph.domains:
        counts = [0] * (graph.m + 1)
        for pos in range(graph.m - 1, -1, -1):
            counts[pos] = counts[pos + 1] + (1 if order[pos] in domain else 0)
        suffix_counts.append(counts)

    results: list[tuple[int, ...]] = []
    inflow = [0] * n_constraints
    chosen: list[int] = []
    truncated = False

    def dfs(pos: int) -> None:
        nonlocal truncated
        if truncated:
            return
        if time.monotonic() > deadline:
            raise SolverTimeout("exhaustive enumeration timed out")
        if len(chosen) == graph.k:
            if all(inflow[i] >= graph.bounds[i] for i in range(n_constraints)):
                if len(results) >= config.max_committees:
                    truncated = True
                    return
                results.append(tuple(sorted(chosen)))
            return
        if len(chosen) + (graph.m - pos) < graph.k:
            return
        for i in range(n_constraints):
            if inflow[i] + suffix_counts[i][pos] < graph.bounds[i]:
                return
        cand = order[pos]
        chosen.append(cand)
        touched = [i for i in range(n_constraints) if cand in graph.domains[i]]
        for i in touched:
            inflow[i] += 1
        dfs(pos + 1)
        chosen.pop()
        for i in touched:
            inflow[i] -= 1
        dfs(pos + 1)

    try:
        dfs(0)
    except SolverTimeout:
        return results, truncated, True
    return results, truncated, False


@dataclass(frozen=True)
class EnumerationResult:
    committees: tuple[tuple[int, ...], ...]
    complete: bool  # True when the output provably equals the full feasible set,
    # or when infeasibility was proven by exhausting the search space
    timed_out: bool


def enumerate_feasible(
    graph: DiReGraph,
    config: SolverConfig | None = None,
    exhaustive: bool = False,
    deadline: float | None = None,
) -> EnumerationResult:
    """Collect feasible committees from a preprocessed graph.

    The default mode reruns :func:`heuristic_backtrack` with the root value
    ordering rotated left once per restart, keeping distinct committees (no
    completeness guarantee).  ``exhaustive=True`` switches to a complete
    DFS that provably returns the full feasible set; use it at oracle
    scale.
    """
    config = config or SolverConfig()
    if deadline is None:
        deadline = time.monotonic() + config.timeout
    if exhaustive:
        committees, truncated, timed_out = _enumerate_exhaustive(graph, config, deadline)
        return EnumerationResult(
            tuple(committees), complete=not truncated and not timed_out, timed_out=timed_out
        )

    committees: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    try:
        for rotation in range(max(graph.m, 1)):
            found = heuristic_backtrack(graph, config, rotation=rotation, deadline=deadline)
            if found is None:
                # the backtracking search is complete for the feasibility verdict
                return EnumerationResult(tuple(committees), complete=True, timed_out=False)
            if found not in seen:
                seen.add(found)
                committees.append(found)
                if len(committees) >= config.max_committees:
                    break
    except SolverTimeout:
        return EnumerationResult(tuple(committees), complete=False, timed_out=True)
    return EnumerationResult(tuple(committees), complete=False, timed_out=False)


@dataclass(frozen=True)
class FeasibilityResult:
    committees: tuple[tuple[int, ...], ...]
    proven_infeasible: bool
    timed_out: bool
    complete: bool
    preprocessing: PreprocessResult
    elapsed: float


def solve_feasibility(
    instance: DiReInstance,
    config: SolverConfig | None = None,
    exhaustive: bool = False,
) -> FeasibilityResult:
    """Full pipeline: build the graph, preprocess, enumerate, verify.

    Every returned committee is re-checked against the instance constraints
    before being reported.
    """
    config = config or SolverConfig()
    start = time.monotonic()
    deadline = start + config.timeout
    graph = build_diregraph(instance)
    try:
        prep = preprocess(graph, config, deadline)
    except SolverTimeout:
        return FeasibilityResult((), False, True, False,
                                 PreprocessResult(feasible=True, reason="timeout"),
                                 time.monotonic() - start)
    if not prep.feasible:
        return FeasibilityResult((), True, False, True, prep, time.monotonic() - start)
    enum = enumerate_feasible(graph, config, exhaustive=exhaustive, deadline=deadline)
    for committee in enum.committees:
        check = satisfies(instance, committee)
        if not check.ok:  # pragma: no cover - guards solver soundness
            raise SolverError(f"solver produced an unsatisfying committee {committee}: {check.violations}")
    proven_infeasible = enum.complete and not enum.committees and not enum.timed_out
    return FeasibilityResult(
        committees=enum.committees,
        proven_infeasible=proven_infeasible,
        timed_out=enum.timed_out,
        complete=enum.complete,
        preprocessing=prep,
        elapsed=time.monotonic() - start,
    )
