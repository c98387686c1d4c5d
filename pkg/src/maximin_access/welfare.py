"""phi-mean welfare, access gaps, and the rich-get-richer / k-imbalance checkers.

Exact comparisons between welfare values use ``TIE_TOL``: the exact oracle sums
weights in enumeration order, so isomorphic nodes can differ in the last bits.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from .graph import Graph

TIE_TOL = 1e-12
MAX_CANDIDATE_SETS = 250_000

Oracle = Callable[[Sequence[int]], np.ndarray]


class WelfareError(ValueError):
    pass


class InfeasibleSearch(WelfareError):
    """Brute-force search would be too large."""


@dataclass(frozen=True)
class WelfareSpec:
    phi: float

    @classmethod
    def parse(cls, text: str) -> "WelfareSpec":
        t = text.strip().lower()
        if t == "-inf":
            return cls(-math.inf)
        if t in ("+inf", "inf"):
            return cls(math.inf)
        try:
            return cls(float(t))
        except ValueError:
            raise WelfareError(f"not a welfare spec: {text!r}") from None

    def __str__(self) -> str:
        if math.isinf(self.phi):
            return "-inf" if self.phi < 0 else "+inf"
        return format(self.phi, "g")


MIN = WelfareSpec(-math.inf)
REACH = WelfareSpec(1.0)


def phi_mean(values, phi: float) -> float:
    """Generalized mean of probabilities.

    phi=1 is the arithmetic mean, 0 geometric, -inf min, +inf max. For phi <= 0
    any zero entry gives 0 (the continuous limit). Other phi are evaluated in
    log space. Inputs are sorted first so the result is exactly permutation
    invariant.
    """
    x = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if x.size == 0:
        raise WelfareError("welfare of an empty set is undefined")
    if phi == -math.inf:
        return float(x[0])
    if phi == math.inf:
        return float(x[-1])
    if phi == 1.0:
        return math.fsum(x) / x.size
    if x[0] <= 0.0 and phi <= 0:
        return 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(x)
    if phi == 0.0:
        mu = math.exp(math.fsum(logs) / x.size)
    elif abs(phi) * np.abs(logs).max() < 1.0:
        # near phi=0 the logsumexp form cancels catastrophically
        mu = math.exp(math.log1p(math.fsum(np.expm1(phi * logs)) / x.size) / phi)
    else:
        # a zero entry with tiny phi > 0 sends the exponent to -inf, i.e. mu = 0
        with np.errstate(over="ignore"):
            mu = math.exp((logsumexp(phi * logs) - math.log(x.size)) / phi)
    return float(min(max(mu, x[0]), x[-1]))


def welfare(probs: np.ndarray, subset: Iterable[int] | None, spec: WelfareSpec) -> float:
    """mu_phi of ``probs`` restricted to ``subset`` (all nodes when None)."""
    probs = np.asarray(probs, dtype=np.float64)
    if subset is None:
        return phi_mean(probs, spec.phi)
    idx = np.fromiter(subset, dtype=np.int64)
    if idx.size == 0:
        raise WelfareError("welfare of an empty subset is undefined")
    return phi_mean(probs[idx], spec.phi)


@dataclass(frozen=True)
class Bipartition:
    part_v: frozenset
    part_v_prime: frozenset

    @classmethod
    def of(cls, part_v: Iterable[int], part_v_prime: Iterable[int]) -> "Bipartition":
        return cls(frozenset(int(x) for x in part_v), frozenset(int(x) for x in part_v_prime))

    @classmethod
    def complement(cls, part_v: Iterable[int], n: int) -> "Bipartition":
        v = frozenset(int(x) for x in part_v)
        return cls(v, frozenset(range(n)) - v)

    def validate(self, n: int) -> None:
        if not self.part_v or not self.part_v_prime:
            raise WelfareError("bipartition sides must be nonempty")
        if self.part_v & self.part_v_prime:
            raise WelfareError("bipartition sides overlap")
        if (self.part_v | self.part_v_prime) != frozenset(range(n)):
            raise WelfareError("bipartition does not cover every node")

    def swapped(self) -> "Bipartition":
        return Bipartition(self.part_v_prime, self.part_v)

    @property
    def v(self) -> list[int]:
        return sorted(self.part_v)

    @property
    def v_prime(self) -> list[int]:
        return sorted(self.part_v_prime)


def access_gap(probs: np.ndarray, bp: Bipartition, spec: WelfareSpec) -> float:
    """mu(V) - mu(V')."""
    bp.validate(len(probs))
    return welfare(probs, bp.v, spec) - welfare(probs, bp.v_prime, spec)


def all_bipartitions(n: int):
    """Every ordered non-trivial (V, V'), V enumerated by bitmask."""
    for mask in range(1, (1 << n) - 1):
        v = [i for i in range(n) if mask >> i & 1]
        yield Bipartition.complement(v, n)


def _addition_sets(pool: Sequence[int], k: int):
    for size in range(k + 1):
        yield from itertools.combinations(pool, size)


def _count_sets(pool_size: int, k: int) -> int:
    return sum(math.comb(pool_size, s) for s in range(min(k, pool_size) + 1))


def brute_force_optimal_seeds(g: Graph, initial: Iterable[int], k: int, spec: WelfareSpec,
                              oracle: Oracle, target_subset: Iterable[int] | None = None,
                              max_sets: int = MAX_CANDIDATE_SETS) -> tuple[int, ...]:
    """Seed set maximizing welfare of ``target_subset`` over all additions of <= k nodes.

    Welfare values within ``TIE_TOL`` count as tied; ties go to the
    lexicographically smallest addition tuple.
    """
    init = sorted({int(x) for x in initial})
    pool = [v for v in range(g.n) if v not in set(init)]
    if _count_sets(len(pool), k) > max_sets:
        raise InfeasibleSearch(f"{_count_sets(len(pool), k)} candidate seed sets exceed cap {max_sets}")
    target = None if target_subset is None else sorted(int(x) for x in target_subset)
    best_val, best_add = -math.inf, ()
    for add in _addition_sets(pool, k):
        val = welfare(oracle(init + list(add)), target, spec)
        if val > best_val + TIE_TOL or (abs(val - best_val) <= TIE_TOL and add < best_add):
            best_val, best_add = max(val, best_val), add
    return tuple(sorted(init + list(best_add)))


@dataclass(frozen=True)
class RichGetRicherWitness:
    bipartition: Bipartition
    optimal_seeds: tuple[int, ...]
    gap_before: float
    gap_after: float


def rich_get_richer_witness(g: Graph, initial: Iterable[int], k: int, spec: WelfareSpec,
                            oracle: Oracle, max_nodes: int = 12,
                            bipartition: Bipartition | None = None) -> RichGetRicherWitness | None:
    """Bipartition where the optimal intervention widens a positive gap, if one exists.

    Gaps are oriented mu(V') - mu(V) with V the worse-off side. Among all
    witnesses the one that widens the gap most is returned; passing
    ``bipartition`` checks that one alone.
    """
    if bipartition is None and g.n > max_nodes:
        raise InfeasibleSearch(f"rich-get-richer search is capped at {max_nodes} nodes")
    init = sorted({int(x) for x in initial})
    s_star = brute_force_optimal_seeds(g, init, k, spec, oracle)
    before, after = oracle(init), oracle(list(s_star))
    best = None
    for bp in ([bipartition] if bipartition is not None else all_bipartitions(g.n)):
        gap0 = -access_gap(before, bp, spec)
        gap1 = -access_gap(after, bp, spec)
        if gap0 > TIE_TOL and gap1 > gap0 + TIE_TOL:
            widening = gap1 - gap0
            if best is None or widening > best[0] + TIE_TOL:
                best = (widening, RichGetRicherWitness(bp, s_star, gap0, gap1))
    return None if best is None else best[1]


@dataclass(frozen=True)
class ImbalanceCheck:
    """The four k-imbalance conditions with the welfare values behind them."""

    holds: bool
    conditions: tuple[bool, bool, bool, bool]
    mu_s_v: float
    mu_sv_v: float
    mu_s_vprime: float
    mu_star_vprime: float
    mu_star_v: float
    optimal_seeds: tuple[int, ...]
    seeds_for_v: tuple[int, ...]


def k_imbalance_witness_check(g: Graph, initial: Iterable[int], bp: Bipartition, k: int,
                              spec: WelfareSpec, oracle: Oracle, max_nodes: int = 14,
                              s_star: tuple[int, ...] | None = None) -> ImbalanceCheck:
    """Test mu(S*,V) <= mu(S,V) < mu(S_V,V) <= mu(S,V') < mu(S*,V')."""
    if g.n > max_nodes:
        raise InfeasibleSearch(f"k-imbalance check is capped at {max_nodes} nodes")
    bp.validate(g.n)
    init = sorted({int(x) for x in initial})
    if s_star is None:
        s_star = brute_force_optimal_seeds(g, init, k, spec, oracle)
    s_v = brute_force_optimal_seeds(g, init, k, spec, oracle, target_subset=bp.v)
    p_s, p_star, p_sv = oracle(init), oracle(list(s_star)), oracle(list(s_v))
    mu_s_v = welfare(p_s, bp.v, spec)
    mu_s_vp = welfare(p_s, bp.v_prime, spec)
    mu_sv_v = welfare(p_sv, bp.v, spec)
    mu_star_v = welfare(p_star, bp.v, spec)
    mu_star_vp = welfare(p_star, bp.v_prime, spec)
    conds = (
        mu_s_v < mu_sv_v - TIE_TOL,
        mu_sv_v <= mu_s_vp + TIE_TOL,
        mu_star_vp > mu_s_vp + TIE_TOL,
        mu_star_v <= mu_s_v + TIE_TOL,
    )
    return ImbalanceCheck(all(conds), conds, mu_s_v, mu_sv_v, mu_s_vp, mu_star_vp, mu_star_v,
                          tuple(s_star), tuple(s_v))


def find_imbalance_witness(g: Graph, initial: Iterable[int], k: int, spec: WelfareSpec,
                           oracle: Oracle) -> tuple[Bipartition, ImbalanceCheck] | None:
    """First bipartition (in bitmask order) satisfying all four k-imbalance conditions."""
    init = sorted({int(x) for x in initial})
    s_star = brute_force_optimal_seeds(g, init, k, spec, oracle)
    for bp in all_bipartitions(g.n):
        check = k_imbalance_witness_check(g, init, bp, k, spec, oracle, s_star=s_star)
        if check.holds:
            return bp, check
    return None
