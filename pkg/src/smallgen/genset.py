"""Construct, minimize, and certify generating sets of F_p* from small integers.

A subset of the cyclic group F_p* generates iff for every prime q | p-1 some
element is a q-th power non-residue (every maximal subgroup is the set of
q-th powers for some q).  Generation therefore reduces to covering the
divisor indices of p-1 with non-residue masks, and minimization is an exact
set-cover problem over the masks realized below a search radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .modcore import FieldSpec, multiplicative_order, residue_signature

# Search radius grows like p**(1/(4*sqrt(e)) + epsilon).
GENERATION_EXPONENT = 1.0 / (4.0 * math.sqrt(math.e))


class InfeasibleCoverError(RuntimeError):
    """Raised when the search radius cap is reached with divisors still uncovered."""

    def __init__(self, p: int, radius: int, uncovered: tuple[int, ...]):
        self.p = p
        self.radius = radius
        self.uncovered = uncovered
        qs = ", ".join(str(q) for q in uncovered)
        super().__init__(
            f"no cover for p={p} within radius {radius}: uncovered divisor(s) q={qs}"
        )


@dataclass(frozen=True)
class SearchPolicy:
    """Radius policy: start at ceil(p**(exponent+epsilon)), double on failure.

    hard_cap=None means p-1, which always suffices since a primitive root
    exists below p.
    """

    epsilon: float = 0.05
    expand_on_failure: bool = True
    hard_cap: int | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.hard_cap is not None and self.hard_cap < 2:
            raise ValueError(f"hard_cap must be >= 2, got {self.hard_cap}")

    def initial_radius(self, p: int) -> int:
        return max(2, math.ceil(p ** (GENERATION_EXPONENT + self.epsilon)))

    def cap(self, p: int) -> int:
        return p - 1 if self.hard_cap is None else self.hard_cap


@dataclass(frozen=True)
class GenSetResult:
    """A generating set with its coverage map and primitive-root certificate.

    coverage maps each divisor index to the element chosen to cover it;
    n_used is the final search radius; asymptotic_violation records whether
    that radius exceeded the initial one; exact is set only when minimal
    cardinality was proven.
    """

    elements: tuple[int, ...]
    method: str
    coverage: dict[int, int]
    n_used: int = 0
    asymptotic_violation: bool = False
    certificate: tuple[int, int] | None = None
    exact: bool = False


def generates(elements, field: FieldSpec) -> bool:
    """True iff the elements' non-residue masks jointly cover every divisor index."""
    full = (1 << field.r) - 1
    union = 0
    for n in elements:
        union |= residue_signature(n, field).nonresidue_mask
        if union == full:
            return True
    return union == full


def _scan_masks(field: FieldSpec, lo: int, hi: int, masks: dict[int, int]) -> None:
    """Record non-residue masks for n in [lo, hi]; n=1 and n=p never contribute."""
    p = field.p
    divs = [(1 << i, (p - 1) // q) for i, (q, _) in enumerate(field.divisors)]
    for n in range(lo, min(hi, p - 1) + 1):
        mask = 0
        for bit, exp in divs:
            if pow(n, exp, p) != 1:
                mask |= bit
        masks[n] = mask


def _resolve_radius(field: FieldSpec, policy: SearchPolicy):
    """Double the radius until every divisor index has a coverer, or the cap bites.

    Returns (radius, initial_radius, masks) where masks holds the signature
    of every candidate n in [2, radius].
    """
    p = field.p
    full = (1 << field.r) - 1
    initial = policy.initial_radius(p)
    cap = policy.cap(p)
    radius = min(initial, cap)
    masks: dict[int, int] = {}
    _scan_masks(field, 2, radius, masks)
    while True:
        union = 0
        for m in masks.values():
            union |= m
        if union == full:
            return radius, initial, masks
        if radius >= cap or not policy.expand_on_failure:
            uncovered = tuple(
                q for i, (q, _) in enumerate(field.divisors) if not union >> i & 1
            )
            raise InfeasibleCoverError(p, radius, uncovered)
        new_radius = min(2 * radius, cap)
        _scan_masks(field, radius + 1, new_radius, masks)
        radius = new_radius


def _certificate(elements, coverage: dict[int, int], field: FieldSpec) -> tuple[int, int]:
    """Certified primitive root: a generating element itself if one exists,
    else the prime-power-order combination of the covering elements."""
    full = (1 << field.r) - 1
    for n in elements:
        if residue_signature(n, field).nonresidue_mask == full:
            return n, field.p - 1
    g = _combine(coverage, field)
    return g, multiplicative_order(g, field)


def _combine(coverage: dict[int, int], field: FieldSpec) -> int:
    p = field.p
    g = 1
    for i, (q, alpha) in enumerate(field.divisors):
        x = coverage[i]
        # x is a q-th non-residue, so this power has order exactly q**alpha.
        g = g * pow(x, (p - 1) // q**alpha, p) % p
    return g


def combine_primitive_root(result: GenSetResult, field: FieldSpec) -> int:
    """Fold one covering element per divisor into a primitive root.

    For each divisor index i the covering element x is raised to
    (p-1)/q_i**alpha_i, giving an element of order q_i**alpha_i; the product
    over i has order p-1.
    """
    if not generates(result.elements, field):
        raise ValueError("combine_primitive_root requires a generating set")
    coverage = dict(result.coverage)
    for i in range(field.r):
        if i not in coverage or not residue_signature(coverage[i], field).covers(i):
            raise ValueError(f"coverage map does not cover divisor index {i}")
    return _combine(coverage, field)


def elementary_generating_set(field: FieldSpec, policy: SearchPolicy = SearchPolicy()) -> GenSetResult:
    """One element per divisor: the smallest q_i-th non-residue for each q_i."""
    radius, initial, masks = _resolve_radius(field, policy)
    coverage: dict[int, int] = {}
    for i in range(field.r):
        bit = 1 << i
        coverage[i] = next(n for n in sorted(masks) if masks[n] & bit)
    elements = tuple(sorted(set(coverage.values())))
    result = GenSetResult(
        elements=elements,
        method="elementary",
        coverage=coverage,
        n_used=radius,
        asymptotic_violation=radius > initial,
        certificate=None,
        exact=False,
    )
    return _with_certificate(result, field)


def greedy_block_generating_set(field: FieldSpec, policy: SearchPolicy = SearchPolicy()) -> GenSetResult:
    """Pick candidates covering the most still-uncovered divisors (ties: smallest n)."""
    radius, initial, masks = _resolve_radius(field, policy)
    full = (1 << field.r) - 1
    candidates = sorted(masks)
    covered = 0
    picks: list[int] = []
    while covered != full:
        best_n, best_gain = 0, 0
        for n in candidates:
            gain = (masks[n] & ~covered).bit_count()
            if gain > best_gain:
                best_n, best_gain = n, gain
        picks.append(best_n)  # best_gain >= 1: the radius guarantees full coverage
        covered |= masks[best_n]
    coverage: dict[int, int] = {}
    for i in range(field.r):
        coverage[i] = next(n for n in picks if masks[n] >> i & 1)
    result = GenSetResult(
        elements=tuple(sorted(picks)),
        method="greedy",
        coverage=coverage,
        n_used=radius,
        asymptotic_violation=radius > initial,
        certificate=None,
        exact=False,
    )
    return _with_certificate(result, field)


def exact_min_generating_set(
    field: FieldSpec,
    policy: SearchPolicy = SearchPolicy(),
    size_cap: int | None = None,
) -> GenSetResult:
    """Minimum-cardinality generating set below the radius, by set-cover search.

    Iterative deepening over cardinality with depth-first branch-and-bound on
    the distinct masks present; among equal-cardinality optima the
    lexicographically smallest element list wins.  If no cover exists within
    size_cap the greedy result is returned with the exact flag cleared.
    """
    if field.r > 64:
        raise ValueError("exact search supports at most 64 divisor indices")
    if size_cap is None:
        size_cap = field.r
    if size_cap < 1:
        raise ValueError(f"size_cap must be >= 1, got {size_cap}")
    radius, initial, masks = _resolve_radius(field, policy)
    full = (1 << field.r) - 1
    # Smallest representative per distinct nonempty mask, in element order.
    rep_of: dict[int, int] = {}
    for n in sorted(masks):
        m = masks[n]
        if m and m not in rep_of:
            rep_of[m] = n
    reps = sorted(rep_of.items(), key=lambda item: item[1])  # (mask, element)
    best: tuple[int, ...] | None = None
    for k in range(1, size_cap + 1):
        best = _cover_of_size(reps, full, k)
        if best is not None:
            break
    if best is None:
        fallback = greedy_block_generating_set(field, policy)
        return _with_certificate(
            GenSetResult(
                elements=fallback.elements,
                method="exact",
                coverage=fallback.coverage,
                n_used=radius,
                asymptotic_violation=radius > initial,
                certificate=None,
                exact=False,
            ),
            field,
        )
    elements = best
    coverage: dict[int, int] = {}
    for i in range(field.r):
        coverage[i] = next(n for n in elements if masks[n] >> i & 1)
    result = GenSetResult(
        elements=elements,
        method="exact",
        coverage=coverage,
        n_used=radius,
        asymptotic_violation=radius > initial,
        certificate=None,
        exact=True,
    )
    return _with_certificate(result, field)


def _cover_of_size(reps, full: int, k: int) -> tuple[int, ...] | None:
    """First cover of exactly k masks in lexicographic element order, or None."""
    suffix_union = [0] * (len(reps) + 1)
    for j in range(len(reps) - 1, -1, -1):
        suffix_union[j] = suffix_union[j + 1] | reps[j][0]
    chosen: list[int] = []

    def dfs(start: int, covered: int, slots: int):
        if covered == full:
            return tuple(chosen)
        if slots == 0 or covered | suffix_union[start] != full:
            return None
        for j in range(start, len(reps)):
            mask, elem = reps[j]
            if mask & ~covered == 0:
                continue
            if covered | suffix_union[j] != full:
                return None  # later masks only shrink the reachable union
            chosen.append(elem)
            hit = dfs(j + 1, covered | mask, slots - 1)
            if hit is not None:
                return hit
            chosen.pop()
        return None

    return dfs(0, 0, k)


def simultaneous_nonresidue_search(field: FieldSpec, block, radius: int) -> int | None:
    """Smallest n <= radius that is a q_i-th non-residue for every index in block."""
    if not block:
        raise ValueError("block must be nonempty")
    for i in block:
        if not 0 <= i < field.r:
            raise ValueError(f"divisor index {i} out of range for r={field.r}")
    want = 0
    for i in block:
        want |= 1 << i
    p = field.p
    divs = [(1 << i, (p - 1) // q) for i, (q, _) in enumerate(field.divisors) if 1 << i & want]
    for n in range(2, min(radius, p - 1) + 1):
        ok = True
        for bit, exp in divs:
            if pow(n, exp, p) == 1:
                ok = False
                break
        if ok:
            return n
    return None


def _with_certificate(result: GenSetResult, field: FieldSpec) -> GenSetResult:
    g, order = _certificate(result.elements, result.coverage, field)
    return GenSetResult(
        elements=result.elements,
        method=result.method,
        coverage=result.coverage,
        n_used=result.n_used,
        asymptotic_violation=result.asymptotic_violation,
        certificate=(g, order),
        exact=result.exact,
    )
