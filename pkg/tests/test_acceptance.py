"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  Criteria 5 and 7 encode convergence tolerances that the exact counts
provably sit outside at desk scale; they are asserted as pinned rather than
loosened, and fail honestly with the arithmetic spelled out in the inline
comments and assertion messages.
"""

import math
import time
from itertools import combinations

from smallgen.experiments import (
    MEISSEL_MERTENS,
    density_csv,
    density_experiment,
    quantile_report,
    survey,
    survey_csv,
)
from smallgen.genset import combine_primitive_root, exact_min_generating_set, generates
from smallgen.modcore import field_spec, multiplicative_order
from smallgen.sievelab import PrimeSetSpec, dickman_rho, primes_upto, psi_count, sieve_bound_check

_CACHE: dict = {}


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")


def _survey_1e5():
    if "rows" not in _CACHE:
        _CACHE["rows"] = survey(3, 10**5)
    return _CACHE["rows"]


def test_criterion_01_residue_count_identity():
    t0 = time.time()
    failures = []
    checked = 0
    for p in (int(q) for q in primes_upto(1000) if q >= 3):
        f = field_spec(p)
        for q, _ in f.divisors:
            e = (p - 1) // q
            count = sum(1 for n in range(1, p) if pow(n, e, p) == 1)
            checked += 1
            if count != (p - 1) // q:
                failures.append((p, q, count))
    elapsed = time.time() - t0
    ok = not failures and elapsed < 5.0
    _report(1, ok, f"residue counts exact for {checked} (p, q) pairs, p <= 1000 [{elapsed:.2f}s]")
    assert not failures, failures[:5]
    assert elapsed < 5.0


def test_criterion_02_generation_oracle():
    def closure_size(p, gens):
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for g in gens:
                y = x * g % p
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen)

    t0 = time.time()
    mismatches = []
    checked = 0
    for p in (int(q) for q in primes_upto(200) if q >= 3):
        f = field_spec(p)
        # multiples of p are outside the group (domain error by contract)
        pool = [n for n in range(1, 21) if n % p != 0]
        for size in (0, 1, 2, 3):
            for subset in combinations(pool, size):
                got = generates(subset, f)
                want = closure_size(p, [n % p for n in subset]) == p - 1 if subset else False
                checked += 1
                if got != want:
                    mismatches.append((p, subset))
    elapsed = time.time() - t0
    ok = not mismatches and elapsed < 60.0
    _report(2, ok, f"generates() == closure oracle on {checked} subsets, p <= 200 [{elapsed:.1f}s]")
    assert not mismatches, mismatches[:5]
    assert elapsed < 60.0


def test_criterion_03_size_chain_to_1e5():
    t0 = time.time()
    rows = _survey_1e5()
    violations = []
    for r in rows:
        if not (r.h_exact <= r.h_greedy <= r.h_elementary <= r.omega):
            violations.append(r.p)
        f = field_spec(r.p)
        for elements in (r.exact_elements, r.greedy_elements, r.elementary_elements):
            if not generates(elements, f):
                violations.append(r.p)
    elapsed = time.time() - t0
    ok = not violations and elapsed < 600.0
    _report(3, ok, f"h_exact <= h_greedy <= h_elementary <= omega for {len(rows)} primes in [3, 1e5] [{elapsed:.1f}s]")
    assert not violations, violations[:5]
    assert elapsed < 600.0


def test_criterion_04_certificates_to_1e5():
    rows = _survey_1e5()
    bad = []
    for r in rows:
        f = field_spec(r.p)
        result = exact_min_generating_set(f)
        g = combine_primitive_root(result, f)
        if multiplicative_order(g, f) != f.p - 1:
            bad.append(r.p)
    ok = not bad
    _report(4, ok, f"combine_primitive_root has order p-1 for all {len(rows)} surveyed primes")
    assert not bad, bad[:5]


def test_criterion_05_smooth_numbers_vs_rho():
    # Pinned tolerance: |Psi/x - rho(u)| <= 0.1 * rho(u) at x = 1e6, u in {2, 3}.
    # The exact counts sit outside that band at this x: the classical
    # second-order term (1-gamma)*rho(u-1)/ln x alone is ~10% of rho(2) and
    # ~19% of rho(3), and higher-order terms add the rest, so this check
    # fails honestly (scripts/smooth_gap.py charts the convergence).
    t0 = time.time()
    x = 10**6
    outcomes = []
    for u in (2.0, 3.0):
        psi = psi_count(PrimeSetSpec.threshold(x, u))
        rho = dickman_rho(u)
        ratio = psi / x
        outcomes.append((u, psi, ratio, rho, abs(ratio - rho) <= 0.1 * rho))
    elapsed = time.time() - t0
    ok = all(o[4] for o in outcomes) and elapsed < 30.0
    detail = "; ".join(
        f"u={u:g}: Psi={psi} Psi/x={ratio:.6f} rho={rho:.6f} dev={(ratio - rho) / rho:+.1%}"
        for u, psi, ratio, rho, _ in outcomes
    )
    _report(5, ok, f"{detail} [{elapsed:.1f}s]")
    assert elapsed < 30.0
    for u, psi, ratio, rho, within in outcomes:
        assert within, (
            f"u={u}: exact Psi(1e6, 1e{6 / u:.0f})/1e6 = {ratio:.6f} deviates "
            f"{(ratio - rho) / rho:+.1%} from rho({u:g}) = {rho:.6f}; convergence "
            "toward rho is only ~1/ln x, so the 10% band is unattainable at x = 1e6"
        )


def test_criterion_06_dickman_values():
    exact_one = dickman_rho(1.0)
    dev2 = abs(dickman_rho(2.0) - (1 - math.log(2)))
    ok = exact_one == 1.0 and dev2 <= 1e-6
    _report(6, ok, f"rho(1) = {exact_one}; |rho(2) - (1 - ln 2)| = {dev2:.2e}")
    assert exact_one == 1.0
    assert dev2 <= 1e-6


def test_criterion_07_density_vs_predictions():
    # Pinned tolerance: empirical mean within 10% of ln ln T + M.  Since
    # pi(x; q, 1)/pi(x) -> 1/(q-1), the mean provably tracks sum 1/(q-1),
    # which exceeds ln ln T + M by the convergent gap sum(1/(q-1) - 1/q)
    # ~ 0.773; the pinned variant therefore fails honestly at every scale,
    # while the harmonic variant agrees to a fraction of a percent
    # (both are reported below and persisted in DensityRow).
    t0 = time.time()
    (row,) = density_experiment(10**6, [3.0])
    elapsed = time.time() - t0
    within = abs(row.ratio - 1.0) <= 0.1
    detail = (
        f"x=1e6 l=3: mean={row.empirical_mean:.6f}; lnlnT+M={row.prediction:.6f} "
        f"(ratio {row.ratio:.4f}); sum 1/(q-1)={row.prediction_harmonic:.6f} "
        f"(ratio {row.ratio_harmonic:.4f}) [{elapsed:.1f}s]"
    )
    _report(7, within and elapsed < 120.0, detail)
    assert elapsed < 120.0
    assert abs(row.ratio_harmonic - 1.0) <= 0.1  # sanity: the harmonic variant is tight
    assert within, (
        f"empirical mean {row.empirical_mean:.6f} vs ln ln T + M = {row.prediction:.6f} "
        f"gives ratio {row.ratio:.4f}; the structural gap is sum(1/(q-1) - 1/q) ~ 0.773, "
        f"and the harmonic prediction matches at ratio {row.ratio_harmonic:.4f}"
    )


def test_criterion_08_hypothesis_checker_booleans():
    x = 10**6
    spec = PrimeSetSpec.threshold(x, 2.0)
    rep = sieve_bound_check(spec, 2.0, 10.0, 0.1)
    stripped = PrimeSetSpec.explicit(
        x, [int(p) for p in spec.realize() if not (10**0.6 < p <= 10**3)]
    )
    rep2 = sieve_bound_check(stripped, 2.0, 10.0, 0.1)
    ok = rep.hypothesis_holds and not rep2.hypothesis_holds
    _report(
        8,
        ok,
        f"threshold set: sum={rep.hypothesis_sum:.4f} >= 0.55 -> {rep.hypothesis_holds}; "
        f"stripped set: sum={rep2.hypothesis_sum:.4f} -> {rep2.hypothesis_holds}",
    )
    assert rep.hypothesis_holds is True
    assert rep2.hypothesis_holds is False


def test_criterion_09_trend_survey_to_1e7():
    # Median threshold pinned by a full oracle run at 1e4 before freezing.
    rows_1e4 = survey(3, 10**4)
    pinned_median = dict(quantile_report(rows_1e4, "h_exact", [0.5]))[0.5]
    assert pinned_median == 1  # the frozen pin

    n_range = len([p for p in primes_upto(10**7) if p >= 3])
    sample = math.ceil(n_range / 1000)  # stride 1000
    rows = survey(3, 10**7, sample=sample)
    over = [r.p for r in rows if r.h_exact > r.omega]
    stats = dict(quantile_report(rows, "h_exact", [0.5, 1.0]))
    ok = not over and stats[0.5] <= pinned_median
    _report(
        9,
        ok,
        f"{len(rows)} primes to 1e7 (stride 1000): h_exact <= omega always; "
        f"median h_exact = {stats[0.5]} (pinned <= {pinned_median}), max = {stats[1.0]}",
    )
    assert not over, over[:5]
    assert stats[0.5] <= pinned_median


def test_criterion_10_determinism():
    rows_a = _survey_1e5()
    rows_b = survey(3, 10**5, threads=2)
    survey_same = survey_csv(rows_a) == survey_csv(rows_b)
    dens_a = density_csv(density_experiment(10**6, [3.0]))
    dens_b = density_csv(density_experiment(10**6, [3.0]))
    density_same = dens_a == dens_b
    ok = survey_same and density_same
    _report(
        10,
        ok,
        f"survey CSV identical at threads 1 vs 2: {survey_same}; "
        f"density CSV identical across runs: {density_same}",
    )
    assert survey_same
    assert density_same
