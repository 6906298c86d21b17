import time

from hypothesis import given, settings, strategies as st

from lieroid.dsl.checks import HYPOTHESIS_FAILED, PASS, run_checks
from lieroid.dsl.generate import random_instance
from lieroid.dsl.sampling import chart_dim, random_points, sample_model
from suites import CONDITIONAL, UNCONDITIONAL, bad, conditional_instances, run_named, unconditional_instances


def test_unconditional_identities_hold_on_every_instance():
    start = time.perf_counter()
    instances = list(unconditional_instances())
    table = run_named(instances, UNCONDITIONAL)
    assert len(instances) >= 200
    assert all(table[name] for name in UNCONDITIONAL)
    assert [row for name in UNCONDITIONAL for row in bad(table[name])] == []
    assert time.perf_counter() - start < 60


def test_conditional_theorems_never_fail_and_are_exercised():
    start = time.perf_counter()
    table = run_named(conditional_instances(), CONDITIONAL)
    for name in CONDITIONAL:
        rows = table[name]
        assert bad(rows, (PASS, HYPOTHESIS_FAILED)) == [], name
        assert any(r.verdict == PASS for _, _, r in rows), name
    assert time.perf_counter() - start < 60


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["skew", "lie-algebra", "tangent-like"]),
       st.integers(1, 3), st.integers(1, 2))
def test_random_instances_report_ok(seed, kind, rank, n):
    n = min(n, rank)
    m = random_instance(seed, {"kind": kind, "rank": rank, "chart_dim": n, "max_degree": 2})
    assert run_checks(m).ok


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(1, "cosymplectic-data"), (3, "cosymplectic-data"),
                                                (2, "lcs-data")]))
def test_structure_data_samples_to_zero(seed, rank_kind):
    rank, kind = rank_kind
    m = random_instance(seed, {"kind": kind, "rank": rank, "chart_dim": 2, "max_degree": 1})
    report = sample_model(m, random_points(chart_dim(m), 3, seed))
    assert report.ok, report.text()
