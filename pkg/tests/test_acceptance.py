"""Acceptance criteria; each test appends one PASS/FAIL line to the terminal summary."""

import time
from contextlib import contextmanager
from itertools import product

from conftest import ACCEPTANCE_LINES, FAULTS, corpus_model, corpus_names
from lieroid.algebroid import Kind, classify
from lieroid.dsl.checks import FAIL, HYPOTHESIS_FAILED, INTERNAL_INCONSISTENCY, PASS, run_check
from lieroid.dsl.sampling import random_points, sample_model
from lieroid.identity import HypothesisFailed
from lieroid.jacobi import JacobiContext, is_triple_compatible, triple_dual_algebroid
from lieroid.riemann import Metric
from lieroid.structures import (
    NotAssociated, NotContact, contact_pair, conformal_identity, is_contact, is_half_kenmotsu,
    lck_equivalence_check, make_contact_riemannian, make_lcs,
)
from suites import CONDITIONAL, UNCONDITIONAL, bad, conditional_instances, run_named, unconditional_instances


@contextmanager
def criterion(label, budget=None):
    start = time.perf_counter()
    notes = []
    ok = False
    try:
        yield notes
        elapsed = time.perf_counter() - start
        if budget is not None:
            notes.append(f"{elapsed:.2f}s < {budget}s")
            assert elapsed < budget, f"took {elapsed:.2f}s"
        ok = True
    finally:
        line = f"{'PASS' if ok else 'FAIL'} {label}"
        if notes:
            line += f" ({'; '.join(notes)})"
        ACCEPTANCE_LINES.append(line)
        print(line)


def verdicts(m, names):
    found = {}
    for req in m.checks:
        if req.name in names:
            found[req.name] = run_check(m, req).verdict
    return found


def test_ac1_heisenberg_contact_pipeline():
    with criterion("AC1 Heisenberg contact pipeline", budget=1) as notes:
        m = corpus_model("heisenberg")
        wanted = ("contact", "jacobi", "jacobi_schouten", "triple_dual_lie", "triple_morphism")
        got = verdicts(m, wanted)
        assert got == {n: PASS for n in wanted}, got
        H = m.algebroid("H")
        J = JacobiContext(H, m.tensor("pi"), m.tensor("xi")).with_lambda(m.tensor("eta"))
        assert classify(triple_dual_algebroid(J)) is Kind.LIE
        notes.append(f"{len(wanted)} checks PASS")


def test_ac2_flat_kaehler_plane():
    with criterion("AC2 symplectic/Kaehler plane", budget=1) as notes:
        m = corpus_model("plane_kaehler")
        wanted = ("symplectic", "poisson", "dual_lie", "riemann_poisson", "kaehler_transport")
        got = verdicts(m, wanted)
        assert got == {n: PASS for n in wanted}, got
        notes.append(f"{len(wanted)} checks PASS")


def test_ac3_lcs_plane():
    with criterion("AC3 lcs/lcK plane", budget=1) as notes:
        m = corpus_model("plane_lcs")
        got = verdicts(m, ("lcs", "jacobi", "lck"))
        assert got == {"lcs": PASS, "jacobi": PASS, "lck": PASS}, got
        L = make_lcs(m.algebroid("T"), m.tensor("omega"), m.tensor("theta"))
        compatible, conformal = lck_equivalence_check(L, m.tensor("g"), theta_exact=True)
        assert compatible == conformal
        assert conformal_identity(L, m.tensor("g")).holds
        notes.append(f"compatible={compatible}, conformally Kaehler={conformal}")


def test_ac4_unconditional_fuzz():
    with criterion("AC4 unconditional-identity fuzz", budget=60) as notes:
        instances = list(unconditional_instances())
        table = run_named(instances, UNCONDITIONAL)
        failures = [row for name in UNCONDITIONAL for row in bad(table[name])]
        assert len(instances) >= 200
        assert all(table[name] for name in UNCONDITIONAL)
        assert failures == [], failures[:5]
        notes.append(f"{len(instances)} instances, {sum(map(len, table.values()))} checks, all zero")


def test_ac5_conditional_fuzz():
    with criterion("AC5 conditional-theorem fuzz", budget=60) as notes:
        table = run_named(conditional_instances(), CONDITIONAL)
        for name in CONDITIONAL:
            rows = table[name]
            assert bad(rows, (PASS, HYPOTHESIS_FAILED)) == [], name
            passed = sum(r.verdict == PASS for _, _, r in rows)
            assert passed, f"{name} never met its hypothesis"
            notes.append(f"{name} {passed}/{len(rows)}")


def _by_kind(m, kind, degree=None):
    return [n for n, d in m.tensors.items() if d.kind == kind and (degree is None or d.degree == degree)]


def contact_riemannian_instances():
    for name in corpus_names():
        m = corpus_model(name)
        for eta, g in product(_by_kind(m, "form", 1), _by_kind(m, "metric")):
            if m.tensors[eta].base != m.tensors[g].base:
                continue
            A = m.base_of(eta)
            if A.rank % 2 == 0 or not is_contact(A, m.tensor(eta)):
                continue
            try:
                acm, _ = make_contact_riemannian(A, m.tensor(eta), m.tensor(g))
            except (NotAssociated, NotContact):
                continue
            yield f"{name}:{eta},{g}", A, m.tensor(eta), m.tensor(g), acm


def lcs_instances():
    for name in corpus_names():
        m = corpus_model(name)
        for om, theta, g in product(_by_kind(m, "form", 2), _by_kind(m, "form", 1), _by_kind(m, "metric")):
            bases = {m.tensors[t].base for t in (om, theta, g)}
            if len(bases) != 1:
                continue
            A = m.base_of(om)
            try:
                L = make_lcs(A, m.tensor(om), m.tensor(theta))
                lck_equivalence_check(L, m.tensor(g))
            except (HypothesisFailed, ValueError, ArithmeticError):
                continue
            yield f"{name}:{om},{theta},{g}", L, m.tensor(g)


def test_ac6_cross_module_equivalences():
    with criterion("AC6 cross-module equivalences") as notes:
        contact = list(contact_riemannian_instances())
        lcs = list(lcs_instances())
        assert contact and lcs
        for label, A, eta, g, acm in contact:
            J = contact_pair(A, eta).jacobi
            assert is_triple_compatible(J, g) == is_half_kenmotsu(acm), label
        for label, L, g in lcs:
            assert is_triple_compatible(L.jacobi, g) == conformal_identity(L, g).holds, label
        notes.append(f"{len(contact)} contact-Riemannian, {len(lcs)} lcs instances agree")


def _nonzero_witness(res):
    return res.witness is not None and res.witness[2] not in ("0", "")


def test_ac7_fault_injection():
    with criterion("AC7 fault injection") as notes:
        assert len(FAULTS) >= 10
        for name in FAULTS:
            m = corpus_model(name)
            results = [run_check(m, req) for req in m.checks]
            assert results, name
            assert all(r.verdict in (FAIL, HYPOTHESIS_FAILED) for r in results), \
                [r.line() for r in results]
            assert any(_nonzero_witness(r) for r in results), name
        notes.append(f"{len(FAULTS)} broken models rejected with witnesses")


def test_ac8_symbolic_numeric_coherence():
    with criterion("AC8 symbolic/numeric coherence") as notes:
        instances = list(unconditional_instances()) + list(conditional_instances())
        checked = 0
        for seed, _, m in instances:
            dim = max((len(d.coords) for d in m.algebroids.values()), default=0)
            report = sample_model(m, random_points(dim, 5, seed))
            inconsistent = [r.line() for r in report.results if r.verdict == INTERNAL_INCONSISTENCY]
            assert inconsistent == [], (seed, inconsistent)
            assert report.ok, report.text()
            checked += len(report.results)
        notes.append(f"{len(instances)} instances, {checked} checks sampled at 5 points")
