"""Numeric cross-check: evaluate both sides of every identity at rational points."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..coeff import PoleAtPoint
from ..identity import Identity
from .checks import FAIL, INTERNAL_INCONSISTENCY, PASS, CheckResult, Report, run_check
from .model import CheckRequest, Model

log = logging.getLogger(__name__)


def random_points(dim: int, count: int, seed: int = 0) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(dim))
            for _ in range(count)]


@dataclass
class SampleOutcome:
    nonzero: list        # (identity, label, point, value)
    evaluated: int
    skipped: int


def _side(table, label, point):
    v = table.get(label)
    return Fraction(0) if v is None else v.evaluate(point[:v.chart.dim])


def sample_identities(identities: Iterable[Identity], points: Sequence) -> SampleOutcome:
    nonzero, evaluated, skipped = [], 0, 0
    for ident in identities:
        for label in ident.labels():
            for pt in points:
                try:
                    d = _side(ident.lhs, label, pt) - _side(ident.rhs, label, pt)
                except PoleAtPoint:
                    skipped += 1
                    log.info("pole of %s%s at %s skipped", ident.name, label, pt)
                    continue
                evaluated += 1
                if d:
                    nonzero.append((ident.name, tuple(label), tuple(pt), d))
    return SampleOutcome(nonzero, evaluated, skipped)


def sample_check(m: Model, req: CheckRequest, points: Sequence) -> CheckResult:
    res = run_check(m, req)
    if res.verdict not in (PASS, FAIL):
        return res
    out = sample_identities(res.identities, points)
    res.message = f"{out.evaluated} samples, {out.skipped} poles skipped"
    if out.nonzero:
        name, label, pt, value = out.nonzero[0]
        witness = (name, label, f"{value} at {tuple(str(p) for p in pt)}")
        verdict = INTERNAL_INCONSISTENCY if res.verdict == PASS else FAIL
        return CheckResult(req, verdict, witness, message=res.message, seconds=res.seconds,
                           identities=res.identities)
    return res


def sample_identity(m: Model, check, points: Sequence) -> Report:
    """Sample one check, given as a request, its label, or its position in the model."""
    if isinstance(check, int):
        req = m.checks[check]
    elif isinstance(check, str):
        matches = [c for c in m.checks if c.label() == check or c.name == check]
        if not matches:
            raise KeyError(check)
        req = matches[0]
    else:
        req = check
    return Report([sample_check(m, req, points)])


def sample_model(m: Model, points: Sequence) -> Report:
    return Report([sample_check(m, req, points) for req in m.checks])


def chart_dim(m: Model) -> int:
    return max((len(d.coords) for d in m.algebroids.values()), default=0)
