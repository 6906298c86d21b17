"""Tabulated identities: two sides compared component by component."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .coeff import Scalar


class HypothesisFailed(ValueError):
    """A conditional statement was invoked on data violating one of its hypotheses."""

    def __init__(self, hypothesis: str, detail: str = "", witness=None):
        self.hypothesis = hypothesis
        self.detail = detail
        self.witness = witness
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)


Label = tuple


@dataclass(frozen=True)
class Identity:
    """``lhs[label] == rhs[label]`` for every label.

    Missing labels on either side are read as zero.  Both sides are kept so
    that a sampling oracle can evaluate them independently.
    """

    name: str
    lhs: Mapping[Label, Scalar]
    rhs: Mapping[Label, Scalar]
    notes: dict = field(default_factory=dict, compare=False)

    def labels(self) -> list[Label]:
        return sorted(set(self.lhs) | set(self.rhs), key=repr)

    def defect(self) -> dict[Label, Scalar]:
        out = {}
        for lab in self.labels():
            a, b = self.lhs.get(lab), self.rhs.get(lab)
            if a is None:
                d = -b
            elif b is None:
                d = a
            else:
                d = a - b
            if d:
                out[lab] = d
        return out

    @property
    def holds(self) -> bool:
        return not self.defect()

    def witness(self):
        d = self.defect()
        if not d:
            return None
        lab = min(d, key=repr)
        return lab, d[lab]

    def __bool__(self):
        return self.holds


def tabulate(name: str, labels: Iterable[Label],
             fn: Callable[..., tuple]) -> Identity:
    """Build an identity from ``fn(*label) -> (lhs, rhs)`` where sides are Scalars
    or lists of Scalars (vector-valued components get an extra index)."""
    lhs: dict[Label, Scalar] = {}
    rhs: dict[Label, Scalar] = {}
    for lab in labels:
        a, b = fn(*lab)
        if isinstance(a, (list, tuple)):
            for k, (x, y) in enumerate(zip(a, b)):
                lhs[tuple(lab) + (k,)] = x
                rhs[tuple(lab) + (k,)] = y
        else:
            lhs[tuple(lab)] = a
            rhs[tuple(lab)] = b
    return Identity(name, lhs, rhs)


def zero_identity(name: str, table: Mapping[Label, Scalar]) -> Identity:
    """Identity asserting every entry of ``table`` vanishes."""
    return Identity(name, dict(table), {})
