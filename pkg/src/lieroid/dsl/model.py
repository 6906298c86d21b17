"""Declarations making up a model file, and their materialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..algebroid import Algebroid, Endo, ShapeError, Tensor
from ..coeff import Chart, Scalar
from ..riemann import Metric


class Located:
    def _locate(self, msg, line, col):
        self.line = line
        self.col = col
        return f"{msg} (line {line}, column {col})" if line else msg


class ModelSyntaxError(SyntaxError, Located):
    def __init__(self, msg, line=0, col=0):
        super().__init__(self._locate(msg, line, col))


class UnknownName(LookupError, Located):
    def __init__(self, name, line=0, col=0):
        self.name = name
        super().__init__(self._locate(f"unknown name {name!r}", line, col))


class ModelShapeError(ShapeError, Located):
    def __init__(self, msg, line=0, col=0):
        super().__init__(self._locate(msg, line, col))


@dataclass(frozen=True)
class AlgebroidDecl:
    name: str
    coords: tuple[str, ...]
    frame: tuple[str, ...]
    anchor: tuple[tuple[Scalar, ...], ...]          # anchor[i][j]: d/dx_j component of rho(e_i)
    brackets: tuple[tuple[tuple[int, int], tuple[Scalar, ...]], ...]   # i < j, nonzero only

    @property
    def chart(self) -> Chart:
        return Chart(self.coords)

    @property
    def rank(self) -> int:
        return len(self.frame)

    def build(self) -> Algebroid:
        return Algebroid(self.chart, self.rank, [list(r) for r in self.anchor],
                         {ij: list(v) for ij, v in self.brackets}, name=self.name,
                         frame=list(self.frame))


@dataclass(frozen=True)
class TensorDecl:
    name: str
    kind: str            # "form", "multivector", "metric", "endo"
    degree: int | None
    base: str
    value: Tensor | Metric | Endo


@dataclass(frozen=True)
class CheckRequest:
    name: str
    args: tuple[str, ...]
    options: tuple[tuple[str, object], ...] = ()
    line: int = field(default=0, compare=False)

    def label(self) -> str:
        parts = list(self.args) + [f"{k}={_opt(v)}" for k, v in self.options]
        return f"{self.name}({', '.join(parts)})"


def _opt(v):
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


@dataclass
class Model:
    algebroids: dict[str, AlgebroidDecl] = field(default_factory=dict)
    tensors: dict[str, TensorDecl] = field(default_factory=dict)
    checks: list[CheckRequest] = field(default_factory=list)

    def __eq__(self, other):
        return (isinstance(other, Model) and self.algebroids == other.algebroids
                and self.tensors == other.tensors and self.checks == other.checks)

    @cached_property
    def _built(self) -> dict[str, Algebroid]:
        return {}

    def algebroid(self, name: str) -> Algebroid:
        if name not in self.algebroids:
            raise UnknownName(name)
        cache = self._built
        if name not in cache:
            cache[name] = self.algebroids[name].build()
        return cache[name]

    def tensor(self, name: str):
        if name not in self.tensors:
            raise UnknownName(name)
        return self.tensors[name].value

    def base_of(self, name: str) -> Algebroid:
        if name not in self.tensors:
            raise UnknownName(name)
        return self.algebroid(self.tensors[name].base)

    def lookup(self, name: str):
        if name in self.algebroids:
            return self.algebroid(name)
        if name in self.tensors:
            return self.tensor(name)
        raise UnknownName(name)
