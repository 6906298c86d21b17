"""Canonical text for a model; ``parse_model(print_model(m)) == m``."""

from __future__ import annotations

from ..algebroid import FORM, Endo, Tensor, coframe_name
from ..coeff import Scalar, format_scalar
from ..riemann import Metric
from .model import AlgebroidDecl, Model, TensorDecl


def _scalar(s: Scalar) -> str:
    return f"({format_scalar(s)})"


def _combination(pairs) -> str:
    parts = [f"{_scalar(v)}*{name}" for name, v in pairs if v]
    return " + ".join(parts) if parts else "0"


def print_algebroid(d: AlgebroidDecl) -> str:
    lines = [f"algebroid {d.name} {{",
             f"  coords = [{', '.join(d.coords)}]",
             f"  frame = [{', '.join(d.frame)}]"]
    for i, row in enumerate(d.anchor):
        if any(row):
            body = _combination((f"d/d{c}", v) for c, v in zip(d.coords, row))
            lines.append(f"  anchor {d.frame[i]} = {body}")
    for (i, j), vals in d.brackets:
        lines.append(f"  bracket [{d.frame[i]},{d.frame[j]}] = {_combination(zip(d.frame, vals))}")
    lines.append("}")
    return "\n".join(lines)


def format_value(t: Tensor, frame) -> str:
    names = [coframe_name(f) for f in frame] if t.variance == FORM else list(frame)
    parts = []
    for key in sorted(t.comps):
        v = t.comps[key]
        if not key:
            parts.append(_scalar(v))
        else:
            parts.append(f"{_scalar(v)}*" + "^".join(names[i] for i in key))
    return " + ".join(parts) if parts else "0"


def _matrix(m) -> str:
    return "[" + ", ".join("[" + ", ".join(_scalar(x) for x in row) + "]" for row in m) + "]"


def print_tensor(d: TensorDecl, frame) -> str:
    head = f"tensor {d.name} : {d.kind}"
    if d.degree is not None:
        head += f"({d.degree})"
    head += f" on {d.base} = "
    if isinstance(d.value, (Metric, Endo)):
        return head + _matrix(d.value.matrix)
    return head + format_value(d.value, frame)


def print_model(m: Model) -> str:
    out = [print_algebroid(d) for d in m.algebroids.values()]
    for d in m.tensors.values():
        out.append(print_tensor(d, m.algebroids[d.base].frame))
    for c in m.checks:
        out.append(f"check {c.label()}")
    return "\n".join(out) + "\n"
