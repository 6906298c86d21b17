"""Line-oriented model format.

::

    algebroid H {
      coords = []
      frame = [e1, e2, e3]
      bracket [e1,e2] = e3
    }
    tensor eta : form(1) on H = e^3
    tensor g : metric on H = diag(1, 1, 1)
    check contact(H, eta)

Inside expressions ``^`` is exponentiation when both operands are scalars and
the exponent is an integer literal, and the wedge product otherwise.
``d(expr)`` is the algebroid differential.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..algebroid import (
    FORM, VECTOR, Algebroid, Endo, ShapeError, Tensor, VarianceMismatch, coframe_name,
    d_rho, interior, lie_derivative, schouten, wedge,
)
from ..coeff import Chart, DivisionByZero, Scalar
from ..linalg import Degenerate
from ..riemann import Metric
from .model import (
    AlgebroidDecl, CheckRequest, Model, ModelShapeError, ModelSyntaxError, TensorDecl,
    UnknownName,
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n|;)
  | (?P<deriv>d/d[A-Za-z_][A-Za-z_0-9]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\]{},=:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Tok("nl", m.group(), line, pos - start + 1))
            if m.group() == "\n":
                line += 1
                start = m.end()
        elif kind != "ws":
            out.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.model = Model()

    # --- token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def advance(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "name")

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def expect_name(self) -> Tok:
        if self.tok.kind != "name":
            self.fail(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "num":
            self.fail("expected an integer")
        return int(self.advance().text)

    def fail(self, msg, tok: Tok | None = None):
        t = tok or self.tok
        raise ModelSyntaxError(msg, t.line, t.col)

    def skip_nl(self):
        while self.tok.kind == "nl":
            self.advance()

    def end_statement(self):
        if self.tok.kind not in ("nl", "eof") and not self.at("}"):
            self.fail(f"unexpected {self.tok.text!r}")
        self.skip_nl()

    # --- top level
    def parse(self) -> Model:
        self.skip_nl()
        while self.tok.kind != "eof":
            kw = self.expect_name()
            if kw.text == "algebroid":
                self.algebroid()
            elif kw.text == "tensor":
                self.tensor()
            elif kw.text == "check":
                self.check(kw)
            else:
                self.fail(f"unknown statement {kw.text!r}", kw)
            self.end_statement()
        return self.model

    def name_list(self) -> list[str]:
        self.expect("[")
        names = []
        while not self.at("]"):
            names.append(self.expect_name().text)
            if not self.at("]"):
                self.expect(",")
        self.expect("]")
        return names

    def algebroid(self):
        name = self.expect_name()
        if name.text in self.model.algebroids or name.text in self.model.tensors:
            self.fail(f"duplicate name {name.text!r}", name)
        self.expect("{")
        self.skip_nl()
        coords = frame = None
        anchors: dict[int, list] = {}
        brackets: dict[tuple[int, int], list] = {}
        while not self.at("}"):
            kw = self.expect_name()
            if kw.text == "coords":
                self.expect("=")
                coords = self.name_list()
                for c in coords:
                    if c == "d":
                        self.fail("'d' is reserved and cannot be a coordinate", kw)
            elif kw.text == "frame":
                self.expect("=")
                frame = self.name_list()
                if not frame:
                    self.fail("frame must not be empty", kw)
            elif kw.text in ("anchor", "bracket"):
                if coords is None or frame is None:
                    self.fail("coords and frame must be declared first", kw)
                ctx = _Scope(self, Chart(tuple(coords)), coords, frame, None)
                if kw.text == "anchor":
                    i = ctx.frame_index(self.expect_name())
                    self.expect("=")
                    if i in anchors:
                        self.fail("anchor declared twice", kw)
                    anchors[i] = ctx.derivation()
                else:
                    self.expect("[")
                    i = ctx.frame_index(self.expect_name())
                    self.expect(",")
                    j = ctx.frame_index(self.expect_name())
                    self.expect("]")
                    self.expect("=")
                    vals = ctx.frame_combination()
                    if i == j:
                        if any(vals):
                            self.fail("a section has zero bracket with itself", kw)
                        continue
                    key, vals = ((i, j), vals) if i < j else ((j, i), [-v for v in vals])
                    if key in brackets:
                        self.fail("bracket declared twice", kw)
                    brackets[key] = vals
            else:
                self.fail(f"unknown algebroid field {kw.text!r}", kw)
            self.end_statement()
        self.expect("}")
        if coords is None or frame is None:
            self.fail("algebroid needs coords and frame", name)
        chart = Chart(tuple(coords))
        r, n = len(frame), len(coords)
        anchor = tuple(tuple(anchors.get(i, [chart.zero()] * n)) for i in range(r))
        br = tuple((k, tuple(v)) for k, v in sorted(brackets.items()) if any(v))
        self.model.algebroids[name.text] = AlgebroidDecl(name.text, tuple(coords), tuple(frame),
                                                          anchor, br)

    def tensor(self):
        name = self.expect_name()
        if name.text in self.model.algebroids or name.text in self.model.tensors:
            self.fail(f"duplicate name {name.text!r}", name)
        self.expect(":")
        kind_tok = self.expect_name()
        kind, degree = kind_tok.text, None
        if kind in ("form", "multivector"):
            self.expect("(")
            degree = self.expect_int()
            self.expect(")")
        elif kind not in ("metric", "endo"):
            self.fail(f"unknown tensor kind {kind!r}", kind_tok)
        self.expect("on")
        base_tok = self.expect_name()
        if base_tok.text not in self.model.algebroids:
            raise UnknownName(base_tok.text, base_tok.line, base_tok.col)
        A = self.model.algebroid(base_tok.text)
        decl = self.model.algebroids[base_tok.text]
        self.expect("=")
        ctx = _Scope(self, A.chart, decl.coords, decl.frame, A)
        start = self.tok
        if kind in ("metric", "endo"):
            mat = ctx.matrix(A.rank)
            try:
                value = Metric(A.chart, mat) if kind == "metric" else Endo(A.chart, mat, VECTOR)
            except Degenerate as exc:
                raise ModelShapeError(str(exc), start.line, start.col) from None
            except ShapeError as exc:
                raise ModelShapeError(str(exc), start.line, start.col) from None
        else:
            variance = FORM if kind == "form" else VECTOR
            raw = ctx.expr()
            if isinstance(raw, Scalar) and not raw:
                raw = Tensor.zero(A.chart, A.rank, variance, degree)
            value = ctx.as_tensor(raw, variance, start)
            if value.degree != degree:
                raise ModelShapeError(f"{name.text} declared with degree {degree}, "
                                      f"expression has degree {value.degree}", start.line, start.col)
        self.model.tensors[name.text] = TensorDecl(name.text, kind, degree, base_tok.text, value)

    def check(self, kw: Tok):
        from .checks import REGISTRY
        name = self.expect_name()
        if name.text not in REGISTRY:
            raise UnknownName(name.text, name.line, name.col)
        self.expect("(")
        args, opts = [], []
        while not self.at(")"):
            a = self.expect_name()
            if self.at("="):
                self.advance()
                if self.tok.kind == "num":
                    val = int(self.advance().text)
                else:
                    v = self.expect_name().text
                    val = {"true": True, "false": False}.get(v, v)
                opts.append((a.text, val))
            else:
                if opts:
                    self.fail("positional argument after option", a)
                if a.text not in self.model.algebroids and a.text not in self.model.tensors:
                    raise UnknownName(a.text, a.line, a.col)
                args.append(a.text)
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        self.model.checks.append(CheckRequest(name.text, tuple(args), tuple(opts), kw.line))


class _Scope:
    """Expression evaluation against one algebroid's coordinates and frame."""

    def __init__(self, p: _Parser, chart: Chart, coords, frame, A: Algebroid | None):
        self.p = p
        self.chart = chart
        self.coords = list(coords)
        self.frame = list(frame)
        self.coframe = [coframe_name(f) for f in frame]
        self.A = A

    @property
    def rank(self):
        return len(self.frame)

    def frame_index(self, tok: Tok) -> int:
        if tok.text not in self.frame:
            raise UnknownName(tok.text, tok.line, tok.col)
        return self.frame.index(tok.text)

    def shape_error(self, msg, tok):
        raise ModelShapeError(msg, tok.line, tok.col)

    # --- structural pieces
    def derivation(self) -> list[Scalar]:
        """``s1*d/dx + s2*d/dy``"""
        comps = [self.chart.zero()] * len(self.coords)
        start = self.p.tok
        val = self.expr(allow_deriv=True)
        if isinstance(val, _Deriv):
            return val.comps
        if isinstance(val, Scalar) and not val:
            return comps
        self.shape_error("anchor must be a combination of d/dx terms", start)

    def frame_combination(self) -> list[Scalar]:
        start = self.p.tok
        val = self.expr()
        t = self.as_tensor(val, VECTOR, start)
        if t.degree != 1 and not t.is_zero():
            self.shape_error("bracket must be a combination of frame sections", start)
        return [t[(k,)] for k in range(self.rank)]

    def matrix(self, r: int) -> list[list[Scalar]]:
        p = self.p
        start = p.tok
        if p.at("diag"):
            p.advance()
            p.expect("(")
            vals = self.expr_list(")")
            if len(vals) != r:
                self.shape_error(f"diag needs {r} entries", start)
            return [[vals[i] if i == j else self.chart.zero() for j in range(r)] for i in range(r)]
        p.expect("[")
        rows = []
        while not p.at("]"):
            p.skip_nl()
            p.expect("[")
            rows.append(self.expr_list("]"))
            p.skip_nl()
            if not p.at("]"):
                p.expect(",")
            p.skip_nl()
        p.expect("]")
        if len(rows) != r or any(len(row) != r for row in rows):
            self.shape_error(f"matrix must be {r}x{r}", start)
        return rows

    def expr_list(self, close: str) -> list[Scalar]:
        p = self.p
        vals = []
        while not p.at(close):
            t = p.tok
            v = self.expr()
            if not isinstance(v, Scalar):
                self.shape_error("matrix entries must be scalars", t)
            vals.append(v)
            if not p.at(close):
                p.expect(",")
        p.expect(close)
        return vals

    def as_tensor(self, val, variance, tok) -> Tensor:
        if isinstance(val, Scalar):
            return Tensor.scalar(self.chart, self.rank, val, variance)
        if isinstance(val, _Deriv):
            self.shape_error("d/dx is only allowed in anchor declarations", tok)
        if val.variance != variance:
            self.shape_error(f"expected a {variance}, found a {val.variance}", tok)
        return val

    # --- expressions
    def expr(self, allow_deriv=False):
        p = self.p
        if p.at("-"):
            op = p.advance()
            val = self.neg(self.term(allow_deriv), op)
        else:
            val = self.term(allow_deriv)
        while p.at("+") or p.at("-"):
            op = p.advance()
            rhs = self.term(allow_deriv)
            val = self.add(val, rhs if op.text == "+" else self.neg(rhs, op), op)
        return val

    def term(self, allow_deriv):
        p = self.p
        val = self.unary(allow_deriv)
        while p.at("*") or p.at("/"):
            op = p.advance()
            rhs = self.unary(allow_deriv)
            val = self.mul(val, rhs, op) if op.text == "*" else self.div(val, rhs, op)
        return val

    def unary(self, allow_deriv):
        if self.p.at("-"):
            op = self.p.advance()
            return self.neg(self.unary(allow_deriv), op)
        return self.power(allow_deriv)

    def power(self, allow_deriv):
        p = self.p
        base = self.atom(allow_deriv)
        while p.at("^"):
            op = p.advance()
            if isinstance(base, Scalar) and p.tok.kind == "num":
                base = base ** int(p.advance().text)
            elif isinstance(base, Scalar) and p.at("-") and p.toks[p.i + 1].kind == "num":
                p.advance()
                try:
                    base = base ** (-int(p.advance().text))
                except DivisionByZero:
                    self.shape_error("division by zero", op)
            else:
                rhs = self.atom(allow_deriv)
                base = self.wedge(base, rhs, op)
        return base

    def atom(self, allow_deriv):
        p = self.p
        t = p.tok
        if t.kind == "num":
            p.advance()
            return self.chart.const(int(t.text))
        if t.kind == "deriv":
            if not allow_deriv:
                self.shape_error("d/dx is only allowed in anchor declarations", t)
            p.advance()
            name = t.text[3:]
            if name not in self.coords:
                raise UnknownName(name, t.line, t.col + 3)
            d = _Deriv([self.chart.zero()] * len(self.coords))
            d.comps[self.coords.index(name)] = self.chart.one()
            return d
        if p.at("("):
            p.advance()
            v = self.expr(allow_deriv)
            p.expect(")")
            return v
        if t.kind != "name":
            p.fail(f"unexpected {t.text or 'end of input'!r}")
        p.advance()
        name = t.text
        if p.at("(") and name in _FUNCS:
            return self.call(name, t)
        # coframe element written NAME^DIGITS
        if p.at("^") and p.toks[p.i + 1].kind == "num":
            cand = f"{name}^{p.toks[p.i + 1].text}"
            if cand in self.coframe:
                p.advance()
                p.advance()
                return self._basis(self.coframe.index(cand), FORM)
        if name in self.frame:
            return self._basis(self.frame.index(name), VECTOR)
        if name in self.coords:
            return self.chart.var(self.coords.index(name))
        if f"{name}^" in self.coframe and p.at("^"):
            p.advance()
            return self._basis(self.coframe.index(f"{name}^"), FORM)
        model = p.model
        if self.A is not None and name in model.tensors:
            decl = model.tensors[name]
            if model.algebroid(decl.base) is not self.A:
                self.shape_error(f"{name} lives on {decl.base}", t)
            if decl.kind in ("metric", "endo"):
                self.shape_error(f"{name} is not a multivector or form", t)
            return decl.value
        raise UnknownName(name, t.line, t.col)

    def _basis(self, i, variance) -> Tensor:
        return Tensor(self.chart, self.rank, variance, 1, {(i,): self.chart.one()})

    def call(self, name, t):
        p = self.p
        p.expect("(")
        args = [self.expr()]
        while p.at(","):
            p.advance()
            args.append(self.expr())
        p.expect(")")
        if self.A is None:
            self.shape_error(f"{name}() is not available here", t)
        if len(args) != _FUNCS[name]:
            self.shape_error(f"{name}() takes {_FUNCS[name]} arguments", t)
        A = self.A
        try:
            if name == "d":
                a = args[0]
                if isinstance(a, Scalar):
                    a = Tensor.scalar(self.chart, self.rank, a, FORM)
                if a.variance != FORM:
                    self.shape_error("d applies to forms", t)
                return d_rho(A, a)
            if name == "schouten":
                P, Q = (self.as_tensor(x, VECTOR, t) for x in args)
                return schouten(A, P, Q)
            if name == "lie":
                X = self.as_tensor(args[0], VECTOR, t)
                if X.degree != 1:
                    self.shape_error("lie() differentiates along a section", t)
                T = args[1]
                if isinstance(T, Scalar):
                    return A.rho_vec(X.vec(), T)
                return lie_derivative(A, X, T)
            if name == "interior":
                X = self.as_tensor(args[0], VECTOR, t)
                return interior(X.vec(), args[1])
        except (VarianceMismatch, ShapeError) as exc:
            self.shape_error(str(exc), t)
        raise AssertionError(name)

    # --- arithmetic with shape checks
    def add(self, a, b, op):
        if isinstance(a, _Deriv) or isinstance(b, _Deriv):
            if isinstance(a, _Deriv) and isinstance(b, _Deriv):
                return _Deriv([x + y for x, y in zip(a.comps, b.comps)])
            self.shape_error("cannot add a derivation and a non-derivation", op)
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a + b
        if isinstance(a, Scalar):
            a = self._promote(a, b, op)
        if isinstance(b, Scalar):
            b = self._promote(b, a, op)
        if a.variance != b.variance or a.degree != b.degree:
            self.shape_error("cannot add tensors of different type", op)
        return a + b

    def _promote(self, s, like, op):
        if not s:
            return Tensor.zero(self.chart, self.rank, like.variance, like.degree)
        if like.degree != 0:
            self.shape_error("cannot add a scalar and a tensor of positive degree", op)
        return Tensor.scalar(self.chart, self.rank, s, like.variance)

    def neg(self, a, op):
        if isinstance(a, _Deriv):
            return _Deriv([-x for x in a.comps])
        return -a

    def mul(self, a, b, op):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar) and isinstance(b, _Deriv):
            return _Deriv([a * x for x in b.comps])
        if isinstance(b, Scalar) and isinstance(a, _Deriv):
            return _Deriv([b * x for x in a.comps])
        if isinstance(a, Scalar) and isinstance(b, Tensor):
            return b.scale(a)
        if isinstance(b, Scalar) and isinstance(a, Tensor):
            return a.scale(b)
        self.shape_error("use ^ for the product of two tensors", op)

    def div(self, a, b, op):
        if not isinstance(b, Scalar):
            self.shape_error("can only divide by a scalar", op)
        if not b:
            self.shape_error("division by zero", op)
        return self.mul(a, b.inverse(), op)

    def wedge(self, a, b, op):
        if isinstance(a, _Deriv) or isinstance(b, _Deriv):
            self.shape_error("cannot wedge derivations", op)
        if isinstance(a, Scalar) or isinstance(b, Scalar):
            self.shape_error("^ between a scalar and a tensor needs an integer exponent or a tensor", op)
        if a.variance != b.variance:
            self.shape_error("cannot wedge a form with a multivector", op)
        return wedge(a, b)


_FUNCS = {"d": 1, "schouten": 2, "lie": 2, "interior": 2}


class _Deriv:
    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = list(comps)


def parse_model(text: str) -> Model:
    return _Parser(text).parse()
