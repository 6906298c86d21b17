"""Command line entry point: ``lieroid check|classify|derive|fuzz|sample|checks``."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from importlib import resources

from .algebroid import InconsistentAlgebroidWarning, Tensor, classify, coframe, format_tensor
from .dsl.checks import (_KIND_NAMES, FAIL, PASS, REGISTRY, CheckArgumentError, Report, resolve, resolve_args,
                         run_check, run_checks)
from .dsl.generate import KINDS, UnsupportedParams, random_instance
from .dsl.model import CheckRequest, ModelShapeError, ModelSyntaxError, UnknownName
from .dsl.parser import parse_model
from .dsl.sampling import chart_dim, random_points, sample_model

USAGE_ERROR = 2


def _load(path):
    """Read a model file; a bare name such as ``heisenberg`` falls back to the bundled corpus."""
    if not os.path.exists(path):
        bundled = resources.files("lieroid") / "corpus" / f"{path.removesuffix('.model')}.model"
        if bundled.is_file():
            return parse_model(bundled.read_text(encoding="utf-8"))
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _emit(report: Report, as_json: bool, timing: bool, out):
    text = report.json_lines(timing) if as_json else report.text(timing)
    if text:
        print(text, file=out)


def cmd_check(args, out):
    m = _load(args.file)
    report = run_checks(m)
    _emit(report, args.json, args.timing, out)
    return report.exit_code


def cmd_classify(args, out):
    m = _load(args.file)
    A = m.algebroid(args.name)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InconsistentAlgebroidWarning)
        kind = classify(A)
    if args.json:
        print(json.dumps({"algebroid": args.name, "kind": kind.value,
                          "warnings": [str(w.message) for w in caught]}), file=out)
    else:
        print(kind.value, file=out)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    return 0


# --- derive -----------------------------------------------------------------------------------------

def _fmt(value, frame):
    return format_tensor(value, frame) if isinstance(value, Tensor) else str(value)


def _derive_reeb(m, A, om, eta):
    from .structures import make_cosymplectic
    return {"reeb": make_cosymplectic(A, om, eta).reeb}


def _derive_contact(m, A, eta):
    from .structures import contact_pair
    p = contact_pair(A, eta)
    return {"pi": p.fundamental_pi, "reeb": p.reeb}


def _derive_lambda(m, A, pi, xi, g):
    from .jacobi import JacobiContext, lambda_from_metric
    return {"lambda": lambda_from_metric(JacobiContext(A, pi, xi), g)}


def _gamma_rows(conn, frame):
    lines = {}
    r = conn.base.rank
    for i in range(r):
        for j in range(r):
            v = Tensor.from_vector(conn.base.chart, conn.gamma[i][j])
            if not v.is_zero():
                lines[f"nabla_{frame[i]} {frame[j]}"] = v
    return lines


def _derive_gamma(m, A, g):
    from .riemann import levi_civita
    return _gamma_rows(levi_civita(A, g), A.frame)


def _derive_contra_gamma(m, A, pi, g):
    from .poisson import BivectorContext
    from .riemann import contravariant_levi_civita
    conn = contravariant_levi_civita(BivectorContext(A, pi), g)
    return _gamma_rows(conn, conn.base.frame)


def _derive_triple_gamma(m, A, pi, xi, g):
    from .jacobi import JacobiContext, triple_levi_civita, with_metric_lambda
    J = with_metric_lambda(JacobiContext(A, pi, xi), g)
    conn = triple_levi_civita(J, g)
    return _gamma_rows(conn, conn.base.frame)


def _derive_dual(m, A, pi):
    from .poisson import BivectorContext, dual_algebroid
    D = dual_algebroid(BivectorContext(A, pi))
    return _structure(D)


def _structure(D):
    out = {}
    for i in range(D.rank):
        out[f"anchor {D.frame[i]}"] = " + ".join(
            f"({v})*d/d{D.chart.names[k]}" for k, v in enumerate(D.anchor[i]) if v) or "0"
        for j in range(i + 1, D.rank):
            v = Tensor.from_vector(D.chart, D.c[i][j])
            if not v.is_zero():
                out[f"[{D.frame[i]},{D.frame[j]}]"] = format_tensor(v, D.frame)
    return out


def _derive_triple_dual(m, A, pi, xi, lam):
    from .jacobi import JacobiContext, triple_dual_algebroid
    return _structure(triple_dual_algebroid(JacobiContext(A, pi, xi).with_lambda(lam)))


def _derive_phi(m, A, eta, g):
    from .structures import make_contact_riemannian
    _, phi = make_contact_riemannian(A, eta, g)
    return {f"phi({A.frame[j]})": phi.apply([A.chart.one() if k == j else A.chart.zero()
                                             for k in range(A.rank)]) for j in range(A.rank)}


def _derive_sharp(m, A, pi, xi):
    from .jacobi import JacobiContext, sharp_pi_xi
    J = JacobiContext(A, pi, xi)
    return {f"sharp(e^{i + 1})": sharp_pi_xi(J, coframe(A, i)) for i in range(A.rank)}


DERIVATIONS = {
    "reeb": (("A", "f2", "f1"), _derive_reeb),
    "contact": (("A", "f1"), _derive_contact),
    "lambda": (("A", "P", "X", "g"), _derive_lambda),
    "gamma": (("A", "g"), _derive_gamma),
    "contra_gamma": (("A", "P", "g"), _derive_contra_gamma),
    "triple_gamma": (("A", "P", "X", "g"), _derive_triple_gamma),
    "dual": (("A", "P"), _derive_dual),
    "triple_dual": (("A", "P", "X", "f1"), _derive_triple_dual),
    "phi": (("A", "f1", "g"), _derive_phi),
    "sharp": (("A", "P", "X"), _derive_sharp),
}

_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$")


def cmd_derive(args, out):
    m = _load(args.file)
    match = _CALL.match(args.expr)
    if not match:
        print(f"error: expected NAME(args), got {args.expr!r}", file=sys.stderr)
        return USAGE_ERROR
    name, rest = match.groups()
    names = tuple(a.strip() for a in rest.split(",") if a.strip())
    if name in DERIVATIONS:
        sig, fn = DERIVATIONS[name]
        vals = resolve_args(m, name, names, sig)
        rows = fn(m, *vals)
        frame = vals[0].frame
        rows = {k: _fmt(v, frame) for k, v in rows.items()}
    elif name in REGISTRY:
        # defects of a check: lhs - rhs per nonzero component
        req = CheckRequest(name, names)
        resolve(m, req)  # usage errors surface before running
        res = run_check(m, req)
        if res.verdict not in (PASS, FAIL):
            print(res.line(), file=out)
            return 1
        rows = {}
        for ident in res.identities:
            for label, v in ident.defect().items():
                rows[f"{ident.name}{list(label)}"] = str(v)
        if not rows:
            rows = {"defect": "0"}
    else:
        print(f"error: unknown derivation {name!r}; known: "
              f"{', '.join(sorted(DERIVATIONS))} or any check name", file=sys.stderr)
        return USAGE_ERROR
    if args.json:
        print(json.dumps(rows, sort_keys=False), file=out)
    else:
        for k, v in rows.items():
            print(f"{k} = {v}", file=out)
    return 0


def cmd_fuzz(args, out):
    params = {"kind": args.kind, "rank": args.rank, "chart_dim": args.chart_dim,
              "max_degree": args.max_degree}
    failed = False
    for k in range(args.count):
        seed = args.seed + k
        m = random_instance(seed, params)
        report = run_checks(m) if not args.points else \
            sample_model(m, random_points(chart_dim(m), args.points, seed))
        failed |= not report.ok
        if args.json:
            for r in report.results:
                d = r.as_dict(args.timing)
                d["seed"] = seed
                print(json.dumps(d, sort_keys=True), file=out)
        else:
            counts = {}
            for r in report.results:
                counts[r.verdict] = counts.get(r.verdict, 0) + 1
            summary = ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
            print(f"seed {seed}: {summary}", file=out)
            for r in report.results:
                if r.verdict not in ("PASS", "HYPOTHESIS_FAILED"):
                    print("  " + r.line(), file=out)
    return 1 if failed else 0


def cmd_sample(args, out):
    m = _load(args.file)
    report = sample_model(m, random_points(chart_dim(m), args.points, args.seed))
    _emit(report, args.json, args.timing, out)
    return report.exit_code


def cmd_checks(args, out):
    for name in sorted(REGISTRY):
        c = REGISTRY[name]
        sig = ", ".join(_KIND_NAMES[s] for s in c.signature)
        line = f"{name}({sig})"
        if c.doc:
            line += f"  {c.doc.splitlines()[0]}"
        print(line, file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lieroid", description="Exact checks on Lie algebroid models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="line-delimited JSON output")
        sp.add_argument("--timing", action="store_true", help="include wall time per check")

    sp = sub.add_parser("check", help="run every check in a model file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("classify", help="Skew, AlmostLie or Lie")
    sp.add_argument("file")
    sp.add_argument("name")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("derive", help="print a derived object, e.g. 'reeb(A, omega, eta)'")
    sp.add_argument("file")
    sp.add_argument("expr")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_derive)

    sp = sub.add_parser("fuzz", help="run the checks of random instances")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", choices=KINDS, default="skew")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--rank", type=int, default=3)
    sp.add_argument("--chart-dim", type=int, default=1)
    sp.add_argument("--max-degree", type=int, default=1)
    sp.add_argument("--points", type=int, default=0, help="also sample at this many rational points")
    common(sp)
    sp.set_defaults(fn=cmd_fuzz)

    sp = sub.add_parser("sample", help="evaluate every identity at random rational points")
    sp.add_argument("file")
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("checks", help="list available checks")
    sp.set_defaults(fn=cmd_checks)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        return args.fn(args, out)
    except (ModelSyntaxError, UnknownName, ModelShapeError, CheckArgumentError, UnsupportedParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
