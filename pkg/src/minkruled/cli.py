"""``mrs`` command line: eval, audit, export, frames.

Exit codes: 0 success, 1 usage or spec errors, 2 geometric errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from minkruled import lorentz as lz
from minkruled.audit import audit
from minkruled.curvature import curvature_record
from minkruled.errors import DegenerateMetric, GeometryError, MinkRuledError, NullNormal, SpecError
from minkruled.framing import check_director, frame
from minkruled.ruled import DEFAULT_SIGNS, evaluate, partials, structure_sample
from minkruled.specs import GridConfig, dumps, fmt_float, load_spec

CSV_HEADER = [
    "u", "v", "x1", "x2", "x3", "case",
    "K_oracle", "H_oracle", "K_printed", "H_printed",
    "E", "F", "G", "L", "M", "N",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(x):
    return "" if x is None else fmt_float(float(x))


def _load(args):
    spec = load_spec(args.spec)
    surface = spec.build()
    return spec, surface


def _config(args) -> GridConfig:
    return GridConfig(
        nu=getattr(args, "nu", 32),
        nv=getattr(args, "nv", 32),
        derivative_step=args.step,
        tol_null=args.tol_null,
        tol_degenerate=args.tol_degenerate,
    )


def cmd_eval(args, out) -> int:
    spec, surface = _load(args)
    cfg = _config(args)
    check_director(surface.b, surface.domain_u, 64, cfg.tol_null)
    s = structure_sample(surface, args.u, cfg.derivative_step, tol=cfg.tol_null)
    rec = curvature_record(surface, args.u, args.v, s, cfg.tol_degenerate, cfg.tol_null)
    fr, f = s.frame, rec.forms
    result = {
        "surface": surface.name,
        "u": args.u,
        "v": args.v,
        "position": evaluate(surface, args.u, args.v),
        "frame": {
            "x": fr.x, "a": fr.a, "y": fr.y,
            "eps_x": fr.eps_x, "eps_a": fr.eps_a, "eps_y": fr.eps_y,
            "cx_aprime": fr.cx_aprime, "cy_aprime": fr.cy_aprime, "k_g": fr.k_g,
        },
        "structure": {
            "cx": s.cx, "cy": s.cy, "mu": s.mu,
            "lambda_printed": DEFAULT_SIGNS[rec.case].lam * s.cx,
            "delta": s.delta, "theta": s.theta,
            "d_cx": s.d_cx, "d2_cx": s.d2_cx, "d_cy": s.d_cy, "d2_cy": s.d2_cy, "d_kg": s.d_kg,
        },
        "forms": {"E": f.E, "F": f.F, "G": f.G, "L": f.L, "M": f.M, "N": f.N, "eps_n": f.eps_n},
        "case": rec.case.value,
        "K_oracle": rec.K_oracle,
        "H_oracle": rec.H_oracle,
        "kappa_oracle": rec.kappa_oracle,
        "tau_oracle": rec.tau_oracle,
        "K_printed": rec.K_printed,
        "H_printed": rec.H_printed,
        "kappa_sq_printed": rec.kappa_sq_printed,
        "tau_printed": rec.tau_printed,
    }
    if args.echo_spec:
        result["spec"] = spec.to_dict()
    out.write(dumps(result) + "\n")
    return 0


def cmd_audit(args, out) -> int:
    _, surface = _load(args)
    cfg = _config(args)
    check_director(surface.b, surface.domain_u, 64, cfg.tol_null)
    report = audit(surface, cfg.nu, cfg.nv, cfg.derivative_step, cfg.tol_null, cfg.tol_degenerate)
    text = dumps(report.to_dict()) + "\n"
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise SpecError(f"cannot write {args.out!r}: {exc.strerror}") from None
    verdicts = ", ".join(f"{f.name}[{f.case.value}]={f.verdict.value}" for f in report.formulas)
    out.write(f"wrote {args.out} ({report.skipped} skipped): {verdicts}\n")
    return 0


def _grid(surface, cfg):
    return np.linspace(*surface.domain_u, cfg.nu), np.linspace(*surface.domain_v, cfg.nv)


def _obj(surface, cfg) -> str:
    us, vs = _grid(surface, cfg)
    lines = []
    for u in us:
        for v in vs:
            p = evaluate(surface, float(u), float(v))
            lines.append("v " + " ".join(fmt_float(float(c)) for c in p))
    nv = len(vs)
    for i in range(len(us) - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b, c, d = a + 1, a + nv, a + nv + 1
            lines.append(f"f {a} {c} {d}")
            lines.append(f"f {a} {d} {b}")
    return "\n".join(lines) + "\n"


def _csv(surface, cfg) -> str:
    us, vs = _grid(surface, cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for u in us:
        u = float(u)
        s = structure_sample(surface, u, cfg.derivative_step, tol=cfg.tol_null)
        for v in vs:
            v = float(v)
            p = evaluate(surface, u, v)
            row = [_num(u), _num(v), *(_num(c) for c in p)]
            try:
                rec = curvature_record(surface, u, v, s, cfg.tol_degenerate, cfg.tol_null)
            except (DegenerateMetric, NullNormal):
                pt = partials(surface, u, v)
                E, F, G = (float(lz.inner(a, b)) for a, b in ((pt.Xu, pt.Xu), (pt.Xu, pt.Xv), (pt.Xv, pt.Xv)))
                row += ["", "", "", "", "", _num(E), _num(F), _num(G), "", "", ""]
            else:
                f = rec.forms
                row += [
                    rec.case.value, _num(rec.K_oracle), _num(rec.H_oracle),
                    _num(rec.K_printed), _num(rec.H_printed),
                    _num(f.E), _num(f.F), _num(f.G), _num(f.L), _num(f.M), _num(f.N),
                ]
            w.writerow(row)
    return buf.getvalue()


def cmd_export(args, out) -> int:
    _, surface = _load(args)
    cfg = _config(args)
    text = _obj(surface, cfg) if args.format == "obj" else _csv(surface, cfg)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise SpecError(f"cannot write {args.out!r}: {exc.strerror}") from None
    out.write(f"wrote {args.out}\n")
    return 0


def cmd_frames(args, out) -> int:
    _, surface = _load(args)
    cfg = _config(args)
    check_director(surface.b, surface.domain_u, max(args.n, 2), cfg.tol_null)
    w = csv.writer(out, lineterminator="\n")
    w.writerow([
        "u", "x1", "x2", "x3", "a1", "a2", "a3", "y1", "y2", "y3",
        "eps_x", "eps_a", "eps_y", "k_g", "delta", "theta", "cx", "cy",
    ])
    for u in np.linspace(*surface.domain_u, args.n):
        u = float(u)
        try:
            fr = frame(surface.b, u, cfg.tol_null)
            s = structure_sample(surface, u, cfg.derivative_step, tol=cfg.tol_null)
        except GeometryError as exc:
            raise type(exc)(f"at u={u!r}: {exc}") from None
        w.writerow([
            _num(u), *(_num(c) for c in (*fr.x, *fr.a, *fr.y)),
            fr.eps_x, fr.eps_a, fr.eps_y,
            _num(fr.k_g), _num(s.delta), _num(s.theta), _num(s.cx), _num(s.cy),
        ])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mrs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, grid=False):
        p.add_argument("--spec", required=True, help="spec JSON file or bundled fixture name")
        p.add_argument("--step", type=float, default=1e-4, help="derivative step for structure functions")
        p.add_argument("--tol-null", type=float, default=1e-9)
        p.add_argument("--tol-degenerate", type=float, default=1e-10)
        if grid:
            p.add_argument("--nu", type=int, default=32)
            p.add_argument("--nv", type=int, default=32)

    p = sub.add_parser("eval", help="evaluate one surface point")
    common(p)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--echo-spec", action="store_true", help="include the loaded spec in the output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("audit", help="audit reference formulas against the oracle")
    common(p, grid=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("export", help="export a mesh (obj) or curvature field (csv)")
    common(p, grid=True)
    p.add_argument("--format", choices=("obj", "csv"), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("frames", help="print director frames as CSV")
    common(p)
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=cmd_frames)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except MinkRuledError as exc:
        print(f"mrs: error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
