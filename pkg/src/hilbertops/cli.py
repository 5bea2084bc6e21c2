"""
Command-line front end.

Every subcommand writes one report to stdout (JSON by default, CSV with
``--format csv``) and diagnostics to stderr. Exit status: 0 on success,
1 on validation errors (bad flags, unreadable or malformed inputs,
dimension mismatches), 2 on numeric errors (non-finite values,
non-differentiability).

Operator sources for ``--op``:

* ``quasi-hs``
* matrices: ``zero``, ``identity``, ``reciprocal-product`` (need ``--dim``),
  ``diag:v1,v2,...``, ``file:PATH``
* integral kernels: ``kernel:zero``, ``kernel:min``, ``kernel:separable-sine``,
  ``kernel:constant:C``, ``kernel-file:PATH`` (discretised with
  ``--basis-size`` sine functions and a ``--quad-order`` Gauss-Legendre rule)
"""

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import covering, gendiff, integral_op, matrix_op, quasi_op
from .errors import NonFiniteError, NotDifferentiable
from .fileio import parse_vector, read_kernel_grid, read_matrix, write_probe_records

DEFAULT_SEED = 20240601
MATRIX_BUILTINS = ("zero", "identity", "reciprocal-product")
GENERATORS = {
    "reciprocal-product": matrix_op.reciprocal_product,
    "identity": lambda i, j: 1.0 if i == j else 0.0,
    "zero": lambda i, j: 0.0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class Operator:
    """Resolved ``--op`` source: handle plus kernel-side context when present."""

    def __init__(self, handle, source, kernel=None, basis=None, quad=None, matrix=None):
        self.handle = handle
        self.source = source
        self.kernel = kernel
        self.basis = basis
        self.quad = quad
        self.matrix = matrix

    @property
    def is_kernel(self):
        return self.kernel is not None


def _vector_dim(args):
    for name in ("x", "y", "z", "x0"):
        text = getattr(args, name, None)
        if text and text.strip() != "zero":
            return len([v for v in text.split(",") if v.strip()])
    return None


def resolve_operator(args):
    src = args.op
    dim = args.dim or _vector_dim(args)
    if src == "quasi-hs":
        if dim is None:
            raise ValueError("quasi-hs needs --dim or an explicit vector")
        return Operator(gendiff.quasi_handle(dim), src)
    if src.startswith("kernel:") or src.startswith("kernel-file:"):
        if src.startswith("kernel-file:"):
            k = integral_op.gridded_kernel(read_kernel_grid(src.split(":", 1)[1]), src)
        else:
            k = integral_op.builtin_kernel(src.split(":", 1)[1])
        quad = integral_op.gauss_legendre(args.quad_order)
        basis = integral_op.sine_basis(args.basis_size)
        C = integral_op.compute_coeffs(k, basis, quad)
        return Operator(gendiff.spectral_handle(C), src, k, basis, quad, C.as_operator())
    if src.startswith("file:"):
        T = read_matrix(src[5:])
    elif src.startswith("diag:") or src in MATRIX_BUILTINS:
        T = matrix_op.builtin_matrix(src, dim)
    else:
        raise ValueError(f"unknown operator source {src!r}")
    return Operator(gendiff.matrix_handle(T), src, matrix=T)


def _vec(args, name, dim):
    text = getattr(args, name)
    if text is None:
        raise ValueError(f"--{name.replace('_', '-')} is required")
    return parse_vector(text, dim)


def _floats(v):
    return [float(a) for a in np.asarray(v).ravel()]


# -- subcommands ------------------------------------------------------------

def cmd_apply(args):
    op = resolve_operator(args)
    x = _vec(args, "x", op.handle.dim)
    if not op.is_kernel or args.route == "spectral":
        return {"result": _floats(op.handle.apply(x))}
    k, basis, quad = op.kernel, op.basis, op.quad
    f = integral_op.synthesize(x, basis, quad)
    if args.route == "direct":
        out = integral_op.apply_direct(k, f, quad)
    elif args.route == "separable":
        if k.separable is None:
            raise ValueError(f"kernel {k.label!r} is not separable")
        phi, psi = k.separable
        out = integral_op.apply_separable(phi, psi, f, quad)
    else:
        raise ValueError(f"unknown route {args.route!r}")
    coeffs = integral_op.project(out, basis, quad)
    spectral = op.handle.apply(x)
    return {
        "result": _floats(coeffs),
        "spectral": _floats(spectral),
        "max_abs_difference": float(np.max(np.abs(coeffs - spectral))),
    }


def cmd_adjoint(args):
    op = resolve_operator(args)
    y = _vec(args, "y", op.handle.dim)
    if op.handle.kind == "quasi":
        raise ValueError("the quasi-HS operator is nonlinear; use 'coderiv' with --z")
    if op.is_kernel and args.route == "separable":
        if op.kernel.separable is None:
            raise ValueError(f"kernel {op.kernel.label!r} is not separable")
        phi, psi = op.kernel.separable
        g = integral_op.synthesize(y, op.basis, op.quad)
        out = integral_op.apply_separable_adjoint(phi, psi, g, op.quad)
        return {"result": _floats(integral_op.project(out, op.basis, op.quad))}
    return {"result": _floats(op.handle.coderivative(np.zeros(op.handle.dim), y))}


def cmd_hsnorm(args):
    op = resolve_operator(args)
    if op.handle.kind == "quasi":
        return {"hs_norm": quasi_op.quasi_hs_norm(op.handle.dim)}
    if op.is_kernel:
        return {
            "hs_norm": integral_op.hs_norm_from_kernel(op.kernel, op.quad),
            "coefficient_hs_norm": op.handle.operator.hs_norm(),
        }
    return {"hs_norm": matrix_op.hs_norm(op.matrix)}


def cmd_opnorm(args):
    op = resolve_operator(args)
    if op.matrix is None:
        raise ValueError("opnorm needs a linear operator")
    return {
        "op_norm_estimate": matrix_op.op_norm_estimate(op.matrix, args.iterations, args.seed),
        "hs_norm": matrix_op.hs_norm(op.matrix),
    }


def cmd_coeffs(args):
    op = resolve_operator(args)
    if not op.is_kernel:
        raise ValueError("coeffs needs a kernel operator (kernel:NAME or kernel-file:PATH)")
    C = op.handle.operator
    return {
        "M": C.dim,
        "coefficients": [_floats(row) for row in C.entries],
        "row_tail_norms": _floats(integral_op.row_tail_norms(C)),
        "coefficient_hs_norm": C.hs_norm(),
        "kernel_l2_norm": integral_op.hs_norm_from_kernel(op.kernel, op.quad),
        "gram_error": op.basis.gram_error(op.quad),
    }


def cmd_deriv_check(args):
    op = resolve_operator(args)
    z = _vec(args, "z", op.handle.dim)
    err = gendiff.frechet_fd_check(op.handle, z, args.directions, args.h, args.seed)
    out = {"max_relative_error": err, "h": args.h, "directions": args.directions}
    if op.handle.kind == "quasi":
        out["jacobian"] = [_floats(r) for r in quasi_op.frechet_jacobian(z).as_array()]
    return out


def cmd_coderiv(args):
    op = resolve_operator(args)
    z = _vec(args, "z", op.handle.dim)
    y = _vec(args, "y", op.handle.dim)
    return {"result": _floats(gendiff.coderivative_via_adjoint(op.handle, z, y))}


def cmd_covering(args):
    op = resolve_operator(args)
    if args.method in ("linear", "basis"):
        if op.matrix is None:
            raise ValueError(f"method {args.method!r} needs a linear operator")
        fn = covering.covering_linear if args.method == "linear" else covering.covering_basis_bound
        return fn(op.matrix).to_dict()
    x_bar = _vec(args, "x", op.handle.dim) if args.x else np.zeros(op.handle.dim)
    etas = [float(e) for e in args.eta.split(",")] if args.eta else covering.DEFAULT_ETAS
    est = covering.covering_sampled(op.handle, x_bar, etas, args.samples, args.seed)
    return est.to_dict()


def cmd_decay(args):
    if args.op not in GENERATORS:
        raise ValueError(f"decay needs a generator: one of {sorted(GENERATORS)}")
    dims = [int(d) for d in args.dims.split(",")]
    rows = covering.decay_report(GENERATORS[args.op], dims)
    return {"rows": [{"N": r.N, "sigma_min": r.sigma_min, "basis_bound": r.basis_bound} for r in rows]}


def cmd_probe(args):
    op = resolve_operator(args)
    dim = op.handle.dim
    z = _vec(args, "z", dim)
    x = _vec(args, "x", dim)
    y = _vec(args, "y", dim)
    kw = {"steps": args.steps, "start": args.start, "ratio": args.ratio}
    if args.family == "tail":
        tail = parse_vector(args.tail, dim) if args.tail else x
        fams = [gendiff.PathFamily("tail", tail=tail, **kw)]
    elif args.family == "custom":
        if not args.points:
            raise ValueError("--family custom needs --points 'u1;u2;...'")
        pts = tuple(parse_vector(p, dim) for p in args.points.split(";"))
        fams = [gendiff.PathFamily("custom", points=pts)]
    elif args.family == "all":
        fams = gendiff.default_families(dim)
    else:
        fams = [gendiff.PathFamily(args.family, **kw)]
    res = gendiff.probe_membership(op.handle, z, x, y, fams, args.margin, args.tol)
    payload = {"verdict": res.verdict, "sup_estimate": res.sup_estimate,
               "margin": res.margin, "tol": res.tol, "records": res.records}
    if res.witness is not None:
        payload["witness"] = {**res.witness, "u": _floats(res.witness["u"])}
    return payload


def cmd_feasibility(args):
    y = parse_vector(args.y, 2)
    x = parse_vector(args.x, 2)
    checks = gendiff.feasibility_check(y[0], y[1], x[0], x[1])
    box = gendiff.feasible_box(y[0], y[1])
    return {"inequalities": checks,
            "feasible_box": None if box is None else [list(b) for b in box]}


def cmd_covering_empirical(args):
    op = resolve_operator(args)
    x0 = _vec(args, "x0", op.handle.dim) if args.x0 else np.zeros(op.handle.dim)
    res = covering.empirical_covering_check(op.handle, x0, args.alpha, args.r,
                                            args.samples, args.preimage_samples, args.seed)
    return {"covered": res.covered,
            "counterexample": None if res.counterexample is None else _floats(res.counterexample),
            "worst_residual": res.worst_residual, "targets": res.targets}


COMMANDS = {
    "apply": cmd_apply,
    "adjoint": cmd_adjoint,
    "hsnorm": cmd_hsnorm,
    "opnorm": cmd_opnorm,
    "coeffs": cmd_coeffs,
    "deriv-check": cmd_deriv_check,
    "coderiv": cmd_coderiv,
    "covering": cmd_covering,
    "decay": cmd_decay,
    "probe": cmd_probe,
    "feasibility": cmd_feasibility,
    "covering-empirical": cmd_covering_empirical,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", default="quasi-hs")
    common.add_argument("--dim", type=int)
    common.add_argument("--basis-size", type=int, default=16)
    common.add_argument("--quad-order", type=int, default=64)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="hilbertops", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("apply", parents=[common])
    s.add_argument("--x")
    s.add_argument("--route", choices=("spectral", "direct", "separable"), default="spectral")
    s = sub.add_parser("adjoint", parents=[common])
    s.add_argument("--y")
    s.add_argument("--route", choices=("spectral", "separable"), default="spectral")
    sub.add_parser("hsnorm", parents=[common])
    s = sub.add_parser("opnorm", parents=[common])
    s.add_argument("--iterations", type=int, default=200)
    sub.add_parser("coeffs", parents=[common])
    s = sub.add_parser("deriv-check", parents=[common])
    s.add_argument("--z")
    s.add_argument("--directions", type=int, default=8)
    s.add_argument("--h", type=float, default=1e-5)
    s = sub.add_parser("coderiv", parents=[common])
    s.add_argument("--z")
    s.add_argument("--y")
    s = sub.add_parser("covering", parents=[common])
    s.add_argument("--method", choices=("linear", "basis", "sampled"), default="linear")
    s.add_argument("--x", help="base point for the sampled method")
    s.add_argument("--eta", help="comma-separated eta schedule")
    s.add_argument("--samples", type=int, default=64)
    s = sub.add_parser("decay", parents=[common])
    s.add_argument("--dims", default="4,8,16,32,64")
    s = sub.add_parser("probe", parents=[common])
    s.add_argument("--z")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--family", choices=("axis", "diagonal", "tail", "custom", "all"), default="all")
    s.add_argument("--tail", help="tail direction for --family tail (defaults to --x)")
    s.add_argument("--points", help="';'-separated points for --family custom")
    s.add_argument("--steps", type=int, default=24)
    s.add_argument("--start", type=float, default=0.1)
    s.add_argument("--ratio", type=float, default=0.5)
    s.add_argument("--margin", type=float, default=1e-3)
    s.add_argument("--tol", type=float, default=1e-9)
    s = sub.add_parser("feasibility", parents=[common])
    s.add_argument("--y", required=True, help="y1,y2")
    s.add_argument("--x", required=True, help="x1,x2")
    s = sub.add_parser("covering-empirical", parents=[common])
    s.add_argument("--x0")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--r", type=float, default=1.0)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--preimage-samples", type=int, default=400)
    return p


def _csv_cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(a) for a in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def emit(command, payload, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    if command == "probe":
        write_probe_records(stream, payload["records"], "csv")
        return
    if command == "decay":
        stream.write("N,sigma_min,basis_bound\n")
        for r in payload["rows"]:
            stream.write(f"{r['N']},{_csv_cell(r['sigma_min'])},{_csv_cell(r['basis_bound'])}\n")
        return
    stream.write("key,value\n")
    for k in sorted(payload):
        stream.write(f"{k},{_csv_cell(payload[k])}\n")


def _glue_negative_values(argv):
    # argparse reads "-1,0" as an option; rewrite "--y -1,0" as "--y=-1,0"
    out = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def run(argv=None, stdout=None, stderr=None):
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    digest = hashlib.sha256(json.dumps(vars(args), sort_keys=True, default=str).encode()).hexdigest()
    t0 = time.perf_counter()
    try:
        payload = COMMANDS[args.command](args)
    except (NonFiniteError, NotDifferentiable) as exc:
        print(f"numeric error: {exc}", file=stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if args.format == "json":
        payload = {"command": args.command, "inputs_digest": digest,
                   "payload": payload, "wall_time": time.perf_counter() - t0}
        emit(args.command, payload, "json", stdout)
    else:
        emit(args.command, payload, "csv", stdout)
    return 0


def main(argv=None):
    sys.exit(run(argv))
