"""Command-line front end.

Exit codes: 0 success (valid, certified, passed), 1 a check failed,
2 usage or input error, 3 numerical or output failure.
"""

import argparse
import json
import sys

import numpy as np

from . import agler, bohr, domain, figures, io, ratfun, realize, series
from .errors import DomainError, NumericError, PoleError, PreconditionError
from .linalg import spectral_norm

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _OutputError(Exception):
    pass


class _Reporter:
    def __init__(self, as_json):
        self.as_json = as_json

    def emit(self, summary, payload):
        if self.as_json:
            print(json.dumps(payload, indent=2, default=_jsonable))
        else:
            print(summary)


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return io.matrix_to_json(x) if x.ndim == 2 else [_jsonable(complex(v)) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _complex(s):
    s = s.strip().replace(" ", "")
    if "," in s:
        re_, im_ = s.split(",")
        return complex(float(re_), float(im_))
    return complex(s.replace("i", "j"))


def _load_domain(path):
    return io.domain_from_json(io.load_json(path))


def _load_function(path):
    obj = io.load_json(path)
    if "kmin" in obj:
        return io.laurent_from_json(obj)
    return io.ratfun_from_json(obj)


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _OutputError(str(exc)) from exc


def _parse_D(args):
    if args.reference_D:
        return bohr.reference_D()
    if args.D is None:
        raise ValueError("give --paper-D or --D 'd11,d12;d21,d22'")
    rows = [r.split(",") for r in args.D.split(";")]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("--D needs a 2x2 matrix 'd11,d12;d21,d22'")
    return [[bohr.parse_rational(x) for x in r] for r in rows]


# domain ---------------------------------------------------------------------

def cmd_domain_validate(args, rep):
    spec = _load_domain(args.file)
    violations = domain.validate_domain(spec, raise_on_error=False)
    probe = None if violations else domain.empty_probe(spec)
    msgs = [f"component {j}: {m}" if j is not None else m for j, m in violations]
    summary = "valid" if not violations else "invalid:\n  " + "\n  ".join(msgs)
    if not violations and probe is None:
        summary += " (no interior grid point found; emptiness unknown)"
    rep.emit(summary, {"valid": not violations, "violations": msgs,
                       "interior_point": probe})
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_domain_check(args, rep):
    spec = _load_domain(args.file)
    chk = domain.check_domain(spec)
    obj = io.domain_to_json(chk)
    if args.out:
        _write(args.out, io.dump_json(obj) + "\n")
    rep.emit(io.dump_json(obj), obj)
    return EXIT_OK


def cmd_domain_plot(args, rep):
    spec = _load_domain(args.file)
    if args.check:
        spec = domain.check_domain(spec)
    try:
        text = figures.emit_figure(spec, None, args.format, args.n)
    except OSError as exc:
        raise _OutputError(str(exc)) from exc
    if args.out:
        _write(args.out, text)
        rep.emit(f"wrote {args.out}", {"out": args.out, "format": args.format})
    else:
        sys.stdout.write(text)
    return EXIT_OK


# lift -----------------------------------------------------------------------

def _lift_json(G):
    return {"k": G.k, "parts": [{"component": j, **io.ratfun_to_json(H)} for j, H in G.parts]}


def cmd_lift(args, rep):
    spec = _load_domain(args.domain)
    F = ratfun.as_matrat(_load_function(args.function))
    G = ratfun.lift_to_polydisk(F, spec)
    est = series.sup_norm_boundary(G, series.Torus(spec.k), args.grid)
    lines = [f"component {j}: num={np.round(H.num[0, 0], 12).tolist()} den={np.round(H.den, 12).tolist()}"
             for j, H in G.parts]
    lines.append(f"torus sup estimate: {est.value:.12g}")
    rep.emit("\n".join(lines), {**_lift_json(G), "torus_sup": est.value,
                                "argmax": [complex(z) for z in est.argmax]})
    return EXIT_OK


# agler ----------------------------------------------------------------------

def cmd_agler_lower(args, rep):
    spec = _load_domain(args.domain)
    F = _load_function(args.function)
    dims = [int(d) for d in args.dims.split(",")] if args.dims else None
    lb = agler.agler_lower_bound(F, spec, args.samples, dims, args.seed)
    rep.emit(f"lower bound: {lb.bound:.12g} (witness size {lb.witness.shape[0]}, "
             f"{lb.evaluated} evaluated, {lb.skipped} skipped)",
             {"bound": lb.bound, "witness": lb.witness, "evaluated": lb.evaluated,
              "skipped": lb.skipped})
    return EXIT_OK


def cmd_agler_upper(args, rep):
    spec = _load_domain(args.domain)
    F = _load_function(args.function)
    ub = agler.quotient_upper_bound(F, spec, args.grid)
    flag = " [sup-norm surrogate]" if ub.surrogate else ""
    rep.emit(f"upper bound: {ub.bound:.12g}{flag}",
             {"bound": ub.bound, "surrogate": ub.surrogate,
              "argmax": [complex(z) for z in ub.argmax], "lift": _lift_json(ub.lift)})
    return EXIT_OK


def _report_json(r):
    return {"pivots": list(r.pivots), "gamma_norms": list(r.gamma_norms),
            "pencil_margin": r.pencil_margin, "member": r.member,
            "strict_member": r.strict_member, "pencil_member": r.pencil_member}


def cmd_agler_class(args, rep):
    spec = _load_domain(args.domain)
    T = io.matrix_from_json(io.load_json(args.matrix))
    r = agler.in_class(spec, T)
    verdict = "strict member" if r.strict_member else "member" if r.member else "not a member"
    rep.emit(f"{verdict}; gamma norms {[round(g, 12) for g in r.gamma_norms]}, "
             f"pencil margin {r.pencil_margin:.6g}", _report_json(r))
    return EXIT_OK if r.member else EXIT_FAIL


def cmd_agler_perturb(args, rep):
    spec = _load_domain(args.domain)
    T = io.matrix_from_json(io.load_json(args.matrix))
    p = _complex(args.p) if args.p else None
    Te = agler.perturb_interior(spec, T, args.eps, args.mode, p)
    r = agler.in_class(spec, Te)
    if args.out:
        _write(args.out, io.dump_json(io.matrix_to_json(Te)) + "\n")
    dist = spectral_norm(Te - T)
    rep.emit(f"||T_eps - T|| = {dist:.6g}; pencil margin {r.pencil_margin:.6g}; "
             f"strict member: {r.strict_member}",
             {"distance": dist, "report": _report_json(r), "T_eps": Te})
    return EXIT_OK if r.strict_member else EXIT_FAIL


# realize --------------------------------------------------------------------

def cmd_realize_eval(args, rep):
    spec = _load_domain(args.domain)
    c = io.colligation_from_json(io.load_json(args.colligation))
    if args.matrix:
        T = io.matrix_from_json(io.load_json(args.matrix))
        val = realize.eval_realization_operator(c, spec, T)
    else:
        if args.z is None:
            raise ValueError("give --z or --matrix")
        val = realize.eval_realization_scalar(c, spec, _complex(args.z))
    rep.emit(f"F = {np.array2string(val, precision=10)}\nnorm = {spectral_norm(val):.12g}",
             {"value": val, "norm": spectral_norm(val)})
    return EXIT_OK


def cmd_realize_verify(args, rep):
    spec = _load_domain(args.domain)
    c = io.colligation_from_json(io.load_json(args.colligation))
    T = io.matrix_from_json(io.load_json(args.matrix))
    g = realize.gain_bound_check(c, spec, T)
    res = realize.defect_identity_residual(c, spec, T)
    lhs_n = spectral_norm(realize.eval_realization_operator(c, spec, T))
    ok = g.passed and res <= 1e-8 * (1 + lhs_n ** 2)
    rep.emit(f"||F(T)|| = {g.lhs:.12g} <= gain {g.rhs:.12g}: {g.passed}\n"
             f"defect identity residual: {res:.3e}",
             {"lhs": g.lhs, "gain": g.rhs, "gain_pass": g.passed, "defect_residual": res,
              "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_realize_demo_sigma(args, rep):
    rng = np.random.default_rng(args.seed)
    c = realize.random_colligation(2, args.m, 1, 1, rng)
    u = series.LaurentPoly.from_dict({-1: 0.5, 0: 1.0, 2: -0.25j})
    rpt = realize.sigma_state_check(c, args.R, args.r, u, (-args.window, args.window))
    ok = rpt.state_residual <= 1e-8 and rpt.output_residual <= 1e-8
    ys = {k: rpt.y.coeff(k) for k in range(-args.window, args.window + 1)}
    lines = [f"y_{k} = {v.real:+.6e}{v.imag:+.6e}i" for k, v in ys.items()]
    lines.append(f"state recursion residual {rpt.state_residual:.3e}, "
                 f"output residual {rpt.output_residual:.3e}")
    rep.emit("\n".join(lines), {"y": {str(k): v for k, v in ys.items()},
                                "state_residual": rpt.state_residual,
                                "output_residual": rpt.output_residual, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


# bohr -----------------------------------------------------------------------

def cmd_bohr_certify(args, rep):
    D = _parse_D(args)
    cert = bohr.k2_certificate(D, bohr.parse_rational(args.rho), args.deg)
    obj = cert.to_json()
    if args.out:
        _write(args.out, io.dump_json(obj) + "\n")
    rep.emit(f"S = {float(cert.S):.12f} at rho = {obj['rho']}, deg {cert.deg}: "
             f"{'certified' if cert.certified else 'not certified'} ({cert.seconds:.3f} s)", obj)
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_bohr_improve(args, rep):
    seed = bohr.REFERENCE_D if args.reference_D or args.D is None else _parse_D(args)
    res = bohr.k2_improve(seed, args.budget, args.deg, bohr.parse_rational(args.step))
    obj = {**res.certificate.to_json(), "seed_rho": bohr.format_rational(res.seed_certificate.rho),
           "improved": res.improved, "evaluations": res.evaluations}
    if args.out:
        _write(args.out, io.dump_json(obj) + "\n")
    rep.emit(f"best certified rho = {obj['rho']} (seed {obj['seed_rho']}); "
             f"certified: {res.certificate.certified}", obj)
    return EXIT_OK if res.certificate.certified else EXIT_FAIL


def cmd_bohr_chain(args, rep):
    f = _load_function(args.laurent)
    if not isinstance(f, series.LaurentPoly):
        raise ValueError("the chain check needs a Laurent polynomial file")
    T = io.matrix_from_json(io.load_json(args.matrix))
    r = bohr.banach_chain_check(f, T, args.rho, args.R, args.r, args.k2)
    rep.emit(f"||f(T)|| = {r.lhs:.12g} <= {r.middle:.12g}"
             + (f" <= {r.rhs:.12g}" if r.weights_apply else " (weighted bound not applicable)")
             + f": {r.passed}",
             {"lhs": r.lhs, "middle": r.middle, "rhs": r.rhs, "weights_apply": r.weights_apply,
              "pass": r.passed, "psi_upper": r.psi_upper})
    return EXIT_OK if r.passed else EXIT_FAIL


# demo -----------------------------------------------------------------------

def cmd_demo_kl(args, rep):
    w = agler.witness_kl(args.k, args.l, args.r)
    M = w.M
    FM = np.linalg.matrix_power(M, args.k) + np.linalg.matrix_power(np.linalg.inv(M), args.l)
    nFM = spectral_norm(FM)
    target = 1 + args.r ** -args.l
    spec = domain.annulus(1.0, args.r)
    F = series.LaurentPoly.from_dict({args.k: 1.0, -args.l: 1.0})
    lb = agler.agler_lower_bound(F, spec, samples=args.samples, seed=args.seed)
    ub = agler.quotient_upper_bound(F, spec)
    ok = abs(nFM - target) <= 1e-9 and abs(lb.bound - ub.bound) <= 1e-8
    rep.emit(f"||M|| = {spectral_norm(M):.12g}, ||M^-1|| = {spectral_norm(np.linalg.inv(M)):.12g}\n"
             f"||F(M)|| = {nFM:.12g} (1 + r^-l = {target:.12g})\n"
             f"lower bound {lb.bound:.12g}, upper bound {ub.bound:.12g}",
             {"norm_M": spectral_norm(M), "norm_Minv": spectral_norm(np.linalg.inv(M)),
              "norm_FM": nFM, "predicted": w.predicted, "lower": lb.bound, "upper": ub.bound,
              "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    p = argparse.ArgumentParser(prog="multidisk", parents=[common],
                                description="Realizations, operator classes and Bohr certificates "
                                            "for intersections of disks.")
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent, name, fn, help_):
        q = parent.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    d = sub.add_parser("domain", help="domain files").add_subparsers(dest="action", required=True)
    q = leaf(d, "validate", cmd_domain_validate, "check a domain file")
    q.add_argument("file")
    q = leaf(d, "check", cmd_domain_check, "print the scaled check domain")
    q.add_argument("file")
    q.add_argument("--out")
    q = leaf(d, "plot", cmd_domain_plot, "boundary figure")
    q.add_argument("file")
    q.add_argument("--out")
    q.add_argument("--format", choices=["svg", "csv"], default="svg")
    q.add_argument("--check", action="store_true", help="plot the check domain instead")
    q.add_argument("--n", type=int, default=256, help="samples per component")

    q = sub.add_parser("lift", parents=[common], help="polydisk lift of a function")
    q.set_defaults(fn=cmd_lift)
    q.add_argument("--domain", required=True)
    q.add_argument("--function", required=True)
    q.add_argument("--grid", type=int)

    a = sub.add_parser("agler", help="operator classes and norm bounds").add_subparsers(
        dest="action", required=True)
    q = leaf(a, "lower", cmd_agler_lower, "sampled lower bound")
    q.add_argument("--domain", required=True)
    q.add_argument("--function", required=True)
    q.add_argument("--samples", type=int, default=20)
    q.add_argument("--dims")
    q.add_argument("--seed", type=int, default=0)
    q = leaf(a, "upper", cmd_agler_upper, "lift-based upper bound")
    q.add_argument("--domain", required=True)
    q.add_argument("--function", required=True)
    q.add_argument("--grid", type=int)
    q = leaf(a, "class", cmd_agler_class, "class membership of a matrix")
    q.add_argument("--domain", required=True)
    q.add_argument("--matrix", required=True)
    q = leaf(a, "perturb", cmd_agler_perturb, "push a member into the strict class")
    q.add_argument("--domain", required=True)
    q.add_argument("--matrix", required=True)
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--mode", choices=["convex", "multihole", "decentered"], default="convex")
    q.add_argument("--p", help="interior point 're,im' for convex mode")
    q.add_argument("--out")

    r = sub.add_parser("realize", help="colligation realizations").add_subparsers(
        dest="action", required=True)
    q = leaf(r, "eval", cmd_realize_eval, "evaluate at a point or matrix")
    q.add_argument("--domain", required=True)
    q.add_argument("--colligation", required=True)
    q.add_argument("--z")
    q.add_argument("--matrix")
    q = leaf(r, "verify", cmd_realize_verify, "gain bound and defect identity")
    q.add_argument("--domain", required=True)
    q.add_argument("--colligation", required=True)
    q.add_argument("--matrix", required=True)
    q = leaf(r, "demo-sigma", cmd_realize_demo_sigma, "difference-system demo on an annulus")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--m", type=int, default=2)
    q.add_argument("--R", type=float, default=1.0)
    q.add_argument("--r", type=float, default=0.5)
    q.add_argument("--window", type=int, default=4)

    b = sub.add_parser("bohr", help="Bohr-radius certificates").add_subparsers(
        dest="action", required=True)
    for name, fn in (("certify-k2", cmd_bohr_certify), ("improve-k2", cmd_bohr_improve)):
        q = leaf(b, name, fn, "exact bidisk certificate" if fn is cmd_bohr_certify
                 else "search for a smaller certified radius")
        q.add_argument("--paper-D", action="store_true", dest="reference_D",
                       help="use the built-in reference matrix")
        q.add_argument("--D", help="'d11,d12;d21,d22' with exact decimals or p/q")
        q.add_argument("--deg", type=int, default=12)
        q.add_argument("--out")
    b.choices["certify-k2"].add_argument("--rho", default="3177/10000")
    b.choices["improve-k2"].add_argument("--budget", type=int, default=200)
    b.choices["improve-k2"].add_argument("--step", default="1/10000")
    q = leaf(b, "chain", cmd_bohr_chain, "Banach-algebra estimate chain")
    q.add_argument("--laurent", required=True)
    q.add_argument("--matrix", required=True)
    q.add_argument("--rho", type=float, required=True)
    q.add_argument("--R", type=float, default=1.0)
    q.add_argument("--r", type=float, default=0.5)
    q.add_argument("--k2", type=float, default=bohr.K2_LOWER)

    dm = sub.add_parser("demo", help="worked examples").add_subparsers(dest="action", required=True)
    q = leaf(dm, "kl", cmd_demo_kl, "extremal witness for z^k + z^-l")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--samples", type=int, default=5)
    q.add_argument("--seed", type=int, default=0)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    rep = _Reporter(getattr(args, "json", False))
    try:
        return args.fn(args, rep)
    except _OutputError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PreconditionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, PoleError, ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
