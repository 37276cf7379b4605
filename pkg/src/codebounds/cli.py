"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import certlib
from .orthopoly import DomainError

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3


class SolverFailure(RuntimeError):
    pass


class VerificationFailure(RuntimeError):
    pass


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def report_schema() -> dict:
    return json.loads(resources.files("codebounds").joinpath("data/run_report.schema.json").read_text())


def _bound_entry(method, value, exact, tolerance, provenance) -> dict:
    v = Fraction(value)
    return {"method": method, "value": certlib.qstr(v), "value_float": float(v), "exact": exact,
            "tolerance": float(tolerance), "provenance": provenance}


def _write_report(path, command, params, bounds, t0, diagnostics, cert_path=None):
    report = {"command": command, "parameters": params, "bounds": bounds,
              "timing": {"seconds": time.perf_counter() - t0},
              "diagnostics": diagnostics, "certificate": str(cert_path) if cert_path else None}
    Path(path).write_text(json.dumps(report, indent=2, default=str) + "\n")
    return report


def _cert_path(report_path) -> Path:
    p = Path(report_path)
    return p.with_name(p.stem + ".cert.json")


# --- poly ---------------------------------------------------------------------

def cmd_poly(a) -> int:
    from .orthopoly import gegenbauer, hahn_johnson, krawtchouk, qhahn, qhahn_eval

    if a.family == "krawtchouk":
        p = krawtchouk(a.n, a.q, a.k)
        ev = (lambda x: p(x))
    elif a.family == "gegenbauer":
        p = gegenbauer(a.n, a.k)
        ev = (lambda x: p(x))
    elif a.family == "hahn" and a.w is not None:
        # Johnson-space family Q_k, variable ranging over 0..min(w, n-w)
        p = hahn_johnson(a.n, a.w, a.k)
        ev = (lambda x: p(x))
    else:
        if a.i is None or a.j is None:
            raise DomainError(f"{a.family} needs --i and --j" + (" (or --w)" if a.family == "hahn" else ""))
        q = 1 if a.family == "hahn" else a.q
        p = qhahn(a.n, q, a.i, a.j, a.k)
        ev = (lambda x: qhahn_eval(p, int(x), q))
    if a.eval is not None:
        print(certlib.qstr(ev(a.eval)))
    if a.coeffs or a.eval is None:
        print(" ".join(certlib.qstr(c) for c in p.coeffs) or "0")
    return EXIT_OK


# --- bound ----------------------------------------------------------------------

def cmd_bound_lp(a) -> int:
    from .delsarte import SpaceSpec, lp_bound

    t0 = time.perf_counter()
    if a.space == "hamming":
        space = SpaceSpec.hamming(a.n, _need(a.delta, "--delta"), a.q)
    elif a.space == "johnson":
        space = SpaceSpec.johnson(a.n, _need(a.w, "--w"), _need(a.delta, "--delta"))
    else:
        space = SpaceSpec.sphere(a.n, _need(a.max_cos, "--max-cos"))
    try:
        res = lp_bound(space, a.degree)
    except ArithmeticError as exc:
        raise SolverFailure(str(exc)) from None
    doc = certlib.lp_document(res.certificate, {"method": "delsarte-lp"})
    verdict = certlib.verify(doc)
    if not verdict.valid:
        raise VerificationFailure(verdict.reason)
    print(f"bound {_show(res.value)} (~{float(res.value):.10g}, floor {res.floor()})")
    if a.json:
        cp = doc.write(_cert_path(a.json))
        _write_report(a.json, "bound lp " + a.space, {"space": space.to_json(), "degree": a.degree},
                      [_bound_entry("delsarte-lp", res.value, True, 0, "lp")], t0,
                      {k: v for k, v in res.diagnostics.items()}, cp)
    return EXIT_OK


def _show(v: Fraction) -> str:
    """Exact form when it is short, else a float."""
    return certlib.qstr(v) if v.denominator < 10**12 else f"{float(v):.12g} (exact rational in the certificate)"


def _need(v, flag):
    if v is None:
        raise DomainError(f"missing {flag}")
    return v


def cmd_bound_sdp(a) -> int:
    from .delsarte import SpaceSpec, lp_bound
    from .schrijver import build_schrijver, rationalize_dual, bound_from_rational_dual, solve_sdp
    from .solvers.sdp import export_sdpa

    t0 = time.perf_counter()
    if a.delta < 1 or a.n < 1:
        raise DomainError("need n >= 1 and delta >= 1")
    prob = build_schrijver(a.n, a.delta)
    if a.emit_sdpa:
        export_sdpa(prob.sdp, a.emit_sdpa)
    sol = solve_sdp(prob.sdp, tol=a.tol)
    Yq = rationalize_dual(prob.sdp, sol.Y) if sol.Y else None
    if Yq is None:
        raise SolverFailure(f"no usable dual from the solver (status {sol.status})")
    rb = bound_from_rational_dual(prob.sdp, Yq, prob.upper)
    doc = certlib.schrijver_document(a.n, a.delta, Yq, rb.value, {"solver_status": sol.status})
    lp = lp_bound(SpaceSpec.hamming(a.n, a.delta))
    print(f"solver {sol.status}: value {sol.primal_value:.10g} (dual {sol.dual_value:.10g})")
    print(f"certified bound {float(rb.value):.10g}, floor {rb.floor}; Delsarte LP {float(lp.value):.10g}")
    if a.json:
        cp = doc.write(_cert_path(a.json))
        _write_report(a.json, "bound sdp schrijver", {"n": a.n, "delta": a.delta, "tol": a.tol},
                      [_bound_entry("schrijver-sdp-rounded", rb.value, True, 0, "sdp"),
                       _bound_entry("schrijver-sdp-float", Fraction(sol.primal_value), False, a.tol, "sdp"),
                       _bound_entry("delsarte-lp", lp.value, True, 0, "lp")],
                      t0, {"status": sol.status, "iterations": sol.iterations, "gap": sol.gap,
                           "pinf": sol.pinf, "dinf": sol.dinf,
                           "residual_margin": float(rb.residual_margin),
                           "variables": prob.sdp.m, "blocks": prob.sdp.block_sizes}, cp)
    return EXIT_OK


# --- theta ------------------------------------------------------------------------

def cmd_theta(a) -> int:
    from .theta import Graph, code_graph, theta, theta_cycle_closed_form

    if a.source == "graph":
        g = Graph.read(a.path)
    elif a.source == "cycle":
        g = Graph.cycle(a.q)
    else:
        from .delsarte import SpaceSpec, lp_bound

        space = SpaceSpec.hamming(a.n, a.delta, a.alphabet)
        g = code_graph(space, a.delta)
        if g.n > 16:
            if a.variant != "theta-prime":
                raise DomainError("code graphs above 16 vertices: only theta-prime, via the Delsarte LP")
            res = lp_bound(space)
            print(f"theta-prime {certlib.qstr(res.value)} (~{float(res.value):.10g}) via the Delsarte LP")
            return EXIT_OK
    r = theta(g, a.variant)
    if r.upper is None:
        raise SolverFailure(f"could not certify the solver output (status {r.solution.status})")
    print(f"{a.variant} {r.value:.10g} (certified <= {float(r.upper):.10g})")
    if a.source == "cycle":
        print(f"closed form {theta_cycle_closed_form(a.q):.10g}")
    return EXIT_OK


# --- verify / reproduce -------------------------------------------------------------

def cmd_verify(a) -> int:
    doc = certlib.load(a.path)
    v = certlib.verify(doc)
    if not v.valid:
        print(f"INVALID {v.reason}")
        return EXIT_VERIFY
    print(f"VALID bound={certlib.qstr(v.bound)}")
    return EXIT_OK


def cmd_reproduce(a) -> int:
    return {"kissing8": _repro_kissing, "pentagon": _repro_pentagon,
            "mcwilliams-demo": _repro_mcwilliams}[a.recipe]()


def _repro_kissing() -> int:
    from .delsarte import LpCertificate, SpaceSpec, verify_certificate
    from .orthopoly import FamilyParams, expand_in_family
    from .poly import Poly

    h = Fraction(1, 2)
    F = Poly.from_roots([h, 0, 0, -h, -h, -1], Fraction(320, 3))
    coeffs = expand_in_family(F, FamilyParams("gegenbauer", 8, normalization="jacobi"))
    print("F(t) = (320/3)(t-1/2) t^2 (t+1/2)^2 (t+1)")
    print("Gegenbauer coefficients:", ", ".join(certlib.qstr(c) for c in coeffs))
    v = verify_certificate(LpCertificate(SpaceSpec.sphere(8, h), coeffs, None, "jacobi"))
    if not v.valid:
        print(f"INVALID {v.reason}")
        return EXIT_VERIFY
    print(f"bound={certlib.qstr(v.bound)}")
    return EXIT_OK if v.bound == 240 else EXIT_VERIFY


def _repro_pentagon() -> int:
    from .theta import Graph, alpha_exhaustive, theta, theta_cycle_closed_form, theta_cycle_symmetrized_lp

    g = Graph.cycle(5)
    r = theta(g)
    _, lpv = theta_cycle_symmetrized_lp(5)
    print(f"theta SDP       {r.value:.12f}")
    print(f"symmetrized LP  {lpv:.12f}")
    print(f"closed form     {theta_cycle_closed_form(5):.12f}")
    print(f"sqrt(5)         {math.sqrt(5):.12f}")
    print(f"alpha           {alpha_exhaustive(g).value}")
    v = certlib.verify(certlib.pentagon_document())
    print(("VALID" if v.valid else "INVALID") + f" rational dual certificate: theta <= {float(v.bound):.10f}")
    return EXIT_OK if v.valid and abs(r.value - math.sqrt(5)) <= 1e-6 else EXIT_VERIFY


def _repro_mcwilliams() -> int:
    from .orthopoly import krawtchouk

    # [7,4] Hamming code; its dual is the [7,3] simplex code
    G = [0b1000110, 0b0100101, 0b0010011, 0b0001111]
    code = {0}
    for g in G:
        code |= {c ^ g for c in code}
    dual = [v for v in range(2**7) if all((v & c).bit_count() % 2 == 0 for c in code)]
    A = [sum(1 for c in code if c.bit_count() == w) for w in range(8)]
    B = [sum(1 for c in dual if c.bit_count() == w) for w in range(8)]
    T = [sum(Fraction(A[i]) * krawtchouk(7, 2, k)(i) for i in range(8)) / len(code) for k in range(8)]
    print("weight distribution A:", A)
    print("Krawtchouk transform: ", [certlib.qstr(t) for t in T])
    print("dual distribution B:  ", B)
    ok = T == [Fraction(b) for b in B]
    print("MacWilliams identity holds" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_VERIFY


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codebounds", description="LP/SDP upper bounds for codes")
    sub = ap.add_subparsers(dest="cmd", required=True)

    pp = sub.add_parser("poly", help="orthogonal polynomials")
    pp.add_argument("family", choices=["krawtchouk", "hahn", "qhahn", "gegenbauer"])
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--q", type=int, default=2)
    pp.add_argument("--k", type=int, required=True)
    pp.add_argument("--i", type=int)
    pp.add_argument("--j", type=int)
    pp.add_argument("--w", type=int, help="hahn only: Johnson-space family J(n, w)")
    pp.add_argument("--eval", type=_rational)
    pp.add_argument("--coeffs", action="store_true", help="print power-basis coefficients")
    pp.set_defaults(func=cmd_poly)

    bp = sub.add_parser("bound", help="code size bounds")
    bsub = bp.add_subparsers(dest="method", required=True)
    lp = bsub.add_parser("lp")
    lp.add_argument("space", choices=["hamming", "johnson", "sphere"])
    lp.add_argument("--n", type=int, required=True)
    lp.add_argument("--q", type=int, default=2)
    lp.add_argument("--w", type=int)
    lp.add_argument("--delta", type=int)
    lp.add_argument("--max-cos", type=_rational)
    lp.add_argument("--degree", type=int)
    lp.add_argument("--json")
    lp.set_defaults(func=cmd_bound_lp)
    sdp = bsub.add_parser("sdp")
    sdp.add_argument("program", choices=["schrijver"])
    sdp.add_argument("--n", type=int, required=True)
    sdp.add_argument("--delta", type=int, required=True)
    sdp.add_argument("--tol", type=float, default=1e-8)
    sdp.add_argument("--emit-sdpa")
    sdp.add_argument("--json")
    sdp.set_defaults(func=cmd_bound_sdp)

    tp = sub.add_parser("theta", help="Lovasz theta")
    tsub = tp.add_subparsers(dest="source", required=True)
    tg = tsub.add_parser("graph")
    tg.add_argument("path")
    tc = tsub.add_parser("cycle")
    tc.add_argument("--q", type=int, required=True)
    tcode = tsub.add_parser("code")
    tcode.add_argument("--n", type=int, required=True)
    tcode.add_argument("--delta", type=int, required=True)
    tcode.add_argument("--alphabet", type=int, default=2)
    for t in (tg, tc, tcode):
        t.add_argument("--variant", choices=["theta", "theta-prime"], default="theta")
        t.set_defaults(func=cmd_theta)

    vp = sub.add_parser("verify", help="check a certificate")
    vsub = vp.add_subparsers(dest="what", required=True)
    vc = vsub.add_parser("cert")
    vc.add_argument("path")
    vc.set_defaults(func=cmd_verify)

    rp = sub.add_parser("reproduce", help="worked examples")
    rp.add_argument("recipe", choices=["kissing8", "pentagon", "mcwilliams-demo"])
    rp.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return a.func(a)
    except (DomainError, certlib.CertificateParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (SolverFailure, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
