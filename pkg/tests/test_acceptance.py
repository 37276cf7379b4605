"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly as a
script.
"""
import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from codebounds.delsarte import LpCertificate, SpaceSpec, lp_bound, verify_certificate
from codebounds.orthopoly import FamilyParams, expand_in_family, krawtchouk, weight_w
from codebounds.poly import Poly
from codebounds.schrijver import (build_schrijver, check_assembled, check_conditions, code_to_feasible_point,
                                  schrijver_bound)
from codebounds.solvers import export_sdpa, ipm_solve, read_sdpa
from codebounds.theta import Graph, max_code_size, theta, theta_cycle_closed_form, theta_cycle_symmetrized_lp
from codebounds.zonal import (HammingZonalFamily, SphereZonalFamily, hamming_E_entry, lp_containment_diagonal,
                              space_size, sphere_Y)
from conftest import ACCEPTANCE_LINES
from oracles import brute_zonal_by_meet, dual_code, span, weight_distribution
from test_zonal import full_meet_value


def report(num, ok, detail, seconds, limit=None):
    timing = f"{seconds:.2f}s" + (f" (limit {limit}s)" if limit else "")
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail} [{timing}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    if limit:
        assert seconds < limit, line


def test_criterion_1_kissing_certificate():
    t0 = time.perf_counter()
    h = F(1, 2)
    poly = Poly.from_roots([h, 0, 0, -h, -h, -1], F(320, 3))
    coeffs = expand_in_family(poly, FamilyParams("gegenbauer", 8, normalization="jacobi"))
    want = [F(1), F(16, 7), F(200, 63), F(832, 231), F(1216, 429), F(5120, 3003), F(2560, 4641)]
    v = verify_certificate(LpCertificate(SpaceSpec.sphere(8, h), coeffs, None, "jacobi"))
    ok = coeffs == want and v.valid and v.bound == 240
    report(1, ok, f"coefficients exact, bound = {v.bound}", time.perf_counter() - t0, 1)


def test_criterion_2_theta_cycles():
    t0 = time.perf_counter()
    worst, worst_lp = 0.0, 0.0
    for q in range(3, 13):
        worst = max(worst, abs(theta(Graph.cycle(q)).value - theta_cycle_closed_form(q)))
        worst_lp = max(worst_lp, abs(theta_cycle_symmetrized_lp(q)[1] - theta_cycle_closed_form(q)))
    pent = abs(theta(Graph.cycle(5)).value - math.sqrt(5))
    ok = worst <= 1e-5 and pent <= 1e-6 and worst_lp <= 1e-12
    report(2, ok, f"max SDP error {worst:.2e} (tol 1e-5), C5 error {pent:.2e} (tol 1e-6), "
                  f"LP error {worst_lp:.2e} (tol 1e-12)", time.perf_counter() - t0, 30)


def test_criterion_3_krawtchouk_orthogonality():
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3, 4):
        for n in range(25):
            w = [math.comb(n, x) * (q - 1) ** x for x in range(n + 1)]
            vals = []
            for k in range(n + 1):
                p = krawtchouk(n, q, k)
                vals.append([p(x) for x in range(n + 1)])
            for k in range(n + 1):
                for l in range(k, n + 1):
                    s = sum(wx * a * b for wx, a, b in zip(w, vals[k], vals[l]))
                    want = q**n * math.comb(n, k) * (q - 1) ** k if k == l else 0
                    if s != want:
                        bad.append((q, n, k, l))
    report(3, not bad, f"exact for n <= 24, q in {{2,3,4}}; {len(bad)} failures", time.perf_counter() - t0, 30)


def test_criterion_4_qhahn_structure():
    from codebounds.orthopoly import qbinomial
    t0 = time.perf_counter()
    bad = 0
    for q in (1, 2):
        for n in range(1, 7):
            X = space_size(n, q)
            for k in range(n // 2 + 1):
                fk = HammingZonalFamily(n, q, k)
                for i in range(k, n - k + 1):
                    for j in range(i, n - k + 1):
                        bad += hamming_E_entry(fk, i, j, i, j, i) != full_meet_value(n, q, k, i, j)
            for i in range(n + 1):
                for j in range(i, n + 1):
                    levels = [k for k in range(n // 2 + 1) if k <= i and j <= n - k]
                    for k in levels:
                        fk = HammingZonalFamily(n, q, k)
                        for l in levels:
                            fl = HammingZonalFamily(n, q, l)
                            s = sum(weight_w(n, q, i, j, u) * fk.P(i, j, u) * fl.P(i, j, u)
                                    for u in range(min(i, n - j) + 1))
                            want = 0
                            if k == l:
                                want = (X**2 * fk.h * qbinomial(n - 2 * k, i - k, q)
                                        * qbinomial(n - 2 * k, j - k, q)
                                        * F(q) ** (k * (i + j - 2 * k)) / qbinomial(n, i, q))
                            bad += s != want
    fam = HammingZonalFamily(4, 1, 1)
    oracle_ok = all(hamming_E_entry(fam, i, j, i, j, m) == v
                    for i in range(1, 4) for j in range(1, 4)
                    for m, v in brute_zonal_by_meet(4, 1, i, j, 1).items())
    report(4, bad == 0 and oracle_ok, f"value and orthogonality identities exact ({bad} failures); "
                                      f"brute-force oracle match {oracle_ok}", time.perf_counter() - t0)


def test_criterion_5_lp_containment():
    t0 = time.perf_counter()
    ok = True
    for n in range(1, 9):
        for k in range(n // 2 + 1):
            A, lams, diags = lp_containment_diagonal(n, k)
            ok &= all(l > 0 for l in lams)
            ok &= all(diags[d] == [lams[a] * krawtchouk(n, 2, a + k)(d) for a in range(len(lams))]
                      for d in range(n + 1))
    report(5, ok, "stabilizer sums diagonalize to lambda_i K_i(d), lambda_i > 0, exact for n <= 8",
           time.perf_counter() - t0)


def _random_code(n, delta, rng):
    words = list(range(2**n))
    rng.shuffle(words)
    C = []
    for w in words:
        if all((w ^ c).bit_count() >= delta for c in C):
            C.append(w)
    # random subsets of a good code are codes too
    return rng.sample(C, rng.randint(1, len(C)))


def test_criterion_6_triple_sdp_soundness():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    feas_bad, sandwich_bad, rows = [], [], []
    for n in range(3, 9):
        for delta in (3, 4):
            if delta > n:
                continue
            prob = build_schrijver(n, delta)
            for _ in range(5):
                C = _random_code(n, delta, rng)
                x = code_to_feasible_point(C, n)
                if check_conditions(x, n, delta) or check_assembled(prob, x):
                    feas_bad.append((n, delta, C))
            a = max_code_size(n, delta).value
            s = schrijver_bound(n, delta).rounded.floor
            lp = lp_bound(SpaceSpec.hamming(n, delta)).value
            rows.append(f"({n},{delta}) {a}<={s}<={float(lp):.4g}")
            if not (a <= s <= lp + F(1, 10**5)):
                sandwich_bad.append((n, delta, a, s, lp))
    ok = not feas_bad and not sandwich_bad
    report(6, ok, f"feasibility failures {len(feas_bad)}, sandwich failures {len(sandwich_bad)}: "
                  + ", ".join(rows), time.perf_counter() - t0, 300)


def test_criterion_7_sdpa_cross_check(tmp_path):
    t0 = time.perf_counter()
    prob = build_schrijver(6, 3)
    back = read_sdpa(export_sdpa(prob.sdp, tmp_path / "h6d3.dat-s"))
    same = back.same_data(prob.sdp)
    ours = ipm_solve(prob.sdp).primal_value
    try:
        from oracles import cvxpy_sdp_value
        status, val = cvxpy_sdp_value(back)
        ext = prob.sdp.user_value(val)
        ext_ok = status == "optimal" and abs(ext - ours) <= 1e-5
        ext_note = f"external solver {ext:.8f} vs in-house {ours:.8f}"
    except ImportError:
        ext_ok, ext_note = True, "external solver unavailable"
    report(7, same and ext_ok, f"round trip identical {same}; {ext_note}", time.perf_counter() - t0)


def test_criterion_8_macwilliams():
    t0 = time.perf_counter()
    rng = random.Random(8)
    bad = 0
    for _ in range(50):
        n = rng.randint(1, 10)
        gens = [rng.randrange(1, 2**n) for _ in range(rng.randint(1, n))]
        C = span(gens)
        A = weight_distribution(C, n)
        B = weight_distribution(dual_code(C, n), n)
        T = [sum(F(A[i]) * krawtchouk(n, 2, k)(i) for i in range(n + 1)) / len(C) for k in range(n + 1)]
        bad += T != [F(b) for b in B]
    report(8, bad == 0, f"50 random linear codes, {bad} mismatches", time.perf_counter() - t0)


def test_criterion_9_sphere_psd():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = math.inf
    for n in (3, 4, 8):
        e = np.zeros(n)
        e[0] = 1.0
        for k in range(4):
            fam = SphereZonalFamily(n, k, 5)
            s = fam.size
            for _ in range(20):
                m = int(rng.integers(1, 9))
                pts = rng.normal(size=(m, n))
                pts /= np.linalg.norm(pts, axis=1, keepdims=True)
                M = np.zeros((m * s, m * s))
                for a in range(m):
                    for b in range(m):
                        u, v, t = (float(np.clip(z, -1, 1)) for z in (pts[a] @ e, pts[b] @ e, pts[a] @ pts[b]))
                        M[a * s:(a + 1) * s, b * s:(b + 1) * s] = sphere_Y(fam, u, v, t)
                ratio = np.linalg.eigvalsh(M).min() / max(np.abs(M).max(), 1e-300)
                worst = min(worst, ratio)
    report(9, worst >= -1e-9, f"min eigenvalue / max entry = {worst:.2e} (tol -1e-9)", time.perf_counter() - t0)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
