import math
from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from codebounds.delsarte import (LpCertificate, SpaceSpec, build_lp, lp_bound, sos_interval_check,
                                 verify_certificate)
from codebounds.orthopoly import DomainError, krawtchouk
from codebounds.poly import Poly
from oracles import brute_max_code, lp_vertex_max


def _oracle_value(space):
    p = build_lp(space)
    rows = [r for r, _, _ in p.constraints] + [[F(1)] * len(p.variables)]
    rels = [rel for _, rel, _ in p.constraints] + ["<="]
    rhs = [b for _, _, b in p.constraints] + [F(2**space.n)]
    return 1 + lp_vertex_max(p.objective, rows, rels, rhs)


def test_two_antipodal_words():
    # only distance 5 allowed; odd-degree rows force x_5 <= 1
    assert lp_bound(SpaceSpec.hamming(5, 5)).value == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_delta_one_is_whole_space(n):
    assert lp_bound(SpaceSpec.hamming(n, 1)).value == 2**n


def test_delta_beyond_diameter():
    b = lp_bound(SpaceSpec.johnson(6, 2, 6))
    assert b.value == 1 and b.trivial


@pytest.mark.parametrize("n,delta", [(4, 2), (5, 2), (5, 3), (5, 4), (6, 3), (6, 4), (6, 5)])
def test_hamming_matches_vertex_enumeration(n, delta):
    space = SpaceSpec.hamming(n, delta)
    assert lp_bound(space).value == _oracle_value(space)


@pytest.mark.parametrize("n,w,delta", [(6, 3, 4), (7, 3, 4), (8, 4, 4), (8, 3, 4), (8, 4, 6)])
def test_johnson_matches_vertex_enumeration(n, w, delta):
    space = SpaceSpec.johnson(n, w, delta)
    assert lp_bound(space).value == _oracle_value(space)


def test_ternary_matches_vertex_enumeration():
    space = SpaceSpec.hamming(4, 3, q=3)
    p = build_lp(space)
    rows = [r for r, _, _ in p.constraints] + [[F(1)] * len(p.variables)]
    rels = [rel for _, rel, _ in p.constraints] + ["<="]
    rhs = [b for _, _, b in p.constraints] + [F(3**4)]
    assert lp_bound(space).value == 1 + lp_vertex_max(p.objective, rows, rels, rhs)


@pytest.mark.parametrize("n", range(2, 10))
def test_monotone_in_delta(n):
    vals = [lp_bound(SpaceSpec.hamming(n, d)).value for d in range(1, n + 1)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n", range(2, 7))
def test_sandwich_with_brute_force(n):
    for delta in range(1, n + 1):
        assert brute_max_code(n, delta) <= lp_bound(SpaceSpec.hamming(n, delta)).value


def _brute_constant_weight(n, w, delta):
    words = [sum(1 << i for i in c) for c in combinations(range(n), w)]
    best = 0

    def grow(chosen, cand):
        nonlocal best
        best = max(best, len(chosen))
        for k, x in enumerate(cand):
            if len(chosen) + len(cand) - k <= best:
                return
            grow(chosen + [x], [y for y in cand[k + 1:] if bin(x ^ y).count("1") >= delta])

    grow([], words)
    return best


@pytest.mark.parametrize("n,w,delta", [(6, 3, 4), (7, 3, 4), (6, 2, 4), (7, 2, 2)])
def test_johnson_sandwich(n, w, delta):
    assert _brute_constant_weight(n, w, delta) <= lp_bound(SpaceSpec.johnson(n, w, delta)).value


def test_certificate_roundtrip_and_checks():
    b = lp_bound(SpaceSpec.hamming(6, 3))
    cert = b.certificate
    v = verify_certificate(cert)
    assert v.valid and v.bound == b.value
    bad = LpCertificate(cert.space, [-c if k == 1 else c for k, c in enumerate(cert.coeffs)], None)
    if cert.coeffs[1] != 0:
        assert not verify_certificate(bad)
    assert not verify_certificate(LpCertificate(cert.space, [F(0)] + cert.coeffs[1:]))
    assert not verify_certificate(LpCertificate(cert.space, cert.coeffs, b.value + F(1, 10**6)))
    # F = 1 + K_1 is positive at distance 3 < n/2
    v = verify_certificate(LpCertificate(cert.space, [F(1), F(1)]))
    assert not v.valid and v.witness == 3


def test_degree_above_top_level_rejected():
    space = SpaceSpec.johnson(6, 2, 4)
    assert not verify_certificate(LpCertificate(space, [F(1)] * 4))
    with pytest.raises(DomainError):
        build_lp(space, degree_cap=5)


def test_bad_spaces():
    for args in [("hamming", 0), ("johnson", 6)]:
        with pytest.raises(DomainError):
            SpaceSpec(args[0], args[1], delta=3)
    with pytest.raises(DomainError):
        SpaceSpec.sphere(3, 1)


@given(st.integers(3, 9), st.data())
def test_certificate_polynomial_nonpositive(n, data):
    delta = data.draw(st.integers(1, n))
    b = lp_bound(SpaceSpec.hamming(n, delta))
    Fp = b.certificate.polynomial()
    assert Fp(0) == b.value
    for d in range(delta, n + 1):
        assert Fp(d) <= 0
    # and it really is the Krawtchouk expansion
    direct = sum((c * krawtchouk(n, 2, k)(delta) for k, c in enumerate(b.certificate.coeffs)), F(0))
    assert direct == Fp(delta)


# --- sphere ----------------------------------------------------------------------------

def test_e8_certificate():
    cert = LpCertificate(SpaceSpec.sphere(8, F(1, 2)),
                         [F(1), F(16, 7), F(200, 63), F(832, 231), F(1216, 429), F(5120, 3003), F(2560, 4641)],
                         F(240), "jacobi")
    v = verify_certificate(cert)
    assert v.valid and v.bound == 240
    want = Poly.from_roots([F(1, 2), 0, 0, F(-1, 2), F(-1, 2), -1], lead=F(320, 3))
    assert cert.polynomial() == want


@pytest.mark.parametrize("n,s,lower", [(2, F(1, 2), 6), (3, F(1, 2), 12), (4, F(1, 2), 24), (8, F(1, 2), 240)])
def test_sphere_bound_sound(n, s, lower):
    """Known configurations (hexagon, icosahedron, D4, E8 roots) sit below the bound."""
    b = lp_bound(SpaceSpec.sphere(n, s))
    assert b.value >= lower
    assert verify_certificate(b.certificate).valid
    Fp = b.certificate.polynomial()
    ts = np.linspace(-1, float(s), 2001)
    assert max(Fp.eval_float(t) for t in ts) <= 1e-12


def test_sphere_e8_is_nearly_tight():
    b = lp_bound(SpaceSpec.sphere(8, F(1, 2)))
    assert 240 <= b.value < 240 + F(1, 1000)
    assert math.floor(b.value) == 240


# --- SOS ------------------------------------------------------------------------------------

def _check_sos(F_, a, b):
    v = sos_interval_check(F_, a, b)
    assert v.status == "valid", v.reason
    assert v.certificate.total() == -F_
    assert all(d >= 0 for d, _ in v.certificate.squares + v.certificate.weighted)


def test_sos_constant():
    _check_sos(Poly([-1]), F(-1), F(1, 2))


def test_sos_endpoint_roots():
    _check_sos(Poly.from_roots([F(1, 2), -1]), F(-1), F(1, 2))


def test_sos_e8_polynomial():
    _check_sos(Poly.from_roots([F(1, 2), 0, 0, F(-1, 2), F(-1, 2), -1], lead=F(320, 3)), F(-1), F(1, 2))


def test_sos_rejects_positive():
    v = sos_interval_check(Poly([0, 1]), F(-1), F(1, 2))
    assert v.status == "invalid" and v.witness is not None and v.witness > 0
