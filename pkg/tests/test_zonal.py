from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from codebounds.exact import psd_witness
from codebounds.orthopoly import DomainError, krawtchouk, qbinomial, weight_w
from codebounds.zonal import (HammingZonalFamily, SphereZonalFamily, hamming_E_entry, in_omega,
                              lp_containment_diagonal, omega_enumerate, space_size, sphere_multipoint_Y, sphere_Y,
                              stabilizer_sum, t_count, triple_T, triple_T_entry)
from oracles import brute_zonal_by_meet, distance_triples, hamming


def full_meet_value(n, q, k, i, j):
    """P_{k,i,j}(0) written out from the closed form (i <= j)."""
    X = space_size(n, q)
    h = qbinomial(n, k, q) - (qbinomial(n, k - 1, q) if k else 0)
    return (X * h * qbinomial(j - k, i - k, q) * qbinomial(n - 2 * k, j - k, q)
            / (qbinomial(n, j, q) * qbinomial(j, i, q)) * Fraction(q) ** (k * (j - k)))


# --- Hamming / projective E_k ----------------------------------------------------

def test_family_shape():
    fam = HammingZonalFamily(8, 1, 3)
    assert fam.size == 3 and list(fam.indices()) == [3, 4, 5]
    assert fam.h == comb(8, 3) - comb(8, 2)
    with pytest.raises(DomainError):
        HammingZonalFamily(5, 1, 3)


def test_entry_zero_clause():
    fam = HammingZonalFamily(6, 1, 1)
    assert hamming_E_entry(fam, 2, 3, 1, 3, 0) == 0
    assert hamming_E_entry(fam, 2, 3, 2, 4, 0) == 0
    with pytest.raises(DomainError):
        hamming_E_entry(fam, 0, 3, 0, 3, 0)


def test_entry_matches_brute_force_q1_n4_k1():
    fam = HammingZonalFamily(4, 1, 1)
    oracle = brute_zonal_by_meet(4, 1, 2, 2, q=1)
    assert sorted(oracle) == [0, 1, 2]
    for meet, v in oracle.items():
        assert hamming_E_entry(fam, 2, 2, 2, 2, meet) == v


@pytest.mark.parametrize("n,q", [(3, 1), (4, 1), (5, 1), (3, 2), (4, 2)])
def test_entry_matches_brute_force_all_levels(n, q):
    for k in range(n // 2 + 1):
        fam = HammingZonalFamily(n, q, k)
        for i in range(k, n - k + 1):
            for j in range(k, n - k + 1):
                oracle = brute_zonal_by_meet(n, k, i, j, q)
                for meet, v in oracle.items():
                    assert hamming_E_entry(fam, i, j, i, j, meet) == v, (n, q, k, i, j, meet)


@pytest.mark.parametrize("q", [1, 2])
def test_value_at_full_meet(q):
    for n in range(1, 7):
        for k in range(n // 2 + 1):
            fam = HammingZonalFamily(n, q, k)
            for i in range(k, n - k + 1):
                for j in range(i, n - k + 1):
                    assert hamming_E_entry(fam, i, j, i, j, i) == full_meet_value(n, q, k, i, j)


@pytest.mark.parametrize("q", [1, 2])
def test_zonal_orthogonality(q):
    for n in range(1, 7):
        X = space_size(n, q)
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
                            want = (X**2 * fk.h * qbinomial(n - 2 * k, i - k, q) * qbinomial(n - 2 * k, j - k, q)
                                    * Fraction(q) ** (k * (i + j - 2 * k)) / qbinomial(n, i, q))
                        assert s == want, (n, q, i, j, k, l)


def test_symmetry_i_greater_than_j():
    fam = HammingZonalFamily(6, 1, 1)
    for i, j in product(range(1, 6), repeat=2):
        for meet in range(min(i, j) + 1):
            assert hamming_E_entry(fam, i, j, i, j, meet) == hamming_E_entry(fam, j, i, j, i, meet)


@given(st.integers(2, 7), st.data())
def test_hamming_psd_aggregation(n, data):
    """sum over (c, c') in C^2 of E_k(c - z, c' - z) is PSD for every z."""
    C = data.draw(st.sets(st.integers(0, 2**n - 1), min_size=1, max_size=10))
    z = data.draw(st.integers(0, 2**n - 1))
    k = data.draw(st.integers(0, n // 2))
    fam = HammingZonalFamily(n, 1, k)
    M = [[Fraction(0)] * fam.size for _ in range(fam.size)]
    for c, d in product(C, repeat=2):
        u, v = c ^ z, d ^ z
        i, j = u.bit_count(), v.bit_count()
        if k <= i <= n - k and k <= j <= n - k:
            M[i - k][j - k] += hamming_E_entry(fam, i, j, i, j, (u & v).bit_count())
    assert psd_witness(M)[0]


# --- triples --------------------------------------------------------------------------

def test_omega_matches_brute_force():
    for n in range(1, 5):
        assert set(omega_enumerate(n)) == distance_triples(n)
    assert omega_enumerate(1) == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert in_omega(2, 1, 1, 2) and not in_omega(5, 1, 1, 1)


def test_t_count_examples_and_brute_force():
    assert t_count(4, 0, 0, 0) == 1
    assert t_count(4, 1, 1, 2) == 2
    for n in range(1, 6):
        for (a, b, c) in omega_enumerate(n):
            x, y = 0, (1 << c) - 1
            brute = sum(1 for z in range(2**n) if hamming(y, z) == a and hamming(x, z) == b)
            assert t_count(n, a, b, c) == brute
        for c in range(n + 1):
            assert sum(t_count(n, a, b, c) for (a, b, cc) in omega_enumerate(n) if cc == c) == 2**n


def test_t_count_rejects_non_triple():
    with pytest.raises(DomainError):
        t_count(4, 1, 1, 1)


def test_triple_T_structure():
    fam0 = HammingZonalFamily(4, 1, 0)
    T = triple_T(fam0, 0, 0, 0)
    assert T[0][0] == hamming_E_entry(fam0, 0, 0, 0, 0, 0)
    assert sum(v != 0 for row in T for v in row) == 1
    fam1 = HammingZonalFamily(4, 1, 1)
    assert all(v == 0 for row in triple_T(fam1, 0, 0, 0) for v in row)
    oracle = brute_zonal_by_meet(4, 1, 2, 2)
    for c, meet in ((2, 1), (0, 2), (4, 0)):
        T = triple_T(fam1, 2, 2, c)
        assert T[1][1] == oracle[meet]
        assert all(v == 0 for r, row in enumerate(T) for col, v in enumerate(row) if (r, col) != (1, 1))


def test_triple_T_transpose_symmetry():
    fam = HammingZonalFamily(6, 1, 1)
    for (a, b, c) in omega_enumerate(6):
        e1, e2 = triple_T_entry(fam, a, b, c), triple_T_entry(fam, b, a, c)
        if e1 is None:
            assert e2 is None
            continue
        (r, col), v = e1
        assert e2 == ((col, r), v)


# --- LP containment -----------------------------------------------------------------------

def test_stabilizer_sum_not_literally_diagonal():
    B = stabilizer_sum(5, 0, 1)
    assert any(B[i][j] != 0 for i in range(len(B)) for j in range(len(B)) if i != j)


@pytest.mark.parametrize("n", range(1, 9))
def test_lp_containment_diagonalizes(n):
    for k in range(n // 2 + 1):
        A, lams, diags = lp_containment_diagonal(n, k)
        assert all(isinstance(l, Fraction) and l > 0 for l in lams)
        for d in range(n + 1):
            assert diags[d] == [lams[a] * krawtchouk(n, 2, a + k)(d) for a in range(len(lams))]


# --- sphere ------------------------------------------------------------------------------

def _random_points(rng, n, m):
    x = rng.normal(size=(m, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _block_gram(fam, pts, e):
    m, s = len(pts), fam.size
    M = np.zeros((m * s, m * s))
    for a in range(m):
        for b in range(m):
            u, v, t = pts[a] @ e, pts[b] @ e, pts[a] @ pts[b]
            M[a * s:(a + 1) * s, b * s:(b + 1) * s] = sphere_Y(fam, float(np.clip(u, -1, 1)),
                                                            float(np.clip(v, -1, 1)), float(np.clip(t, -1, 1)))
    return M


@pytest.mark.parametrize("n", [3, 4, 8])
def test_sphere_psd_sampling(n):
    rng = np.random.default_rng(n)
    e = np.zeros(n)
    e[0] = 1.0
    for k in range(4):
        fam = SphereZonalFamily(n, k, 5)
        for _ in range(20):
            pts = _random_points(rng, n, int(rng.integers(1, 9)))
            M = _block_gram(fam, pts, e)
            assert np.linalg.eigvalsh(M).min() >= -1e-9 * max(np.abs(M).max(), 1.0)


def test_sphere_Y_examples():
    Y0 = sphere_Y(SphereZonalFamily(4, 0, 3), 0.3, -0.2, 0.1)
    from codebounds.orthopoly import gegenbauer_family
    P = gegenbauer_family(4, 3)
    want = np.outer([p.eval_float(0.3) for p in P], [p.eval_float(-0.2) for p in P])
    assert np.allclose(Y0, want, atol=1e-14)
    Y = sphere_Y(SphereZonalFamily(4, 1, 3), 0.0, 0.0, 0.5)
    assert abs(Y[1, 1]) < 1e-15
    # x = y: a rank-one PSD matrix
    Y = sphere_Y(SphereZonalFamily(5, 2, 5), 0.4, 0.4, 1.0)
    w = np.linalg.eigvalsh(Y)
    assert w.min() > -1e-12 and np.sum(w > 1e-12) == 1


def test_sphere_Y_boundary_and_domain():
    fam = SphereZonalFamily(4, 2, 4)
    assert np.all(sphere_Y(fam, 1.0, 0.3, 0.3) == 0)
    with pytest.raises(DomainError):
        sphere_Y(fam, 0.9, -0.9, 0.9)


@pytest.mark.parametrize("s", [1, 2])
def test_multipoint_psd_sampling(s):
    rng = np.random.default_rng(10 + s)
    n = 6
    for k in range(3):
        for _ in range(10):
            pts = _random_points(rng, n, int(rng.integers(1, 7)))
            m = len(pts)
            blocks = [[sphere_multipoint_Y(n, s, k, 4, pts[a][:s], pts[b][:s], float(pts[a] @ pts[b]))
                       for b in range(m)] for a in range(m)]
            M = np.block(blocks)
            assert np.linalg.eigvalsh(M).min() >= -1e-9 * max(np.abs(M).max(), 1.0)


def test_multipoint_constant_entry():
    Y = sphere_multipoint_Y(5, 2, 0, 2, [0.1, 0.2], [0.3, -0.1], 0.05)
    assert Y[0, 0] == pytest.approx(1.0)
