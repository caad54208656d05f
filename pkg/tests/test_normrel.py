"""Tests for the local norm-relation plumbing."""

from fractions import Fraction as Q

import pytest

from gsp4verify import normrel as nr
from gsp4verify.padic import (HElt, LevelSpec, SchwartzFn, act_schwartz,
                              identity, in_level, mat, mat_inv, mat_mul)

# ------------------------------------------------------------- local data


@pytest.mark.parametrize("p", [2, 3, 5])
def test_good_entry(p):
    e = nr.make_local_data("good", p)
    assert e.role == "good"
    assert len(e.xi.terms) == 1
    assert e.phi[0].value_at(0, 0) == 1  # full lattice function


@pytest.mark.parametrize("p", [2, 3])
def test_tame_entry(p):
    e = nr.make_local_data("tame", p)
    coeffs = sorted(c for _, c in e.xi.terms)
    assert coeffs == [Q(-1), Q(1)]
    # test function is the depth-2 lattice pair, vanishing at 0
    assert e.phi[0].value_at(0, 0) == 0
    assert e.phi[0].value_at(p ** 2, 1 + p ** 2) == 1
    assert e.phi[0].value_at(p, 1) == 0


@pytest.mark.parametrize("pmn", [(2, 0, 1), (2, 1, 1), (3, 1, 1), (2, 1, 2)])
def test_wild_entry(pmn):
    p, m, n = pmn
    e = nr.make_local_data("wild", p, m=m, n=n)
    assert e.params["t"] == n + 2 * m
    assert e.phi[0].value_at(0, 0) == 0


def test_invalid_roles_and_params():
    with pytest.raises(ValueError):
        nr.make_local_data("mystery", 2)
    with pytest.raises(ValueError):
        nr.make_local_data("wild", 2, m=2, n=1)   # n < max(m, 1)
    with pytest.raises(ValueError):
        nr.make_local_data("good", 2, m=1)


def test_xi_equality_is_coset_aware():
    p = 3
    spec = LevelSpec("G")
    from gsp4verify.padic import root_unipotent
    g = root_unipotent(0, 1)
    a = nr.XiElt(p, spec, ((identity(4), Q(1)),))
    b = nr.XiElt(p, spec, ((g, Q(1)),))          # same coset of GSp4(Z_3)
    c = nr.XiElt(p, spec, ((nr.eta(p, 1), Q(1)),))
    assert a == b
    assert a != c


# ------------------------------------------------------------ sufficiency


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("mn", [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2)])
def test_sufficiency_within_bound(p, mn):
    m, n = mn
    t = nr.sufficiency_check(p, m, n)
    assert 1 <= t <= n + 2 * m
    # monotonicity: any deeper level is still contained
    assert nr._w_contained(p, m, n, t + 1)


def test_sufficiency_threshold_is_sharp():
    # below the returned depth at least one generator escapes
    for (p, m, n) in [(2, 1, 1), (3, 1, 2)]:
        t = nr.sufficiency_check(p, m, n)
        assert t > 1
        assert not nr._w_contained(p, m, n, t - 1)


def test_sufficiency_rejects_bad_params():
    with pytest.raises(ValueError):
        nr.sufficiency_check(2, 2, 1)


# ------------------------------------------------- depth independence


@pytest.mark.parametrize("ptt", [(2, 1, 1), (2, 1, 2), (2, 2, 3),
                                 (3, 1, 1), (3, 1, 2), (3, 2, 3)])
def test_indept_identity(ptt):
    p, T, t = ptt
    ok, nj = nr.indept_identity(p, T, t)
    assert ok
    assert nj == p ** (4 * (t - T))


def test_indept_index_against_brute_count():
    # index of the depth-2 group in the depth-1 group at p = 2, counted
    # by enumerating matrix pairs modulo 4 directly
    p, T, t = 2, 1, 2
    M = p ** t

    def factor_counts(depth):
        counts = {}
        for a in range(M):
            for b in range(M):
                for c in range(0, M, p ** depth):
                    for d in range(1, M, p ** depth):
                        det = (a * d - b * c) % M
                        if det % p == 0:
                            continue
                        counts[det] = counts.get(det, 0) + 1
        return counts

    big, small = factor_counts(T), factor_counts(t)
    pairs_big = sum(v * v for v in big.values())
    pairs_small = sum(v * v for v in small.values())
    assert pairs_big % pairs_small == 0
    assert pairs_big // pairs_small == p ** (4 * (t - T))


def test_indept_rejects_bad_range():
    with pytest.raises(ValueError):
        nr.indept_identity(2, 0, 1)
    with pytest.raises(ValueError):
        nr.indept_identity(2, 2, 1)


# ------------------------------------------------------ wild coset steps


@pytest.mark.parametrize("pmn", [(2, 0, 1), (2, 1, 1), (2, 2, 2),
                                 (2, 1, 2), (3, 0, 1), (3, 1, 1)])
def test_wild_coset_identity(pmn):
    p, m, n = pmn
    ok, report = nr.wild_coset_identity(p, m, n)
    assert ok, report
    assert report["cosets"] == p ** 3
    if m == 0:
        assert report["special_case"] == p - 1
        assert report["conjugate_terms"] == p - 1
    else:
        assert report["special_case"] is None
        assert report["conjugate_terms"] == p


def test_wild_witnesses_are_exact_factorisations():
    p, m, n = 2, 1, 1
    ok, report = nr.wild_coset_identity(p, m, n)
    assert ok
    spec = LevelSpec("Kmn", m, n)
    for (u, v, w), h, k in report["witnesses"]:
        a = 1 + p ** m * u
        lhs = mat_mul(nr.eta(p, m), nr.coset_block(p, u, v, w))
        rhs = mat_mul(mat_mul(h.embed().m, nr.eta(p, m + 1, a)), k)
        assert lhs == rhs
        assert in_level(k, spec, p)


def test_wild_schwartz_sum_per_factor():
    # the inverse shears average the depth-n pair to p times the
    # deeper lattice pair
    for p, n in [(2, 1), (3, 2)]:
        phi = SchwartzFn.depth_pair(p, n)
        acc = SchwartzFn.zero(p)
        for v in range(p):
            acc = acc + act_schwartz(mat_inv(mat([[p, v], [0, 1]])), phi)
        for x, y, want in [(0, 1, p), (p ** n, 1, 0),
                           (p ** (n + 1), 1 + p ** n, p), (1, 1, 0)]:
            assert acc.value_at(x, y) == want


def test_wild_rejects_bad_params():
    with pytest.raises(ValueError):
        nr.wild_coset_identity(2, 1, 0)


# ------------------------------------------- Frobenius reciprocity pairing


def test_frobrecip_scalar_case():
    ok, lhs, rhs = nr.frobrecip_pairing_check(1, 1, scalar=Q(5, 7))
    assert ok and lhs == rhs


def test_frobrecip_formal():
    for k1, k2 in [(1, 1), (2, 1)]:
        ok, lhs, rhs = nr.frobrecip_pairing_check(k1, k2)
        assert ok, (k1, k2)


def test_frobrecip_concrete_prime():
    ok, lhs, rhs = nr.frobrecip_pairing_check(1, 1, p=2)
    assert ok


def test_frobrecip_perturbed_fails():
    ok, lhs, rhs = nr.frobrecip_pairing_check(1, 1, perturb=True)
    assert not ok


def test_euler_element_formal_matches_spin_product():
    from gsp4verify.besselzeta import tame_sigma
    from gsp4verify.symcore import as_ratfunc, ell_pow, ratfunc_eq, sym
    sigma = tame_sigma(1, 2, sym("tau1"), sym("tau2"))
    e = nr.euler_element_eigenvalue(sigma)
    prod = as_ratfunc(1, None)
    for gam in sigma.spin_params():
        prod = prod * (1 - gam * ell_pow(1))
    assert ratfunc_eq(e, prod)


def test_parahoric_index_formula():
    from gsp4verify.padic import siegel_parahoric_reps
    for p in (2, 3):
        assert len(siegel_parahoric_reps(p)) == (p + 1) * (p ** 2 + 1)
