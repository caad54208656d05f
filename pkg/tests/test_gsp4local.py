"""Tests for the GSp4 principal-series module."""

from fractions import Fraction

import pytest

from gsp4verify.gsp4local import (InducedVectorG, PrincipalSeriesG,
                                  borel_factor, cell_of, eval_induced,
                                  hecke_eigenvalue, hecke_poly_check,
                                  hecke_module_action, parahoric_cell_reps,
                                  parahoric_u_matrix, spin_l_factor,
                                  spin_reciprocal, u_matrix_char_poly)
from gsp4verify.padic import (LevelSpec, identity, in_level, mat, mat_mul,
                              mat_t, root_unipotent, siegel_u_reps, weyl_s2)
from gsp4verify.symcore import as_ratfunc, ell_pow, ratfunc_eq, substitute, sym

Q = Fraction


def sigma_for(p):
    return PrincipalSeriesG.formal(p)


def test_spin_l_factor_shape():
    s = sigma_for(2)
    lf = spin_l_factor(s, Q(0))
    one = as_ratfunc(1, 2)
    prod = one
    for g in s.spin_params():
        prod = prod * (one - g)
    assert lf * prod == one


def test_spin_l_factor_half_shift():
    s = sigma_for(3)
    lf = spin_l_factor(s, Q(-1, 2))
    one = as_ratfunc(1, 3)
    prod = one
    for g in s.spin_params():
        prod = prod * (one - g * ell_pow(1, 3))
    assert lf * prod == one
    with pytest.raises(ValueError):
        spin_l_factor(s, Q(1, 3))


def test_irreducibility_condition():
    assert sigma_for(2).is_irreducible()
    p = 2
    a = ell_pow(2, p)
    bad = PrincipalSeriesG(p, a, sym("beta", p), sym("c", p))
    assert not bad.is_irreducible()
    bad2 = PrincipalSeriesG(p, sym("beta", p) * ell_pow(-2, p),
                            sym("beta", p), sym("c", p))
    assert not bad2.is_irreducible()


def test_cells_are_distinct_and_four():
    for p in (2, 3, 5):
        cells = [cell_of(r, p) for r in parahoric_cell_reps()]
        assert len(set(cells)) == 4


def test_cell_constant_on_parahoric_orbit():
    # right translation by the parahoric preserves the cell; left
    # translation by upper-triangular integral elements too
    p = 3
    spec = LevelSpec("K0", m=1)
    k0s = [identity(4),
           root_unipotent(0, 1),
           mat_mul(root_unipotent(2, 2), root_unipotent(3, 5)),
           mat([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 4]])]
    for k in k0s:
        assert in_level(k, spec, p)
    for r in parahoric_cell_reps():
        c = cell_of(r, p)
        for k in k0s:
            assert cell_of(mat_mul(r, k), p) == c


def test_spherical_normalisation():
    for p in (2, 3):
        s = sigma_for(p)
        sph = InducedVectorG.spherical(s)
        assert eval_induced(sph, identity(4)) == as_ratfunc(1, p)


def test_spherical_value_on_diagonal():
    # f(diag(l,l,1,1)) = alpha beta c v^{-3}
    for p in (2, 3):
        s = sigma_for(p)
        sph = InducedVectorG.spherical(s)
        d = mat([[p, 0, 0, 0], [0, p, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        assert eval_induced(sph, d) == s.alpha * s.beta * s.c * ell_pow(-3, p)


def test_borel_law():
    # f(b g) = factor(b) f(g) for upper-triangular similitude b
    p = 2
    s = sigma_for(p)
    sph = InducedVectorG.spherical(s)
    b = mat_mul(mat([[4, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0],
                     [0, 0, 0, Q(1, 2)]]),
                mat_mul(root_unipotent(0, 1), root_unipotent(3, 5)))
    g = mat_mul(weyl_s2(), mat_t(root_unipotent(2, 2)))
    assert eval_induced(sph, mat_mul(b, g)) == \
        borel_factor(s, b) * eval_induced(sph, g)


def test_hecke_t_eigenvalue_factored():
    # T eigenvalue: v^3 c (1+alpha)(1+beta)
    for p in (2, 3):
        s = sigma_for(p)
        one = as_ratfunc(1, p)
        expect = ell_pow(3, p) * s.c * (one + s.alpha) * (one + s.beta)
        assert hecke_eigenvalue("T", s) == expect


def test_hecke_r_is_central_character():
    for p in (2, 3):
        s = sigma_for(p)
        assert hecke_eigenvalue("R", s) == s.central_character()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_hecke_polynomial_identity(p):
    ok, lhs, rhs = hecke_poly_check(sigma_for(p))
    assert ok, (lhs, rhs)


def test_hecke_polynomial_perturbed_fails():
    ok, _, _ = hecke_poly_check(sigma_for(2), perturb=1)
    assert not ok


def test_eigenvalues_weyl_invariant():
    # the eigenvalues are symmetric under the Weyl substitutions
    # (alpha, beta) -> (beta, alpha) and (alpha, c) -> (1/alpha, c alpha)
    p = 2
    s = sigma_for(p)
    for op in ("T", "T1", "R"):
        ev = hecke_eigenvalue(op, s)
        swapped = substitute(ev, {"alpha": s.beta, "beta": s.alpha})
        assert ratfunc_eq(ev, swapped)
        refl = substitute(ev, {"alpha": as_ratfunc(1, p) / s.alpha,
                               "c": s.c * s.alpha})
        assert ratfunc_eq(ev, refl)


@pytest.mark.parametrize("p", [2, 3])
def test_u_matrix_char_poly(p):
    s = sigma_for(p)
    x = sym("X", p)
    assert u_matrix_char_poly(s, x) == spin_reciprocal(s, x)


def test_u_matrix_trace():
    # trace of U = sum of the four parameters times v^3
    p = 2
    s = sigma_for(p)
    u = parahoric_u_matrix(s)
    tr = u[0][0] + u[1][1] + u[2][2] + u[3][3]
    expect = as_ratfunc(0, p)
    for g in s.spin_params():
        expect = expect + g * ell_pow(3, p)
    assert tr == expect


def test_module_action_identity_and_composition():
    p = 2
    s = sigma_for(p)
    sph = InducedVectorG.spherical(s)
    e = identity(4)
    # unit element acts trivially
    out = hecke_module_action([(e, Q(1))], sph)
    for r in parahoric_cell_reps():
        assert eval_induced(out, r) == eval_induced(sph, r)
    # the U-operator element acts on the spherical vector with the sum of
    # one-variable translates; acting twice = composing translations
    xi = [(g, Q(1)) for g in siegel_u_reps(p)]
    once = hecke_module_action(xi, sph)
    twice = hecke_module_action(xi, once)
    d = mat([[p, 0, 0, 0], [0, p, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    direct = as_ratfunc(0, p)
    for g1 in siegel_u_reps(p):
        for g2 in siegel_u_reps(p):
            direct = direct + eval_induced(sph, mat_mul(mat_mul(e, g1), g2))
    assert eval_induced(twice, e) == direct


def test_module_action_linear():
    p = 3
    s = sigma_for(p)
    basis = InducedVectorG.parahoric_basis(s)
    f = basis[0]
    g = mat_mul(mat([[p, 0, 0, 0], [0, p, 0, 0], [0, 0, 1, 0],
                     [0, 0, 0, 1]]), weyl_s2())
    a, b = Q(3), Q(-2)
    xi = [(g, a), (identity(4), b)]
    out = hecke_module_action(xi, f)
    for r in parahoric_cell_reps():
        expect = a * eval_induced(f, mat_mul(r, g)) + b * eval_induced(f, r)
        assert eval_induced(out, r) == expect


def test_twist_shifts_spin_params():
    p = 2
    s = sigma_for(p)
    eta = sym("tau", p)
    tw = s.twist(eta)
    assert tw.spin_params() == tuple(g * eta for g in s.spin_params())
