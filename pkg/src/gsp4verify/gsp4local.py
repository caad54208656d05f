"""Unramified principal series of GSp4(Q_l).

Exact-arithmetic implementation of:

* the degree-4 (spin) local L-factor with parameters {c, c*alpha, c*beta,
  c*alpha*beta},
* evaluation of vectors in an unramified principal series, either
  spherical or invariant under the Siegel parahoric, via the Iwasawa
  decomposition and the Borel transformation law,
* spherical Hecke eigenvalues for the three standard double cosets and
  the degree-4 Hecke polynomial identity,
* the 4x4 matrix of the parahoric U-operator on the Siegel-parahoric
  invariants and its characteristic polynomial,
* a small Hecke-module action used by the reciprocity checks.

Satake parameters are carried as formal symbols pinned to a concrete
prime; the reserved symbol v is the formal square root of the prime,
carrying the half-integer modulus exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .symcore import RatFunc, as_ratfunc, ell_pow, sym
from .padic import (GSp4Elt, _padic_residue, gsp4_multiplier, hecke_r_reps,
                    hecke_t1_reps, hecke_t_reps, identity, iwasawa_gsp4, mat,
                    mat_mul, siegel_u_reps, val, weyl_s1, weyl_s2)

Q = Fraction


def _pow(a: RatFunc, n: int) -> RatFunc:
    a = as_ratfunc(a)
    if n >= 0:
        return a ** n
    return (as_ratfunc(1, a.prime) / a) ** (-n)


@dataclass(frozen=True)
class PrincipalSeriesG:
    """Unramified principal-series datum: alpha, beta are the values of
    the two first torus characters at the prime, c the value of the
    similitude character."""
    p: int
    alpha: RatFunc
    beta: RatFunc
    c: RatFunc

    @staticmethod
    def formal(p: int) -> "PrincipalSeriesG":
        return PrincipalSeriesG(p, sym("alpha", p), sym("beta", p),
                                sym("c", p))

    def spin_params(self):
        return (self.c, self.c * self.alpha, self.c * self.beta,
                self.c * self.alpha * self.beta)

    def central_character(self) -> RatFunc:
        return self.alpha * self.beta * self.c ** 2

    def is_irreducible(self) -> bool:
        """The standard regularity condition: none of the values alpha,
        beta, alpha*beta, alpha/beta equals |l|^{+-1}."""
        lp, lm = ell_pow(-2, self.p), ell_pow(2, self.p)
        tests = (self.alpha, self.beta, self.alpha * self.beta,
                 self.alpha / self.beta)
        return all(t != lp and t != lm for t in tests)

    def twist(self, eta_value) -> "PrincipalSeriesG":
        """Twist by an unramified character of the similitude factor."""
        return PrincipalSeriesG(self.p, self.alpha, self.beta,
                                self.c * as_ratfunc(eta_value, self.p))


def spin_l_factor(sigma: PrincipalSeriesG, shift, twist=1) -> RatFunc:
    """L(sigma x twist, shift): the product of the four degree-1 factors
    with parameters {c, c a, c b, c a b} times the twist value; `shift`
    may be a half-integer."""
    p = sigma.p
    two_shift = Fraction(shift) * 2
    if two_shift.denominator != 1:
        raise ValueError("shift must be a half-integer")
    tw = as_ratfunc(twist, p)
    one = as_ratfunc(1, p)
    out = one
    for gamma in sigma.spin_params():
        out = out / (one - gamma * tw * ell_pow(-int(two_shift), p))
    return out


def borel_factor(sigma: PrincipalSeriesG, b) -> RatFunc:
    """Transformation factor of the principal series on an upper
    triangular similitude element with diagonal (a, b, c/b, c/a):
    |a^2 b| / |c|^{3/2} * chi1(a) chi2(b) rho(c)."""
    p = sigma.p
    a_val = val(b[0][0], p)
    b_val = val(b[1][1], p)
    c_val = val(gsp4_multiplier(b), p)
    mod = ell_pow(-2 * (2 * a_val + b_val) + 3 * c_val, p)
    return (mod * _pow(sigma.alpha, a_val) * _pow(sigma.beta, b_val)
            * _pow(sigma.c, c_val))


# -- cells of the Siegel-parahoric quotient -------------------------------------

def _lagrangian_invariant(k, p: int):
    """Invariant of the Borel orbit of the reduction mod p of the plane
    spanned by the first two columns of k: the intersection dimensions
    with the standard partial flag."""
    cols = [[_padic_residue(k[r][c], p, p) for r in range(4)] for c in (0, 1)]
    dims = []
    for i in (1, 2, 3):
        # dimension of span(cols) intersect span(e_1..e_i): 2 minus the
        # rank of the projection onto the last 4-i coordinates
        rows = [c[i:] for c in cols]
        rank = _rank_modp(rows, p)
        dims.append(2 - rank)
    return tuple(dims)


def _rank_modp(rows, p: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    col = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        for r in range(len(m)):
            if r != rank and m[r][col] % p:
                f = (m[r][col] * inv) % p
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def parahoric_cell_reps():
    """Representatives of the four (Borel, Siegel-parahoric) cells in the
    integral points, as Weyl elements."""
    e = identity(4)
    s1, s2 = weyl_s1(), weyl_s2()
    return [e, s2, mat_mul(s1, s2), mat_mul(s2, mat_mul(s1, s2))]


def cell_of(k, p: int):
    return _lagrangian_invariant(k, p)


@dataclass(frozen=True)
class InducedVectorG:
    """Right parahoric- (or hyperspecial-) invariant vector in a
    principal series, stored as one value per Borel-parahoric cell.
    For the spherical vector there is a single cell."""
    sigma: PrincipalSeriesG
    values: tuple  # pairs (cell invariant, RatFunc)

    @staticmethod
    def spherical(sigma: PrincipalSeriesG) -> "InducedVectorG":
        cells = {cell_of(r, sigma.p) for r in parahoric_cell_reps()}
        one = as_ratfunc(1, sigma.p)
        return InducedVectorG(sigma, tuple((c, one) for c in sorted(cells)))

    @staticmethod
    def parahoric_basis(sigma: PrincipalSeriesG):
        """The four indicator vectors of the Siegel-parahoric cells."""
        one = as_ratfunc(1, sigma.p)
        zero = as_ratfunc(0, sigma.p)
        cells = sorted(cell_of(r, sigma.p) for r in parahoric_cell_reps())
        assert len(set(cells)) == 4
        out = []
        for c0 in cells:
            out.append(InducedVectorG(
                sigma, tuple((c, one if c == c0 else zero) for c in cells)))
        return out

    def cell_value(self, cell) -> RatFunc:
        for c, x in self.values:
            if c == cell:
                return x
        raise KeyError(cell)


def eval_induced(f: InducedVectorG, g) -> RatFunc:
    """Value of f at g: Iwasawa-decompose g = b k, multiply the stored
    value on the cell of k by the Borel factor of b."""
    if isinstance(g, GSp4Elt):
        g = g.m
    sigma = f.sigma
    b, k = iwasawa_gsp4(mat(g), sigma.p)
    return borel_factor(sigma, b) * f.cell_value(cell_of(k, sigma.p))


# -- spherical Hecke operators ---------------------------------------------------

_COSET_FNS = {
    "T": hecke_t_reps,
    "T1": hecke_t1_reps,
    "R": hecke_r_reps,
}


def hecke_eigenvalue(op: str, sigma: PrincipalSeriesG) -> RatFunc:
    """Eigenvalue of the spherical Hecke operator on the spherical
    vector: the sum of its values over the left coset representatives."""
    reps = _COSET_FNS[op](sigma.p)
    sph = InducedVectorG.spherical(sigma)
    total = as_ratfunc(0, sigma.p)
    for r in reps:
        total = total + eval_induced(sph, r)
    return total


def hecke_polynomial(sigma: PrincipalSeriesG, x: RatFunc) -> RatFunc:
    """The degree-4 Hecke polynomial evaluated on the computed spherical
    eigenvalues: 1 - T x + l (T1 + (l^2+1) R) x^2 - l^3 T R x^3
    + l^6 R^2 x^4."""
    p = sigma.p
    t = hecke_eigenvalue("T", sigma)
    t1 = hecke_eigenvalue("T1", sigma)
    r = hecke_eigenvalue("R", sigma)
    one = as_ratfunc(1, p)
    return (one - t * x + p * (t1 + (p * p + 1) * r) * x ** 2
            - p ** 3 * t * r * x ** 3 + p ** 6 * r * r * x ** 4)


def spin_reciprocal(sigma: PrincipalSeriesG, x: RatFunc) -> RatFunc:
    """prod over gamma in {c, ca, cb, cab} of (1 - gamma v^3 x): the
    reciprocal of the spin L-factor at a 3/2-shift."""
    p = sigma.p
    one = as_ratfunc(1, p)
    out = one
    for gamma in sigma.spin_params():
        out = out * (one - gamma * ell_pow(3, p) * x)
    return out


def hecke_poly_check(sigma: PrincipalSeriesG, perturb=0):
    """Compare the Hecke polynomial at the computed eigenvalues with the
    reciprocal spin factor.  Returns (ok, lhs, rhs)."""
    p = sigma.p
    x = sym("X", p)
    lhs = hecke_polynomial(sigma, x) + as_ratfunc(perturb, p) * x
    rhs = spin_reciprocal(sigma, x)
    return lhs == rhs, lhs, rhs


# -- the parahoric U-operator ----------------------------------------------------

def parahoric_u_matrix(sigma: PrincipalSeriesG):
    """Matrix of the U-operator x -> sum_{u,v,w mod l} n(u,v,w) d x on
    the 4-dimensional Siegel-parahoric invariants, in the cell-indicator
    basis (rows index output cells)."""
    p = sigma.p
    basis = InducedVectorG.parahoric_basis(sigma)
    reps = parahoric_cell_reps()
    cosets = siegel_u_reps(p)
    cells = [cell_of(r, p) for r in reps]
    order = sorted(range(4), key=lambda i: cells[i])
    mat_out = []
    for oi in order:
        row = []
        for fb in basis:
            total = as_ratfunc(0, p)
            for cs in cosets:
                total = total + eval_induced(fb, mat_mul(mat(reps[oi]), cs))
            row.append(total)
        mat_out.append(row)
    return mat_out


def u_matrix_char_poly(sigma: PrincipalSeriesG, x: RatFunc) -> RatFunc:
    """det(1 - U x) on the parahoric invariants, expanded exactly."""
    p = sigma.p
    u = parahoric_u_matrix(sigma)
    one = as_ratfunc(1, p)
    m = [[(one if i == j else as_ratfunc(0, p)) - u[i][j] * x
          for j in range(4)] for i in range(4)]
    return _det4(m, p)


def _det4(m, p):
    # cofactor expansion; entries are RatFuncs
    import itertools
    total = as_ratfunc(0, p)
    for perm in itertools.permutations(range(4)):
        sign = 1
        for i in range(4):
            for j in range(i + 1, 4):
                if perm[i] > perm[j]:
                    sign = -sign
        term = as_ratfunc(sign, p)
        for i in range(4):
            term = term * m[i][perm[i]]
        total = total + term
    return total


# -- Hecke-module action ---------------------------------------------------------

def hecke_module_action(xi, f: InducedVectorG) -> InducedVectorG:
    """Act by xi = sum of (g, coeff) pairs, interpreted as the compactly
    supported function sum coeff * ch(g K') where K' is f's invariance
    group with volume normalised to that of the hyperspecial subgroup:
    (xi . f)(h) = sum coeff * f(h g)."""
    sigma = f.sigma
    reps = parahoric_cell_reps()
    new_values = []
    for r in reps:
        c = cell_of(r, sigma.p)
        total = as_ratfunc(0, sigma.p)
        for g, coeff in xi:
            total = total + as_ratfunc(coeff, sigma.p) * eval_induced(
                f, mat_mul(mat(r), mat(g)))
        new_values.append((c, total))
    new_values = tuple(sorted(set(new_values)))
    cells = [c for c, _ in new_values]
    assert len(cells) == len(set(cells)), "action left the invariant space"
    return InducedVectorG(sigma, new_values)
