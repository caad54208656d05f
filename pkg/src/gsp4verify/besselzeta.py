"""Bessel values, zeta integrals and the tame norm-compatibility identities.

The Bessel values B_n of the spherical vector are DEFINED here through
their rational generating function

    G(u) = prod_{g in spin params} (1 - g v^{-3} u)^{-1}
           * prod_{i in {1,2}} (1 - lam_i v^{-4} u),

with u the formal variable standing for (character value at the prime)
times (prime)^{-(s - 3/2)}.  Everything downstream — the effect of the
U-operator on Bessel values, the zeta integral of the spherical and
U-translated vectors, the z-map values, and the two tame norm-relation
identities together with their corollary — is verified exactly against
this definition, with the prime itself formal (v is its formal square
root) wherever possible.

The limit s -> 0 is taken by exact substitution Y -> 1 in the variable
Y = (prime)^{-2s}; it exists precisely when no (1 - Y)-factor survives
in the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .symcore import (ExactArithmeticError, PowerSeries, RatFunc, as_ratfunc,
                      ell, ell_pow, reconstruct_ratfunc, series_expand,
                      substitute, sym)
from .gsp4local import PrincipalSeriesG

Q = Fraction

#: variable of the Bessel generating function / zeta integral
U_VAR = "u"
#: variable carrying the auxiliary complex parameter: Y = (prime)^{-2s}
S_VAR = "Y"


@dataclass(frozen=True)
class BesselDatum:
    """Principal series together with the two torus values of the
    character defining the Bessel functional.  The restriction of that
    character to the centre must agree with the central character."""
    sigma: PrincipalSeriesG
    lam1: RatFunc
    lam2: RatFunc

    def __post_init__(self):
        if self.lam1 * self.lam2 != self.sigma.central_character():
            raise ExactArithmeticError(
                "torus character does not match the central character")

    @staticmethod
    def formal(p=None) -> "BesselDatum":
        """Fully formal datum: alpha, beta, c, lam1 free; lam2 determined
        by the central-character constraint."""
        sigma = PrincipalSeriesG.formal(p)
        lam1 = sym("lam1", p)
        lam2 = sigma.central_character() / lam1
        return BesselDatum(sigma, lam1, lam2)

    @property
    def p(self):
        return self.sigma.p


@dataclass(frozen=True)
class BesselSeries:
    """Truncated sequence of Bessel values B_0..B_N of a vector at the
    diagonal arguments diag(x, x, 1, 1) with x of valuation n; values at
    |x| > 1 are identically zero."""
    datum: BesselDatum
    values: tuple

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def value(self, n: int) -> RatFunc:
        if n < 0:
            return as_ratfunc(0, self.datum.p)
        return self.values[n]


def generating_function(datum: BesselDatum) -> RatFunc:
    p = datum.p
    u = sym(U_VAR, p)
    one = as_ratfunc(1, p)
    g = one
    for gam in datum.sigma.spin_params():
        g = g / (one - gam * ell_pow(-3, p) * u)
    for lam in (datum.lam1, datum.lam2):
        g = g * (one - lam * ell_pow(-4, p) * u)
    return g


def bessel_series(datum: BesselDatum, n: int) -> BesselSeries:
    """The first n+1 Bessel values, read off the generating function."""
    ser = series_expand(generating_function(datum), U_VAR, n)
    return BesselSeries(datum, tuple(ser.coeffs))


def char_sum(j: int, k: int, p=None) -> RatFunc:
    """Sum over u mod (prime)^k of the standard additive character at
    x u, where x has valuation j: the full modulus if the character is
    trivial on the support, zero as soon as it is not."""
    if j < -k:
        raise ValueError("out of modeled domain")
    if j >= 0:
        return ell(p) ** k
    return as_ratfunc(0, p)


def ul_bessel_transform(series: BesselSeries, k: int = 1) -> BesselSeries:
    """Bessel values of the U-operator (k-th power) applied to the
    vector: the unipotent integration contributes the square of the full
    modulus from two coordinates and the character sum from the third,
    and shifts the diagonal argument by the k-th power of the prime."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = series.datum.p
    factor = ell(p) ** (2 * k) * char_sum(0, k, p)
    assert factor == ell(p) ** (3 * k)
    vals = tuple(factor * series.value(n + k)
                 for n in range(series.order - k + 1))
    return BesselSeries(series.datum, vals)


def torus_translate(series: BesselSeries, ja: int, jb: int,
                    jt: int) -> BesselSeries:
    """Bessel values of the vector translated by the torus element
    diag(t a, t b, a, b) with valuations (ja, jb, jt): the (a, b)-part
    acts through the functional's character, the central t-part shifts
    the argument."""
    d = series.datum
    factor = _pow(d.lam1, ja) * _pow(d.lam2, jb)
    vals = tuple(factor * series.value(n + jt)
                 for n in range(series.order - max(jt, 0) + 1))
    return BesselSeries(d, vals)


def _pow(a, n: int):
    a = as_ratfunc(a)
    if n >= 0:
        return a ** n
    return (as_ratfunc(1, a.prime) / a) ** (-n)


def _series_to_ratfunc(series: BesselSeries, num_deg: int) -> RatFunc:
    """Multiply the Bessel series by the reciprocal spin factor and
    reconstruct the (polynomial) zeta integral exactly."""
    d = series.datum
    p = d.p
    u = sym(U_VAR, p)
    one = as_ratfunc(1, p)
    recip = one
    for gam in d.sigma.spin_params():
        recip = recip * (one - gam * ell_pow(-3, p) * u)
    ser = PowerSeries(U_VAR, series.values) * series_expand(
        recip, U_VAR, series.order)
    return reconstruct_ratfunc(ser, as_ratfunc(1, p), num_deg)


def zeta(label: str, datum: BesselDatum, order: int = 9) -> RatFunc:
    """The zeta integral of the labelled vector, as a rational function
    of u: the reciprocal spin factor times the generating sum of the
    vector's Bessel values, computed coefficient-by-coefficient and
    reconstructed exactly."""
    ser = bessel_series(datum, order)
    if label == "spherical":
        return _series_to_ratfunc(ser, 4)
    if label == "ul":
        return _series_to_ratfunc(ul_bessel_transform(ser, 1), 4)
    raise ValueError(f"unknown vector label {label!r}")


def zeta_spherical_closed(datum: BesselDatum) -> RatFunc:
    """prod_i (1 - lam_i v^{-4} u): the closed form of the spherical
    zeta integral."""
    p = datum.p
    u = sym(U_VAR, p)
    one = as_ratfunc(1, p)
    return ((one - datum.lam1 * ell_pow(-4, p) * u)
            * (one - datum.lam2 * ell_pow(-4, p) * u))


def zeta_ul_closed(datum: BesselDatum) -> RatFunc:
    """The U-operator zeta integral in closed form: (prime)^3/u times
    the difference of the spherical closed form and the reciprocal spin
    factor."""
    p = datum.p
    u = sym(U_VAR, p)
    one = as_ratfunc(1, p)
    recip = one
    for gam in datum.sigma.spin_params():
        recip = recip * (one - gam * ell_pow(-3, p) * u)
    return ell(p) ** 3 / u * (zeta_spherical_closed(datum) - recip)


# -- the z-map and the bilinear form --------------------------------------------


def z_datum(sigma: PrincipalSeriesG, psi_pair, chi_pair) -> BesselDatum:
    """The Bessel datum attached to a pair of principal series of the
    two-by-two factors: lam1 = 1/(psi1 chi2), lam2 = 1/(chi1 psi2)."""
    p1, p2 = (as_ratfunc(x, sigma.p) for x in psi_pair)
    c1, c2 = (as_ratfunc(x, sigma.p) for x in chi_pair)
    one = as_ratfunc(1, sigma.p)
    return BesselDatum(sigma, one / (p1 * c2), one / (c1 * p2))


def z_section_value(label: str, sigma: PrincipalSeriesG, psi_pair,
                    chi_pair, order: int = 9) -> RatFunc:
    """Value at the identity of the z-map applied to the labelled
    vector, as a rational function of Y = (prime)^{-2s}: the zeta
    integral at the shifted parameter, i.e. u = eta(prime) * prime * Y
    with eta = psi1 psi2."""
    datum = z_datum(sigma, psi_pair, chi_pair)
    p = sigma.p
    p1, p2 = (as_ratfunc(x, p) for x in psi_pair)
    eta = p1 * p2
    y = sym(S_VAR, p)
    zu = zeta(label, datum, order)
    return substitute(zu, {U_VAR: eta * ell(p) * y})


def _limit_at_one(f: RatFunc) -> RatFunc:
    try:
        return substitute(f, {S_VAR: as_ratfunc(1, f.prime)})
    except (ZeroDivisionError, ExactArithmeticError) as exc:
        raise ExactArithmeticError("limit does not exist") from exc


def tame_characters(k1: int, k2: int, tau1, tau2, p=None):
    """The weight-(k1, k2) character values: psi_i at the prime is v,
    chi_i is v^{-1-2k_i} tau_i."""
    v = ell_pow(1, p)
    t1, t2 = as_ratfunc(tau1, p), as_ratfunc(tau2, p)
    return ((v, v), (ell_pow(-1 - 2 * k1, p) * t1,
                     ell_pow(-1 - 2 * k2, p) * t2))


def tame_sigma(k1: int, k2: int, tau1, tau2, p=None) -> PrincipalSeriesG:
    """Formal principal series whose central character matches the
    weight-(k1, k2) torus datum: beta is eliminated via the constraint
    lam1 lam2 = alpha beta c^2."""
    alpha, c = sym("alpha", p), sym("c", p)
    t1, t2 = as_ratfunc(tau1, p), as_ratfunc(tau2, p)
    lam_prod = ell(p) ** (k1 + k2) / (t1 * t2)
    beta = lam_prod / (alpha * c ** 2)
    return PrincipalSeriesG(p, alpha, beta, c)


def bilinear_form(t: int, label: str, sigma: PrincipalSeriesG,
                  psi_pair, chi_pair, order: int = 9) -> RatFunc:
    """The pairing of the degenerate section of depth t with the z-map
    of the labelled vector, computed along the support-reduction path:
    volume of the depth-t congruence subgroup of the two-by-two pair,
    times the section's value at the identity, divided by the first
    normalising product of degree-1 factors, times the exact limit at
    s = 0 of the second normalising product times the z-value."""
    p = sigma.p
    one = as_ratfunc(1, p)
    p1, p2 = (as_ratfunc(x, p) for x in psi_pair)
    c1, c2 = (as_ratfunc(x, p) for x in chi_pair)
    y = sym(S_VAR, p)
    if t < 0:
        raise ValueError("depth must be >= 0")
    lp = ell(p)
    vol = one if t == 0 else one / (lp ** (t - 1) * (lp + 1)) ** 2
    # value at 1 of the degenerate section of depth t
    fval = one
    if t > 0:
        for (a, b) in ((p1, c1), (p2, c2)):
            fval = fval * (one - (a / b) * ell_pow(-2, p))
    # first normalising product: the degree-1 factors at the fixed point
    norm = one
    for (a, b) in ((p1, c1), (p2, c2)):
        norm = norm * (one - (b / a) * ell_pow(-2, p))
    # second normalising product, still carrying Y
    reg = one
    for (a, b) in ((p1, c1), (p2, c2)):
        reg = reg * (one / (one - (a / b) * ell_pow(-2, p) * y))
    zval = z_section_value(label, sigma, psi_pair, chi_pair, order)
    return vol * fval * norm * _limit_at_one(reg * zval)


#: cache of pairings with the default formal tau symbols, keyed by
#: (vector label, depth, k1, k2, prime)
_FORMAL_CACHE: dict = {}


def _cached_pairing(label: str, t: int, k1: int, k2: int, p,
                    formal_taus: bool, sigma, psi, chi) -> RatFunc:
    if not formal_taus:
        return bilinear_form(t, label, sigma, psi, chi)
    key = (label, t, k1, k2, p)
    if key not in _FORMAL_CACHE:
        _FORMAL_CACHE[key] = bilinear_form(t, label, sigma, psi, chi)
    return _FORMAL_CACHE[key]


def tame_norm_check(t: int, k1: int, k2: int, tau1=None, tau2=None,
                    p=None):
    """Check the depth-t norm-relation identity for the spherical
    vector: the pairing at depth t equals
    1/(prime^{2t-2} (prime+1)^2) * prod_i (1 - prime^{k_i}/tau_i)
    times the depth-0 pairing.  Returns (ok, lhs, rhs)."""
    formal = tau1 is None and tau2 is None
    if tau1 is None:
        tau1 = sym("tau1", p)
    if tau2 is None:
        tau2 = sym("tau2", p)
    tau1, tau2 = as_ratfunc(tau1, p), as_ratfunc(tau2, p)
    sigma = tame_sigma(k1, k2, tau1, tau2, p)
    psi, chi = tame_characters(k1, k2, tau1, tau2, p)
    lhs = _cached_pairing("spherical", t, k1, k2, p, formal, sigma, psi, chi)
    base = _cached_pairing("spherical", 0, k1, k2, p, formal, sigma, psi, chi)
    lp = ell(p)
    one = as_ratfunc(1, p)
    euler = ((one - lp ** k1 / tau1) * (one - lp ** k2 / tau2))
    rhs = one / (lp ** (2 * t - 2) * (lp + 1) ** 2) * euler * base
    return lhs == rhs, lhs, rhs


def tame_norm_ul_check(k1: int, k2: int, tau1=None, tau2=None, p=None):
    """Check the depth-1 norm-relation identity for the U-translated
    vector: the pairing equals prime/(prime+1)^2 times
    [prod_i (1 - prime^{k_i}/tau_i) - reciprocal spin factor at -1/2]
    times the depth-0 spherical pairing.  Returns (ok, lhs, rhs)."""
    formal = tau1 is None and tau2 is None
    if tau1 is None:
        tau1 = sym("tau1", p)
    if tau2 is None:
        tau2 = sym("tau2", p)
    tau1, tau2 = as_ratfunc(tau1, p), as_ratfunc(tau2, p)
    sigma = tame_sigma(k1, k2, tau1, tau2, p)
    psi, chi = tame_characters(k1, k2, tau1, tau2, p)
    lhs = _cached_pairing("ul", 1, k1, k2, p, formal, sigma, psi, chi)
    base = _cached_pairing("spherical", 0, k1, k2, p, formal, sigma, psi, chi)
    lp = ell(p)
    one = as_ratfunc(1, p)
    euler = ((one - lp ** k1 / tau1) * (one - lp ** k2 / tau2))
    lsig_recip = one
    for gam in sigma.spin_params():
        lsig_recip = lsig_recip * (one - gam * ell_pow(1, p))
    rhs = lp / (lp + 1) ** 2 * (euler - lsig_recip) * base
    return lhs == rhs, lhs, rhs


def tame_norm_final_check(k1: int, k2: int, tau1=None, tau2=None, p=None,
                          perturb: bool = False):
    """Check the combined corollary: with B1 the depth-1 spherical
    pairing, B2 the depth-1 pairing of the U-translated vector and B0
    the depth-0 pairing,

        (l+1)^2 l/(l-1) B1 - (l+1)^2/(l-1) B2
            = l/(l-1) * (reciprocal spin factor at -1/2) * B0.

    With perturb=True the combinatorial factor l-1 is replaced by l on
    the left side, which must break the identity.  Returns
    (ok, lhs, rhs)."""
    formal = tau1 is None and tau2 is None
    if tau1 is None:
        tau1 = sym("tau1", p)
    if tau2 is None:
        tau2 = sym("tau2", p)
    tau1, tau2 = as_ratfunc(tau1, p), as_ratfunc(tau2, p)
    sigma = tame_sigma(k1, k2, tau1, tau2, p)
    psi, chi = tame_characters(k1, k2, tau1, tau2, p)
    b0 = _cached_pairing("spherical", 0, k1, k2, p, formal, sigma, psi, chi)
    b1 = _cached_pairing("spherical", 1, k1, k2, p, formal, sigma, psi, chi)
    b2 = _cached_pairing("ul", 1, k1, k2, p, formal, sigma, psi, chi)
    lp = ell(p)
    one = as_ratfunc(1, p)
    denom = lp if perturb else lp - 1
    lhs = (lp + 1) ** 2 * lp / denom * b1 - (lp + 1) ** 2 / denom * b2
    lsig_recip = one
    for gam in sigma.spin_params():
        lsig_recip = lsig_recip * (one - gam * ell_pow(1, p))
    rhs = lp / (lp - 1) * lsig_recip * b0
    return lhs == rhs, lhs, rhs
