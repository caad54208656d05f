"""Local theory for GL2(Q_l) with unramified characters.

Implements, in exact arithmetic:

* local L-factors of unramified characters,
* principal-series sections attached to Schwartz functions on Q_l^2 via a
  Tate-type zeta integral ("Siegel sections"), evaluated as rational
  functions of the character values,
* the normalised standard intertwining operator, both as a direct shell
  integral and in closed form via the Fourier transform,
* the duality pairing of a principal series against its inverse-character
  dual, computed as a finite average over GL2(Z/l^t),
* tensor-product sections for the fibre product of two GL2's with equal
  determinant.

Conventions.  An unramified character chi is described by its value
a = chi(l), a rational function in formal symbols; chi(x) = a^{val(x)}.
The auxiliary deformation chi |.|^s is absorbed into the character value:
since |l|^s = l^{-s}, replacing a by a*X (X a formal symbol playing the
role of l^{-s}) realises the deformed section exactly, so every formula
below is stated at the undeformed point.  The reserved symbol v is a
formal square root of l, used for the half-integer powers |.|^{1/2}.
"""

from __future__ import annotations

from fractions import Fraction

from .symcore import (ExactArithmeticError, RatFunc, as_ratfunc, ell_pow,
                      vee)
from .padic import Cyc, SchwartzFn, fourier, val

Q = Fraction


class ShellBoundExceeded(ExactArithmeticError):
    """A shell integral failed to stabilise within the given bound."""


def _pow(a: RatFunc, n: int) -> RatFunc:
    a = as_ratfunc(a)
    if n >= 0:
        return a ** n
    return (as_ratfunc(1, a.prime) / a) ** (-n)


def _rat(x) -> Fraction:
    """Coerce a Schwartz-function value (Fraction or rational Cyc) to Q."""
    if isinstance(x, Cyc):
        return x.as_rational()
    return Fraction(x)


def _cyc_add(a, b):
    if isinstance(a, Cyc) or isinstance(b, Cyc):
        return _as_cyc_pair(a, b)
    return a + b


def _as_cyc_pair(a, b):
    if not isinstance(a, Cyc):
        a = Cyc.rational(b.p, Fraction(a))
    if not isinstance(b, Cyc):
        b = Cyc.rational(a.p, Fraction(b))
    return a + b


def l_factor(a, shift, prime=None) -> RatFunc:
    """L(chi, shift) = 1/(1 - chi(l) l^{-shift}) for unramified chi with
    chi(l) = a.  `shift` may be a half-integer (Fraction with denominator
    2); l^{-shift} is expressed through the formal square root v."""
    a = as_ratfunc(a, prime)
    two_shift = Fraction(shift) * 2
    if two_shift.denominator != 1:
        raise ValueError("shift must be a half-integer")
    one = as_ratfunc(1, a.prime)
    den = one - a * ell_pow(-int(two_shift), a.prime)
    if den == as_ratfunc(0, a.prime):
        raise ZeroDivisionError("L-factor has a pole at this shift")
    return one / den


def _unit_average(phi: SchwartzFn, j: int, r) -> Fraction:
    """Average of u |-> phi(l^j u r) over the unit group, u ~ Z_l^x.

    r is a pair of rationals, not both zero.  The value is locally
    constant in u; the averaging modulus is chosen from the level of phi
    and the valuations involved, so the average is exact."""
    p = phi.p
    m = min(val(c, p) for c in r if c != 0)
    n_mod = max(1, phi.n - (j + m))
    mod = p ** n_mod
    scale = Q(p) ** j
    total = None
    count = 0
    for u in range(1, mod):
        if u % p == 0:
            continue
        value = phi.value_at(scale * u * r[0], scale * u * r[1])
        total = value if total is None else _cyc_add(total, value)
        count += 1
    # the average over the full unit group is Galois-stable, hence rational
    return _rat(total) / count


def eval_siegel(phi: SchwartzFn, a_chi, a_psi, g) -> RatFunc:
    """Value at g of the section attached to the Schwartz function phi and
    the unramified characters with l-values a_chi, a_psi:

        chi(det g) |det g|^{1/2} / L(chi/psi, 1)
            * integral over x in Q_l^x of phi((0,x) g) (chi/psi)(x)|x| d*x.

    The integral is decomposed into valuation shells; each shell is a
    finite exact average and the tail is a geometric series, so the result
    is a rational function of the character values."""
    p = phi.p
    a_chi = as_ratfunc(a_chi, p)
    a_psi = as_ratfunc(a_psi, p)
    g = [[Fraction(x) for x in row] for row in g]
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if det == 0:
        raise ZeroDivisionError("g must be invertible")
    r = (g[1][0], g[1][1])
    m = min(val(c, p) for c in r if c != 0)
    one = as_ratfunc(1, p)
    # q = (chi/psi)(l) |l| : the per-shell ratio
    q = (a_chi / a_psi) * ell_pow(-2, p)
    d = val(det, p)
    prefactor = _pow(a_chi, d) * ell_pow(-d, p) * (one - q)
    j_min = -phi.s - m
    j_top = max(phi.n - m, j_min)
    total = as_ratfunc(0, p)
    for j in range(j_min, j_top):
        c = _unit_average(phi, j, r)
        if c:
            total = total + as_ratfunc(c, p) * _pow(q, j)
    c_inf = _rat(phi.value_at(0, 0))
    if c_inf:
        total = total + as_ratfunc(c_inf, p) * _pow(q, j_top) / (one - q)
    return prefactor * total


WEYL = ((0, 1), (-1, 0))


def intertwine(phi: SchwartzFn, a_chi, a_psi, g, mode: str = "closed",
               bound: int = 24) -> RatFunc:
    """The normalised intertwining operator applied to the section of
    (phi, chi, psi), evaluated at g.

    closed mode: (1 - (a_chi/a_psi) l^{-1}) * section of (phi^, psi, chi),
    valid for unramified characters.  direct mode: the unipotent integral
    L(chi/psi, 0)^{-1} * int f(w n(u) g) du computed shell by shell, with
    the tail summed as a geometric series once the shell values
    stabilise."""
    p = phi.p
    a_chi = as_ratfunc(a_chi, p)
    a_psi = as_ratfunc(a_psi, p)
    one = as_ratfunc(1, p)
    if mode == "closed":
        lfac = one - (a_chi / a_psi) * ell_pow(-2, p)
        return lfac * eval_siegel(fourier(phi), a_psi, a_chi, g)
    if mode != "direct":
        raise ValueError("mode must be 'closed' or 'direct'")

    g = [[Fraction(x) for x in row] for row in g]

    def f_at(h):
        return eval_siegel(phi, a_chi, a_psi, h)

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)]
                for i in range(2)]

    n0 = phi.n + phi.s + 1

    # integral over u in Z_l, by stabilising averages at finer moduli:
    # three consecutive agreeing refinements are required
    def zl_part():
        history = []
        for nn in range(n0, n0 + bound):
            mod = p ** nn
            tot = as_ratfunc(0, p)
            for u in range(mod):
                h = mul(mul([list(WEYL[0]), list(WEYL[1])],
                            [[1, Q(u)], [0, 1]]), g)
                tot = tot + f_at(h)
            tot = tot * as_ratfunc(Q(1, mod), p)
            history.append(tot)
            if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
                return tot
        raise ShellBoundExceeded("Z_l part did not stabilise")

    # shell val(u) = -j, rewritten via u -> 1/u as an integral over the
    # opposite unipotent:  S_j = a_r^j (1 - 1/l) avg_e f(nbar(l^j e) g)
    a_r = a_chi / a_psi
    unit_vol = one - as_ratfunc(Q(1, p), p)

    def shell_avg(j):
        history = []
        for nn in range(max(n0, 1), max(n0, 1) + bound):
            mod = p ** nn
            tot = as_ratfunc(0, p)
            cnt = 0
            for e in range(1, mod):
                if e % p == 0:
                    continue
                h = mul([[1, 0], [Q(e * p ** j), 1]], g)
                tot = tot + f_at(h)
                cnt += 1
            tot = tot * as_ratfunc(Q(1, cnt), p)
            history.append(tot)
            if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
                return tot
        raise ShellBoundExceeded("shell average did not stabilise")

    total = zl_part()
    fg = f_at(g)
    j = 1
    while True:
        if j > bound:
            raise ShellBoundExceeded("shell bound exceeded")
        avg = shell_avg(j)
        if (avg == fg and shell_avg(j + 1) == fg
                and shell_avg(j + 2) == fg):
            # stabilised: geometric tail sum_{i >= j} a_r^i (1-1/l) fg
            total = total + _pow(a_r, j) / (one - a_r) * unit_vol * fg
            break
        total = total + _pow(a_r, j) * unit_vol * avg
        j += 1
    return (one - a_r) * total


def _gl2_mod_reps(p: int, t: int):
    """Representatives of GL2(Z/p^t), lifted to integer matrices."""
    mod = p ** t
    for a in range(mod):
        for b in range(mod):
            for c in range(mod):
                for d in range(mod):
                    if (a * d - b * c) % p:
                        yield ((a, b), (c, d))


def dual_pairing(sec1, sec2, t: int, p: int) -> RatFunc:
    """<f1, f2> = integral over GL2(Z_l) of f1(g) f2(g) dg, where sec_i =
    (phi_i, a_chi_i, a_psi_i) and both integrands are right-invariant at
    level t.  Computed as the exact average over GL2(Z/l^t)."""
    phi1, ac1, ap1 = sec1
    phi2, ac2, ap2 = sec2
    total = as_ratfunc(0, p)
    count = 0
    for g in _gl2_mod_reps(p, max(t, 1)):
        total = total + (eval_siegel(phi1, ac1, ap1, g)
                         * eval_siegel(phi2, ac2, ap2, g))
        count += 1
    return total * as_ratfunc(Q(1, count), p)


def projective_line_reps(p: int, t: int):
    """Integral lifts of coset representatives for the lower Bruhat cells
    of GL2(Z/p^t) modulo the upper-triangular subgroup: matrices in
    GL2(Z) whose bottom rows exhaust P^1(Z/p^t)."""
    mod = p ** t
    reps = []
    for y in range(mod):
        # bottom row (1, y)
        reps.append(((0, -1), (1, y)))
    for x in range(0, mod, p):
        # bottom row (x, 1)
        reps.append(((1, 0), (x, 1)))
    return reps


def support_check(phi: SchwartzFn, a_chi, a_psi, t: int) -> bool:
    """True iff the section of (phi, chi, psi) vanishes on every Bruhat
    cell of GL2(Z_l) outside B * K0(l^t), tested on representatives of
    the projective line mod l^t."""
    p = phi.p
    if t == 0:
        return True
    mod = p ** t
    for rep in projective_line_reps(p, t):
        c, d = rep[1]
        in_k0 = (c % mod == 0)
        value = eval_siegel(phi, a_chi, a_psi, rep)
        if not in_k0 and value != as_ratfunc(0, p):
            return False
    return True


def h_section_value(phi_pair, chi_pair, psi_pair, point) -> RatFunc:
    """Value of the tensor-product section on the subgroup of pairs of
    GL2 elements with equal determinant: the product of the two GL2
    section values at the two components of the point."""
    (phi1, phi2) = phi_pair
    (ac1, ac2) = chi_pair
    (ap1, ap2) = psi_pair
    (g1, g2) = point
    return (eval_siegel(phi1, ac1, ap1, g1)
            * eval_siegel(phi2, ac2, ap2, g2))
