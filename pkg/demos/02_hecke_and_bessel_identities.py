"""Spherical Hecke theory and Bessel-value generating functions.

An unramified principal series of the rank-2 similitude symplectic
group is determined by its three Satake parameters (alpha, beta, c).
The demo computes spherical Hecke eigenvalues by exact double-coset
enumeration, assembles the degree-4 Hecke polynomial, and matches the
power series of Bessel values against its closed rational form.
"""

from gsp4verify.symcore import sym
from gsp4verify.gsp4local import (PrincipalSeriesG, hecke_eigenvalue,
                                  hecke_polynomial, spin_reciprocal,
                                  u_matrix_char_poly)
from gsp4verify.besselzeta import (BesselDatum, bessel_series, zeta,
                                   zeta_spherical_closed, zeta_ul_closed)

print("== spherical Hecke eigenvalues at a concrete prime ==")
p = 2
sigma = PrincipalSeriesG.formal(p)
for op in ("T", "T1", "R"):
    print("eigenvalue of %s: %s" % (op, hecke_eigenvalue(op, sigma)))

print()
print("== the Hecke polynomial factors through the Satake parameters ==")
x = sym("x", p)
lhs = hecke_polynomial(sigma, x)
rhs = spin_reciprocal(sigma, x)   # prod over gamma in {c,ca,cb,cab}
print("P(x) == prod(1 - gamma v^3 x):", lhs == rhs)

print()
print("== the U-operator on parahoric invariants ==")
print("char poly matches the same product:",
      u_matrix_char_poly(sigma, x) == spin_reciprocal(sigma, x))

print()
print("== Bessel values: series vs closed form (fully formal prime) ==")
datum = BesselDatum.formal(None)
series = bessel_series(datum, 4)
print("first Bessel values:", [series.value(n) for n in (0, 1)])
print("spherical zeta identity:",
      zeta("spherical", datum) == zeta_spherical_closed(datum))
print("U-translated zeta identity:",
      zeta("ul", datum) == zeta_ul_closed(datum))
