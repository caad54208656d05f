"""Algebraic representations of the rank-2 similitude symplectic group
over Q, and their restriction to the fibre product of two 2x2 groups.

The irreducible representation with highest weight (a+b, a, 0) — in the
basis (chi1, chi2, mu) of the diagonal-torus character lattice — is
realised as the cyclic module generated by the top tensor inside
(wedge^2 of the standard representation)^(tensor a) tensor (standard
representation)^(tensor b).  All linear algebra is exact over Q.

Provided here:

* an 11-element basis of the Lie algebra (2 semisimple Cartan elements,
  the identity, and 8 root vectors) with its trace form and the
  resulting Casimir operator,
* cyclic construction of the irreducibles with the dimension formula
  (a+1)(b+1)(a+b+2)(2a+b+3)/6 and full weight multiplicities,
* Casimir-Krylov isotypic projection (the Cartan product),
* the restriction law to the fibre product of two 2x2 groups, with its
  explicit highest-weight vectors, and
* the unipotent-twist projection identity used by the norm-relation
  bookkeeping.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from .padic import mat, mat_mul, mat_t

Q = Fraction

#: desk-scale bound on the ambient tensor dimension 6^a 4^b
SIZE_BOUND = 1000


# -- the Lie algebra -------------------------------------------------------------

def _e(i, j, c=1):
    m = [[Q(0)] * 4 for _ in range(4)]
    m[i][j] = Q(c)
    return tuple(tuple(r) for r in m)


def _madd(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def _mscale(a, c):
    return tuple(tuple(Q(c) * x for x in r) for r in a)


def lie_basis():
    """Ordered 11-element basis: two Cartan coroots, the identity, the
    four positive root vectors, the four negative root vectors."""
    t1 = _madd(_e(0, 0), _e(3, 3, -1))
    t2 = _madd(_e(1, 1), _e(2, 2, -1))
    ident = _madd(_madd(_e(0, 0), _e(1, 1)), _madd(_e(2, 2), _e(3, 3)))
    n0 = _madd(_e(0, 1), _e(2, 3, -1))        # chi1 - chi2
    n1 = _e(1, 2)                             # 2 chi2 - mu
    n2 = _madd(_e(0, 2), _e(1, 3))            # chi1 + chi2 - mu
    n3 = _e(0, 3)                             # 2 chi1 - mu
    pos = [n0, n1, n2, n3]
    neg = [mat_t(mat(x)) for x in pos]
    return ([("t1", t1), ("t2", t2), ("id", ident)]
            + [(f"n{i}", x) for i, x in enumerate(pos)]
            + [(f"m{i}", tuple(tuple(Q(v) for v in r) for r in x))
               for i, x in enumerate(neg)])


def lie_bracket(x, y):
    return _madd(mat_mul(x, y), _mscale(mat_mul(y, x), -1))


def similitude_derivative(x):
    """The scalar s with x^T J + J x = s J, or None if x is not in the
    Lie algebra of the similitude group."""
    from .padic import J4
    lhs = _madd(mat_mul(mat_t(mat(x)), J4), mat_mul(J4, mat(x)))
    s = lhs[0][3]
    if lhs != _mscale(J4, s):
        return None
    return s


# weights of the standard basis vectors in the (chi1, chi2, mu) basis
_STD_WEIGHTS = ((1, 0, 0), (0, 1, 0), (0, -1, 1), (-1, 0, 1))
#: index pairs of the wedge-square basis
WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_WEDGE_INDEX = {p: i for i, p in enumerate(WEDGE_PAIRS)}


def _wedge_weight(k):
    i, j = WEDGE_PAIRS[k]
    return tuple(a + b for a, b in zip(_STD_WEIGHTS[i], _STD_WEIGHTS[j]))


def wedge_lie_matrix(x):
    """Induced action of a Lie element on the wedge square (Leibniz)."""
    out = [[Q(0)] * 6 for _ in range(6)]
    for col, (i, j) in enumerate(WEDGE_PAIRS):
        # x.(e_i ^ e_j) = (x e_i) ^ e_j + e_i ^ (x e_j)
        for r in range(4):
            _wedge_add(out, col, r, j, x[r][i])
            _wedge_add(out, col, i, r, x[r][j])
    return tuple(tuple(r) for r in out)


def wedge_group_matrix(g):
    """Induced action of a group element on the wedge square."""
    out = [[Q(0)] * 6 for _ in range(6)]
    for col, (i, j) in enumerate(WEDGE_PAIRS):
        for r in range(4):
            for s in range(4):
                _wedge_add(out, col, r, s, Q(g[r][i]) * Q(g[s][j]))
    return tuple(tuple(r) for r in out)


def _wedge_add(out, col, i, j, coeff):
    if coeff == 0 or i == j:
        return
    if i < j:
        out[_WEDGE_INDEX[(i, j)]][col] += coeff
    else:
        out[_WEDGE_INDEX[(j, i)]][col] -= coeff


# -- ambient tensor spaces -------------------------------------------------------

class TensorSpace:
    """(wedge square)^(tensor a) tensor (standard)^(tensor b), with
    exact sparse vectors keyed by tuples of factor indices."""

    def __init__(self, a: int, b: int, kinds=None):
        if a < 0 or b < 0 or 6 ** a * 4 ** b > SIZE_BOUND:
            raise ValueError("size bound exceeded")
        self.a, self.b = a, b
        if kinds is None:
            kinds = ("w",) * a + ("v",) * b
        if sorted(kinds) != sorted(("w",) * a + ("v",) * b):
            raise ValueError("kinds must be a permutation of the factors")
        self.kinds = tuple(kinds)
        self.dims = tuple(6 if k == "w" else 4 for k in self.kinds)
        basis = lie_basis()
        self._lie4 = {name: x for name, x in basis}
        self._lie6 = {name: wedge_lie_matrix(x) for name, x in basis}
        self.lie_names = [name for name, _ in basis]

    def indices(self):
        return itertools.product(*(range(d) for d in self.dims))

    def gweight(self, idx):
        w = (0, 0, 0)
        for k, i in zip(self.kinds, idx):
            piece = _wedge_weight(i) if k == "w" else _STD_WEIGHTS[i]
            w = tuple(x + y for x, y in zip(w, piece))
        return w

    def sweight(self, idx) -> int:
        """Weight under the rank-1 torus diag(x, x, 1, 1)."""
        n1, n2, m = self.gweight(idx)
        return n1 + n2 + m

    def _factor_matrices(self, mats4, mats6):
        return tuple(mats6 if k == "w" else mats4 for k in self.kinds)

    def apply_lie(self, name: str, vec: dict) -> dict:
        facs = self._factor_matrices(self._lie4[name], self._lie6[name])
        out: dict = {}
        for idx, c in vec.items():
            for pos in range(len(idx)):
                mcol = facs[pos]
                i = idx[pos]
                for r in range(len(mcol)):
                    coeff = mcol[r][i]
                    if coeff:
                        nidx = idx[:pos] + (r,) + idx[pos + 1:]
                        out[nidx] = out.get(nidx, Q(0)) + c * coeff
        return {k: v for k, v in out.items() if v != 0}

    def apply_group(self, g, vec: dict) -> dict:
        g4 = mat(g)
        g6 = wedge_group_matrix(g4)
        out = dict(vec)
        for pos, kind in enumerate(self.kinds):
            m = g6 if kind == "w" else g4
            nxt: dict = {}
            for idx, c in out.items():
                i = idx[pos]
                for r in range(len(m)):
                    coeff = Q(m[r][i])
                    if coeff:
                        nidx = idx[:pos] + (r,) + idx[pos + 1:]
                        nxt[nidx] = nxt.get(nidx, Q(0)) + c * coeff
            out = {k: v for k, v in nxt.items() if v != 0}
        return out

    def top_tensor(self) -> dict:
        """w^(tensor a) tensor v^(tensor b): the generating vector."""
        return {tuple([0] * (self.a + self.b)): Q(1)}


def _casimir_pairs():
    basis = lie_basis()
    n = len(basis)
    gram = [[_trace(mat_mul(basis[i][1], basis[j][1])) for j in range(n)]
            for i in range(n)]
    ginv = _mat_inv_q(gram)
    return basis, ginv


def _trace(m):
    return sum(Q(m[i][i]) for i in range(len(m)))


def _mat_inv_q(m):
    n = len(m)
    aug = [[Q(x) for x in row] + [Q(1) if i == j else Q(0)
                                  for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [x / d for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


_CAS_BASIS, _CAS_GINV = None, None


def casimir_apply(space: TensorSpace, vec: dict) -> dict:
    """Apply the Casimir operator of the trace form."""
    global _CAS_BASIS, _CAS_GINV
    if _CAS_BASIS is None:
        _CAS_BASIS, _CAS_GINV = _casimir_pairs()
    names = [name for name, _ in _CAS_BASIS]
    partial = {name: space.apply_lie(name, vec) for name in names}
    out: dict = {}
    for i, ni in enumerate(names):
        for j, nj in enumerate(names):
            g = _CAS_GINV[i][j]
            if g == 0:
                continue
            for idx, c in space.apply_lie(ni, partial[nj]).items():
                out[idx] = out.get(idx, Q(0)) + g * c
    return {k: v for k, v in out.items() if v != 0}


def casimir_eigenvalue(weight) -> Fraction:
    """Eigenvalue of the trace-form Casimir on the irreducible with the
    given highest weight (n1, n2, m): the pairing of the weight with
    weight + (sum of positive roots) under the dual trace form."""
    n1, n2, m = weight
    two_rho = (4, 2, -3)

    def coords(w):
        a1, a2, mm = w
        return (Q(a1), Q(a2), Q(a1 + a2 + 2 * mm))

    lam = coords(weight)
    lam2 = coords(tuple(x + y for x, y in zip(weight, two_rho)))
    return lam[0] * lam2[0] / 2 + lam[1] * lam2[1] / 2 + lam[2] * lam2[2] / 4


# -- cyclic construction of the irreducibles ------------------------------------

class RepSpace:
    """Irreducible representation with highest weight (a+b, a, 0),
    realised as an exact cyclic submodule of a TensorSpace.  The basis
    is stored weight space by weight space."""

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        self.space = TensorSpace(a, b)
        self._by_weight: dict = {}
        seed = self.space.top_tensor()
        frontier = [seed]
        self._insert(seed)
        while frontier:
            nxt = []
            for v in frontier:
                for name in self.space.lie_names:
                    img = self.space.apply_lie(name, v)
                    if img and self._insert(img):
                        nxt.append(img)
            frontier = nxt

    def _insert(self, vec: dict) -> bool:
        """Reduce against the same-weight echelon basis; insert if new."""
        w = self.space.gweight(next(iter(vec)))
        rows = self._by_weight.setdefault(w, [])
        vec = dict(vec)
        for pivot, row in rows:
            c = vec.get(pivot)
            if c:
                for k, x in row.items():
                    vec[k] = vec.get(k, Q(0)) - c * x
                vec = {k: x for k, x in vec.items() if x != 0}
        if not vec:
            return False
        pivot = min(vec)
        d = vec[pivot]
        rows.append((pivot, {k: x / d for k, x in vec.items()}))
        return True

    @property
    def dimension(self) -> int:
        return sum(len(rows) for rows in self._by_weight.values())

    def weight_multiplicities(self) -> dict:
        return {w: len(rows) for w, rows in self._by_weight.items() if rows}

    def contains(self, vec: dict) -> bool:
        vec = dict(vec)
        groups: dict = {}
        for idx, c in vec.items():
            groups.setdefault(self.space.gweight(idx), {})[idx] = c
        for w, part in groups.items():
            for pivot, row in self._by_weight.get(w, []):
                c = part.get(pivot)
                if c:
                    for k, x in row.items():
                        part[k] = part.get(k, Q(0)) - c * x
            if any(x != 0 for x in part.values()):
                return False
        return True


def rep_dimension_formula(a: int, b: int) -> int:
    n = (a + 1) * (b + 1) * (a + b + 2) * (2 * a + b + 3)
    assert n % 6 == 0
    return n // 6


def build_rep(a: int, b: int) -> RepSpace:
    rep = RepSpace(a, b)
    expected = rep_dimension_formula(a, b)
    if rep.dimension != expected:
        raise AssertionError(
            f"cyclic module has dimension {rep.dimension}, "
            f"formula gives {expected}")
    return rep


# -- isotypic projection (Cartan product) ---------------------------------------

class ProjectorError(Exception):
    pass


def cartan_project(space: TensorSpace, vec: dict, target_weight,
                   require_max: bool = True) -> dict:
    """Component of vec in the isotypic part whose Casimir eigenvalue is
    that of target_weight, via a Krylov minimal polynomial of the
    Casimir on the cyclic span of vec."""
    if not vec:
        return {}
    c0 = casimir_eigenvalue(target_weight)
    krylov = [dict(vec)]
    # echelon data over the flattened support
    rows: list = []
    coords: list = []

    def reduce(v):
        v = dict(v)
        combo = [Q(0)] * len(rows)
        for i, (pivot, row) in enumerate(rows):
            c = v.get(pivot)
            if c:
                combo[i] = c
                for k, x in row.items():
                    v[k] = v.get(k, Q(0)) - c * x
        return {k: x for k, x in v.items() if x != 0}, combo

    cur = dict(vec)
    exprs = []  # expression of each krylov vector over the echelon rows
    while True:
        red, combo = reduce(cur)
        if not red:
            # dependency found: minimal polynomial coefficients
            break
        pivot = min(red)
        d = red[pivot]
        rows.append((pivot, {k: x / d for k, x in red.items()}))
        coords.append(d)
        exprs.append(combo)
        cur = casimir_apply(space, cur)
        krylov.append(dict(cur))
    # solve for the dependency of the last krylov vector on the previous
    n = len(rows)
    # express each krylov vector in the echelon basis by re-reducing
    mat_rows = []
    for kv in krylov:
        v = dict(kv)
        combo = [Q(0)] * n
        for i, (pivot, row) in enumerate(rows):
            c = v.get(pivot)
            if c:
                combo[i] = c
                for k, x in row.items():
                    v[k] = v.get(k, Q(0)) - c * x
        mat_rows.append(combo)
    # krylov[n] = sum_{i<n} t_i krylov[i]: solve the n x n system
    a_t = [[mat_rows[j][i] for j in range(n)] for i in range(n)]
    rhs = [mat_rows[n][i] for i in range(n)]
    sol = _solve_q(a_t, rhs)
    # minimal polynomial: x^n - sum t_i x^i
    x = sympy.Symbol("x")
    poly = x ** n - sum(sympy.Rational(sol[i].numerator,
                                       sol[i].denominator) * x ** i
                        for i in range(n))
    roots = sympy.roots(sympy.Poly(poly, x))
    if any(mult > 1 for mult in roots.values()):
        raise ProjectorError("projector not separating")
    rts = []
    for r in roots:
        if not r.is_rational:
            raise ProjectorError("projector not separating")
        rts.append(Q(int(sympy.numer(r)), int(sympy.denom(r))))
    c0q = Q(c0)
    if c0q not in rts:
        return {}
    if require_max and any(r > c0q for r in rts):
        raise ProjectorError("target eigenvalue is not maximal")
    out = dict(vec)
    for r in rts:
        if r == c0q:
            continue
        nxt = casimir_apply(space, out)
        out = {k: (nxt.get(k, Q(0)) - r * v) / (c0q - r)
               for k, v in out.items()}
        for k, v in nxt.items():
            if k not in out:
                out[k] = v / (c0q - r)
        out = {k: v for k, v in out.items() if v != 0}
    return out


def _solve_q(a, rhs):
    n = len(rhs)
    aug = [[Q(x) for x in row] + [Q(rhs[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [x / d for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


# -- restriction to the fibre product --------------------------------------------

def _h_weight(gw):
    """Convert a torus weight (n1, n2, m) to exponents of the coordinates
    (a, d, a') of the restricted-torus parametrisation with d' = a d/a'."""
    n1, n2, m = gw
    return (n1 + m, m, n2)


def _w_cd_weights(c: int, d: int, q: int):
    """Multiset of restricted-torus weights of Sym^c box Sym^d times the
    q-th power of the determinant character."""
    out = []
    for i in range(c + 1):
        for j in range(d + 1):
            out.append((c - i + j + q, i + j + q, d - 2 * j))
    return out


def branch_decompose(a: int, b: int):
    """Verify the restriction law and return the index list
    [(c, d, q)] with c = a+b-q-r, d = a-q+r over 0<=q<=a, 0<=r<=b."""
    rep = build_rep(a, b)
    actual: dict = {}
    for w, mult in rep.weight_multiplicities().items():
        hw = _h_weight(w)
        actual[hw] = actual.get(hw, 0) + mult
    expected: dict = {}
    index = []
    total = 0
    for q in range(a + 1):
        for r in range(b + 1):
            c, d = a + b - q - r, a - q + r
            index.append((c, d, q))
            total += (c + 1) * (d + 1)
            for hw in _w_cd_weights(c, d, q):
                expected[hw] = expected.get(hw, 0) + 1
    if total != rep.dimension:
        raise AssertionError("dimension mismatch in restriction law")
    if actual != expected:
        bad = {w for w in set(actual) | set(expected)
               if actual.get(w, 0) != expected.get(w, 0)}
        raise AssertionError(f"weight multiplicity mismatch at {bad}")
    return index


# named vectors in the two fundamental factors
#: highest-weight vector of the wedge factor: e1 ^ e2
W_INDEX = _WEDGE_INDEX[(0, 1)]
#: its torus-weight-mu companion: e1 ^ e4 - e2 ^ e3
W_PRIME = ((_WEDGE_INDEX[(0, 3)], Q(1)), (_WEDGE_INDEX[(1, 2)], Q(-1)))


def hw_tensor(a: int, b: int, q: int, r: int) -> dict:
    """The plain tensor w^(a-q) (w')^q v^(b-r) (v')^r in the fixed
    factor order (wedge factors first)."""
    if not (0 <= q <= a and 0 <= r <= b):
        raise ValueError("parameters out of range")
    vec = {(): Q(1)}
    for pos in range(a + b):
        nxt = {}
        if pos < a - q:
            choices = ((W_INDEX, Q(1)),)
        elif pos < a:
            choices = W_PRIME
        elif pos < a + (b - r):
            choices = ((0, Q(1)),)
        else:
            choices = ((1, Q(1)),)
        for idx, c in vec.items():
            for i, x in choices:
                nxt[idx + (i,)] = c * x
        vec = nxt
    return vec


def hw_vector(a: int, b: int, q: int, r: int,
              space: TensorSpace = None) -> dict:
    """The highest-weight vector of the (q, r) summand of the
    restriction: the isotypic projection of the plain tensor.  Asserts
    that it is non-zero and annihilated by the positive unipotents of
    the restricted group."""
    if space is None:
        space = TensorSpace(a, b)
    vec = cartan_project(space, hw_tensor(a, b, q, r), (a + b, a, 0))
    if not vec:
        raise AssertionError("projected highest-weight vector vanished")
    # annihilated by the two positive nilpotents of the fibre product
    # (root positions (0,3) and (1,2))
    for name in ("n3", "n1"):
        if space.apply_lie(name, vec):
            raise AssertionError(
                "vector is not a highest-weight vector for the subgroup")
    return vec


def twist_element(h: int):
    """The unipotent 1 + h(E13 + E24)."""
    return mat([[1, 0, h, 0], [0, 1, 0, h], [0, 0, 1, 0], [0, 0, 0, 1]])


def s_weight_projection(space: TensorSpace, vec: dict, weight: int) -> dict:
    return {idx: c for idx, c in vec.items()
            if space.sweight(idx) == weight}


def twist_lemma_check(a: int, b: int, q: int, r: int, h: int):
    """Check that the projection of the h-th twist of the (q, r)
    highest-weight vector to the top weight space of the rank-1 torus
    diag(x,x,1,1) equals (2h)^q times the (0, r) vector.  Returns
    (ok, lhs, rhs)."""
    if h == 0:
        raise ValueError("h must be non-zero")
    space = TensorSpace(a, b)
    v = hw_vector(a, b, q, r, space)
    twisted = space.apply_group(twist_element(h), v)
    lhs = s_weight_projection(space, twisted, 2 * a + b)
    rhs = {k: Q(2 * h) ** q * c
           for k, c in hw_vector(a, b, 0, r, space).items()}
    return lhs == rhs, lhs, rhs


def dual_character_check(a: int, b: int, rep: RepSpace = None) -> bool:
    """The weight multiset negated equals the multiset shifted by
    -(2a+b) in the similitude direction."""
    if rep is None:
        rep = build_rep(a, b)
    mult = rep.weight_multiplicities()
    negated = {tuple(-x for x in w): m for w, m in mult.items()}
    shifted = {(w[0], w[1], w[2] - (2 * a + b)): m
               for w, m in mult.items()}
    return negated == shifted


def central_character_check(a: int, b: int, rep: RepSpace = None) -> bool:
    """Every weight (n1, n2, m) satisfies n1 + n2 + 2m = 2a + b: the
    centre acts by the (2a+b)-th power."""
    if rep is None:
        rep = build_rep(a, b)
    return all(w[0] + w[1] + 2 * w[2] == 2 * a + b
               for w in rep.weight_multiplicities())


def grid(bound: int = SIZE_BOUND):
    """All (a, b) with 6^a 4^b within the desk-scale bound."""
    out = []
    a = 0
    while 6 ** a <= bound:
        b = 0
        while 6 ** a * 4 ** b <= bound:
            out.append((a, b))
            b += 1
        a += 1
    return out
