"""Classical Poisson geometry of the double (sl_n + sl_n, diagonal, triangular
split) over exact rationals.

The ambient Lie algebra is g + g with the difference-of-trace-forms pairing;
the diagonal copy and the triangular subalgebra k = {(h+x, -h+y)} form the
two halves of the Manin triple.  The module provides the group-level Poisson
tensors (on the diagonal group, on K, on the product, and the
Semenov-Tyan-Shansky tensor on G x G), coordinate-function brackets through
exact first-order jets, radical and non-degeneracy computations, and the
Hamiltonian-reduction checks on the subvarieties cut out by triangularity
conditions.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .rootdata import Weight


class MembershipError(ValueError):
    """A point does not lie on the claimed subgroup or subvariety."""


# ---------------------------------------------------------------------------
# exact first-order jets (dual numbers) for directional derivatives
# ---------------------------------------------------------------------------

class Jet:
    """A dual number a + eps*b; eps^2 = 0.  Coefficients are rationals or,
    for mixed second derivatives, jets in an independent direction."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps=0):
        self.val = val if isinstance(val, Jet) else Fraction(val)
        self.eps = eps if isinstance(eps, Jet) else Fraction(eps)

    @staticmethod
    def lift(x):
        if isinstance(x, Jet):
            return x
        return Jet(x)

    def __add__(self, other):
        other = Jet.lift(other)
        return Jet(self.val + other.val, self.eps + other.eps)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.eps)

    def __sub__(self, other):
        return self + (-Jet.lift(other))

    def __rsub__(self, other):
        return Jet.lift(other) + (-self)

    def __mul__(self, other):
        other = Jet.lift(other)
        return Jet(self.val * other.val,
                   self.val * other.eps + self.eps * other.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Jet.lift(other)
        v = self.val / other.val
        return Jet(v, (self.eps - v * other.eps) / other.val)

    def __rtruediv__(self, other):
        return Jet.lift(other) / self

    def __pow__(self, n):
        out = Jet(1)
        b = self
        if n < 0:
            b = Jet(1) / b
            n = -n
        for _ in range(n):
            out = out * b
        return out

    def __eq__(self, other):
        other = Jet.lift(other)
        return self.val == other.val and self.eps == other.eps

    def __repr__(self):
        return "Jet(%s, %s)" % (self.val, self.eps)


# ---------------------------------------------------------------------------
# small exact matrix helpers
# ---------------------------------------------------------------------------

def mat_id(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

def mat_zero(n):
    return [[Fraction(0)] * n for _ in range(n)]

def mat_add(a, b):
    return [[a[i][j] + b[i][j] for j in range(len(a))] for i in range(len(a))]

def mat_sub(a, b):
    return [[a[i][j] - b[i][j] for j in range(len(a))] for i in range(len(a))]

def mat_scale(a, c):
    return [[c * x for x in row] for row in a]

def mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), a[0][0] * 0)
             for j in range(n)] for i in range(n)]

def mat_trace(a):
    return sum((a[i][i] for i in range(len(a))), a[0][0] * 0)

def _invertible(x):
    if isinstance(x, Jet):
        return x.val != 0
    return x != 0


def mat_inverse(a):
    n = len(a)
    aug = [[a[i][j] for j in range(n)]
           + [Fraction(int(i == j)) * 1 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if _invertible(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [aug[r][j] - f * aug[col][j] for j in range(2 * n)]
    return [row[n:] for row in aug]

def mat_det(a):
    n = len(a)
    m = [row[:] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [m[r][j] - f * m[col][j] for j in range(n)]
    return det

def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows))
                    if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [rows[r][j] - f * rows[rank][j]
                           for j in range(ncols)]
        rank += 1
        col += 1
    return rank

def _kernel_basis(mat):
    """Basis of the right kernel of a rational matrix (rows x cols)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rows = [list(r) for r in mat]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [rows[r][j] - f * rows[rank][j]
                           for j in range(ncols)]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# the Manin triple (g + g, diagonal, k) for sl_n
# ---------------------------------------------------------------------------

class ManinTriple:
    """Matrix model of the triple for sl_n: the ambient algebra is the direct
    sum of two copies of sl_n with the form rho((a,b),(a',b')) =
    tr(aa') - tr(bb'), the first half is the diagonal subalgebra, and the
    second is k = {(h+x, -h+y)}."""

    def __init__(self, datum):
        if datum.label[0] != "A":
            raise MembershipError(
                "matrix model only implemented for type A")
        self.datum = datum
        self.rank = datum.rank
        self.n = datum.rank + 1
        n = self.n
        # basis of sl_n: positive entries, negative entries, coroots
        self.pos_pairs = [(r, c) for r in range(n) for c in range(r + 1, n)]
        self.g_basis = []
        for (r, c) in self.pos_pairs:
            self.g_basis.append(self._unit(r, c))
        for (r, c) in self.pos_pairs:
            self.g_basis.append(self._unit(c, r))
        for i in range(n - 1):
            self.g_basis.append(self._coroot(i))
        self.dim_g = len(self.g_basis)
        # bases of the two halves, as matrix pairs
        self.m_basis = [(x, x) for x in self.g_basis]
        self.l_basis = []
        for (r, c) in self.pos_pairs:
            self.l_basis.append((self._unit(r, c), mat_zero(n)))
        for (r, c) in self.pos_pairs:
            self.l_basis.append((mat_zero(n), self._unit(c, r)))
        for i in range(n - 1):
            h = self._coroot(i)
            self.l_basis.append((h, mat_scale(h, Fraction(-1))))
        self.a_basis = self.m_basis + self.l_basis
        cols = [self.pair_to_vec(p) for p in self.a_basis]
        self._basis_inv = mat_inverse(
            [[cols[c][r] for c in range(len(cols))]
             for r in range(len(cols))])
        self._dual_k = None

    def _unit(self, r, c):
        m = mat_zero(self.n)
        m[r][c] = Fraction(1)
        return m

    def _coroot(self, i):
        m = mat_zero(self.n)
        m[i][i] = Fraction(1)
        m[i + 1][i + 1] = Fraction(-1)
        return m

    # -- coordinates -------------------------------------------------------

    def sl_to_vec(self, x):
        """Coordinates of a traceless matrix in the sl_n basis."""
        out = []
        for (r, c) in self.pos_pairs:
            out.append(x[r][c])
        for (r, c) in self.pos_pairs:
            out.append(x[c][r])
        acc = x[0][0] * 0
        for i in range(self.n - 1):
            acc = acc + x[i][i]
            out.append(acc)
        return out

    def pair_to_vec(self, pair):
        return self.sl_to_vec(pair[0]) + self.sl_to_vec(pair[1])

    def vec_to_pair(self, vec):
        half = self.dim_g
        out = []
        for part in (vec[:half], vec[half:]):
            m = mat_zero(self.n)
            idx = 0
            for (r, c) in self.pos_pairs:
                m[r][c] = part[idx]
                idx += 1
            for (r, c) in self.pos_pairs:
                m[c][r] = part[idx]
                idx += 1
            prev = Fraction(0)
            for i in range(self.n - 1):
                m[i][i] = m[i][i] + part[idx] - prev
                prev = part[idx]
                idx += 1
            m[self.n - 1][self.n - 1] = m[self.n - 1][self.n - 1] - prev
            out.append(m)
        return tuple(out)

    def decompose(self, pair):
        """Coefficients of a pair on the m-basis followed by the l-basis."""
        vec = self.pair_to_vec(pair)
        return [sum((self._basis_inv[r][c] * vec[c]
                     for c in range(len(vec))), Fraction(0))
                for r in range(len(vec))]

    def pi_m(self, pair):
        coeffs = self.decompose(pair)[: self.dim_g]
        return self._combine(self.m_basis, coeffs)

    def pi_l(self, pair):
        coeffs = self.decompose(pair)[self.dim_g:]
        return self._combine(self.l_basis, coeffs)

    def _combine(self, basis, coeffs):
        a = mat_zero(self.n)
        b = mat_zero(self.n)
        for c, (x, y) in zip(coeffs, basis):
            if c != 0:
                a = mat_add(a, mat_scale(x, c))
                b = mat_add(b, mat_scale(y, c))
        return (a, b)

    # -- forms and actions -------------------------------------------------

    def kappa(self, x, y):
        return mat_trace(mat_mul(x, y))

    def rho(self, p1, p2):
        return self.kappa(p1[0], p2[0]) - self.kappa(p1[1], p2[1])

    def omega(self, p1, p2):
        m1, l1 = self.pi_m(p1), self.pi_l(p1)
        m2, l2 = self.pi_m(p2), self.pi_l(p2)
        return self.rho(m1, l2) - self.rho(l1, m2)

    def ad_pair(self, gpair, apair):
        g1, g2 = gpair
        return (mat_mul(mat_mul(g1, apair[0]), mat_inverse(g1)),
                mat_mul(mat_mul(g2, apair[1]), mat_inverse(g2)))

    # -- distinguished elements --------------------------------------------

    def e_mat(self, i):
        return self._unit(i - 1, i)

    def f_mat(self, i):
        return self._unit(i, i - 1)

    def h_mat(self, i):
        return self._coroot(i - 1)

    def H_lambda(self, lam):
        """The Cartan element with kappa(H_lam, H) = lam(H)."""
        lam = Weight(lam)
        r = self.rank
        # solve tr(H h_i) = <lam, alpha_i^vee> for diagonal traceless H
        mat = [[self.kappa(self.h_mat(j + 1), self.h_mat(i + 1))
                for j in range(r)] for i in range(r)]
        rhs = [Fraction(self.datum.pairing(lam, i + 1)) for i in range(r)]
        inv = mat_inverse(mat)
        coeffs = [sum((inv[i][j] * rhs[j] for j in range(r)), Fraction(0))
                  for i in range(r)]
        out = mat_zero(self.n)
        for i in range(r):
            out = mat_add(out, mat_scale(self.h_mat(i + 1), coeffs[i]))
        return out

    def dual_k_basis(self):
        """The basis {Y_r} of k with rho((X_r, X_r), Y_s) = delta_rs, where
        {X_r} is the sl_n basis."""
        if self._dual_k is None:
            m = [[self.rho((x, x), yb) for yb in self.l_basis]
                 for x in self.g_basis]
            inv = mat_inverse(m)
            dual = []
            for r in range(self.dim_g):
                coeffs = [inv[s][r] for s in range(self.dim_g)]
                dual.append(self._combine(self.l_basis, coeffs))
            self._dual_k = dual
        return self._dual_k


# ---------------------------------------------------------------------------
# Poisson tensors
# ---------------------------------------------------------------------------

def delta_M(tri, mpair, xi, eta, star="L"):
    """The Poisson tensor of the group with Lie algebra m, on covectors
    given by elements of l, in the left or right trivialization."""
    if star == "L":
        return tri.rho(tri.pi_m(tri.ad_pair(mpair, xi)),
                       tri.ad_pair(mpair, eta))
    minv = (mat_inverse(mpair[0]), mat_inverse(mpair[1]))
    return -tri.rho(tri.pi_m(tri.ad_pair(minv, xi)),
                    tri.ad_pair(minv, eta))


def delta_L(tri, lpair, xi, eta, star="L"):
    """The Poisson tensor of the group with Lie algebra l, on covectors
    given by elements of m."""
    if star == "L":
        return tri.rho(tri.pi_l(tri.ad_pair(lpair, xi)),
                       tri.ad_pair(lpair, eta))
    linv = (mat_inverse(lpair[0]), mat_inverse(lpair[1]))
    return -tri.rho(tri.pi_l(tri.ad_pair(linv, xi)),
                    tri.ad_pair(linv, eta))


def delta_STS(tri, gpair, a, b, star="R"):
    """The double-group Poisson tensor on G x G in the rho-form."""
    ginv = (mat_inverse(gpair[0]), mat_inverse(gpair[1]))
    if star == "R":
        inner = mat_pair_sub(tri.ad_pair(gpair, tri.pi_l(
            tri.ad_pair(ginv, b))), tri.pi_m(b))
    else:
        inner = mat_pair_sub(tri.ad_pair(ginv, tri.pi_l(
            tri.ad_pair(gpair, b))), tri.pi_m(b))
    return tri.rho(a, inner)


def mat_pair_sub(p1, p2):
    return (mat_sub(p1[0], p2[0]), mat_sub(p1[1], p2[1]))


def delta_STS_omega(tri, gpair, xi, eta):
    """The same tensor in the half-sum-of-omegas form (left covectors)."""
    gx = tri.ad_pair(gpair, xi)
    ge = tri.ad_pair(gpair, eta)
    return (tri.omega(gx, ge) + tri.omega(xi, eta)) / 2


def delta_ML(tri, point, cov1, cov2):
    """The product tensor on (diagonal group) x K.  Covectors are tagged
    ("M", a) for a left-trivialized covector a in l on the first factor, or
    ("L", xi) for a right-trivialized covector xi in m on the second."""
    mpair, lpair = point
    t1, v1 = cov1
    t2, v2 = cov2
    if t1 not in ("M", "L") or t2 not in ("M", "L"):
        raise ValueError("covector must be tagged 'M' or 'L'")
    if t1 == "M" and t2 == "M":
        return delta_M(tri, mpair, v1, v2, star="L")
    if t1 == "L" and t2 == "L":
        return delta_L(tri, lpair, v1, v2, star="R")
    if t1 == "M":
        return tri.rho(v1, v2)
    return -tri.rho(v2, v1)


# ---------------------------------------------------------------------------
# points of the groups
# ---------------------------------------------------------------------------

def elementary(n, r, c, t):
    m = mat_id(n)
    m[r][c] = Fraction(t)
    return m

def torus_point(params):
    """diag(params, 1/prod) as an SL matrix."""
    n = len(params) + 1
    m = mat_zero(n)
    prod = Fraction(1)
    for i, p in enumerate(params):
        p = Fraction(p)
        m[i][i] = p
        prod *= p
    m[n - 1][n - 1] = 1 / prod
    return m

def random_sl(n, rng, nfactors=4):
    g = mat_id(n)
    for _ in range(nfactors):
        r = rng.randrange(n)
        c = rng.randrange(n)
        if r == c:
            continue
        g = mat_mul(g, elementary(n, r, c, rng.randint(-2, 2)))
    return g

def random_unipotent(n, rng, lower=False):
    g = mat_id(n)
    for r in range(n):
        for c in range(r + 1, n):
            t = rng.randint(-2, 2)
            if lower:
                g = mat_mul(g, elementary(n, c, r, t))
            else:
                g = mat_mul(g, elementary(n, r, c, t))
    return g

def random_torus(n, rng):
    pool = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3)]
    return torus_point([rng.choice(pool) for _ in range(n - 1)])

def k_point(t, x, y):
    """The K-point (t x, y t^{-1}) from torus, upper- and lower-unipotent
    parts."""
    tinv = mat_inverse(t)
    return (mat_mul(t, x), mat_mul(y, tinv))

def random_k_point(n, rng):
    return k_point(random_torus(n, rng), random_unipotent(n, rng),
                   random_unipotent(n, rng, lower=True))

def k_factorize(kpair):
    """Split a K-point (k1, k2) = (t x, y t^{-1}) into (t, x, y).  Works over
    any coefficient ring containing the rationals."""
    k1, k2 = kpair
    n = len(k1)
    for r in range(n):
        for c in range(n):
            if r > c and not k1[r][c] == 0:
                raise MembershipError("first factor is not upper triangular")
            if r < c and not k2[r][c] == 0:
                raise MembershipError("second factor is not lower triangular")
    t = mat_zero(n)
    for i in range(n):
        t[i][i] = k1[i][i]
        if not k1[i][i] * k2[i][i] == 1:
            raise MembershipError("torus parts are not inverse to each other")
    tinv = mat_zero(n)
    for i in range(n):
        tinv[i][i] = 1 / t[i][i]
    x = mat_mul(tinv, k1)
    y = mat_mul(k2, t)
    return t, x, y


# -- coordinate functions on the groups --------------------------------------

def matrix_entry(i, j):
    """The (i, j) entry as a function on a matrix group."""
    def h(g):
        return g[i][j]
    return h


def chi_hat(tri, lam):
    """The character function on K attached to a weight: the torus part t is
    evaluated through the products of leading entries."""
    lam = Weight(lam)
    def phi(kpair):
        t, _x, _y = k_factorize(kpair)
        out = t[0][0] * 0 + 1
        run = t[0][0] * 0 + 1
        for j in range(tri.rank):
            run = run * t[j][j]
            c = lam.coords[j]
            out = out * run ** c
        return out
    return phi


def a_coord(tri, i):
    """The exponential coordinate on K dual to the lowering generator:
    minus the (i+1, i) entry of the lower unipotent part."""
    def phi(kpair):
        _t, _x, y = k_factorize(kpair)
        return -y[i][i - 1]
    return phi


def b_coord(tri, i):
    """The (i, i+1) entry of the upper unipotent part of a K-point.  In
    this parametrization the entry already carries the character factor of
    weight minus the i-th simple root, so it is the full lowering-family
    generator function (the counterpart of a_coord times that character)."""
    def phi(kpair):
        _t, x, _y = k_factorize(kpair)
        return x[i - 1][i]
    return phi


def product_fn(*fns):
    def phi(arg):
        out = None
        for f in fns:
            v = f(arg)
            out = v if out is None else out * v
        return out
    return phi


# -- exact directional derivatives -------------------------------------------

def _jet_mat(g, a, sign):
    """g displaced to first order: rows of g*(1 + eps*a) or (1 - eps*a)*g."""
    n = len(g)
    out = [[Jet(g[i][j]) for j in range(n)] for i in range(n)]
    if sign > 0:  # left-invariant direction: g exp(t a)
        disp = mat_mul(g, a)
    else:  # right action vector field: exp(-t a) g
        disp = mat_scale(mat_mul(a, g), Fraction(-1))
    for i in range(n):
        for j in range(n):
            out[i][j] = Jet(g[i][j], disp[i][j])
    return out


def L_deriv(h, g, a):
    """d/dt h(g exp(ta)) at t = 0, exactly."""
    return Jet.lift(h(_jet_mat(g, a, +1))).eps


def R_deriv(h, g, a):
    """d/dt h(exp(-ta) g) at t = 0, exactly."""
    return Jet.lift(h(_jet_mat(g, a, -1))).eps


def R_deriv_pair(phi, pair, apair):
    """The same for a function on a subgroup of G x G and a pair direction."""
    j1 = _jet_mat(pair[0], apair[0], -1)
    j2 = _jet_mat(pair[1], apair[1], -1)
    return Jet.lift(phi((j1, j2))).eps


def L_deriv_pair(phi, pair, apair):
    j1 = _jet_mat(pair[0], apair[0], +1)
    j2 = _jet_mat(pair[1], apair[1], +1)
    return Jet.lift(phi((j1, j2))).eps


def ml_gradients(tri, F, point):
    """The tagged covectors of a function on (diagonal group) x K: the
    left-trivialized differential on the first factor as an element of l,
    and the right-trivialized differential on the second as an element of
    m."""
    mpair, lpair = point
    if getattr(tri, "_ml_gram", None) is None:
        gram = [[tri.rho(li, mj) for mj in tri.m_basis]
                for li in tri.l_basis]
        tri._ml_gram = mat_inverse(gram)
    inv = tri._ml_gram
    d = tri.dim_g
    mder = [L_deriv_pair(lambda p: F((p, lpair)), mpair, x)
            for x in tri.m_basis]
    lder = [R_deriv_pair(lambda p: F((mpair, p)), lpair, y)
            for y in tri.l_basis]
    eta_coeffs = [sum((inv[j][i] * mder[j] for j in range(d)), Fraction(0))
                  for i in range(d)]
    xi_coeffs = [sum((inv[i][j] * lder[j] for j in range(d)), Fraction(0))
                 for i in range(d)]
    eta = tri._combine(tri.l_basis, eta_coeffs)
    xi = tri._combine(tri.m_basis, xi_coeffs)
    return ("M", eta), ("L", xi)


def ml_bracket(tri, F, G, point):
    """{F, G} at a point of (diagonal group) x K for the product tensor,
    from the full differentials of both functions."""
    covF = ml_gradients(tri, F, point)
    covG = ml_gradients(tri, G, point)
    out = Fraction(0)
    for c1 in covF:
        for c2 in covG:
            out = out + delta_ML(tri, point, c1, c2)
    return out


def bracket_functions(tri, h, phi, point):
    """{h, phi}' at a point of (diagonal group) x K for h a function of the
    diagonal-group matrix and phi a function on K: the sum of
    L-derivatives of h against the dual-basis R-derivatives of phi."""
    g, kpair = point
    out = Fraction(0)
    duals = tri.dual_k_basis()
    for x, y in zip(tri.g_basis, duals):
        lh = L_deriv(h, g, x)
        if lh == 0:
            continue
        out += lh * R_deriv_pair(phi, kpair, y)
    return out


# ---------------------------------------------------------------------------
# radical, non-degeneracy, and Hamiltonian reduction
# ---------------------------------------------------------------------------

def radical_dim(tri, mpair, lpair):
    """dim rad of the product tensor at (m, l): the dimension of the
    intersection of l with Ad(ml) applied to m."""
    ml = (mat_mul(mpair[0], lpair[0]), mat_mul(mpair[1], lpair[1]))
    ad_m = [tri.pair_to_vec(tri.ad_pair(ml, p)) for p in tri.m_basis]
    l_vecs = [tri.pair_to_vec(p) for p in tri.l_basis]
    d = tri.dim_g
    joint = _rank(ad_m + l_vecs)
    return 2 * d - joint


def delta_matrix(tri, point):
    """The full matrix of the product tensor on the covector basis
    (left-trivialized l-covectors on the first factor, right-trivialized
    m-covectors on the second)."""
    covs = ([("M", p) for p in tri.l_basis]
            + [("L", p) for p in tri.m_basis])
    return [[delta_ML(tri, point, c1, c2) for c2 in covs] for c1 in covs]


def delta_kernel_rank(tri, point):
    mat = delta_matrix(tri, point)
    return len(mat) - _rank(mat)


def nondegeneracy_test(tri, g, k1, k2):
    """Whether the product tensor is non-degenerate at ((g,g),(k1,k2)):
    the big-cell membership of g k1 k2^{-1} g^{-1}, decided by trailing
    principal minors."""
    z = mat_mul(mat_mul(g, mat_mul(k1, mat_inverse(k2))), mat_inverse(g))
    n = len(z)
    for k in range(1, n + 1):
        sub = [[z[i][j] for j in range(n - k, n)] for i in range(n - k, n)]
        if mat_det(sub) == 0:
            return False
    return True


def _pairs_mul(p1, p2):
    return (mat_mul(p1[0], p2[0]), mat_mul(p1[1], p2[1]))


def _annihilator(tri, vecs):
    """Basis of the rho-orthogonal complement of a span of pair-vectors."""
    rows = [[tri.rho(tri.vec_to_pair(v), p) for p in tri.a_basis]
            for v in vecs]
    basis = _kernel_basis(rows) if rows else None
    if basis is None:
        return [tri.pair_to_vec(p) for p in tri.a_basis]
    # kernel coordinates are on the a-basis; convert to plain pair-vectors
    out = []
    for coeffs in basis:
        pair = tri._combine(tri.a_basis, coeffs)
        out.append(tri.pair_to_vec(pair))
    return out


def ytilde_membership(tri, g1, g2, variant="N", t=None):
    """Whether (g1, g2) lies on the reduction subvariety: g1 g2^{-1} in the
    opposite Borel (variant "N") or in t times the opposite unipotent
    (variant "B"), together with big-cell membership of g1^{-1} g2."""
    z = mat_mul(g1, mat_inverse(g2))
    n = len(z)
    if variant == "B":
        if t is None:
            raise ValueError("variant 'B' needs the torus parameter t")
        z = mat_mul(mat_inverse(t), z)
    for r in range(n):
        for c in range(r + 1, n):
            if z[r][c] != 0:
                return False
    if variant == "B":
        for i in range(n):
            if z[i][i] != 1:
                return False
    w = mat_mul(mat_inverse(g1), g2)
    for k in range(1, n + 1):
        sub = [[w[i][j] for j in range(n - k, n)] for i in range(n - k, n)]
        if mat_det(sub) == 0:
            return False
    return True


def hamiltonian_radical_check(tri, g1, g2, variant="N", t=None):
    """Whether the radical of the double-group tensor restricted to the
    invariant-covector subbundle equals the conormal space of the reduction
    subvariety at (g1, g2).  Variant "N" is the unipotent action on the
    Borel-condition subvariety; variant "B" is the Borel action on the
    torus-translated unipotent condition."""
    if not ytilde_membership(tri, g1, g2, variant=variant, t=t):
        raise MembershipError("point is not on the reduction subvariety")
    n = tri.n
    gpair = (g1, g2)
    # the acting subalgebra: diagonal strictly-lower (resp. lower-triangular)
    lower = [tri._unit(c, r) for (r, c) in tri.pos_pairs]
    if variant == "N":
        f_basis = lower
    else:
        f_basis = lower + [tri._coroot(i) for i in range(n - 1)]
    f_vecs = [tri.pair_to_vec((x, x)) for x in f_basis]
    fperp = _annihilator(tri, f_vecs)
    # tangent space of the subvariety in the right trivialization
    h = mat_mul(g2, mat_inverse(g1))
    tangent = []
    for x in tri.g_basis:
        tangent.append(tri.pair_to_vec(
            (x, mat_mul(mat_mul(h, x), mat_inverse(h)))))
    extra = lower if variant == "B" else lower + [tri._coroot(i)
                                                 for i in range(n - 1)]
    for x in extra:
        tangent.append(tri.pair_to_vec((mat_zero(n), x)))
    conormal = _annihilator(tri, tangent)
    # radical of the restricted tensor
    mat = [[delta_STS(tri, gpair, tri.vec_to_pair(u), tri.vec_to_pair(v))
            for v in fperp] for u in fperp]
    ker = _kernel_basis(mat)
    rad_vecs = []
    for coeffs in ker:
        vec = [Fraction(0)] * (2 * tri.dim_g)
        for c, base in zip(coeffs, fperp):
            for idx in range(len(vec)):
                vec[idx] += c * base[idx]
        rad_vecs.append(vec)
    if len(rad_vecs) != len(conormal):
        return False
    return _rank(rad_vecs + conormal) == len(conormal)


def sts_gradient(tri, F, gpair):
    """The element u of the ambient algebra with rho(u, a) equal to the
    right derivative of F along a, for every a."""
    derivs = [R_deriv_pair(F, gpair, p) for p in tri.a_basis]
    rows = [[tri.rho(p1, p2) for p2 in tri.a_basis] for p1 in tri.a_basis]
    inv = mat_inverse(rows)
    coeffs = [sum((inv[i][j] * derivs[j] for j in range(len(derivs))),
                  Fraction(0)) for i in range(len(derivs))]
    return tri._combine(tri.a_basis, coeffs)


def sts_bracket(tri, F, G, gpair):
    """{F, G} at a point of G x G for the double-group tensor."""
    return delta_STS(tri, gpair, sts_gradient(tri, F, gpair),
                     sts_gradient(tri, G, gpair))


def reduced_bracket(tri, F, G, gpair, variant="N", t=None):
    """The reduced bracket of two invariant functions at a subvariety point:
    simply the ambient bracket of the chosen extensions, which is
    extension-independent on the subvariety."""
    if not ytilde_membership(tri, gpair[0], gpair[1], variant=variant, t=t):
        raise MembershipError("point is not on the reduction subvariety")
    return sts_bracket(tri, F, G, gpair)
