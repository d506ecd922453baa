"""Finite-dimensional weight modules, the quantized coordinate algebra built
from their matrix coefficients, and the Heisenberg double pairing that
coordinate algebra with U.

A matrix coefficient c_{f,v} is the functional u -> f(uv) for a module
vector v and dual vector f.  Products of matrix coefficients live on tensor
product modules, the U-bimodule structure acts through the module itself, and
the Heisenberg double is the smash-product algebra on C (x) U.

Equality of coordinate functions is decided exactly through their triangular
coordinates: values on the PBW monomials F^a K_lambda E^m, with the
K_lambda-dependence stored as character coefficients at the finitely many
module weights involved.
"""

from __future__ import annotations

from .qalgebra import UElem
from .rootdata import Weight


class ModuleTypeError(ValueError):
    """The requested module fixture is not available for this root datum."""


# ---------------------------------------------------------------------------
# type-1 weight modules
# ---------------------------------------------------------------------------

class TypeOneModule:
    """A finite-dimensional module with a chosen weight basis and exact
    matrices for the generator actions."""

    def __init__(self, alg, name, weights, e_mats, f_mats):
        self.alg = alg
        self.name = name
        self.weights = tuple(tuple(w) for w in weights)
        self.dim = len(self.weights)
        self.e_mats = e_mats
        self.f_mats = f_mats
        self._sparse_cols = {}

    def __repr__(self):
        return "TypeOneModule(%s)" % (self.name,)

    def zero_vec(self):
        return [self.alg.qzero] * self.dim

    def basis_vec(self, j):
        v = self.zero_vec()
        v[j] = self.alg.qone
        return v

    def _cols(self, kind, i):
        """Nonzero entries of a generator matrix, by column."""
        key = (kind, i)
        cols = self._sparse_cols.get(key)
        if cols is None:
            mat = (self.e_mats if kind == "E" else self.f_mats)[i]
            cols = [[(r, mat[r][k]) for r in range(self.dim)
                     if not mat[r][k].is_zero()] for k in range(self.dim)]
            self._sparse_cols[key] = cols
        return cols

    def apply_letter(self, letter, vec):
        alg = self.alg
        if letter[0] == "K":
            lam = Weight(letter[1])
            return [vec[k] * alg.qpow(alg.bilin(Weight(self.weights[k]), lam))
                    for k in range(self.dim)]
        cols = self._cols(letter[0], letter[1])
        out = self.zero_vec()
        for k in range(self.dim):
            c = vec[k]
            if c.is_zero():
                continue
            for r, m in cols[k]:
                out[r] = out[r] + m * c
        return out

    def apply_letter_dual(self, letter, covec):
        """covec composed with the letter action: (f.X)(v) = f(X v)."""
        alg = self.alg
        if letter[0] == "K":
            lam = Weight(letter[1])
            return [covec[k]
                    * alg.qpow(alg.bilin(Weight(self.weights[k]), lam))
                    for k in range(self.dim)]
        cols = self._cols(letter[0], letter[1])
        out = self.zero_vec()
        for k in range(self.dim):
            acc = alg.qzero
            for r, m in cols[k]:
                if not covec[r].is_zero():
                    acc = acc + covec[r] * m
            out[k] = acc
        return out

    def act(self, u: UElem, vec):
        """The action of an algebra element on a coefficient vector."""
        alg = self.alg
        out = self.zero_vec()
        for key, c in u.terms.items():
            for word, cw in alg.expand_monomial(key).items():
                cur = vec
                for letter in reversed(word):
                    cur = self.apply_letter(letter, cur)
                s = c * cw
                for i in range(self.dim):
                    if not cur[i].is_zero():
                        out[i] = out[i] + s * cur[i]
        return out

    def dual_act(self, covec, u: UElem):
        """The right action on dual vectors: (f.u)(v) = f(u v)."""
        alg = self.alg
        out = self.zero_vec()
        for key, c in u.terms.items():
            for word, cw in alg.expand_monomial(key).items():
                cur = covec
                for letter in word:
                    cur = self.apply_letter_dual(letter, cur)
                s = c * cw
                for i in range(self.dim):
                    if not cur[i].is_zero():
                        out[i] = out[i] + s * cur[i]
        return out

    def matrix_of(self, u: UElem):
        """Column j holds the action of u on basis vector j."""
        cols = [self.act(u, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)]
                for i in range(self.dim)]


_TRIVIAL_CACHE = {}
_VECTOR_CACHE = {}


def trivial_module(alg):
    cached = _TRIVIAL_CACHE.get(id(alg))
    if cached is None:
        zero = {i: [[alg.qzero]] for i in range(1, alg.rank + 1)}
        cached = TypeOneModule(alg, "trivial", [(0,) * alg.rank],
                               zero, {i: [[alg.qzero]] for i in zero})
        _TRIVIAL_CACHE[id(alg)] = cached
    return cached


def vector_module(alg):
    """The standard (n+1)-dimensional module in type A_n."""
    cached = _VECTOR_CACHE.get(id(alg))
    if cached is not None:
        return cached
    if alg.datum.label[0] != "A":
        raise ModuleTypeError("vector module fixture needs type A")
    n = alg.rank
    weights = []
    for k in range(1, n + 2):
        w = [0] * n
        if k <= n:
            w[k - 1] += 1
        if k >= 2:
            w[k - 2] -= 1
        weights.append(tuple(w))
    e_mats, f_mats = {}, {}
    for i in range(1, n + 1):
        emat = [[alg.qzero] * (n + 1) for _ in range(n + 1)]
        fmat = [[alg.qzero] * (n + 1) for _ in range(n + 1)]
        emat[i - 1][i] = alg.qone
        fmat[i][i - 1] = alg.qone
        e_mats[i] = emat
        f_mats[i] = fmat
    out = TypeOneModule(alg, "vector", weights, e_mats, f_mats)
    _VECTOR_CACHE[id(alg)] = out
    return out


_TENSOR_CACHE = {}


def tensor_module(m1: TypeOneModule, m2: TypeOneModule):
    """The tensor product module, with the generator action through the
    coproduct: E_i = E_i (x) 1 + K_i (x) E_i, F_i = F_i (x) K_i^-1 + 1 (x) F_i.
    """
    key = (id(m1), id(m2))
    cached = _TENSOR_CACHE.get(key)
    if cached is not None:
        return cached
    alg = m1.alg
    weights = []
    for w1 in m1.weights:
        for w2 in m2.weights:
            weights.append(tuple((Weight(w1) + Weight(w2)).coords))
    dim = len(weights)

    def idx(a, b):
        return a * m2.dim + b

    e_mats, f_mats = {}, {}
    for i in range(1, alg.rank + 1):
        ai = alg.datum.simple_root(i)
        emat = [[alg.qzero] * dim for _ in range(dim)]
        fmat = [[alg.qzero] * dim for _ in range(dim)]
        for a in range(m1.dim):
            for b in range(m2.dim):
                j = idx(a, b)
                for r in range(m1.dim):
                    c = m1.e_mats[i][r][a]
                    if not c.is_zero():
                        emat[idx(r, b)][j] = emat[idx(r, b)][j] + c
                    cf = m1.f_mats[i][r][a]
                    if not cf.is_zero():
                        tw = alg.qpow(-alg.bilin(Weight(m2.weights[b]), ai))
                        fmat[idx(r, b)][j] = fmat[idx(r, b)][j] + cf * tw
                for r in range(m2.dim):
                    c = m2.e_mats[i][r][b]
                    if not c.is_zero():
                        tw = alg.qpow(alg.bilin(Weight(m1.weights[a]), ai))
                        emat[idx(a, r)][j] = emat[idx(a, r)][j] + c * tw
                    cf = m2.f_mats[i][r][b]
                    if not cf.is_zero():
                        fmat[idx(a, r)][j] = fmat[idx(a, r)][j] + cf
        e_mats[i] = emat
        f_mats[i] = fmat
    out = TypeOneModule(alg, "(%s)x(%s)" % (m1.name, m2.name),
                        weights, e_mats, f_mats)
    _TENSOR_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# the coordinate algebra
# ---------------------------------------------------------------------------

class CElem:
    """A linear combination of matrix coefficients c_{f_i, v_j} over declared
    modules: terms maps (module, dual index, vector index) to a scalar."""

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return CElem(self.alg, out)

    def __sub__(self, other):
        return self + other.scale(-self.alg.qone)

    def scale(self, c):
        return CElem(self.alg, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        return c_multiply(self, other)

    def __repr__(self):
        return "CElem(%d terms)" % len(self.terms)


def matrix_coefficient(module, fi, vi):
    return CElem(module.alg, {(module, fi, vi): module.alg.qone})


def c_unit(alg):
    return matrix_coefficient(trivial_module(alg), 0, 0)


def c_zero(alg):
    return CElem(alg, {})


def c_pair(phi: CElem, u: UElem):
    """The canonical pairing <phi, u> = f(u v)."""
    acc = phi.alg.qzero
    for (module, fi, vi), c in phi.terms.items():
        vec = module.act(u, module.basis_vec(vi))
        acc = acc + c * vec[fi]
    return acc


def c_counit(phi: CElem):
    return c_pair(phi, phi.alg.one())


def c_multiply(phi: CElem, psi: CElem):
    """<phi psi, u> = <phi (x) psi, Delta(u)>: the matrix coefficient on the
    tensor product module."""
    alg = phi.alg
    out = {}
    for (m1, f1, v1), c1 in phi.terms.items():
        for (m2, f2, v2), c2 in psi.terms.items():
            m = tensor_module(m1, m2)
            key = (m, f1 * m2.dim + f2, v1 * m2.dim + v2)
            c = c1 * c2
            s = out.get(key)
            out[key] = c if s is None else s + c
    return CElem(alg, out)


def bimodule_action(uprime: UElem, phi: CElem, usecond: UElem):
    """<u' phi u'', u> = <phi, u'' u u'>: on matrix coefficients the left
    factor moves the vector and the right factor moves the dual vector."""
    alg = phi.alg
    out = {}
    for (module, fi, vi), c in phi.terms.items():
        vec = module.act(uprime, module.basis_vec(vi))
        mat = module.matrix_of(usecond)
        for j in range(module.dim):
            if vec[j].is_zero():
                continue
            for i in range(module.dim):
                if mat[fi][i].is_zero():
                    continue
                key = (module, i, j)
                v = c * vec[j] * mat[fi][i]
                s = out.get(key)
                out[key] = v if s is None else s + v
    return CElem(alg, out)


# -- canonical triangular coordinates ---------------------------------------

_GAPS_CACHE = {}


def _module_weight_gaps(alg, modules):
    """All nonnegative-root-coordinate gaps between weights of the modules."""
    key = (id(alg), tuple(id(m) for m in modules))
    cached = _GAPS_CACHE.get(key)
    if cached is not None:
        return cached
    gaps = set()
    for module in modules:
        weights = sorted(set(module.weights))
        for w1 in weights:
            for w2 in weights:
                diff = Weight(w1) - Weight(w2)
                gamma = _as_pos_root_coords(alg, diff)
                if gamma is not None:
                    gaps.add(gamma)
    out = sorted(gaps)
    _GAPS_CACHE[key] = out
    return out


def _as_pos_root_coords(alg, diff):
    """diff as nonnegative simple-root coordinates, else None."""
    # solve diff = sum_i gamma_i alpha_i in fundamental coordinates
    datum = alg.datum
    cols = [datum.simple_root(i).coords for i in range(1, alg.rank + 1)]
    target = list(diff.coords)
    # Cartan matrix inversion over rationals
    from fractions import Fraction
    n = alg.rank
    mat = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    vec = [Fraction(t) for t in target]
    for p in range(n):
        piv = next((r for r in range(p, n) if mat[r][p]), None)
        if piv is None:
            return None
        mat[p], mat[piv] = mat[piv], mat[p]
        vec[p], vec[piv] = vec[piv], vec[p]
        inv = 1 / mat[p][p]
        mat[p] = [x * inv for x in mat[p]]
        vec[p] = vec[p] * inv
        for r in range(n):
            if r != p and mat[r][p]:
                f = mat[r][p]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[p])]
                vec[r] = vec[r] - f * vec[p]
    gamma = []
    for x in vec:
        if x.denominator != 1 or x < 0:
            return None
        gamma.append(int(x))
    return tuple(gamma)


def c_coordinates(phi: CElem):
    """Triangular coordinates of phi: a dict
    {(fexp, mu, eexp): QScalar} with
    <phi, F^a K_lam E^m> = sum_mu coord[(a, mu, m)] q^{(mu, lam)}."""
    alg = phi.alg
    out = {}
    for (module, fi, vi), c in phi.terms.items():
        for key, v in _c_coordinates_term(alg, module, fi, vi).items():
            v = c * v
            s = out.get(key)
            out[key] = v if s is None else s + v
    return {k: c for k, c in out.items() if not c.is_zero()}


_CCOORD_CACHE = {}


def _c_coordinates_term(alg, module, fi, vi):
    cached = _CCOORD_CACHE.get((module, fi, vi))
    if cached is not None:
        return cached
    gaps = _module_weight_gaps(alg, [module])
    out = {}
    fduals = []
    for ga in gaps:
        for fexp in alg.datum_pbw_exps(ga):
            fdual = module.dual_act(module.basis_vec(fi),
                                    alg.f_monomial(fexp))
            if any(not x.is_zero() for x in fdual):
                fduals.append((fexp, fdual))
    for ge in gaps:
        for eexp in alg.datum_pbw_exps(ge):
            eact = module.act(alg.e_monomial(eexp),
                              module.basis_vec(vi))
            for fexp, fdual in fduals:
                for k in range(module.dim):
                    if eact[k].is_zero() or fdual[k].is_zero():
                        continue
                    mu = module.weights[k]
                    key = (fexp, mu, eexp)
                    v = eact[k] * fdual[k]
                    s = out.get(key)
                    out[key] = v if s is None else s + v
    out = {k: c for k, c in out.items() if not c.is_zero()}
    _CCOORD_CACHE[(module, fi, vi)] = out
    return out


def c_equal(phi: CElem, psi: CElem):
    """Exact equality as functionals on U."""
    return c_coordinates(phi) == c_coordinates(psi)


# ---------------------------------------------------------------------------
# the Heisenberg double
# ---------------------------------------------------------------------------

class DElem:
    """A finite sum of phi (x) u tensors."""

    def __init__(self, alg, pairs):
        self.alg = alg
        self.pairs = [(phi, u) for phi, u in pairs
                      if phi.terms and u.terms]

    def __add__(self, other):
        return DElem(self.alg, self.pairs + other.pairs)

    def __sub__(self, other):
        neg = [(phi.scale(-self.alg.qone), u) for phi, u in other.pairs]
        return DElem(self.alg, self.pairs + neg)

    def scale(self, c):
        return DElem(self.alg, [(phi.scale(c), u) for phi, u in self.pairs])

    def __mul__(self, other):
        return heisenberg_multiply(self, other)

    def __repr__(self):
        return "DElem(%d tensors)" % len(self.pairs)


def d_from_c(phi: CElem):
    return DElem(phi.alg, [(phi, phi.alg.one())])


def d_from_u(u: UElem):
    return DElem(u.alg, [(c_unit(u.alg), u)])


def heisenberg_multiply(x: DElem, y: DElem):
    """(phi (x) u)(phi' (x) u') = sum phi (u_(0) phi') (x) u_(1) u'."""
    alg = x.alg
    pairs = []
    for phi, u in x.pairs:
        for phip, up in y.pairs:
            for left, right in alg.coproduct(u).pairs():
                acted = bimodule_action(left, phip, alg.one())
                pairs.append((c_multiply(phi, acted), right * up))
    return DElem(alg, pairs)


def d_coordinates(x: DElem):
    """Canonical coordinates on C (x) U: triangular coordinates on the C
    factor times PBW coordinates on the U factor."""
    out = {}
    for phi, u in x.pairs:
        for ckey, cc in c_coordinates(phi).items():
            for ukey, cu in u.terms.items():
                key = (ckey, ukey)
                v = cc * cu
                s = out.get(key)
                out[key] = v if s is None else s + v
    return {k: c for k, c in out.items() if not c.is_zero()}


def d_equal(x: DElem, y: DElem):
    return d_coordinates(x) == d_coordinates(y)
