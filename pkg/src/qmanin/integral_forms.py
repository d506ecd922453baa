"""Integral forms of U and V over the subring of scalars regular at a chosen
specialization point, and the specialization maps themselves.

Two integral forms of U are used: the divided-power form (generated by
E_i^(m), F_i^(m), K_lambda, with torus basis K_lambda [K_1;n_1]...[K_r;n_r]
over coset representatives lambda of Lambda/2Q) and the rescaled-generator
form (basis B^a K_lambda A^m with A_beta = (q_beta - q_beta^-1) E_beta and
B_beta = (q_beta - q_beta^-1) F_beta).  Membership is decided coordinatewise
by checking denominators at the specialization point.

At z = 1 the divided-power form modulo its augmentation-type ideal recovers
the classical enveloping algebra U(g) (E_i^(1) -> e_i, [K_i;1] -> h_i), the
twisted algebra V collapses to U(k) (Z_lambda -> 1, [Z_i;m] -> binom(t_i,m)),
and the rescaled form becomes the coordinate ring of the dual group.
"""

from __future__ import annotations

from fractions import Fraction

from .qalgebra import UElem, VElem
from .qscalars import QScalar, eval_at_root
from .rootdata import Weight


class NotInFormError(ValueError):
    """Element lies outside the integral form at the requested point."""


# ---------------------------------------------------------------------------
# torus coordinates in the divided-power basis
# ---------------------------------------------------------------------------

def k_binomial_expansion(alg, i, n):
    """[K_i; n] as a dict {power of K_i: QScalar}."""
    qi = alg.q_i(i)
    expansion = {0: alg.qone}
    for s in range(n):
        denom = (qi ** (s + 1) - qi.inverse() ** (s + 1)).inverse()
        nxt = {}
        for m, c in expansion.items():
            for dm, factor in ((1, qi.inverse() ** s), (-1, -(qi ** s))):
                key = m + dm
                v = c * factor * denom
                sacc = nxt.get(key)
                nxt[key] = v if sacc is None else sacc + v
        expansion = nxt
    return {m: c for m, c in expansion.items() if not c.is_zero()}


def k_binomial_elem(alg, i, n):
    """[K_i; n] as an element of U."""
    ki = alg.datum.simple_root(i)
    out = alg.zero()
    for m, c in k_binomial_expansion(alg, i, n).items():
        out = out + alg.K((m * ki).coords).scale(c)
    return out


def torus_basis_expansion(alg, lam0, nexp):
    """K_{lam0} prod_i [K_i; n_i] as {weight coords: QScalar}."""
    out = {tuple(lam0): alg.qone}
    for i in range(1, alg.rank + 1):
        n = nexp[i - 1]
        if not n:
            continue
        ki = alg.datum.simple_root(i)
        part = k_binomial_expansion(alg, i, n)
        nxt = {}
        for w, c in out.items():
            for m, c2 in part.items():
                key = tuple((Weight(w) + m * ki).coords)
                v = c * c2
                s = nxt.get(key)
                nxt[key] = v if s is None else s + v
        out = nxt
    return out


_TORUS_CACHE = {}


def _alpha_coords(datum, coords):
    """Simple-root coordinates of a weight given in fundamental coordinates."""
    return [sum(datum._cartan_inv[j][k] * coords[k]
                for k in range(datum.rank)) for j in range(datum.rank)]


def torus_coordinates(alg, lam):
    """Coordinates of K_lam in the divided-power torus basis
    {K_{lam0} prod [K_i; n_i]}: a dict {(lam0, nexp): QScalar}."""
    return _torus_reduce(alg, tuple(lam), (0,) * alg.rank)


def _torus_reduce(alg, nu, nexp):
    """Coordinates of K_nu prod [K_i; n_i] in the torus basis, computed by
    repeatedly stripping a factor K_i^{+-2} with the exact identity
    K_i^2 [K_i;m] = q_i^{2m} [K_i;m] + q_i^m (q_i^{m+1}-q_i^{-m-1})
    K_i [K_i;m+1] until the weight equals its coset representative."""
    key = (id(alg), nu, nexp)
    cached = _TORUS_CACHE.get(key)
    if cached is not None:
        return cached
    datum = alg.datum
    w = Weight(nu)
    rep = next(r for r in datum.lambda0() if datum.coset_2q_equal(w, r))
    excess = [Fraction(a - b) / 2 for a, b in
              zip(_alpha_coords(datum, nu), _alpha_coords(datum, rep.coords))]
    assert all(c.denominator == 1 for c in excess)
    if not any(excess):
        assert tuple(rep.coords) == nu
        out = {(nu, nexp): alg.qone}
        _TORUS_CACHE[key] = out
        return out
    i = 1 + max(range(datum.rank), key=lambda j: abs(excess[j]))
    m = nexp[i - 1]
    qi = alg.q_i(i)
    ai = datum.simple_root(i)
    cm = qi ** (m + 1) - qi.inverse() ** (m + 1)
    nexp2 = nexp[:i - 1] + (m + 1,) + nexp[i:]
    if excess[i - 1] > 0:
        terms = (((w - ai - ai).coords, nexp, qi ** (2 * m)),
                 ((w - ai).coords, nexp2, qi ** m * cm))
    else:
        terms = (((w + ai + ai).coords, nexp, qi.inverse() ** (2 * m)),
                 ((w + ai).coords, nexp2, -(qi.inverse() ** m) * cm))
    out = {}
    for nu2, ne2, coeff in terms:
        for k, c in _torus_reduce(alg, tuple(nu2), ne2).items():
            v = coeff * c
            s = out.get(k)
            out[k] = v if s is None else s + v
    out = {k: c for k, c in out.items() if not c.is_zero()}
    _TORUS_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# coordinates in the two integral forms of U
# ---------------------------------------------------------------------------

def lusztig_coordinates(u: UElem):
    """Coordinates of u in the divided-power basis
    F^(a) . K_{lam0} prod [K_i;n_i] . E^(m): a dict
    {(aexp, (lam0, nexp), mexp): QScalar}."""
    alg = u.alg
    out = {}
    for (fexp, lam, eexp), c in u.terms.items():
        scale = c
        for k, m in enumerate(fexp):
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            scale = scale * alg.qfact(m, half)
        for k, m in enumerate(eexp):
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            scale = scale * alg.qfact(m, half)
        for (lam0, nexp), c0 in torus_coordinates(alg, lam).items():
            key = (fexp, (lam0, nexp), eexp)
            v = scale * c0
            s = out.get(key)
            out[key] = v if s is None else s + v
    return {k: c for k, c in out.items() if not c.is_zero()}


def dcp_coordinates(u: UElem):
    """Coordinates of u in the rescaled basis B^a K_lambda A^m, keyed like
    the PBW monomials themselves."""
    alg = u.alg
    out = {}
    for (fexp, lam, eexp), c in u.terms.items():
        scale = c
        for k in range(alg.nroots):
            tot = fexp[k] + eexp[k]
            if tot:
                half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
                qb = alg.qpow(half)
                scale = scale * ((qb - qb.inverse()).inverse()) ** tot
        out[(fexp, lam, eexp)] = scale
    return out


def coords_regular_at_root(coords, ell):
    return all(c.regular_at_root(ell) for c in coords.values())


def coords_regular_at_one(coords):
    return all(c.regular_at_one() for c in coords.values())


def specialize_U(u: UElem, ell):
    """u as an element of the rescaled form specialized at a primitive
    ell-th root of unity: {PBW key: CycloScalar} in B/A coordinates."""
    coords = dcp_coordinates(u)
    out = {}
    for key, c in coords.items():
        if not c.regular_at_root(ell):
            raise NotInFormError(
                "coordinate %s has a pole at the root of unity" % (c,))
        val = eval_at_root(c, ell)
        if not val.is_zero():
            out[key] = val
    return out


def specialize_U_at_one(u: UElem):
    """The same at z = 1: {PBW key: Fraction} in B/A coordinates."""
    out = {}
    for key, c in dcp_coordinates(u).items():
        if not c.regular_at_one():
            raise NotInFormError("coordinate %s has a pole at 1" % (c,))
        val = c.eval_at_one()
        if val:
            out[key] = val
    return out


# ---------------------------------------------------------------------------
# the divided-power quotient at z = 1: classical U(g)
# ---------------------------------------------------------------------------

def _binomial_poly(n):
    """binom(t, n) as {power of t: Fraction}."""
    poly = {0: Fraction(1)}
    for s in range(n):
        nxt = {}
        for e, c in poly.items():
            nxt[e + 1] = nxt.get(e + 1, Fraction(0)) + c
            nxt[e] = nxt.get(e, Fraction(0)) - c * s
        poly = {e: c / (s + 1) for e, c in nxt.items()}
    return {e: c for e, c in poly.items() if c}


def _h_monomials(rank, nexp):
    """prod_i binom(t_i, n_i) as {exponent tuple: Fraction}."""
    out = {(0,) * rank: Fraction(1)}
    for i in range(rank):
        part = _binomial_poly(nexp[i])
        nxt = {}
        for exp, c in out.items():
            for e, c2 in part.items():
                key = exp[:i] + (exp[i] + e,) + exp[i + 1:]
                nxt[key] = nxt.get(key, Fraction(0)) + c * c2
        out = nxt
    return out


def ulbar_at_one(u: UElem):
    """The image of u in the z = 1 quotient of the divided-power form,
    identified with classical U(g): a dict
    {(aexp, hexp, mexp): Fraction} in the basis f^(a) h^hexp e^(m)
    (divided powers of the classical root vectors, monomials in h_i)."""
    out = {}
    for (aexp, (lam0, nexp), mexp), c in lusztig_coordinates(u).items():
        if not c.regular_at_one():
            raise NotInFormError("coordinate %s has a pole at 1" % (c,))
        val = c.eval_at_one()
        # K_{lam0} maps to 1; [K_i; n_i] maps to binom(h_i, n_i)
        for hexp, c2 in _h_monomials(len(nexp), nexp).items():
            key = (aexp, hexp, mexp)
            out[key] = out.get(key, Fraction(0)) + val * c2
    return {k: c for k, c in out.items() if c}


def iota_at_one(u: UElem):
    """The composite of the inclusion of the rescaled form into the
    divided-power form with specialization at 1.  For u integral in the
    rescaled form this collapses to the scalar counit value."""
    return ulbar_at_one(u)


# ---------------------------------------------------------------------------
# V-side coordinates and the z = 1 quotient: classical U(k)
# ---------------------------------------------------------------------------

def v_integral_coordinates(v: VElem):
    """Coordinates of v in the basis
    Y^(a) . Z_{lam0} prod [Z_i;n_i] . X^(m): a dict
    {(aexp, (lam0, nexp), mexp): QScalar}."""
    alg = v.alg.ualg
    out = {}
    for (yexp, lam, xexp), c in v.terms.items():
        scale = c
        for k, m in enumerate(yexp):
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            scale = scale * alg.qfact(m, half)
        for k, m in enumerate(xexp):
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            scale = scale * alg.qfact(m, half)
        for (lam0, nexp), c0 in torus_coordinates(alg, lam).items():
            key = (yexp, (lam0, nexp), xexp)
            val = scale * c0
            s = out.get(key)
            out[key] = val if s is None else s + val
    return {k: c for k, c in out.items() if not c.is_zero()}


def specialize_V_at_one(v: VElem):
    """The image of v in the z = 1 quotient of the V-form, identified with
    classical U(k): a dict {(aexp, texp, mexp): Fraction} in the basis
    y^(a) t^texp x^(m)."""
    out = {}
    for (aexp, (lam0, nexp), mexp), c in v_integral_coordinates(v).items():
        if not c.regular_at_one():
            raise NotInFormError("coordinate %s has a pole at 1" % (c,))
        val = c.eval_at_one()
        # Z_{lam0} maps to 1; [Z_i; n_i] maps to binom(t_i, n_i)
        for texp, c2 in _h_monomials(len(nexp), nexp).items():
            key = (aexp, texp, mexp)
            out[key] = out.get(key, Fraction(0)) + val * c2
    return {k: c for k, c in out.items() if c}
