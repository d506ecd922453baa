"""The quantum Frobenius map at a root of unity, its transposes, the
resulting central elements, and the character-space isomorphism at z = 1.

The Frobenius map divides divided-power exponents by the order of the root of
unity and kills everything else; its transpose on coordinate functions pulls
classical matrix coefficients back to central quantum ones, and the
generator-level transpose on the rescaled form raises the generators to their
ell-th powers, landing in the center.
"""

from __future__ import annotations

from fractions import Fraction

from .drinfeld_pairing import sigma
from .integral_forms import (
    NotInFormError,
    _h_monomials,
    dcp_coordinates,
    k_binomial_elem,
    lusztig_coordinates,
    v_integral_coordinates,
)
from .qalgebra import UElem, VElem
from .qscalars import CycloScalar, QScalar, eval_at_root
from .rootdata import Weight


# ---------------------------------------------------------------------------
# torus characters on the divided-power basis
# ---------------------------------------------------------------------------

def integer_q_binomial(alg, t, m, i):
    """[t; m]_{q_i} for an arbitrary integer t."""
    qi = alg.q_i(i)
    out = alg.qone
    for s in range(m):
        num = qi ** (t - s) - qi.inverse() ** (t - s)
        den = (qi ** (s + 1) - qi.inverse() ** (s + 1)).inverse()
        out = out * num * den
    return out


def chi_lusztig_value(alg, nu, nexp, lam):
    """chi_lam on the torus basis element K_nu prod [K_i; n_i]."""
    lam = Weight(lam)
    val = alg.qpow(alg.bilin(lam, Weight(nu)))
    for i in range(1, alg.rank + 1):
        n = nexp[i - 1]
        if n:
            t = alg.datum.pairing(lam, i)
            val = val * integer_q_binomial(alg, t, n, i)
    return val


def chi_vanishes_at_root(alg, torus_coords, ell):
    """Whether a torus element (coordinates on {K_nu prod [K_i;n_i]}) lies
    in the kernel of every character chi_lam after evaluation at the root.

    The chi-values are products of root-of-unity characters and polynomial
    factors of bounded binomial degree in lam, so vanishing on a grid of
    side ell*(max degree + 1) per coordinate decides vanishing everywhere.
    """
    if not torus_coords:
        return True
    maxn = max(max(nexp) if nexp else 0
               for (_nu, nexp) in torus_coords)
    side = ell * (maxn + 1)

    def grids(rank):
        if rank == 0:
            yield ()
            return
        for first in range(side):
            for rest in grids(rank - 1):
                yield (first,) + rest

    for lam in grids(alg.rank):
        acc = CycloScalar.zero(ell)
        for (nu, nexp), c in torus_coords.items():
            acc = acc + eval_at_root(c * chi_lusztig_value(alg, nu, nexp,
                                                           lam), ell)
        if not acc.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# the Frobenius map
# ---------------------------------------------------------------------------

def frobenius_xi_generic(u: UElem, ell):
    """The basis-level Frobenius filtering with coefficients kept generic:
    a dict {(aexp, hexp, mexp): QScalar}.  Summing such values against other
    generic data and evaluating at the root afterwards lets singular
    intermediate splittings (as in coproduct legs) cancel exactly."""
    alg = u.alg
    out = {}
    for (aexp, (_lam0, nexp), mexp), c in lusztig_coordinates(u).items():
        if any(a % ell for a in aexp) or any(m % ell for m in mexp) \
                or any(n % ell for n in nexp):
            continue
        akey = tuple(a // ell for a in aexp)
        mkey = tuple(m // ell for m in mexp)
        nkey = tuple(n // ell for n in nexp)
        for hexp, c2 in _h_monomials(alg.rank, nkey).items():
            key = (akey, hexp, mkey)
            v = c * QScalar.from_rational(c2, alg.d)
            s = out.get(key)
            out[key] = v if s is None else s + v
    return {k: c for k, c in out.items() if not c.is_zero()}


def frobenius_xi(u: UElem, ell):
    """The Frobenius image of u, as an element of the classical enveloping
    algebra: a dict {(aexp, hexp, mexp): CycloScalar} in the basis
    f^(a) h^hexp e^(m).

    Divided-power exponents and binomial indices divisible by ell are
    divided by ell; all other basis monomials are killed; K_lambda factors
    reduce to 1 in the classical quotient.
    """
    out = {}
    for key, c in frobenius_xi_generic(u, ell).items():
        if not c.regular_at_root(ell):
            raise NotInFormError(
                "coordinate %s has a pole at the root of unity" % (c,))
        val = eval_at_root(c, ell)
        if not val.is_zero():
            out[key] = val
    return out


# -- classical arithmetic through integral lifts -----------------------------

def classical_key_lift(alg, key):
    """A quantum element whose classical image is the basis monomial
    f^(a) h^hexp e^(m)."""
    aexp, hexp, mexp = key
    out = alg.one()
    for k in range(alg.nroots - 1, -1, -1):
        if aexp[k]:
            out = out * alg.f_divided(k + 1, aexp[k])
    for i in range(1, alg.rank + 1):
        for _ in range(hexp[i - 1]):
            out = out * k_binomial_elem(alg, i, 1)
    for k in range(alg.nroots - 1, -1, -1):
        if mexp[k]:
            out = out * alg.e_divided(k + 1, mexp[k])
    return out


_CLASSICAL_PROD_CACHE = {}


def classical_basis_product(alg, k1, k2):
    """Structure constants of the classical enveloping algebra, computed by
    multiplying integral lifts and specializing at 1."""
    from .integral_forms import ulbar_at_one
    ckey = (id(alg), k1, k2)
    cached = _CLASSICAL_PROD_CACHE.get(ckey)
    if cached is None:
        prod = classical_key_lift(alg, k1) * classical_key_lift(alg, k2)
        cached = ulbar_at_one(prod)
        _CLASSICAL_PROD_CACHE[ckey] = cached
    return cached


def classical_product(alg, c1, c2, ell):
    """Product of two classical elements given in basis coordinates with
    cyclotomic coefficients."""
    out = {}
    for k1, a in c1.items():
        for k2, b in c2.items():
            ab = a * b
            for key, f in classical_basis_product(alg, k1, k2).items():
                v = ab * CycloScalar.from_rational(f, ell)
                s = out.get(key)
                out[key] = v if s is None else s + v
    return {k: c for k, c in out.items() if not c.is_zero()}


# ---------------------------------------------------------------------------
# the generator-level transpose into the center
# ---------------------------------------------------------------------------

def teta(alg, fexp, lam, eexp, ell):
    """The central lift of the rescaled monomial B^fexp K_lam A^eexp:
    every rescaled root-vector generator is raised to the ell-th power and
    the torus weight is multiplied by ell.  Returned as a generic element
    whose rescaled coordinates are integral at the root of unity."""
    lfexp = tuple(ell * a for a in fexp)
    leexp = tuple(ell * m for m in eexp)
    llam = tuple(ell * c for c in lam)
    mono = (alg.f_monomial(lfexp) * alg.K(llam) * alg.e_monomial(leexp))
    scale = alg.qone
    for k in range(alg.nroots):
        tot = lfexp[k] + leexp[k]
        if tot:
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            qb = alg.qpow(half)
            scale = scale * (qb - qb.inverse()) ** tot
    return mono.scale(scale)


def centrality_check(x: UElem, ell):
    """Whether x is central after specialization at the root of unity:
    all commutators with the generators vanish in rescaled coordinates."""
    alg = x.alg
    gens = []
    for i in range(1, alg.rank + 1):
        gens.append(alg.E(i))
        gens.append(alg.F(i))
    gens.append(alg.K(tuple([1] + [0] * (alg.rank - 1))))
    gens.append(alg.K(tuple([0] * (alg.rank - 1) + [1])))
    for g in gens:
        comm = x * g - g * x
        for c in dcp_coordinates(comm).values():
            if not c.regular_at_root(ell):
                return False
            if not eval_at_root(c, ell).is_zero():
                return False
    return True


def iota_zeta_equals_counit(u: UElem, ell):
    """Whether the image of u in the divided-power quotient at the root of
    unity collapses to the scalar counit value."""
    alg = u.alg
    eps = eval_at_root(alg.counit(u), ell)
    torus = {}
    for (aexp, (lam0, nexp), mexp), c in lusztig_coordinates(u).items():
        if not c.regular_at_root(ell):
            raise NotInFormError(
                "coordinate %s has a pole at the root of unity" % (c,))
        if any(aexp) or any(mexp):
            if not eval_at_root(c, ell).is_zero():
                return False
            continue
        key = (lam0, nexp)
        s = torus.get(key, alg.qzero)
        torus[key] = s + c
    # the remaining torus part must pair to eps under every character
    if not torus and eps.is_zero():
        return True
    maxn = max([max(nexp) if nexp else 0
                for (_nu, nexp) in torus] + [0])
    side = ell * (maxn + 1)

    def grids(rank):
        if rank == 0:
            yield ()
            return
        for first in range(side):
            for rest in grids(rank - 1):
                yield (first,) + rest

    for lam in grids(alg.rank):
        acc = CycloScalar.zero(ell) - eps
        for (nu, nexp), c in torus.items():
            acc = acc + eval_at_root(
                c * chi_lusztig_value(alg, nu, nexp, lam), ell)
        if not acc.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# eta on the twisted algebra and the character pairing at z = 1
# ---------------------------------------------------------------------------

def eta(v: VElem, ell):
    """The Frobenius companion on the twisted algebra: a dict
    {(yexp, texp, xexp): CycloScalar} of classical U(k) coordinates."""
    alg = v.alg.ualg
    out = {}
    for (yexp, (_lam0, nexp), xexp), c in v_integral_coordinates(v).items():
        if not c.regular_at_root(ell):
            raise NotInFormError(
                "coordinate %s has a pole at the root of unity" % (c,))
        if any(a % ell for a in yexp) or any(m % ell for m in xexp) \
                or any(n % ell for n in nexp):
            continue
        val = eval_at_root(c, ell)
        if val.is_zero():
            continue
        ykey = tuple(a // ell for a in yexp)
        xkey = tuple(m // ell for m in xexp)
        nkey = tuple(n // ell for n in nexp)
        # the Z-weight factor reduces to 1 in the classical quotient
        for texp, c2 in _h_monomials(alg.rank, nkey).items():
            key = (ykey, texp, xkey)
            w = val * CycloScalar.from_rational(c2, ell)
            s = out.get(key)
            out[key] = w if s is None else s + w
    return {k: c for k, c in out.items() if not c.is_zero()}


def upsilon_pair(u: UElem, key):
    """The pairing realizing elements of U at z = 1 as functions on the
    classical group K: sigma against the twisted basis element
    Y^(a) prod [Z_i; n_i] X^(x), evaluated at 1."""
    from .qalgebra import VAlgebra
    alg = u.alg
    yexp, nexp, xexp = key
    V = VAlgebra(alg)
    v = V.one()
    for k in range(alg.nroots - 1, -1, -1):
        if yexp[k]:
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            exp = [0] * alg.nroots
            exp[k] = yexp[k]
            v = v * V.y_monomial(tuple(exp)).scale(
                alg.qfact(yexp[k], half).inverse())
    for i in range(1, alg.rank + 1):
        if nexp[i - 1]:
            zb = V.zero()
            from .integral_forms import k_binomial_expansion
            ki = alg.datum.simple_root(i)
            for m, c in k_binomial_expansion(alg, i, nexp[i - 1]).items():
                zb = zb + V.Z((m * ki).coords).scale(c)
            v = v * zb
    for k in range(alg.nroots - 1, -1, -1):
        if xexp[k]:
            half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
            exp = [0] * alg.nroots
            exp[k] = xexp[k]
            v = v * V.x_monomial(tuple(exp)).scale(
                alg.qfact(xexp[k], half).inverse())
    val = sigma(u, v)
    if not val.regular_at_one():
        raise NotInFormError("pairing value %s has a pole at 1" % (val,))
    return val.eval_at_one()
