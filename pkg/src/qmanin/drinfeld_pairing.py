"""The Drinfeld pairing tau between the two Borel halves of U, in both a
closed form on PBW monomials and a recursive form that uses only the defining
axioms, plus the mixed pairing sigma between U and V.
"""

from __future__ import annotations

from .qalgebra import UElem, VElem
from .rootdata import Weight


class HalfDomainError(ValueError):
    """Argument lies outside the required Borel half."""


def _check_upper(x):
    for (fexp, _lam, _eexp) in x.terms:
        if any(fexp):
            raise HalfDomainError("element has a nonzero F-part")


def _check_lower(y):
    for (_fexp, _lam, eexp) in y.terms:
        if any(eexp):
            raise HalfDomainError("element has a nonzero E-part")


# ---------------------------------------------------------------------------
# tau: closed form
# ---------------------------------------------------------------------------

def tau_closed(x: UElem, y: UElem):
    """tau on (upper half) x (lower half), by the product formula on PBW
    monomials, extended bilinearly."""
    _check_upper(x)
    _check_lower(y)
    alg = x.alg
    acc = alg.qzero
    for (_fx, lam, m), cx in x.terms.items():
        # the monomial is stored as K_lam E^m; the formula is stated for
        # E^m K_lam
        wt_m = alg.root_weight_of(alg.exp_weight(m))
        reorder = alg.qpow(alg.bilin(Weight(lam), wt_m))
        for (n, mu, _ey), cy in y.terms.items():
            if m != n:
                continue
            val = reorder * alg.qpow(-alg.bilin(Weight(lam), Weight(mu)))
            for k, mk in enumerate(m):
                if not mk:
                    continue
                half = alg.datum.root_half_norm(alg.datum.pos_roots[k])
                qb = alg.qpow(half)
                val = val * alg.qfact(mk, half)
                val = val * qb ** (mk * (mk - 1) // 2)
                val = val * ((qb - qb.inverse()).inverse()) ** mk
                if mk % 2:
                    val = -val
            acc = acc + cx * cy * val
    return acc


# ---------------------------------------------------------------------------
# tau: recursive oracle
# ---------------------------------------------------------------------------

def tau_recursive(x: UElem, y: UElem):
    """tau computed from the axioms alone: peel one generator at a time from
    y, splitting x with the coproduct."""
    _check_upper(x)
    _check_lower(y)
    alg = x.alg
    acc = alg.qzero
    for key, c in y.terms.items():
        for word, cw in alg.expand_monomial(key).items():
            acc = acc + (c * cw) * _tau_word(x, word)
    return acc


def _tau_word(x, word):
    alg = x.alg
    if not word:
        return alg.counit(x)
    g, rest = word[0], word[1:]
    acc = alg.qzero
    for (k1, k2), c in alg.coproduct(x).terms.items():
        v1 = _tau_generator(alg, k1, g)
        if v1.is_zero():
            continue
        acc = acc + c * v1 * _tau_word(UElem(alg, {k2: alg.qone}), rest)
    return acc


def _tau_generator(alg, key, g):
    """tau of one upper PBW monomial against a single lower generator."""
    _fexp, lam, m = key
    if g[0] == "K":
        if any(m):
            return alg.qzero
        return alg.qpow(-alg.bilin(Weight(lam), Weight(g[1])))
    # g = F_i; only K_lam E_i pairs nontrivially
    i = g[1]
    unit = [0] * alg.nroots
    unit[alg.simple_root_index[i]] = 1
    if m != tuple(unit):
        return alg.qzero
    qi = alg.q_i(i)
    return (alg.qpow(alg.bilin(Weight(lam), alg.datum.simple_root(i)))
            / (qi.inverse() - qi))


# ---------------------------------------------------------------------------
# the mixed pairing sigma
# ---------------------------------------------------------------------------

_EKSF_CACHE = {}


def _eksf_element(alg, n, mu, m):
    """Normal form of E^m K_mu S(F^n)."""
    key = (id(alg), n, mu, m)
    t = _EKSF_CACHE.get(key)
    if t is None:
        t = (alg.e_monomial(m) * alg.K(mu)
             * alg.antipode(alg.f_monomial(n)))
        _EKSF_CACHE[key] = t
    return t


def _solve_square(alg, columns, rhs):
    """Solve sum_j c_j columns[j] = rhs where columns and rhs are dicts
    row-key -> QScalar; the columns are independent by construction."""
    cols = [dict(col) for col in columns]
    rhs = dict(rhs)
    coeffs = [alg.qzero] * len(cols)
    combos = [{j: alg.qone} for j in range(len(cols))]
    pivots = []
    for j, col in enumerate(cols):
        combo = dict(combos[j])
        for row, pcol, pcombo in pivots:
            c = col.get(row)
            if c is not None and not c.is_zero():
                for r, pc in pcol.items():
                    nv = col.get(r, alg.qzero) - c * pc
                    if nv.is_zero():
                        col.pop(r, None)
                    else:
                        col[r] = nv
                for k, pc in pcombo.items():
                    combo[k] = combo.get(k, alg.qzero) - c * pc
        col = {r: c for r, c in col.items() if not c.is_zero()}
        if not col:
            continue
        row = min(col)
        inv = col[row].inverse()
        col = {r: c * inv for r, c in col.items()}
        combo = {k: c * inv for k, c in combo.items()}
        pivots.append((row, col, combo))
    for row, pcol, pcombo in pivots:
        c = rhs.get(row)
        if c is not None and not c.is_zero():
            for r, pc in pcol.items():
                nv = rhs.get(r, alg.qzero) - c * pc
                if nv.is_zero():
                    rhs.pop(r, None)
                else:
                    rhs[r] = nv
            for k, pc in pcombo.items():
                coeffs[k] = coeffs[k] + c * pc
    if any(not c.is_zero() for c in rhs.values()):
        raise ArithmeticError("triangular decomposition failed to converge")
    return coeffs


def eksf_decompose(u: UElem):
    """Coordinates of u in the basis E^m K_mu S(F^n): a dict
    (n, mu, m) -> QScalar.

    Works down the height filtration: at each step the top-height part of u
    is matched by a small linear solve against the normal forms of the basis
    elements of the same weights, which only add lower-height corrections.
    """
    alg = u.alg
    datum = alg.datum
    result = {}
    cur = u
    while cur.terms:
        heights = {}
        for (fexp, lam, eexp) in cur.terms:
            gf = alg.exp_weight(fexp)
            ge = alg.exp_weight(eexp)
            h = sum(gf) + sum(ge)
            heights.setdefault(h, []).append((fexp, lam, eexp, gf, ge))
        top = max(heights)
        groups = {}
        for fexp, lam, eexp, gf, ge in heights[top]:
            groups.setdefault((gf, ge, lam), []).append((fexp, eexp))
        delta = alg.zero()
        for (gf, ge, lam), keys in groups.items():
            mu = tuple((Weight(lam) - datum.root_weight(gf)).coords)
            exps_f = alg.datum_pbw_exps(gf)
            exps_e = alg.datum_pbw_exps(ge)
            basis = []
            columns = []
            for n in exps_f:
                for m in exps_e:
                    t = _eksf_element(alg, n, mu, m)
                    basis.append((n, mu, m))
                    columns.append(
                        {key: c for key, c in t.terms.items()
                         if key[0] in exps_f and key[2] in exps_e
                         and key[1] == lam})
            rhs = {key: cur.terms[key]
                   for key in ((f, lam, e) for f, e in keys)
                   if key in cur.terms}
            coeffs = _solve_square(alg, columns, rhs)
            for (n, bmu, m), c in zip(basis, coeffs):
                if c.is_zero():
                    continue
                s = result.get((n, bmu, m))
                result[(n, bmu, m)] = c if s is None else s + c
                delta = delta + _eksf_element(alg, n, bmu, m).scale(c)
        cur = cur - delta
        # every subtracted element matches cur exactly at the top height
        if cur.terms:
            new_top = max(sum(alg.exp_weight(f)) + sum(alg.exp_weight(e))
                          for (f, _l, e) in cur.terms)
            if new_top >= top:
                raise ArithmeticError("height did not decrease in "
                                      "triangular decomposition")
    return {k: c for k, c in result.items() if not c.is_zero()}


def sigma(u: UElem, v: VElem):
    """The mixed pairing sigma(u, v) via the factored form of u and the
    normal form of v."""
    ualg = u.alg
    if v.alg.ualg is not ualg:
        raise ValueError("u and v built over different root data")
    coords = eksf_decompose(u)
    acc = ualg.qzero
    for (yexp, lam, xexp), cv in v.terms.items():
        # Y^a Z_lam X^x = q^{(lam, wt_x)} Y^a X^x Z_lam
        wt_x = ualg.root_weight_of(ualg.exp_weight(xexp))
        pref = ualg.qpow(ualg.bilin(Weight(lam), wt_x))
        for (n, mu, m), cu in coords.items():
            # tau(E^m, F^a) tau(K_mu, K_{-lam}) tau(E^x, F^n)
            t1 = tau_closed(ualg.e_monomial(m), ualg.f_monomial(yexp))
            if t1.is_zero():
                continue
            t3 = tau_closed(ualg.e_monomial(xexp), ualg.f_monomial(n))
            if t3.is_zero():
                continue
            t2 = ualg.qpow(ualg.bilin(Weight(mu), Weight(lam)))
            acc = acc + cu * cv * pref * t1 * t2 * t3
    return acc
