"""Tests for the integral forms, their coordinates, and specialization."""

import random
from fractions import Fraction

import pytest

from qmanin.drinfeld_pairing import sigma
from qmanin.integral_forms import (
    NotInFormError,
    dcp_coordinates,
    iota_at_one,
    k_binomial_elem,
    k_binomial_expansion,
    lusztig_coordinates,
    specialize_U,
    specialize_U_at_one,
    specialize_V_at_one,
    torus_basis_expansion,
    torus_coordinates,
    ulbar_at_one,
    v_integral_coordinates,
)
from qmanin.qalgebra import UAlgebra, VAlgebra
from qmanin.qscalars import QScalar, eval_at_root
from qmanin.rootdata import RootDatum


_ALGEBRAS = {}


def ualg(label):
    if label not in _ALGEBRAS:
        _ALGEBRAS[label] = UAlgebra(RootDatum(label))
    return _ALGEBRAS[label]


def rescale_factor(U, fexp, eexp):
    """prod over roots of (q_beta - q_beta^-1)^(a_k + m_k)."""
    s = U.qone
    for k in range(U.nroots):
        tot = fexp[k] + eexp[k]
        if tot:
            half = U.datum.root_half_norm(U.datum.pos_roots[k])
            qb = U.qpow(half)
            s = s * (qb - qb.inverse()) ** tot
    return s


def dcp_monomial(U, fexp, lam, eexp):
    """B^fexp K_lam A^eexp as a UElem."""
    mono = U.f_monomial(fexp) * U.K(lam) * U.e_monomial(eexp)
    return mono.scale(rescale_factor(U, fexp, eexp))


def z_binomial_elem(V, i, n):
    """[Z_i; n] as a VElem."""
    U = V.ualg
    ki = U.datum.simple_root(i)
    out = V.zero()
    for m, c in k_binomial_expansion(U, i, n).items():
        out = out + V.Z((m * ki).coords).scale(c)
    return out


# -- torus coordinates -------------------------------------------------------


@pytest.mark.parametrize("label,lams", [
    ("A1", [(0,), (3,), (4,), (-5,)]),
    ("A2", [(0, 0), (1, -1), (2, 2), (-3, 1)]),
])
def test_torus_coordinates_round_trip(label, lams):
    U = ualg(label)
    for lam in lams:
        back = {}
        for (lam0, nexp), c in torus_coordinates(U, lam).items():
            for w, c2 in torus_basis_expansion(U, lam0, nexp).items():
                s = back.get(w, U.qzero) + c * c2
                if s.is_zero():
                    back.pop(w, None)
                else:
                    back[w] = s
        assert back == {lam: U.qone}, lam


def test_torus_representative_is_its_own_coordinate():
    U = ualg("A2")
    for lam0 in U.datum.lambda0():
        coords = torus_coordinates(U, lam0.coords)
        assert coords == {(lam0.coords, (0, 0)): U.qone}


# -- divided-power coordinates ----------------------------------------------


def test_lusztig_divided_power_coordinate():
    for ell in (2, 3):
        U = ualg("A1")
        coords = lusztig_coordinates(U.E(1) ** ell)
        key = ((0,), ((0,), (0,)), (ell,))
        assert coords == {key: U.qfact(ell, 1)}


def test_lusztig_rescaled_generator_is_integral():
    U = ualg("A2")
    for i in (1, 2):
        qi = U.q_i(i)
        coords = lusztig_coordinates(U.E(i).scale(qi - qi.inverse()))
        assert len(coords) == 1
        (c,) = coords.values()
        assert c == qi - qi.inverse()
        assert c.regular_at_one() and c.regular_at_root(3)


def test_lusztig_plain_generator_is_not_integral_at_one():
    U = ualg("A1")
    coords = dcp_coordinates(U.E(1))
    (c,) = coords.values()
    assert not c.regular_at_one()
    assert c.regular_at_root(3)


# -- rescaled (dual-group) coordinates ---------------------------------------


def test_dcp_generator_coordinates():
    U = ualg("A2")
    a1 = dcp_monomial(U, (0, 0, 0), (0, 0), (1, 0, 0))
    assert dcp_coordinates(a1) == {((0, 0, 0), (0, 0), (1, 0, 0)): U.qone}
    assert dcp_coordinates(U.K((2, -1))) == {
        ((0, 0, 0), (2, -1), (0, 0, 0)): U.qone}
    q1 = U.q_i(1)
    coords = dcp_coordinates(U.E(1))
    assert coords == {((0, 0, 0), (0, 0), (1, 0, 0)):
                      (q1 - q1.inverse()).inverse()}


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_dcp_products_are_integral(label):
    """Products of rescaled generators stay integral in every specialization."""
    U = ualg(label)
    rng = random.Random(41)
    gens = []
    for i in range(1, U.rank + 1):
        qi = U.q_i(i)
        gens.append(U.E(i).scale(qi - qi.inverse()))
        gens.append(U.F(i).scale(qi - qi.inverse()))
    for _ in range(2):
        lam = tuple(rng.randint(-1, 1) for _ in range(U.rank))
        gens.append(U.K(lam))
    for _ in range(8):
        word = [rng.choice(gens) for _ in range(4)]
        prod = U.one()
        for g in word:
            prod = prod * g
        coords = dcp_coordinates(prod)
        for c in coords.values():
            assert c.regular_at_one()
            assert c.regular_at_root(3) and c.regular_at_root(5)


# -- specialization of U ------------------------------------------------------


def test_specialize_rescaled_generators():
    U = ualg("A1")
    a1 = dcp_monomial(U, (0,), (0,), (1,))
    out = specialize_U(a1, 3)
    assert list(out.values())[0] == eval_at_root(U.qone, 3)
    assert specialize_U_at_one(U.K((1,))) == {
        ((0,), (1,), (0,)): Fraction(1)}


def test_specialize_commutator_at_root():
    # [E, F] = (K - K^-1)/(q - q^-1): integral at a root of unity but not at 1
    U = ualg("A1")
    comm = U.E(1) * U.F(1) - U.F(1) * U.E(1)
    out = specialize_U(comm, 3)
    assert set(out) == {((0,), (2,), (0,)), ((0,), (-2,), (0,))}
    with pytest.raises(NotInFormError):
        specialize_U_at_one(comm)


# -- the classical quotients at z = 1 ----------------------------------------


def test_ulbar_generator_images():
    U = ualg("A1")
    assert ulbar_at_one(U.E(1)) == {((0,), (0,), (1,)): Fraction(1)}
    assert ulbar_at_one(U.F(1)) == {((1,), (0,), (0,)): Fraction(1)}
    assert ulbar_at_one(k_binomial_elem(U, 1, 1)) == {
        ((0,), (1,), (0,)): Fraction(1)}
    assert ulbar_at_one(U.K((3,)) - U.one()) == {}


def test_ulbar_k_binomial_images():
    # [K_i; 2] -> binom(h_i, 2) = (h_i^2 - h_i)/2
    U = ualg("A2")
    got = ulbar_at_one(k_binomial_elem(U, 1, 2))
    zero3 = (0, 0, 0)
    assert got == {(zero3, (2, 0), zero3): Fraction(1, 2),
                   (zero3, (1, 0), zero3): Fraction(-1, 2)}


def test_iota_at_one_is_counit():
    """Positive-degree rescaled monomials die in the classical quotient."""
    U = ualg("A2")
    rng = random.Random(59)
    seen = 0
    while seen < 20:
        fexp = tuple(rng.randint(0, 1) for _ in range(U.nroots))
        eexp = tuple(rng.randint(0, 1) for _ in range(U.nroots))
        if not (any(fexp) or any(eexp)):
            continue
        lam = tuple(rng.randint(-2, 2) for _ in range(U.rank))
        assert iota_at_one(dcp_monomial(U, fexp, lam, eexp)) == {}
        seen += 1
    # degree zero: the counit value survives as a scalar
    assert iota_at_one(U.K((2, -2))) == {
        ((0,) * U.nroots, (0, 0), (0,) * U.nroots): Fraction(1)}


def test_dcp_generators_commute_at_one():
    U = ualg("A2")
    gens = []
    for i in (1, 2):
        qi = U.q_i(i)
        gens.append(U.E(i).scale(qi - qi.inverse()))
        gens.append(U.F(i).scale(qi - qi.inverse()))
    gens.append(U.K((1, 0)))
    gens.append(U.K((0, 1)))
    for a in gens:
        for b in gens:
            assert specialize_U_at_one(a * b - b * a) == {}


# -- the V-side form and its z = 1 quotient ----------------------------------


def test_v_coordinates_divided_powers():
    U = ualg("A1")
    V = VAlgebra(U)
    coords = v_integral_coordinates(V.Y(1) * V.Y(1))
    assert coords == {((2,), ((0,), (0,)), (0,)): U.qfact(2, 1)}


def test_specialize_v_generators():
    U = ualg("A2")
    V = VAlgebra(U)
    zero3 = (0, 0, 0)
    assert specialize_V_at_one(V.X(1)) == {
        (zero3, (0, 0), (1, 0, 0)): Fraction(1)}
    assert specialize_V_at_one(V.Y(2)) == {
        ((0, 0, 1), (0, 0), zero3): Fraction(1)}
    assert specialize_V_at_one(V.Z((1, -1)) - V.one()) == {}


def test_specialize_v_z_binomials():
    U = ualg("A1")
    V = VAlgebra(U)
    # [Z_1; 2] -> binom(t_1, 2)
    got = specialize_V_at_one(z_binomial_elem(V, 1, 2))
    assert got == {((0,), (2,), (0,)): Fraction(1, 2),
                   ((0,), (1,), (0,)): Fraction(-1, 2)}


def test_specialize_v_pole_detection():
    U = ualg("A1")
    V = VAlgebra(U)
    bad = V.X(1).scale((U.qpow(1) - U.qone).inverse())
    with pytest.raises(NotInFormError):
        specialize_V_at_one(bad)


# -- the pairing is perfect at desk scale -------------------------------------


def _rank(rows, zero_test, invert):
    rank = 0
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivot_rows = []
    for row in rows:
        for prow, pcol in pivot_rows:
            c = row[pcol]
            if not zero_test(c):
                row = [a - c * b for a, b in zip(row, prow)]
        pcol = next((j for j in range(ncols) if not zero_test(row[j])), None)
        if pcol is None:
            continue
        inv = invert(row[pcol])
        pivot_rows.append(([a * inv for a in row], pcol))
        rank += 1
    return rank


def _bidegrees(total):
    return [(a, m) for a in range(total + 1) for m in range(total + 1 - a)]


@pytest.mark.parametrize("point", ["one", "zeta3"])
def test_pairing_gram_blocks_full_rank(point):
    """Bounded-degree basis elements of the rescaled form stay independent
    as pairing functionals after specialization (A1, degree <= 3).

    The pairing is bidegree-orthogonal, so the Gram matrix is block diagonal
    over (F-degree, E-degree) and each torus-sized block is checked alone.
    The weight window is matched to the separating power of torus columns of
    binomial degree <= 3: polynomial degree 4 at z = 1, and weight mod 3
    plus one base-3 digit (6 values) at a cube root of unity.
    """
    U = ualg("A1")
    V = VAlgebra(U)
    lams = list(range(4 if point == "one" else 6))
    vcols = []
    for mu0 in U.datum.lambda0():
        for c in range(4):
            vcols.append(V.Z(mu0.coords) * z_binomial_elem(V, 1, c))
    for a, m in _bidegrees(3):
        rows = []
        for lam in lams:
            u = dcp_monomial(U, (a,), (lam,), (m,))
            fact = (U.qfact(m, 1) * U.qfact(a, 1)).inverse()
            row = []
            for vt in vcols:
                v = (V.y_monomial((m,)) * vt * V.x_monomial((a,))).scale(fact)
                row.append(sigma(u, v))
            rows.append(row)
        if point == "one":
            mat = [[s.eval_at_one() for s in row] for row in rows]
            rank = _rank(mat, lambda x: x == 0, lambda x: 1 / x)
        else:
            mat = [[eval_at_root(s, 3) for s in row] for row in rows]
            rank = _rank(mat, lambda x: x.is_zero(), lambda x: x.inverse())
        assert rank == len(lams), (a, m)


def test_pairing_separates_v_quotient_basis_at_one():
    """At z = 1 the surviving V-side basis (Z-weights collapsed) stays
    independent against torus columns of U."""
    U = ualg("A1")
    V = VAlgebra(U)
    lams = list(range(-4, 5))
    for b, x in _bidegrees(3):
        fact = (U.qfact(b, 1) * U.qfact(x, 1)).inverse()
        rows = []
        for c in range(3):
            v = (V.y_monomial((b,)) * z_binomial_elem(V, 1, c)
                 * V.x_monomial((x,))).scale(fact)
            row = []
            for lam in lams:
                u = dcp_monomial(U, (x,), (lam,), (b,))
                row.append(sigma(u, v).eval_at_one())
            rows.append(row)
        rank = _rank(rows, lambda s: s == 0, lambda s: 1 / s)
        assert rank == 3, (b, x)
