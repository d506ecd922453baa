"""The quantized enveloping algebra U over F = Q(q^(1/d)) and the twisted
algebra V attached to the same root datum, with canonical PBW normal forms.

Elements of U are stored as finite maps from PBW monomials

    F_{beta_N}^{a_N} ... F_{beta_1}^{a_1} . K_lambda . E_{beta_N}^{m_N} ... E_{beta_1}^{m_1}

to scalars.  Products are computed by expanding into words in the simple
generators, moving everything into F.K.E triangular form with the defining
relations, and straightening the E- and F-words to PBW monomials.  The
straightening uses commutation rules for pairs of root vectors; those rules
are derived once per root datum by linear algebra in the free algebra modulo
the graded components of the Serre ideal, and memoized.
"""

from __future__ import annotations

import sys

from .qscalars import QScalar, q_factorial, q_integer

# the word-rewriting recursions are memoized but can chain deeply
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
from .rootdata import RootDatum, Weight


class StructuralError(ValueError):
    """Operands do not belong to the same algebra."""


# ---------------------------------------------------------------------------
# element containers
# ---------------------------------------------------------------------------

class _LinComb:
    """Shared behaviour for linear combinations keyed by monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def is_zero(self):
        return not self.terms

    def coeff(self, key):
        return self.terms.get(key, self.alg.qzero)

    def _check(self, other):
        if self.alg is not other.alg:
            raise StructuralError("operands built over different root data")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return type(self)(self.alg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.alg, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, QScalar):
            c = QScalar.from_rational(c, d=self.alg.d)
        return type(self)(self.alg, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, type(self)) or self.alg is not other.alg:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class UElem(_LinComb):
    """An element of U in canonical PBW normal form."""

    def __mul__(self, other):
        if isinstance(other, UElem):
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        r = self.alg.one()
        for _ in range(int(n)):
            r = r * self
        return r

    def __str__(self):
        return self.alg.format_elem(self)

    __repr__ = __str__


class VElem(_LinComb):
    """An element of V in canonical normal form Y-part . Z_lambda . X-part."""

    def __mul__(self, other):
        if isinstance(other, VElem):
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __str__(self):
        return self.alg.format_elem(self)

    __repr__ = __str__


class UTensor(_LinComb):
    """An element of U (x) U, componentwise PBW normal form."""

    def __mul__(self, other):
        if isinstance(other, UTensor):
            self._check(other)
            ualg = self.alg.ualg
            out = {}
            for (a1, a2), c in self.terms.items():
                ea1 = UElem(ualg, {a1: c})
                ea2 = UElem(ualg, {a2: ualg.qone})
                for (b1, b2), e in other.terms.items():
                    p1 = ualg.multiply(ea1, UElem(ualg, {b1: e}))
                    p2 = ualg.multiply(ea2, UElem(ualg, {b2: ualg.qone}))
                    for k1, c1 in p1.terms.items():
                        for k2, c2 in p2.terms.items():
                            key = (k1, k2)
                            s = out.get(key)
                            v = c1 * c2
                            out[key] = v if s is None else s + v
            return UTensor(self.alg, out)
        return self.scale(other)

    def pairs(self):
        """Iterate (left UElem, right UElem, coefficient is folded in left)."""
        ualg = self.alg.ualg
        for (k1, k2), c in self.terms.items():
            yield UElem(ualg, {k1: c}), UElem(ualg, {k2: ualg.qone})


class _TensorSpace:
    """Tiny holder so UTensor can share the _LinComb plumbing."""

    def __init__(self, ualg):
        self.ualg = ualg
        self.d = ualg.d
        self.qzero = ualg.qzero


# ---------------------------------------------------------------------------
# straightening of one-sided words
# ---------------------------------------------------------------------------

def _words_of_weight(gamma):
    """All words (tuples of 1-based simple indices) using gamma_i copies of
    letter i."""
    letters = []
    for i, c in enumerate(gamma):
        letters += [i + 1] * c
    if not letters:
        return [()]
    out = []

    def rec(remaining, prefix):
        if not remaining:
            out.append(tuple(prefix))
            return
        seen = set()
        for idx, l in enumerate(remaining):
            if l in seen:
                continue
            seen.add(l)
            rec(remaining[:idx] + remaining[idx + 1:], prefix + [l])

    rec(letters, [])
    return out


class _WeightSolver:
    """Expresses free-algebra words of a fixed weight in terms of the PBW
    monomials of that weight, modulo the span of the graded Serre component.

    The matrix [PBW expansions | Serre products] is echelonized once; solving
    reduces a word against the stored pivots and reads off the PBW
    coordinates.
    """

    def __init__(self, straightener, gamma):
        self.st = straightener
        self.gamma = gamma
        self.words = _words_of_weight(gamma)
        self.windex = {w: i for i, w in enumerate(self.words)}
        self.pbw_exps = self.st.alg.datum_pbw_exps(gamma)
        self.pivots = []          # list of (pivot_row, vector, rep)
        self.serre_rank = 0
        for exp in self.pbw_exps:
            vec = {self.windex[w]: c
                   for w, c in self.st.expand_exp(exp).items()}
            ok = self._insert(vec, {("pbw", exp): self.st.alg.qone})
            if not ok:
                raise ArithmeticError(
                    "PBW monomials dependent modulo Serre at weight %s"
                    % (gamma,))
        for n, vec in enumerate(self._serre_vectors()):
            if self._insert(vec, {("serre", n): self.st.alg.qone}):
                self.serre_rank += 1
        self.upper_dim = len(self.words) - self.serre_rank

    def _insert(self, vec, rep):
        vec, rep = self._reduce(vec, rep)
        if not vec:
            return False
        row = min(vec)
        inv = vec[row].inverse()
        vec = {r: c * inv for r, c in vec.items()}
        rep = {k: c * inv for k, c in rep.items()}
        self.pivots.append((row, vec, rep))
        return True

    def _reduce(self, vec, rep):
        vec = dict(vec)
        rep = dict(rep)
        changed = True
        while changed:
            changed = False
            for row, pvec, prep in self.pivots:
                c = vec.get(row)
                if c is not None and not c.is_zero():
                    for r, pc in pvec.items():
                        nv = vec.get(r, self.st.alg.qzero) - c * pc
                        if nv.is_zero():
                            vec.pop(r, None)
                        else:
                            vec[r] = nv
                    for k, pc in prep.items():
                        nv = rep.get(k, self.st.alg.qzero) - c * pc
                        rep[k] = nv
                    changed = True
            vec = {r: c for r, c in vec.items() if not c.is_zero()}
        return vec, rep

    def _serre_vectors(self):
        alg = self.st.alg
        for rel_weight, rel in self.st.serre_relations:
            delta = tuple(g - r for g, r in zip(self.gamma, rel_weight))
            if any(c < 0 for c in delta):
                continue
            for z in _words_of_weight(delta):
                for pos in range(len(z) + 1):
                    left, right = z[:pos], z[pos:]
                    vec = {}
                    for w, c in rel.items():
                        full = left + w + right
                        idx = self.windex[full]
                        s = vec.get(idx)
                        vec[idx] = c if s is None else s + c
                    yield {r: c for r, c in vec.items() if not c.is_zero()}

    def coordinates(self, word_combo):
        """word_combo: {word: QScalar} of this weight -> {pbw exp: QScalar};
        raises if the combination is not in the span (should not happen)."""
        vec = {self.windex[w]: c for w, c in word_combo.items()
               if not c.is_zero()}
        vec, rep = self._reduce(vec, {})
        if vec:
            raise ArithmeticError(
                "word outside PBW+Serre span at weight %s" % (self.gamma,))
        out = {}
        for tag, c in rep.items():
            if tag[0] == "pbw" and not c.is_zero():
                out[tag[1]] = -c
        return out


class _Straightener:
    """Straightens words in the positive (or negative) half to PBW
    monomials.  `expansions[k]` is the expansion of the k-th root vector as a
    combination of words in the simple generators."""

    def __init__(self, alg, serre_relations):
        self.alg = alg
        self.serre_relations = serre_relations
        self.expansions = {}       # root index (0-based) -> {word: QScalar}
        self._solvers = {}
        self._exp_cache = {}
        self._ls_rules = {}
        self._word_cache = {}

    def set_expansion(self, k, combo):
        self.expansions[k] = combo

    # -- linear-algebra route ---------------------------------------------

    def solver(self, gamma):
        gamma = tuple(gamma)
        s = self._solvers.get(gamma)
        if s is None:
            s = self._solvers[gamma] = _WeightSolver(self, gamma)
        return s

    def expand_exp(self, exp):
        """Free-word expansion of the PBW monomial with exponents `exp`
        (exp[k] = power of the k-th root vector; leftmost factor is the
        highest index)."""
        exp = tuple(exp)
        cached = self._exp_cache.get(exp)
        if cached is not None:
            return cached
        combo = {(): self.alg.qone}
        for k in range(len(exp) - 1, -1, -1):
            for _ in range(exp[k]):
                combo = self._free_mul(combo, self.expansions[k])
        self._exp_cache[exp] = combo
        return combo

    @staticmethod
    def _free_mul(a, b):
        out = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                w = wa + wb
                c = ca * cb
                s = out.get(w)
                out[w] = c if s is None else s + c
        return {w: c for w, c in out.items() if not c.is_zero()}

    def straighten_free(self, combo):
        """{simple-letter word: coeff} -> {pbw exp: coeff} via the weight
        solvers (independent oracle route)."""
        by_weight = {}
        for w, c in combo.items():
            gamma = self.alg.word_weight(w)
            by_weight.setdefault(gamma, {}).setdefault(w, self.alg.qzero)
            by_weight[gamma][w] = by_weight[gamma][w] + c
        out = {}
        for gamma, part in by_weight.items():
            for exp, c in self.solver(gamma).coordinates(part).items():
                s = out.get(exp)
                out[exp] = c if s is None else s + c
        return {k: c for k, c in out.items() if not c.is_zero()}

    # -- commutation-rule route -------------------------------------------

    def ls_rule(self, k, l):
        """Expansion of (root vector k) * (root vector l), k < l, in the PBW
        basis; derived once via the linear-algebra oracle."""
        key = (k, l)
        rule = self._ls_rules.get(key)
        if rule is None:
            combo = self._free_mul(self.expansions[k], self.expansions[l])
            rule = self.straighten_free(combo)
            self._ls_rules[key] = rule
        return rule

    def straighten_roots(self, word):
        """{pbw exp: coeff} for a word of root-vector letters (0-based
        indices, leftmost factor first); the normal order is nonincreasing."""
        word = tuple(word)
        cached = self._word_cache.get(word)
        if cached is not None:
            return cached
        j = next((i for i in range(len(word) - 1)
                  if word[i] < word[i + 1]), None)
        if j is None:
            exp = [0] * self.alg.nroots
            for l in word:
                exp[l] += 1
            result = {tuple(exp): self.alg.qone}
        else:
            result = {}
            rule = self.ls_rule(word[j], word[j + 1])
            for exp, c in rule.items():
                letters = []
                for l in range(self.alg.nroots - 1, -1, -1):
                    letters += [l] * exp[l]
                sub = self.straighten_roots(
                    word[:j] + tuple(letters) + word[j + 2:])
                for e2, c2 in sub.items():
                    v = c * c2
                    s = result.get(e2)
                    result[e2] = v if s is None else s + v
            result = {e: c for e, c in result.items() if not c.is_zero()}
        self._word_cache[word] = result
        return result

    def straighten_simple_word(self, word):
        """A word in simple generators, as root-vector letters."""
        return self.straighten_roots(
            tuple(self.alg.simple_root_index[i] for i in word))


# ---------------------------------------------------------------------------
# the algebra U
# ---------------------------------------------------------------------------

class UAlgebra:
    """U_q(g) over F = Q(q^(1/d)) for a fixed root datum."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.d = datum.fund_order
        self.rank = datum.rank
        self.nroots = datum.num_pos_roots
        self.qzero = QScalar.zero(self.d)
        self.qone = QScalar.one(self.d)
        self.simple_root_index = {}
        for k, beta in enumerate(datum.pos_roots):
            if sum(beta) == 1:
                self.simple_root_index[beta.index(1) + 1] = k
        self._zero_exp = (0,) * self.nroots
        self._zero_lam = (0,) * self.rank
        serre_e = self._serre_data("E")
        serre_f = self._serre_data("F")
        self.e_side = _Straightener(self, serre_e)
        self.f_side = _Straightener(self, serre_f)
        self._tensor_space = _TensorSpace(self)
        self._tri_cache = {}
        self._mid_cache = {}
        self._build_root_vectors()

    # -- scalars -----------------------------------------------------------

    def qpow(self, exponent):
        """q^exponent for a rational exponent with d*exponent integral."""
        return QScalar.q_power(exponent, self.d)

    def q_i(self, i):
        return self.qpow(self.datum.dsym[i - 1])

    def q_beta(self, k):
        return self.qpow(self.datum.root_half_norm(self.datum.pos_roots[k]))

    def qint(self, n, half_norm):
        return q_integer(n, half_norm, self.d)

    def qfact(self, m, half_norm):
        return q_factorial(m, half_norm, self.d)

    # -- element constructors ---------------------------------------------

    def zero(self):
        return UElem(self, {})

    def one(self):
        return UElem(self, {(self._zero_exp, self._zero_lam, self._zero_exp):
                            self.qone})

    def K(self, lam):
        if isinstance(lam, Weight):
            lam = lam.coords
        return UElem(self, {(self._zero_exp, tuple(lam), self._zero_exp):
                            self.qone})

    def E(self, i):
        exp = list(self._zero_exp)
        exp[self.simple_root_index[i]] = 1
        return UElem(self, {(self._zero_exp, self._zero_lam, tuple(exp)):
                            self.qone})

    def F(self, i):
        exp = list(self._zero_exp)
        exp[self.simple_root_index[i]] = 1
        return UElem(self, {(tuple(exp), self._zero_lam, self._zero_exp):
                            self.qone})

    def e_monomial(self, exp):
        return UElem(self, {(self._zero_exp, self._zero_lam, tuple(exp)):
                            self.qone})

    def f_monomial(self, exp):
        return UElem(self, {(tuple(exp), self._zero_lam, self._zero_exp):
                            self.qone})

    def root_vector(self, k):
        """(E_beta_k, F_beta_k) for 1 <= k <= N."""
        if not 1 <= k <= self.nroots:
            raise IndexError("root index %d out of range" % k)
        exp = list(self._zero_exp)
        exp[k - 1] = 1
        return self.e_monomial(exp), self.f_monomial(exp)

    def e_divided(self, k, m):
        """E_{beta_k}^{(m)} = E^m / [m]!_{q_beta}."""
        exp = list(self._zero_exp)
        exp[k - 1] = m
        half = self.datum.root_half_norm(self.datum.pos_roots[k - 1])
        return self.e_monomial(exp).scale(self.qfact(m, half).inverse())

    def f_divided(self, k, m):
        exp = list(self._zero_exp)
        exp[k - 1] = m
        half = self.datum.root_half_norm(self.datum.pos_roots[k - 1])
        return self.f_monomial(exp).scale(self.qfact(m, half).inverse())

    # -- weights -----------------------------------------------------------

    def word_weight(self, word):
        """Weight (simple-root coordinates) of a one-sided word."""
        gamma = [0] * self.rank
        for i in word:
            gamma[i - 1] += 1
        return tuple(gamma)

    def exp_weight(self, exp):
        """Sum of exp[k] * beta_k, in simple-root coordinates."""
        gamma = [0] * self.rank
        for k, m in enumerate(exp):
            if m:
                for j, c in enumerate(self.datum.pos_roots[k]):
                    gamma[j] += m * c
        return tuple(gamma)

    def datum_pbw_exps(self, gamma):
        """All PBW exponent tuples of weight gamma."""
        roots = self.datum.pos_roots
        out = []

        def rec(k, rest, acc):
            if all(c == 0 for c in rest):
                out.append(tuple(acc + [0] * (len(roots) - k)))
                return
            if k == len(roots):
                return
            beta = roots[k]
            m = 0
            cur = rest
            while all(c >= 0 for c in cur):
                rec(k + 1, cur, acc + [m])
                cur = tuple(a - b for a, b in zip(cur, beta))
                m += 1

        rec(0, tuple(gamma), [])
        return out

    def monomial_weight(self, key):
        """Lambda-weight by which K_mu conjugation scales the monomial, as a
        Weight (E-weight minus F-weight)."""
        fexp, _lam, eexp = key
        ew = self.exp_weight(eexp)
        fw = self.exp_weight(fexp)
        return Weight(
            sum(self.datum.cartan[i][j] * (ew[j] - fw[j])
                for j in range(self.rank))
            for i in range(self.rank))

    def bilin(self, lam, mu):
        if isinstance(lam, tuple):
            lam = Weight(lam)
        if isinstance(mu, tuple):
            mu = Weight(mu)
        return self.datum.bilinear(lam, mu)

    def root_weight_of(self, gamma):
        """Simple-root coordinate tuple -> Weight."""
        return self.datum.root_weight(gamma)

    # -- Serre relations ---------------------------------------------------

    def _serre_data(self, side):
        """The quantum Serre relations as free-word combinations, with their
        weights in simple-root coordinates."""
        rels = []
        a = self.datum.cartan
        for i in range(1, self.rank + 1):
            for j in range(1, self.rank + 1):
                if i == j:
                    continue
                aij = a[i - 1][j - 1]
                di = self.datum.dsym[i - 1]
                combo = {}
                for n in range(0, 1 - aij + 1):
                    m = 1 - aij - n
                    coeff = (QScalar.from_rational((-1) ** n, self.d)
                             / (self.qfact(m, di) * self.qfact(n, di)))
                    word = (i,) * m + (j,) + (i,) * n
                    combo[word] = combo.get(word, self.qzero) + coeff
                weight = [0] * self.rank
                weight[i - 1] = 1 - aij
                weight[j - 1] += 1
                rels.append((tuple(weight), combo))
        return rels

    # -- root vector bootstrap --------------------------------------------

    def _build_root_vectors(self):
        """Compute the free-word expansions of all root vectors by applying
        the braid operators along the fixed reduced word."""
        word = self.datum.w0_word
        for k in range(self.nroots):
            ik = word[k]
            e_word = {(ik,): self.qone}
            f_word = {(ik,): self.qone}
            for i in reversed(word[:k]):
                # every intermediate is again a root vector, so it stays in
                # its half; triangulating after each step keeps words short
                e_free = self._braid_free(
                    i, {tuple(("E", j) for j in w): c
                        for w, c in e_word.items()}, inverse=False)
                e_word = self._as_pure_word(e_free, "E")
                f_free = self._braid_free(
                    i, {tuple(("F", j) for j in w): c
                        for w, c in f_word.items()}, inverse=False)
                f_word = self._as_pure_word(f_free, "F")
            self.e_side.set_expansion(k, e_word)
            self.f_side.set_expansion(k, f_word)

    def _as_pure_word(self, free, kind):
        """Check a free element lies in the positive (negative) half and
        return it as {tuple of simple indices: coeff}."""
        out = {}
        for key, c in self._triangulate_elem(free).items():
            fword, lam, eword = key
            if kind == "E":
                if fword or any(lam):
                    raise ArithmeticError("root vector escaped the + half")
                out[eword] = c
            else:
                if eword or any(lam):
                    raise ArithmeticError("root vector escaped the - half")
                out[fword] = c
        return out

    # -- free-word machinery ----------------------------------------------

    def _braid_letter(self, i, letter, inverse):
        """T_i (or its inverse) applied to a single generator letter, as a
        free-word combination."""
        kind = letter[0]
        a = self.datum.cartan
        if kind == "K":
            lam = Weight(letter[1])
            return {(("K", self.datum.reflect(i, lam).coords),): self.qone}
        j = letter[1]
        di = self.datum.dsym[i - 1]
        qi = self.q_i(i)
        if kind == "E":
            if j == i:
                if not inverse:
                    return {(("F", i), ("K", self._alpha_coords(i))):
                            -self.qone}
                return {(("K", self._alpha_coords(i, sign=-1)), ("F", i)):
                        -self.qone}
            aij = a[i - 1][j - 1]
            out = {}
            for k in range(0, -aij + 1):
                m = -aij - k
                # divided powers E_i^{(m)} E_j E_i^{(k)} (or reflected)
                c = (QScalar.from_rational((-1) ** k, self.d)
                     * qi ** (-k)
                     / (self.qfact(m, di) * self.qfact(k, di)))
                if not inverse:
                    word = (("E", i),) * m + (("E", j),) + (("E", i),) * k
                else:
                    word = (("E", i),) * k + (("E", j),) + (("E", i),) * m
                out[word] = out.get(word, self.qzero) + c
            return out
        if kind == "F":
            if j == i:
                if not inverse:
                    return {(("K", self._alpha_coords(i, sign=-1)), ("E", i)):
                            -self.qone}
                return {(("E", i), ("K", self._alpha_coords(i))): -self.qone}
            aij = a[i - 1][j - 1]
            out = {}
            for k in range(0, -aij + 1):
                m = -aij - k
                c = (QScalar.from_rational((-1) ** k, self.d)
                     * qi ** k
                     / (self.qfact(m, di) * self.qfact(k, di)))
                if not inverse:
                    word = (("F", i),) * k + (("F", j),) + (("F", i),) * m
                else:
                    word = (("F", i),) * m + (("F", j),) + (("F", i),) * k
                out[word] = out.get(word, self.qzero) + c
            return out
        raise ValueError("unknown letter kind %r" % (kind,))

    def _alpha_coords(self, i, sign=1):
        return tuple(sign * c for c in self.datum.simple_root(i).coords)

    def _braid_free(self, i, free, inverse):
        out = {}
        for word, c in free.items():
            combos = [self._braid_letter(i, letter, inverse)
                      for letter in word]
            partial = {(): c}
            for combo in combos:
                nxt = {}
                for w0, c0 in partial.items():
                    for w1, c1 in combo.items():
                        w = w0 + w1
                        v = c0 * c1
                        s = nxt.get(w)
                        nxt[w] = v if s is None else s + v
                partial = nxt
            for w, v in partial.items():
                s = out.get(w)
                out[w] = v if s is None else s + v
        return {w: c for w, c in out.items() if not c.is_zero()}

    def _triangulate_word(self, word):
        """One mixed word -> {(f simple word, lam, e simple word): coeff}
        using only the defining relations among the generators."""
        cached = self._tri_cache.get(word)
        if cached is not None:
            return cached
        # find first out-of-order adjacent pair
        pos = None
        for idx in range(len(word) - 1):
            k1, k2 = word[idx][0], word[idx + 1][0]
            if (k1, k2) in (("E", "F"), ("E", "K"), ("K", "F"), ("K", "K")):
                pos = idx
                break
        if pos is None:
            fword = tuple(l[1] for l in word if l[0] == "F")
            eword = tuple(l[1] for l in word if l[0] == "E")
            lam = self._zero_lam
            for l in word:
                if l[0] == "K":
                    lam = tuple(a + b for a, b in zip(lam, l[1]))
            result = {(fword, lam, eword): self.qone}
            self._tri_cache[word] = result
            return result
        l1, l2 = word[pos], word[pos + 1]
        head, tail = word[:pos], word[pos + 2:]
        branches = []     # (replacement word, coefficient)
        if l1[0] == "K" and l2[0] == "K":
            merged = ("K", tuple(a + b for a, b in zip(l1[1], l2[1])))
            branches.append((head + (merged,) + tail, self.qone))
        elif l1[0] == "K" and l2[0] == "F":
            c = self.qpow(-self.bilin(Weight(l1[1]),
                                      self.datum.simple_root(l2[1])))
            branches.append((head + (l2, l1) + tail, c))
        elif l1[0] == "E" and l2[0] == "K":
            c = self.qpow(-self.bilin(Weight(l2[1]),
                                      self.datum.simple_root(l1[1])))
            branches.append((head + (l2, l1) + tail, c))
        else:  # E then F
            i, j = l1[1], l2[1]
            branches.append((head + (l2, l1) + tail, self.qone))
            if i == j:
                qi = self.q_i(i)
                denom = (qi - qi.inverse()).inverse()
                branches.append(
                    (head + (("K", self._alpha_coords(i)),) + tail, denom))
                branches.append(
                    (head + (("K", self._alpha_coords(i, sign=-1)),) + tail,
                     -denom))
        result = {}
        for w2, c in branches:
            for key, c2 in self._triangulate_word(w2).items():
                v = c * c2
                s = result.get(key)
                result[key] = v if s is None else s + v
        result = {k: c for k, c in result.items() if not c.is_zero()}
        self._tri_cache[word] = result
        return result

    def _triangulate_elem(self, free):
        out = {}
        for word, c in free.items():
            for key, c2 in self._triangulate_word(word).items():
                v = c * c2
                s = out.get(key)
                out[key] = v if s is None else s + v
        return {k: c for k, c in out.items() if not c.is_zero()}

    def normalize_free(self, free):
        """Free element (mixed words) -> UElem in PBW normal form."""
        out = {}
        for (fword, lam, eword), c in self._triangulate_elem(free).items():
            fparts = self.f_side.straighten_simple_word(fword)
            eparts = self.e_side.straighten_simple_word(eword)
            for fexp, cf in fparts.items():
                for eexp, ce in eparts.items():
                    key = (fexp, lam, eexp)
                    v = c * cf * ce
                    s = out.get(key)
                    out[key] = v if s is None else s + v
        return UElem(self, out)

    def expand_monomial(self, key):
        """PBW monomial -> free-word combination in the generators."""
        fexp, lam, eexp = key
        combo = {(): self.qone}
        fw = self.f_side.expand_exp(fexp)
        combo = {tuple(("F", i) for i in w): c for w, c in fw.items()}
        if any(lam):
            combo = _Straightener._free_mul(combo, {(("K", lam),): self.qone})
        ew = self.e_side.expand_exp(eexp)
        combo = _Straightener._free_mul(
            combo, {tuple(("E", i) for i in w): c for w, c in ew.items()})
        return combo

    def elem_to_free(self, elem):
        out = {}
        for key, c in elem.terms.items():
            for w, c2 in self.expand_monomial(key).items():
                v = c * c2
                s = out.get(w)
                out[w] = v if s is None else s + v
        return {w: c for w, c in out.items() if not c.is_zero()}

    # -- multiplication ----------------------------------------------------

    def _mid_product(self, eexp, fexp):
        """E-part times F-part, the only nontrivial reordering, memoized."""
        key = (eexp, fexp)
        cached = self._mid_cache.get(key)
        if cached is not None:
            return cached
        ew = self.e_side.expand_exp(eexp)
        fw = self.f_side.expand_exp(fexp)
        free = {}
        for we, ce in ew.items():
            for wf, cf in fw.items():
                word = (tuple(("E", i) for i in we)
                        + tuple(("F", i) for i in wf))
                c = ce * cf
                s = free.get(word)
                free[word] = c if s is None else s + c
        result = self.normalize_free(free)
        self._mid_cache[key] = result
        return result

    def multiply(self, a, b):
        if a.alg is not self or b.alg is not self:
            raise StructuralError("mismatched algebras in multiply")
        out = {}
        for (fa, la, ea), ca in a.terms.items():
            for (fb, lb, eb), cb in b.terms.items():
                base = ca * cb
                mid = self._mid_product(ea, fb)
                for (fm, lm, em), cm in mid.terms.items():
                    # assemble F_a . K_la . (F_m K_lm E_m) . K_lb . E_b
                    coeff = base * cm
                    coeff = coeff * self.qpow(
                        -self.bilin(Weight(la),
                                    self.root_weight_of(self.exp_weight(fm))))
                    coeff = coeff * self.qpow(
                        -self.bilin(Weight(lb),
                                    self.root_weight_of(self.exp_weight(em))))
                    lam = tuple(x + y + z for x, y, z in zip(la, lm, lb))
                    fparts = self._side_product(self.f_side, fa, fm)
                    eparts = self._side_product(self.e_side, em, eb)
                    for fexp, cf in fparts.items():
                        for eexp, ce in eparts.items():
                            key = (fexp, lam, eexp)
                            v = coeff * cf * ce
                            s = out.get(key)
                            out[key] = v if s is None else s + v
        return UElem(self, out)

    def _side_product(self, side, exp1, exp2):
        """Product of two one-sided PBW monomials as {exp: coeff}."""
        if not any(exp2):
            return {tuple(exp1): self.qone}
        if not any(exp1):
            return {tuple(exp2): self.qone}
        letters = []
        for l in range(self.nroots - 1, -1, -1):
            letters += [l] * exp1[l]
        for l in range(self.nroots - 1, -1, -1):
            letters += [l] * exp2[l]
        return side.straighten_roots(tuple(letters))

    # -- Hopf structure ----------------------------------------------------

    def coproduct(self, a):
        """Delta(a) in U (x) U, componentwise PBW normal form."""
        out = {}
        for key, c in a.terms.items():
            for word, cw in self.expand_monomial(key).items():
                pairs = {((), ()): c * cw}
                for letter in word:
                    legs = self._delta_letter(letter)
                    nxt = {}
                    for (w1, w2), c0 in pairs.items():
                        for (l1, l2), c1 in legs.items():
                            key2 = (w1 + l1, w2 + l2)
                            v = c0 * c1
                            s = nxt.get(key2)
                            nxt[key2] = v if s is None else s + v
                    pairs = nxt
                for (w1, w2), c0 in pairs.items():
                    left = self.normalize_free({w1: c0})
                    right = self.normalize_free({w2: self.qone})
                    for k1, c1 in left.terms.items():
                        for k2, c2 in right.terms.items():
                            k = (k1, k2)
                            v = c1 * c2
                            s = out.get(k)
                            out[k] = v if s is None else s + v
        return UTensor(self._tensor_space, out)

    def _delta_letter(self, letter):
        kind = letter[0]
        if kind == "K":
            kl = (letter,)
            return {(kl, kl): self.qone}
        i = letter[1]
        ki = ("K", self._alpha_coords(i))
        kinv = ("K", self._alpha_coords(i, sign=-1))
        if kind == "E":
            return {((letter,), ()): self.qone,
                    ((ki,), (letter,)): self.qone}
        return {((letter,), (kinv,)): self.qone,
                ((), (letter,)): self.qone}

    def counit(self, a):
        acc = self.qzero
        for (fexp, lam, eexp), c in a.terms.items():
            if not any(fexp) and not any(eexp):
                acc = acc + c
        return acc

    def antipode(self, a):
        out = {}
        for key, c in a.terms.items():
            for word, cw in self.expand_monomial(key).items():
                combo = {(): c * cw}
                for letter in reversed(word):
                    combo = _Straightener._free_mul(
                        combo, self._antipode_letter(letter))
                for w, c0 in combo.items():
                    s = out.get(w)
                    out[w] = c0 if s is None else s + c0
        return self.normalize_free(out)

    def _antipode_letter(self, letter):
        kind = letter[0]
        if kind == "K":
            return {(("K", tuple(-c for c in letter[1])),): self.qone}
        i = letter[1]
        if kind == "E":
            return {(("K", self._alpha_coords(i, sign=-1)), ("E", i)):
                    -self.qone}
        return {(("F", i), ("K", self._alpha_coords(i))): -self.qone}

    # -- braid operators ---------------------------------------------------

    def braid_T(self, i, a, inverse=False):
        free = self.elem_to_free(a)
        return self.normalize_free(self._braid_free(i, free, inverse))

    def braid_T_inverse(self, i, a):
        return self.braid_T(i, a, inverse=True)

    # -- formatting --------------------------------------------------------

    def format_elem(self, elem):
        if not elem.terms:
            return "0"
        parts = []
        for key in sorted(elem.terms, key=_key_sort):
            fexp, lam, eexp = key
            c = elem.terms[key]
            factors = []
            for k in range(self.nroots - 1, -1, -1):
                if fexp[k]:
                    factors.append("F[%d]%s" % (k + 1,
                                   "^%d" % fexp[k] if fexp[k] > 1 else ""))
            if any(lam):
                factors.append("K%s" % (lam,))
            for k in range(self.nroots - 1, -1, -1):
                if eexp[k]:
                    factors.append("E[%d]%s" % (k + 1,
                                   "^%d" % eexp[k] if eexp[k] > 1 else ""))
            mono = ".".join(factors) if factors else "1"
            parts.append("%s*%s" % (c, mono))
        return " + ".join(parts)


def _key_sort(key):
    return tuple(key[0]) + tuple(key[1]) + tuple(key[2])


# ---------------------------------------------------------------------------
# the algebra V
# ---------------------------------------------------------------------------

class VAlgebra:
    """The algebra V attached to the same root datum: generators Z_lambda,
    X_i, Y_i; X's and Y's satisfy the Serre relations of the E's and F's and
    commute with each other, and Z_lambda conjugation scales X_i and Y_i by
    the same character q^{(lambda, alpha_i)}.

    Normal form: Y-part . Z_lambda . X-part, with the X- and Y-parts
    straightened in the PBW bases borrowed from U through the half-algebra
    isomorphisms.
    """

    def __init__(self, ualg: UAlgebra):
        self.ualg = ualg
        self.datum = ualg.datum
        self.d = ualg.d
        self.rank = ualg.rank
        self.nroots = ualg.nroots
        self.qzero = ualg.qzero
        self.qone = ualg.qone
        self._zero_exp = (0,) * self.nroots
        self._zero_lam = (0,) * self.rank

    def zero(self):
        return VElem(self, {})

    def one(self):
        return VElem(self, {(self._zero_exp, self._zero_lam, self._zero_exp):
                            self.qone})

    def Z(self, lam):
        if isinstance(lam, Weight):
            lam = lam.coords
        return VElem(self, {(self._zero_exp, tuple(lam), self._zero_exp):
                            self.qone})

    def X(self, i):
        exp = list(self._zero_exp)
        exp[self.ualg.simple_root_index[i]] = 1
        return VElem(self, {(self._zero_exp, self._zero_lam, tuple(exp)):
                            self.qone})

    def Y(self, i):
        exp = list(self._zero_exp)
        exp[self.ualg.simple_root_index[i]] = 1
        return VElem(self, {(tuple(exp), self._zero_lam, self._zero_exp):
                            self.qone})

    def x_monomial(self, exp):
        return VElem(self, {(self._zero_exp, self._zero_lam, tuple(exp)):
                            self.qone})

    def y_monomial(self, exp):
        return VElem(self, {(tuple(exp), self._zero_lam, self._zero_exp):
                            self.qone})

    def multiply(self, a, b):
        if a.alg is not self or b.alg is not self:
            raise StructuralError("mismatched algebras in multiply")
        ualg = self.ualg
        out = {}
        for (ya, la, xa), ca in a.terms.items():
            for (yb, lb, xb), cb in b.terms.items():
                # Y^ya Z_la X^xa . Y^yb Z_lb X^xb:
                # X's commute with Y's; move Z's using the +-sign character
                wt_yb = ualg.root_weight_of(ualg.exp_weight(yb))
                wt_xa = ualg.root_weight_of(ualg.exp_weight(xa))
                coeff = (ca * cb
                         * ualg.qpow(ualg.bilin(Weight(la), wt_yb))
                         * ualg.qpow(-ualg.bilin(Weight(lb), wt_xa)))
                lam = tuple(x + y for x, y in zip(la, lb))
                yparts = ualg._side_product(ualg.f_side, ya, yb)
                xparts = ualg._side_product(ualg.e_side, xa, xb)
                for yexp, cy in yparts.items():
                    for xexp, cx in xparts.items():
                        key = (yexp, lam, xexp)
                        v = coeff * cy * cx
                        s = out.get(key)
                        out[key] = v if s is None else s + v
        return VElem(self, out)

    def counit(self, a):
        acc = self.qzero
        for (yexp, lam, xexp), c in a.terms.items():
            if not any(yexp) and not any(xexp):
                acc = acc + c
        return acc

    # -- half isomorphisms -------------------------------------------------

    def jmath_geq0(self, v):
        """X_i -> E_i, Z_lambda -> K_lambda on the nonnegative half."""
        out = {}
        for (yexp, lam, xexp), c in v.terms.items():
            if any(yexp):
                raise ValueError("element is not in the nonnegative half")
            out[(self._zero_exp, lam, xexp)] = c
        return UElem(self.ualg, out)

    def jmath_leq0(self, v):
        """Y_i -> F_i, Z_lambda -> K_{-lambda} on the nonpositive half."""
        out = {}
        for (yexp, lam, xexp), c in v.terms.items():
            if any(xexp):
                raise ValueError("element is not in the nonpositive half")
            out[(yexp, tuple(-x for x in lam), self._zero_exp)] = c
        return UElem(self.ualg, out)

    def format_elem(self, elem):
        if not elem.terms:
            return "0"
        parts = []
        for key in sorted(elem.terms, key=_key_sort):
            yexp, lam, xexp = key
            c = elem.terms[key]
            factors = []
            for k in range(self.nroots - 1, -1, -1):
                if yexp[k]:
                    factors.append("Y[%d]%s" % (k + 1,
                                   "^%d" % yexp[k] if yexp[k] > 1 else ""))
            if any(lam):
                factors.append("Z%s" % (lam,))
            for k in range(self.nroots - 1, -1, -1):
                if xexp[k]:
                    factors.append("X[%d]%s" % (k + 1,
                                   "^%d" % xexp[k] if xexp[k] > 1 else ""))
            mono = ".".join(factors) if factors else "1"
            parts.append("%s*%s" % (c, mono))
        return " + ".join(parts)


def u_multiply(a, b):
    return a.alg.multiply(a, b)


def v_multiply(a, b):
    return a.alg.multiply(a, b)


def coproduct(a):
    return a.alg.coproduct(a)


def counit(a):
    return a.alg.counit(a)


def antipode(a):
    return a.alg.antipode(a)


def braid_T(i, a):
    return a.alg.braid_T(i, a)


def braid_T_inverse(i, a):
    return a.alg.braid_T_inverse(i, a)


def jmath_geq0(v):
    return v.alg.jmath_geq0(v)


def jmath_leq0(v):
    return v.alg.jmath_leq0(v)
