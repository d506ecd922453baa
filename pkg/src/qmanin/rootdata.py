"""Cartan data, weight and root lattices, the normalized symmetric bilinear
form, and the positive-root enumeration attached to a fixed reduced word for
the longest Weyl group element.

Weights are stored in fundamental-weight coordinates, roots in simple-root
coordinates; both are plain integer tuples wrapped in a small class.  The
bilinear form is normalized so that (beta, beta)/2 = 1 for short roots.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "B2": [[2, -1], [-2, 2]],
}

SYMMETRIZERS = {
    "A1": [1],
    "A2": [1, 1],
    "A3": [1, 1, 1],
    "B2": [2, 1],
}

W0_WORDS = {
    "A1": (1,),
    "A2": (1, 2, 1),
    "A3": (1, 2, 1, 3, 2, 1),
    "B2": (1, 2, 1, 2),
}


def _mat_inverse(m):
    """Exact inverse of a square matrix over Fractions."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] +
         [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class Weight:
    """A weight in fundamental-weight coordinates (integer tuple)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(int(c) for c in coords)

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Weight(-a for a in self.coords)

    def __mul__(self, k):
        return Weight(a * int(k) for a in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Weight) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return "Weight%s" % (self.coords,)


class RootDatum:
    """Root datum for a fixed type label and a fixed reduced word for w0.

    Attributes:
        label: one of "A1", "A2", "A3", "B2"
        cartan: the Cartan matrix a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i)
        dsym: the symmetrizers d_i = (alpha_i, alpha_i)/2
        rank: number of simple roots
        fund_order: the order |Lambda/Q| of the fundamental group
        w0_word: the fixed reduced word (1-based indices)
        pos_roots: beta_1, ..., beta_N in simple-root coordinates
    """

    def __init__(self, label, w0_word=None):
        if label not in CARTAN:
            raise ValueError("unsupported type label %r" % label)
        self.label = label
        self.cartan = CARTAN[label]
        self.dsym = SYMMETRIZERS[label]
        self.rank = len(self.cartan)
        self._cartan_inv = _mat_inverse(self.cartan)
        det = _det(self.cartan)
        assert det.denominator == 1
        self.fund_order = int(det)
        # Gram matrix of the fundamental weights:
        # (w_i, w_j) = d_j * (A^-1)_{ji}
        self.fund_gram = [[self._cartan_inv[j][i] * self.dsym[j]
                           for j in range(self.rank)] for i in range(self.rank)]
        self.w0_word = tuple(w0_word) if w0_word is not None else W0_WORDS[label]
        self.pos_roots = self._positive_roots_from_word(self.w0_word)
        self.num_pos_roots = len(self.pos_roots)
        self._lambda0 = None

    # -- lattice geometry --------------------------------------------------

    def simple_root(self, i):
        """alpha_i as a Weight (fundamental coordinates = Cartan column)."""
        return Weight(self.cartan[k][i - 1] for k in range(self.rank))

    def root_weight(self, root):
        """A root in simple-root coordinates, as a Weight."""
        return Weight(sum(self.cartan[k][j] * root[j] for j in range(self.rank))
                      for k in range(self.rank))

    def fundamental_weight(self, i):
        return Weight(1 if k == i - 1 else 0 for k in range(self.rank))

    def bilinear(self, lam, mu):
        """The invariant form (lam, mu), a Fraction in (1/|Lambda/Q|) Z."""
        acc = Fraction(0)
        for i, a in enumerate(lam.coords):
            if a:
                for j, b in enumerate(mu.coords):
                    if b:
                        acc += a * b * self.fund_gram[i][j]
        return acc

    def pairing(self, lam, i):
        """<lam, alpha_i^vee> = 2 (lam, alpha_i)/(alpha_i, alpha_i); this is
        just the i-th fundamental coordinate."""
        return lam.coords[i - 1]

    def reflect(self, i, lam):
        """s_i(lam) = lam - <lam, alpha_i^vee> alpha_i."""
        return lam - lam.coords[i - 1] * self.simple_root(i)

    def reflect_root(self, i, root):
        """s_i acting on simple-root coordinates."""
        lam = self.root_weight(root)
        c = list(root)
        c[i - 1] -= lam.coords[i - 1]
        return tuple(c)

    def _positive_roots_from_word(self, word):
        """beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k}); validates that the
        word is reduced by checking the betas are distinct positive roots."""
        betas = []
        for k, ik in enumerate(word):
            root = tuple(1 if j == ik - 1 else 0 for j in range(self.rank))
            for i in reversed(word[:k]):
                root = self.reflect_root(i, root)
            if any(c < 0 for c in root) or root in betas:
                raise ValueError("word %r is not reduced" % (word,))
            betas.append(root)
        if len(betas) != len(self._all_positive_roots()):
            raise ValueError("word %r is not a reduced word for w0" % (word,))
        return tuple(betas)

    def _all_positive_roots(self):
        """Brute-force closure of the simple roots under the Weyl group."""
        simple = [tuple(1 if j == i else 0 for j in range(self.rank))
                  for i in range(self.rank)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            root = frontier.pop()
            for i in range(1, self.rank + 1):
                r2 = self.reflect_root(i, root)
                if r2 not in seen:
                    seen.add(r2)
                    frontier.append(r2)
        return sorted(r for r in seen if all(c >= 0 for c in r))

    def root_bilinear(self, r1, r2):
        """(beta, beta') for roots in simple-root coordinates (an integer)."""
        val = self.bilinear(self.root_weight(r1), self.root_weight(r2))
        assert val.denominator == 1
        return int(val)

    def root_half_norm(self, root):
        """(beta, beta)/2 = d_beta; 1 for short roots."""
        n = self.root_bilinear(root, root)
        assert n % 2 == 0
        return n // 2

    @staticmethod
    def height(root):
        return sum(root)

    def kostant_partitions(self, gamma):
        """Number of ways to write gamma (simple-root coordinates) as a
        nonnegative integer combination of positive roots."""
        roots = self.pos_roots

        def count(idx, rest):
            if all(c == 0 for c in rest):
                return 1
            if idx == len(roots):
                return 0
            beta = roots[idx]
            total = 0
            m = 0
            cur = rest
            while all(c >= 0 for c in cur):
                total += count(idx + 1, cur)
                cur = tuple(a - b for a, b in zip(cur, beta))
                m += 1
            return total

        return count(0, tuple(gamma))

    # -- Lambda_0: coset representatives of Lambda / 2Q --------------------

    def lambda0(self):
        """The lexicographically smallest nonnegative representatives of the
        cosets of 2Q in Lambda, in fundamental coordinates."""
        if self._lambda0 is not None:
            return self._lambda0
        target = self.fund_order * (2 ** self.rank)
        reps = []
        seen_keys = set()
        bound = 0
        while len(reps) < target:
            bound += 1
            for coords in sorted(product(range(bound), repeat=self.rank)):
                key = self._coset_2q_key(Weight(coords))
                if key not in seen_keys:
                    seen_keys.add(key)
                    reps.append(Weight(coords))
                    if len(reps) == target:
                        break
        self._lambda0 = sorted(reps, key=lambda w: w.coords)
        return self._lambda0

    def _coset_2q_key(self, lam):
        """A canonical key for the coset lam + 2Q: the fractional parts of the
        simple-root coordinates divided by 2."""
        coords = [sum(self._cartan_inv[j][k] * lam.coords[k]
                      for k in range(self.rank)) for j in range(self.rank)]
        return tuple((c / 2) % 1 for c in coords)

    def coset_2q_equal(self, lam, mu):
        return self._coset_2q_key(lam) == self._coset_2q_key(mu)


def _det(m):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def positive_roots_from_w0(datum):
    """The list beta_1, ..., beta_N for the datum's fixed reduced word."""
    return list(datum.pos_roots)
