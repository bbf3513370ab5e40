"""Independent reference computations used only by the tests.

Weight multiplicities come from the Freudenthal recursion and tensor
decompositions from character arithmetic, all in exact rational
arithmetic straight off the Cartan matrix.  Nothing here touches the
package under test.

Weights are tuples in pairing coordinates: <h_i, wt> = wt[i].
"""

from fractions import Fraction


def _inverse(mat):
    n = len(mat)
    aug = [
        [Fraction(mat[i][j]) for j in range(n)]
        + [Fraction(1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class RootData:
    """Roots, reflections, and the invariant form for one Cartan matrix."""

    def __init__(self, cartan):
        self.cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        self.n = len(self.cartan)
        self.cinv = _inverse(self.cartan)
        self.positive_roots = self._positive_roots()

    def _pair_root(self, root, i):
        # <beta, alpha_i^vee> for beta in root coordinates
        return sum(self.cartan[i][j] * root[j] for j in range(self.n))

    def _positive_roots(self):
        simples = [
            tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)
        ]
        roots = set(simples)
        frontier = set(simples)
        while frontier:
            fresh = set()
            for beta in frontier:
                for i in range(self.n):
                    refl = list(beta)
                    k = self._pair_root(beta, i)
                    refl[i] -= k
                    refl = tuple(refl)
                    if refl not in roots:
                        roots.add(refl)
                        fresh.add(refl)
            frontier = fresh
        return sorted(r for r in roots if all(c >= 0 for c in r) and any(r))

    def alpha(self, i):
        """Simple root in pairing coordinates."""
        return tuple(self.cartan[j][i] for j in range(self.n))

    def to_pairing(self, root):
        """Root coordinates to pairing coordinates."""
        return tuple(
            sum(self.cartan[i][j] * root[j] for j in range(self.n))
            for i in range(self.n)
        )

    def reflect(self, i, wt):
        return tuple(
            w - wt[i] * a for w, a in zip(wt, self.alpha(i))
        )

    def dominant(self, wt):
        wt = tuple(wt)
        while True:
            neg = next((i for i in range(self.n) if wt[i] < 0), None)
            if neg is None:
                return wt
            wt = self.reflect(neg, wt)

    def inner(self, x, y):
        """Invariant form on pairing coordinates."""
        ycoords = [
            sum(self.cinv[j][i] * y[i] for i in range(self.n))
            for j in range(self.n)
        ]
        return sum(Fraction(x[j]) * ycoords[j] for j in range(self.n))


def freudenthal_character(cartan, lam):
    """Weight multiplicity table of the highest-weight module at lam."""
    rd = RootData(cartan)
    lam = tuple(int(x) for x in lam)
    if len(lam) != rd.n or any(x < 0 for x in lam):
        raise ValueError("highest weight must be dominant integral")
    rho = (1,) * rd.n
    lam_rho = tuple(l + r for l, r in zip(lam, rho))
    top = rd.inner(lam_rho, lam_rho)

    def depth(mu):
        # height of lam - mu in root coordinates; None when mu is not
        # under lam
        diff = tuple(l - m for l, m in zip(lam, mu))
        coords = [
            sum(rd.cinv[j][i] * diff[i] for i in range(rd.n))
            for j in range(rd.n)
        ]
        if any(c.denominator != 1 or c < 0 for c in coords):
            return None
        return int(sum(coords))

    mults = {lam: 1}
    char = {lam: 1}
    level = [lam]
    pos_pairing = [
        (sum(a), rd.to_pairing(a)) for a in rd.positive_roots
    ]
    for _ in range(4096):
        nxt = set()
        for mu in level:
            for i in range(rd.n):
                nxt.add(tuple(m - a for m, a in zip(mu, rd.alpha(i))))
        found = []
        for mu in sorted(nxt):
            dom = rd.dominant(mu)
            if dom not in mults:
                lvl = depth(dom)
                if lvl is None:
                    mults[dom] = 0
                else:
                    total = Fraction(0)
                    for height, pairing in pos_pairing:
                        for k in range(1, lvl // height + 1):
                            nu = tuple(m + k * a for m, a in zip(dom, pairing))
                            m_nu = mults.get(rd.dominant(nu), 0)
                            total += 2 * m_nu * rd.inner(nu, pairing)
                    mu_rho = tuple(m + r for m, r in zip(dom, rho))
                    denom = top - rd.inner(mu_rho, mu_rho)
                    if denom <= 0:
                        raise ArithmeticError("multiplicity recursion broke")
                    val = total / denom
                    if val.denominator != 1 or val < 0:
                        raise ArithmeticError("multiplicity recursion broke")
                    mults[dom] = int(val)
            if mults[dom]:
                char[mu] = mults[dom]
                found.append(mu)
        if not found:
            return char
        level = found
    raise ArithmeticError("weight enumeration did not terminate")


def module_dimension(cartan, lam):
    return sum(freudenthal_character(cartan, lam).values())


def char_product(c1, c2):
    out = {}
    for w1, m1 in c1.items():
        for w2, m2 in c2.items():
            w = tuple(a + b for a, b in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    for w in [w for w, m in out.items() if m == 0]:
        del out[w]
    return out


def _height_key(rd, wt):
    coords = [
        sum(rd.cinv[j][i] * wt[i] for i in range(rd.n)) for j in range(rd.n)
    ]
    return sum(coords)


def tensor_decompose(cartan, char):
    """Highest weights with multiplicity whose characters sum to char."""
    rd = RootData(cartan)
    rest = dict(char)
    out = {}
    for _ in range(len(char) * max(char.values()) + 1 if char else 1):
        if not rest:
            return out
        lam = max(rest, key=lambda w: (_height_key(rd, w), w))
        mult = rest[lam]
        if any(x < 0 for x in lam) or mult < 0:
            raise ArithmeticError("character is not a sum of irreducible characters")
        out[lam] = out.get(lam, 0) + mult
        for w, m in freudenthal_character(cartan, lam).items():
            rest[w] = rest.get(w, 0) - mult * m
            if rest[w] == 0:
                del rest[w]
    raise ArithmeticError("decomposition did not terminate")


def negate_character(char):
    """Character of the dual table: every weight reversed in sign."""
    return {tuple(-x for x in w): m for w, m in char.items()}
