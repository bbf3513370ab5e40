"""The one-loop quiver: partitions, invariant-subspace counting, and
Kostka polynomials out of the bar-involution algorithm.

Nilpotent classes at total dimension n are partitions of n.  Counting
invariant subspaces of a fixed Jordan representative gives structure
constants that interpolate to integer polynomials in the field size q;
the orbit classes scaled by nu^(2 n(lambda)) then carry the same
triangular bar recursion used for quivers, with products of the
minimal-orbit generators as the bar-fixed monomials.  The transition
coefficients, rewritten in t = nu^(-2), are the Kostka polynomials,
and an independent tableau route computes them symmetrically for
cross-checking.
"""

from functools import lru_cache

from . import modp
from .canonical import triangular_bar_solve
from .scalars import (
    IntPolynomial,
    LaurentPoly,
    first_primes,
    gaussian_binomial_eval,
    interpolate,
)

DEFAULT_BUDGET = 300000

__all__ = [
    "Partition",
    "SymFuncElement",
    "all_partitions",
    "hall_littlewood_oracle",
    "jordan_hall_count",
    "jordan_product",
    "kostka_foulkes",
    "kostka_table",
    "oracle_kostka",
    "schur_oracle",
]


class Partition:
    """Weakly decreasing positive parts, hashable and totally ordered
    by (size, reverse dominance position, parts)."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError("partition parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("partition parts must be weakly decreasing")
        self.parts = parts

    def size(self):
        return sum(self.parts)

    def length(self):
        return len(self.parts)

    def transpose(self):
        if not self.parts:
            return Partition()
        return Partition(
            tuple(
                sum(1 for x in self.parts if x > j) for j in range(self.parts[0])
            )
        )

    def n_value(self):
        """Sum of (i-1) * parts[i-1]; strictly decreasing along dominance."""
        return sum(i * x for i, x in enumerate(self.parts))

    def dominates(self, other):
        """Partial-sum comparison; both partitions must have equal size."""
        if self.size() != other.size():
            raise ValueError("dominance compares partitions of equal size")
        a = b = 0
        for i in range(max(len(self.parts), len(other.parts))):
            a += self.parts[i] if i < len(self.parts) else 0
            b += other.parts[i] if i < len(other.parts) else 0
            if a < b:
                return False
        return True

    def add(self, other):
        n = max(len(self.parts), len(other.parts))
        return Partition(
            tuple(
                (self.parts[i] if i < len(self.parts) else 0)
                + (other.parts[i] if i < len(other.parts) else 0)
                for i in range(n)
            )
        )

    def multiplicity(self, j):
        return sum(1 for x in self.parts if x == j)

    def serialize(self):
        return ".".join(str(x) for x in self.parts) if self.parts else "0"

    @staticmethod
    def parse(text):
        text = text.strip()
        if text in ("", "0"):
            return Partition()
        return Partition(tuple(int(x) for x in text.split(".")))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(("Partition", self.parts))

    def __lt__(self, other):
        return self._key() < other._key()

    def _key(self):
        return (self.size(), -self.n_value(), self.parts)

    def __repr__(self):
        return "Partition(%r)" % (self.parts,)


@lru_cache(maxsize=None)
def all_partitions(n):
    """Partitions of n, most degenerate first (ascending dominance
    refined by the n-statistic, ties broken by parts)."""
    if n < 0:
        raise ValueError("negative size")

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    out = [Partition(p) for p in rec(n, n)]
    out.sort(key=Partition._key)
    return tuple(out)


# ---------------------------------------------------------------------------
# Counting invariant subspaces over a finite field


def _jordan_matrix(lam):
    """Nilpotent 0/1 block matrix of the given type; each block kills
    its last basis vector."""
    n = lam.size()
    m = [[0] * n for _ in range(n)]
    pos = 0
    for part in lam.parts:
        for j in range(part - 1):
            m[pos + j + 1][pos + j] = 1
        pos += part
    return m


def _kernel_positions(lam):
    out = []
    pos = 0
    for part in lam.parts:
        out.append(pos + part - 1)
        pos += part
    return out


def _type_from_corank_steps(coranks):
    """Partition whose transpose counts the kernel growth of powers."""
    cols = []
    for j in range(1, len(coranks)):
        step = coranks[j] - coranks[j - 1]
        if step == 0:
            break
        cols.append(step)
    if not cols:
        return Partition()
    return Partition(cols).transpose()


def _quotient_type(x_powers, w_rows, n, k, p):
    """Jordan type induced on the quotient by the invariant subspace
    with the given k row basis."""
    coranks = [0]
    prev = None
    for xj in x_powers[1:]:
        stacked = [list(row) for row in w_rows]
        stacked.extend(modp.transpose(xj))
        r = modp.rank(stacked, p) - k
        coranks.append((n - k) - r)
        if prev == coranks[-1]:
            break
        prev = coranks[-1]
    while coranks[-1] < n - k and len(coranks) <= n:
        coranks.append(coranks[-1])
    return _type_from_corank_steps(coranks + [n - k])


def _sub_type(x, w_rows, k, p):
    """Jordan type of the restriction to the invariant subspace."""
    if k == 0:
        return Partition()
    rows = [list(r) for r in w_rows]
    y = []
    for w in rows:
        img = modp.mat_vec(x, w, p)
        coords = modp.coordinates_in(rows, img, p)
        if coords is None:
            raise ArithmeticError("subspace is not invariant")
        y.append(list(coords))
    y = modp.transpose(y)
    coranks = [0]
    power = modp.identity(k)
    for _ in range(k):
        power = modp.mat_mul(power, y, p)
        coranks.append(k - modp.rank(power, p))
        if coranks[-1] == k:
            break
    while coranks[-1] < k:
        coranks.append(coranks[-1])
    return _type_from_corank_steps(coranks + [k])


def _x_powers(x, n, p):
    out = [modp.identity(n)]
    for _ in range(n):
        out.append(modp.mat_mul(out[-1], x, p))
    return out


def _kernel_histogram_at(M, k, p):
    """Quotient-type counts over the k-dimensional subspaces of the
    kernel of a representative of M."""
    n = M.size()
    m = M.length()
    if k > m:
        return {}
    if m == n:
        return {all_partitions(n - k)[0]: gaussian_binomial_eval(n, k, p)}
    x = _jordan_matrix(M)
    powers = _x_powers(x, n, p)
    positions = _kernel_positions(M)
    hist = {}
    for rows in modp.iter_subspaces(m, k, p):
        w_rows = []
        for r in rows:
            full = [0] * n
            for c, v in zip(positions, r):
                full[c] = v
            w_rows.append(full)
        quot = _quotient_type(powers, w_rows, n, k, p)
        hist[quot] = hist.get(quot, 0) + 1
    return hist


_KERNEL_POLYS = {}


def _kernel_histogram(M, k):
    """Interpolated quotient-type histogram for column subobjects."""
    key = (M.parts, k)
    if key not in _KERNEL_POLYS:
        n = M.size()
        bound = (n - k) * k
        primes = first_primes(bound + 1)
        per_prime = [_kernel_histogram_at(M, k, p) for p in primes]
        names = set()
        for h in per_prime:
            names.update(h)
        table = {}
        for N in names:
            samples = [(p, h.get(N, 0)) for p, h in zip(primes, per_prime)]
            poly = interpolate(samples, bound)
            if poly:
                table[N] = poly
        _KERNEL_POLYS[key] = table
    return _KERNEL_POLYS[key]


def _general_count_at(M, N, P, p, budget):
    n = M.size()
    k = P.size()
    if gaussian_binomial_eval(n, k, p) > budget:
        raise RuntimeError("enumeration budget exceeded")
    x = _jordan_matrix(M)
    powers = _x_powers(x, n, p)
    total = 0
    for rows in modp.iter_subspaces(n, k, p):
        base = [list(r) for r in rows]
        span, piv = modp.row_span(base, p)
        stable = True
        for w in base:
            img = modp.mat_vec(x, w, p)
            if not modp.in_span(span, piv, img, p):
                stable = False
                break
        if not stable:
            continue
        if _sub_type(x, base, k, p) != P:
            continue
        if _quotient_type(powers, base, n, k, p) == N:
            total += 1
    return total


def jordan_hall_count(M, N, P, p, budget=DEFAULT_BUDGET):
    """Invariant subspaces of a nilpotent operator of type M that have
    type P with quotient type N, over the p-element field.

    Column subobjects P = (1^k) reduce to subspaces of the kernel; all
    other shapes run a filtered enumeration guarded by the budget.
    """
    if N.size() + P.size() != M.size():
        raise ValueError("dimension mismatch: |N| + |P| must equal |M|")
    if P.parts and P.parts[0] == 1 or not P.parts:
        k = P.size()
        if k == 0:
            return 1 if N == M else 0
        return _kernel_histogram_at(M, k, p).get(N, 0)
    return _general_count_at(M, N, P, p, budget)


_GENERAL_POLYS = {}


def _hall_poly(M, N, P, budget=DEFAULT_BUDGET):
    """The counting polynomial in q, interpolated from small primes."""
    key = (M.parts, N.parts, P.parts)
    if key not in _GENERAL_POLYS:
        if P.parts and P.parts[0] == 1 or not P.parts:
            poly = _kernel_histogram(M, P.size()).get(N, IntPolynomial())
            if P.size() == 0:
                poly = IntPolynomial((1,)) if N == M else IntPolynomial()
        else:
            bound = N.size() * P.size()
            primes = first_primes(bound + 1)
            samples = [(p, _general_count_at(M, N, P, p, budget)) for p in primes]
            poly = interpolate(samples, bound)
        _GENERAL_POLYS[key] = poly
    return _GENERAL_POLYS[key]


# ---------------------------------------------------------------------------
# The scaled orbit basis and the bar-invariant transition matrix

# The orbit class at lambda is scaled by nu^(2 n(lambda)); in that basis
# the transition entries land in Z[nu^(-2)] and the substitution
# t = nu^(-2) below is exact.  The n=2 case pins the power down: the
# recursion forces the off-diagonal entry nu^(-2), and the tableau
# route gives the same pair as coefficient t.


def _monomial_in_orbit_coords(lam):
    """Column-product monomial for lam in unscaled orbit coordinates:
    map partition -> polynomial in q."""
    vec = {Partition(): IntPolynomial((1,))}
    for c in lam.transpose().parts:
        nxt = {}
        for X, f in vec.items():
            for M in all_partitions(X.size() + c):
                g = _kernel_histogram(M, c).get(X)
                if g is not None:
                    nxt[M] = nxt.get(M, IntPolynomial()) + f * g
        vec = {M: f for M, f in nxt.items() if f}
    return vec


@lru_cache(maxsize=None)
def _kostka_block(n):
    """All transition coefficients at size n: map (lam, mu) -> the
    polynomial in t, with the triangularity hard-checked."""
    order = all_partitions(n)
    index = {lam: i for i, lam in enumerate(order)}
    dim = len(order)
    A = [[LaurentPoly.zero()] * dim for _ in range(dim)]
    for j, lam in enumerate(order):
        for M, f in _monomial_in_orbit_coords(lam).items():
            shift = 2 * lam.n_value() - 2 * M.n_value()
            A[index[M]][j] = f.at_nu_squared().shift(shift)
    Z = triangular_bar_solve(A)
    table = {}
    for j, lam in enumerate(order):
        for i, mu in enumerate(order):
            entry = Z[i][j]
            if not entry:
                continue
            coeffs = {}
            for e, c in entry.items():
                if e > 0 or e % 2:
                    raise RuntimeError(
                        "transition entry is not a polynomial in the inverse square"
                    )
                coeffs[-e // 2] = c
            top = max(coeffs)
            table[(lam, mu)] = IntPolynomial(
                tuple(coeffs.get(d, 0) for d in range(top + 1))
            )
    return table


def kostka_foulkes(L, Mu):
    """Transition coefficient of the bar-invariant element at L on the
    scaled orbit class at Mu, as a polynomial in t."""
    if L.size() != Mu.size():
        raise ValueError("partitions must have equal size")
    return _kostka_block(L.size()).get((L, Mu), IntPolynomial())


def kostka_table(n):
    """Tab-separated lines `lambda TAB mu TAB polynomial` for size n."""
    lines = []
    for lam in all_partitions(n):
        for mu in all_partitions(n):
            poly = kostka_foulkes(lam, mu)
            if poly:
                lines.append(
                    "%s\t%s\t%s" % (lam.serialize(), mu.serialize(), poly.serialize())
                )
    return lines


def jordan_product(lam, mu, budget=DEFAULT_BUDGET):
    """Product of two scaled orbit classes: map partition -> Laurent
    coefficient."""
    out = {}
    for M in all_partitions(lam.size() + mu.size()):
        g = _hall_poly(M, lam, mu, budget)
        if g:
            shift = 2 * lam.n_value() + 2 * mu.n_value() - 2 * M.n_value()
            out[M] = g.at_nu_squared().shift(shift)
    return out


# ---------------------------------------------------------------------------
# Independent symmetric-function route


class SymFuncElement:
    """Homogeneous symmetric function in a named basis with polynomial
    coefficients in t."""

    BASES = ("monomial", "hall-littlewood", "schur", "elementary")

    def __init__(self, basis, degree, coeffs):
        if basis not in self.BASES:
            raise ValueError("unknown basis %r" % (basis,))
        self.basis = basis
        self.degree = int(degree)
        clean = {}
        for part, poly in coeffs.items():
            if part.size() != self.degree:
                raise ValueError("inhomogeneous coefficient support")
            if not isinstance(poly, IntPolynomial):
                poly = IntPolynomial((int(poly),))
            if poly:
                clean[part] = poly
        self.coeffs = clean

    def coefficient(self, part):
        return self.coeffs.get(part, IntPolynomial())

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0]._key())

    def at_t_zero(self):
        return SymFuncElement(
            self.basis,
            self.degree,
            {
                part: IntPolynomial((poly.coeffs()[0],))
                for part, poly in self.coeffs.items()
            },
        )

    def __eq__(self, other):
        if not isinstance(other, SymFuncElement):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        body = ", ".join(
            "%s: %s" % (part.serialize(), poly) for part, poly in self.items()
        )
        return "SymFuncElement(%s, %d, {%s})" % (self.basis, self.degree, body)


def _horizontal_extensions(mu, total):
    """Partitions lam of the given size with lam/mu a horizontal strip."""
    out = []
    for lam in all_partitions(total):
        lp, mp = lam.parts, mu.parts
        if len(lp) < len(mp):
            continue
        ok = True
        for i in range(len(lp)):
            cur = lp[i]
            below = mp[i] if i < len(mp) else 0
            nxt = lp[i + 1] if i + 1 < len(lp) else 0
            if not (cur >= below >= nxt):
                ok = False
                break
        if ok:
            out.append(lam)
    return out


def _psi_factor(lam, mu):
    """One-variable weight of the strip lam/mu in the orbit-parameter
    normalization."""
    poly = IntPolynomial((1,))
    top = lam.parts[0] if lam.parts else 0
    for j in range(1, top + 1):
        if mu.multiplicity(j) == lam.multiplicity(j) + 1:
            m = mu.multiplicity(j)
            poly = poly * IntPolynomial(tuple([1] + [0] * (m - 1) + [-1]))
    return poly


def hall_littlewood_oracle(Mu, n_vars):
    """Monomial expansion of the parameter-deformed orbit function at
    Mu, summed over weighted chains of horizontal strips.

    Only weakly decreasing step-size sequences are collected: the
    coefficient on each monomial-basis element is read off its
    dominant-exponent representative."""
    if n_vars < Mu.length():
        raise ValueError("not enough variables for this partition")
    coeffs = {}

    def walk(step, shape, content, weight):
        if shape == Mu:
            key = Partition(tuple(c for c in content if c))
            coeffs[key] = coeffs.get(key, IntPolynomial()) + weight
            return
        if step == n_vars:
            return
        cap = content[-1] if content else Mu.size()
        need = Mu.size() - shape.size()
        left = n_vars - step
        for add in range(min(cap, need), -1, -1):
            if add * left < need:
                break
            for lam in _horizontal_extensions(shape, shape.size() + add):
                walk(step + 1, lam, content + (add,), weight * _psi_factor(lam, shape))

    walk(0, Partition(), (), IntPolynomial((1,)))
    return SymFuncElement("monomial", Mu.size(), coeffs)


def schur_oracle(L, n_vars):
    """Monomial expansion of the Schur function by direct tableau
    count."""
    if n_vars < L.size():
        raise ValueError("not enough variables for this partition")
    counts = {}

    def fill(row, prev_row_entries, acc):
        if row == len(L.parts):
            content = [0] * n_vars
            for e in acc:
                content[e - 1] += 1
            if all(a >= b for a, b in zip(content, content[1:])):
                key = Partition(tuple(c for c in content if c))
                counts[key] = counts.get(key, 0) + 1
            return
        width = L.parts[row]

        def cells(col, row_entries):
            if col == width:
                fill(row + 1, row_entries, acc + row_entries)
                return
            lo = row_entries[col - 1] if col else 1
            if row > 0:
                lo = max(lo, prev_row_entries[col] + 1)
            for v in range(lo, n_vars + 1):
                cells(col + 1, row_entries + [v])

        cells(0, [])

    fill(0, [], [])
    return SymFuncElement(
        "monomial",
        L.size(),
        {part: IntPolynomial((c,)) for part, c in counts.items()},
    )


def oracle_kostka(L, Mu):
    """Transition coefficient recovered on the symmetric-function side
    by back-substitution against the deformed orbit functions."""
    if L.size() != Mu.size():
        raise ValueError("partitions must have equal size")
    n = L.size()
    if n == 0:
        return IntPolynomial((1,))
    n_vars = n
    order = list(reversed(all_partitions(n)))
    hl = {mu: hall_littlewood_oracle(mu, n_vars) for mu in order}
    target = dict(schur_oracle(L, n_vars).coeffs)
    found = {}
    for mu in order:
        c = target.get(mu, IntPolynomial())
        if c:
            found[mu] = c
            for part, poly in hl[mu].coeffs.items():
                cur = target.get(part, IntPolynomial()) - c * poly
                if cur:
                    target[part] = cur
                else:
                    target.pop(part, None)
    if target:
        raise ArithmeticError("orbit functions failed to resolve the expansion")
    return found.get(Mu, IntPolynomial())
