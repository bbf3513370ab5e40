"""Exact scalar arithmetic in the quantum parameter.

Everything here runs on arbitrary-precision integers: Laurent polynomials
in nu, reduced rational functions in nu, and integer polynomials in q,
where q plays the role of nu^2.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class LaurentPoly:
    """Immutable Laurent polynomial in nu with integer coefficients.

    Stored sparsely as exponent -> coefficient; zero coefficients are
    never kept.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if hasattr(coeffs, "items") else coeffs
            for e, v in items:
                v = int(v)
                if v:
                    e = int(e)
                    c[e] = c.get(e, 0) + v
                    if not c[e]:
                        del c[e]
        self._c = c
        self._hash = None

    @staticmethod
    def zero():
        return LaurentPoly()

    @staticmethod
    def one():
        return LaurentPoly({0: 1})

    @staticmethod
    def const(n):
        return LaurentPoly({0: int(n)})

    @staticmethod
    def nu(exp=1, coeff=1):
        return LaurentPoly({exp: coeff})

    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp):
        return self._c.get(exp, 0)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def low(self):
        if not self._c:
            raise ValueError("zero polynomial has no lowest exponent")
        return min(self._c)

    def high(self):
        if not self._c:
            raise ValueError("zero polynomial has no highest exponent")
        return max(self._c)

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        out = LaurentPoly()
        out._c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly()
        out._c = {e: -v for e, v in self._c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly()
            out = LaurentPoly()
            out._c = {e: v * other for e, v in self._c.items()}
            return out
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        out = LaurentPoly()
        out._c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by nu^k."""
        out = LaurentPoly()
        out._c = {e + k: v for e, v in self._c.items()}
        return out

    def bar(self):
        """The involution nu -> nu^{-1}: negate every exponent."""
        out = LaurentPoly()
        out._c = {-e: v for e, v in self._c.items()}
        return out

    def evaluate(self, x):
        """Value at nu = x, exact over Fraction."""
        x = Fraction(x)
        total = Fraction(0)
        for e, v in self._c.items():
            total += v * x ** e
        return total

    def eval_sqrt(self, qval):
        """Split the value at nu = sqrt(qval) into (even, odd) parts.

        Returns Fractions (a, b) with the value equal to a + b*sqrt(qval).
        """
        a = Fraction(0)
        b = Fraction(0)
        for e, v in self._c.items():
            if e % 2 == 0:
                a += v * Fraction(qval) ** (e // 2)
            else:
                b += v * Fraction(qval) ** ((e - 1) // 2)
        return a, b

    def serialize(self):
        if not self._c:
            return "0;0"
        lo = self.low()
        hi = self.high()
        coeffs = [str(self._c.get(e, 0)) for e in range(lo, hi + 1)]
        return f"{lo};{','.join(coeffs)}"

    @staticmethod
    def parse(text):
        head, _, tail = text.strip().partition(";")
        lo = int(head)
        coeffs = [int(t) for t in tail.split(",")]
        return LaurentPoly({lo + i: c for i, c in enumerate(coeffs)})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                term = str(abs(v))
            else:
                base = "nu" if e == 1 else f"nu^{e}"
                term = base if abs(v) == 1 else f"{abs(v)}*{base}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if v > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient tuples, ascending, no trailing zeros)


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pneg(a):
    return tuple(-x for x in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pcontent(a):
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g


def _pprimitive(a):
    g = _pcontent(a)
    if g in (0, 1):
        return tuple(a)
    return tuple(x // g for x in a)


def _pdivmod_frac(a, b):
    """Polynomial division over the rationals; returns (quotient, remainder)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    lb = Fraction(b[-1])
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db or not r:
            break
        shift = len(r) - 1 - db
        c = r[-1] / lb
        q[shift] = c
        for i in range(len(b)):
            r[shift + i] -= c * b[i]
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _pgcd(a, b):
    """Gcd of integer polynomials, computed over the rationals with the
    integer content pulled out; result is primitive with positive lead."""
    a = _ptrim(a)
    b = _ptrim(b)
    while b:
        _, r = _pdivmod_frac(a, b)
        # clear denominators to keep exact integer coefficients
        if r:
            denom = 1
            for x in r:
                denom = denom * x.denominator // gcd(denom, x.denominator)
            rint = _pprimitive([int(x * denom) for x in r])
        else:
            rint = ()
        a, b = b, rint
    a = _pprimitive(a)
    if a and a[-1] < 0:
        a = _pneg(a)
    return a if a else ()


def _pdiv_exact_int(a, b):
    """Exact division of integer polynomials; fails loudly on a remainder."""
    q, r = _pdivmod_frac(a, b)
    if r:
        raise ArithmeticError("internal consistency: polynomial division left a remainder")
    out = []
    for x in q:
        if x.denominator != 1:
            raise ArithmeticError("internal consistency: non-integer quotient coefficient")
        out.append(int(x))
    return _ptrim(out)


class RatFunc:
    """Reduced rational function in nu over the integers.

    Canonical form: numerator and denominator are integer polynomials in nu
    with no common polynomial factor, the pair of contents is reduced, and
    the denominator has positive leading coefficient.  Equal values have
    identical representations.
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, LaurentPoly):
            shift = 0 if num.is_zero() else min(0, num.low())
            npoly = [0] * ((num.high() if num else 0) - shift + 1)
            for e, v in num._c.items():
                npoly[e - shift] = v
            num = _ptrim(npoly)
            dpoly = [0] * (-shift + 1)
            dpoly[-shift] = 1
            base_den = tuple(dpoly)
        else:
            num = _ptrim(tuple(int(x) for x in num))
            base_den = (1,)
        if den is None:
            den = base_den
        elif isinstance(den, LaurentPoly):
            other = RatFunc(den)
            num2, den2 = _pmul(num, other._den), _pmul(base_den, other._num)
            num, den = num2, den2
        else:
            den = _ptrim(tuple(int(x) for x in den))
            den = _pmul(den, base_den) if base_den != (1,) else den
        self._num, self._den = _rf_reduce(num, den)
        self._hash = None

    @staticmethod
    def zero():
        return RatFunc(())

    @staticmethod
    def one():
        return RatFunc((1,))

    @staticmethod
    def const(n):
        return RatFunc((int(n),))

    @staticmethod
    def from_laurent(L):
        return RatFunc(L)

    def num_coeffs(self):
        return self._num

    def den_coeffs(self):
        return self._den

    def is_zero(self):
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_one(self):
        return self._num == (1,) and self._den == (1,)

    def __add__(self, other):
        other = _rf_coerce(other)
        if other is NotImplemented:
            return other
        num = _padd(_pmul(self._num, other._den), _pmul(other._num, self._den))
        return _rf_raw(num, _pmul(self._den, other._den))

    __radd__ = __add__

    def __neg__(self):
        return _rf_raw(_pneg(self._num), self._den)

    def __sub__(self, other):
        other = _rf_coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _rf_coerce(other)
        if other is NotImplemented:
            return other
        return _rf_raw(_pmul(self._num, other._num), _pmul(self._den, other._den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _rf_coerce(other)
        if other is NotImplemented:
            return other
        if not other._num:
            raise ZeroDivisionError("division by the zero rational function")
        return _rf_raw(_pmul(self._num, other._den), _pmul(self._den, other._num))

    def __rtruediv__(self, other):
        other = _rf_coerce(other)
        return other / self

    def __pow__(self, n):
        if n < 0:
            return RatFunc.one() / self ** (-n)
        out = RatFunc.one()
        for _ in range(n):
            out = out * self
        return out

    def bar(self):
        """nu -> nu^{-1}."""
        dn = len(self._num) - 1 if self._num else 0
        dd = len(self._den) - 1
        num = tuple(reversed(self._num)) if self._num else ()
        den = tuple(reversed(self._den))
        # rebalance with a power of nu: f(1/nu) = nu^{dd-dn} * rev(num)/rev(den)
        k = dd - dn
        if k >= 0:
            num = _pmul(num, (0,) * k + (1,))
        else:
            den = _pmul(den, (0,) * (-k) + (1,))
        return _rf_raw(num, den)

    def as_laurent(self):
        """Exact conversion back to a Laurent polynomial; error when the
        denominator is not a power of nu (up to sign)."""
        den = self._den
        k = 0
        while len(den) > 1 and den[0] == 0:
            den = den[1:]
            k += 1
        if len(den) != 1:
            # denominator has a nontrivial polynomial part; try exact division
            q = _pdiv_exact_int(self._num, self._den)
            return LaurentPoly({i: c for i, c in enumerate(q)})
        unit = den[0]
        out = {}
        for i, c in enumerate(self._num):
            if c % unit:
                raise ArithmeticError("not a Laurent polynomial")
            out[i - k] = c // unit
        return LaurentPoly(out)

    def evaluate(self, x):
        x = Fraction(x)
        num = Fraction(0)
        for c in reversed(self._num):
            num = num * x + c
        den = Fraction(0)
        for c in reversed(self._den):
            den = den * x + c
        if den == 0:
            raise ZeroDivisionError(f"pole at nu = {x}")
        return num / den

    def eval_sqrt(self, qval):
        """Exact value at nu = sqrt(qval) as a pair (a, b) with value
        a + b*sqrt(qval); qval must not be a perfect square of a rational
        root of the denominator."""
        num = LaurentPoly({i: c for i, c in enumerate(self._num)})
        den = LaurentPoly({i: c for i, c in enumerate(self._den)})
        a1, b1 = num.eval_sqrt(qval)
        a2, b2 = den.eval_sqrt(qval)
        norm = a2 * a2 - b2 * b2 * qval
        if norm == 0:
            raise ZeroDivisionError(f"pole at nu = sqrt({qval})")
        a = (a1 * a2 - b1 * b2 * qval) / norm
        b = (b1 * a2 - a1 * b2) / norm
        return a, b

    def nu_infinity_limit(self):
        """Limit as nu -> infinity; error if unbounded."""
        if not self._num:
            return Fraction(0)
        dn = len(self._num) - 1
        dd = len(self._den) - 1
        if dn > dd:
            raise ArithmeticError("unbounded as nu -> infinity")
        if dn < dd:
            return Fraction(0)
        return Fraction(self._num[-1], self._den[-1])

    def series_in_inverse(self, order):
        """Coefficients [c_0, ..., c_order] of the expansion in u = nu^{-1}.

        Errors when the function has a pole at nu = infinity.
        """
        if not self._num:
            return [Fraction(0)] * (order + 1)
        dn = len(self._num) - 1
        dd = len(self._den) - 1
        lead = dd - dn  # valuation in u
        if lead < 0:
            raise ArithmeticError("pole at nu = infinity")
        nrev = list(reversed(self._num))
        drev = list(reversed(self._den))
        # power-series division nrev/drev in u, then shift by u^lead
        out = [Fraction(0)] * (order + 1)
        series = []
        inv0 = Fraction(1, drev[0])
        for k in range(order + 1 - lead):
            acc = Fraction(nrev[k]) if k < len(nrev) else Fraction(0)
            for j in range(1, k + 1):
                if j < len(drev):
                    acc -= drev[j] * series[k - j]
            series.append(acc * inv0)
        for k, c in enumerate(series):
            out[k + lead] = c
        return out

    def __eq__(self, other):
        other = _rf_coerce(other)
        if other is NotImplemented:
            return other
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __str__(self):
        num = LaurentPoly({i: c for i, c in enumerate(self._num)})
        if self._den == (1,):
            return str(num)
        den = LaurentPoly({i: c for i, c in enumerate(self._den)})
        return f"({num})/({den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _rf_coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        return RatFunc((x,))
    if isinstance(x, LaurentPoly):
        return RatFunc(x)
    return NotImplemented


def _rf_raw(num, den):
    out = RatFunc.__new__(RatFunc)
    out._num, out._den = _rf_reduce(num, den)
    out._hash = None
    return out


def _rf_reduce(num, den):
    num = _ptrim(num)
    den = _ptrim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return (), (1,)
    g = _pgcd(num, den)
    if len(g) > 1:
        num = _pdiv_exact_int_scaled(num, g)
        den = _pdiv_exact_int_scaled(den, g)
    cn, cd = _pcontent(num), _pcontent(den)
    c = gcd(cn, cd)
    if c > 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    if den[-1] < 0:
        num = _pneg(num)
        den = _pneg(den)
    return num, den


def _pdiv_exact_int_scaled(a, g):
    """Divide integer poly a by primitive g; exact up to a rational scale,
    returns the integer quotient after clearing that scale."""
    q, r = _pdivmod_frac(a, g)
    if r:
        raise ArithmeticError("internal consistency: gcd does not divide")
    denom = 1
    for x in q:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return _ptrim([int(x * denom) for x in q]) if denom == 1 else _ptrim([int(x * denom) for x in q])


class IntPolynomial:
    """Polynomial in q with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        self._c = _ptrim(tuple(int(x) for x in coeffs))

    @staticmethod
    def const(n):
        return IntPolynomial((n,))

    def coeffs(self):
        return self._c

    def degree(self):
        return len(self._c) - 1 if self._c else -1

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def evaluate(self, x):
        total = 0 if isinstance(x, int) else Fraction(0)
        for c in reversed(self._c):
            total = total * x + c
        return total

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial((other,))
        return IntPolynomial(_padd(self._c, other._c))

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPolynomial((other,))
        return IntPolynomial(_padd(self._c, _pneg(other._c)))

    def __mul__(self, other):
        if isinstance(other, int):
            other = IntPolynomial((other,))
        return IntPolynomial(_pmul(self._c, other._c))

    __rmul__ = __mul__

    def at_nu_squared(self):
        """Substitute q = nu^2, giving a Laurent polynomial."""
        return LaurentPoly({2 * i: c for i, c in enumerate(self._c)})

    def serialize(self):
        if not self._c:
            return "0;0"
        return "0;" + ",".join(str(c) for c in self._c)

    @staticmethod
    def parse(text):
        head, _, tail = text.strip().partition(";")
        lo = int(head)
        if lo != 0:
            raise ValueError("integer polynomial serialization must start at exponent 0")
        return IntPolynomial(int(t) for t in tail.split(","))

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial((other,))
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(("IntPolynomial", self._c))

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in range(len(self._c) - 1, -1, -1):
            v = self._c[e]
            if not v:
                continue
            if e == 0:
                term = str(abs(v))
            else:
                base = "q" if e == 1 else f"q^{e}"
                term = base if abs(v) == 1 else f"{abs(v)}*{base}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if v > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"IntPolynomial({self})"


# ---------------------------------------------------------------------------
# the named scalar operations


def bar(x):
    """Ring involution nu -> nu^{-1} on Laurent polynomials and rational functions."""
    return x.bar()


def quantum_integer(n):
    """[n] = nu^{n-1} + nu^{n-3} + ... + nu^{1-n}."""
    if n < 0:
        raise ValueError("quantum integer of a negative argument")
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


def quantum_factorial(n):
    """[n]! = [1][2]...[n]."""
    if n < 0:
        raise ValueError("quantum factorial of a negative argument")
    out = LaurentPoly.one()
    for k in range(2, n + 1):
        out = out * quantum_integer(k)
    return out


def laurent_exact_div(a, b):
    """Exact division in the Laurent ring; error when the division leaves a
    remainder or a non-integer coefficient."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return LaurentPoly.zero()
    sa, sb = a.low(), b.low()
    pa = [0] * (a.high() - sa + 1)
    for e, v in a._c.items():
        pa[e - sa] = v
    pb = [0] * (b.high() - sb + 1)
    for e, v in b._c.items():
        pb[e - sb] = v
    q, r = _pdivmod_frac(tuple(pa), tuple(pb))
    if r:
        raise ArithmeticError("internal consistency: inexact Laurent division")
    out = {}
    for i, x in enumerate(q):
        if x.denominator != 1:
            raise ArithmeticError("internal consistency: non-integer Laurent quotient")
        if x:
            out[i + sa - sb] = int(x)
    return LaurentPoly(out)


def quantum_binomial(n, k):
    """Symmetric quantum binomial coefficient, an honest Laurent polynomial."""
    if not 0 <= k <= n:
        raise ValueError("quantum binomial needs 0 <= k <= n")
    return laurent_exact_div(quantum_factorial(n),
                             quantum_factorial(k) * quantum_factorial(n - k))


def gaussian_binomial_eval(n, k, q):
    """Number of k-dimensional subspaces of an n-dimensional space over F_q."""
    if k < 0 or k > n:
        return 0
    total = Fraction(1)
    for i in range(k):
        total *= Fraction(q ** (n - i) - 1, q ** (i + 1) - 1)
    if total.denominator != 1:
        raise ArithmeticError("internal consistency: Gaussian binomial not an integer")
    return int(total)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def first_primes(count, minimum=2):
    """The first `count` primes that are >= minimum."""
    out = []
    p = max(2, minimum)
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return out


def interpolate(samples, bound):
    """Recover the integer polynomial in q of degree <= bound from its values
    at distinct primes.

    `samples` is a sequence of (prime, value) pairs; at least bound+1 are
    required, and any extra samples are used as consistency checks.
    """
    samples = list(samples)
    if len(samples) < bound + 1:
        raise ValueError("interpolation failure: not enough samples")
    points = [p for p, _ in samples]
    if len(set(points)) != len(points):
        raise ValueError("interpolation failure: repeated sample points")
    for p in points:
        if not _is_prime(p):
            raise ValueError(f"interpolation failure: sample point {p} is not prime")
    base = samples[: bound + 1]
    coeffs = [Fraction(0)] * (bound + 1)
    for i, (xi, yi) in enumerate(base):
        # Lagrange basis polynomial for xi, accumulated exactly
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(base):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for t in range(len(basis)):
            coeffs[t] += scale * basis[t]
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ValueError("interpolation failure: non-integer coefficient")
        out.append(int(c))
    poly = IntPolynomial(out)
    for p, y in samples[bound + 1:]:
        if poly.evaluate(p) != y:
            raise ValueError("interpolation failure: held-out sample mismatch")
    return poly


def linear_solve(rows, rhs):
    """Solve A x = b exactly over rational functions in nu.

    `rows` is a list of matrix rows (lists of RatFunc) and `rhs` the
    right-hand side.  Returns one solution with free variables set to
    zero, or None if the system is inconsistent.  Pivots are chosen in
    column order, so the result is deterministic.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if aug[i][c]:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = RatFunc.one() / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    x = [RatFunc.zero()] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def linear_nullspace(rows):
    """Basis of the kernel of A over rational functions in nu.

    `rows` is a list of matrix rows (lists of RatFunc).  Returns one
    kernel vector per free column, each with a single free variable set
    to one.  Pivots are chosen in column order, so the basis is
    deterministic.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [list(row) for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if work[i][c]:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = RatFunc.one() / work[r][c]
        work[r] = [v * inv for v in work[r]]
        for i in range(m):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    basis = []
    pivot_set = set(pivots)
    for c in range(n):
        if c in pivot_set:
            continue
        vec = [RatFunc.zero()] * n
        vec[c] = RatFunc.one()
        for i, pc in enumerate(pivots):
            vec[pc] = -work[i][c]
        basis.append(vec)
    return basis
