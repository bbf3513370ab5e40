"""Dense exact linear algebra over prime fields.

Matrices are lists of row lists with entries reduced mod p; vectors are
tuples.  Everything here is deterministic and allocation-light because the
subspace enumerators sit in counting inner loops.
"""

from __future__ import annotations

from itertools import combinations, product


def mat(rows):
    return [list(int(x) for x in row) for row in rows]


def zero_matrix(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_mul(A, B, p):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in range(len(A))]
    cols = len(B[0])
    out = []
    for row in A:
        new = [0] * cols
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for j in range(cols):
                    new[j] = (new[j] + a * brow[j]) % p
        out.append(new)
    return out


def mat_vec(A, v, p):
    return tuple(sum(a * x for a, x in zip(row, v)) % p for row in A)


def mat_add(A, B, p):
    return [[(a + b) % p for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B, p):
    return [[(a - b) % p for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_pow(A, e, p):
    n = len(A)
    out = identity(n)
    base = [row[:] for row in A]
    while e:
        if e & 1:
            out = mat_mul(out, base, p)
        base = mat_mul(base, base, p)
        e >>= 1
    return out


def block_diag(blocks):
    rows = sum(len(b) for b in blocks)
    cols = sum(len(b[0]) if b else 0 for b in blocks)
    out = zero_matrix(rows, cols)
    r = c = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[r + i][c + j] = x
        r += len(b)
        c += len(b[0]) if b else 0
    return out


def rref(A, p):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [row[:] for row in A]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(A, p):
    return len(rref(A, p)[0])


def row_span(vectors, p):
    """Canonical basis (RREF rows, pivot columns) of the span of row vectors."""
    if not vectors:
        return [], []
    return rref([list(v) for v in vectors], p)


def reduce_vector(basis_rows, pivots, v, p):
    v = list(v)
    for row, c in zip(basis_rows, pivots):
        f = v[c] % p
        if f:
            for j in range(len(v)):
                v[j] = (v[j] - f * row[j]) % p
    return tuple(x % p for x in v)


def in_span(basis_rows, pivots, v, p):
    return not any(reduce_vector(basis_rows, pivots, v, p))


def kernel_basis(A, p):
    """Basis of {x : A x = 0}, x a column vector returned as a tuple."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for row, c in zip(R, pivots):
            v[c] = (-row[f]) % p
        basis.append(tuple(v))
    return basis


def solve(A, b, p):
    """One solution x of A x = b (column vectors), or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [A[i][:] + [b[i] % p] for i in range(rows)]
    R, pivots = rref(aug, p)
    for row, c in zip(R, pivots):
        if c == cols:
            return None
    x = [0] * cols
    for row, c in zip(R, pivots):
        x[c] = row[cols] % p
    return tuple(x)


def inverse(A, p):
    n = len(A)
    aug = [A[i][:] + identity(n)[i] for i in range(n)]
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("matrix not invertible")
    return [row[n:] for row in R]


def coordinates_in(basis_vectors, v, p):
    """Coefficients expressing v in the given (not necessarily canonical)
    basis, or None when v is outside the span."""
    if not basis_vectors:
        return () if not any(v) else None
    A = [[vec[i] for vec in basis_vectors] for i in range(len(v))]
    return solve(A, list(v), p)


def iter_subspaces(n, k, p):
    """All k-dimensional subspaces of F_p^n, one canonical RREF row-basis
    each, as tuples of row tuples."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(n), k):
        free_slots = []
        for i, c in enumerate(pivots):
            for j in range(c + 1, n):
                if j not in pivots:
                    free_slots.append((i, j))
        for values in product(range(p), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), val in zip(free_slots, values):
                rows[i][j] = val
            yield tuple(tuple(r) for r in rows)


def iter_subspaces_containing(n, p, base_rows, k):
    """All k-dimensional subspaces of F_p^n containing the span of the given
    rows.  Yields (not necessarily canonical) row bases."""
    R, pivots = row_span([list(r) for r in base_rows], p)
    u = len(R)
    if k < u or k > n:
        return
    free_cols = [c for c in range(n) if c not in pivots]
    base = tuple(tuple(r) for r in R)
    for extra in iter_subspaces(len(free_cols), k - u, p):
        lifted = []
        for row in extra:
            v = [0] * n
            for idx, c in enumerate(free_cols):
                v[c] = row[idx]
            lifted.append(tuple(v))
        yield base + tuple(lifted)


def random_matrix(rng, r, c, p):
    return [[rng.randrange(p) for _ in range(c)] for _ in range(r)]


def random_invertible(rng, n, p):
    while True:
        A = random_matrix(rng, n, n, p)
        if rank(A, p) == n:
            return A
