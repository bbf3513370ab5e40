"""Canonical bases of finite-type Hall algebras and their crystal graphs.

Everything here is normalized through the rescaled generators
``<M> = nu^(dim End M) [M]``.  For each dimension vector the canonical
basis element attached to an iso class M is the unique bar-invariant

    b_M = <M> + sum_{N < M} zeta_{N,M} <N>,

where N runs over strictly more degenerate classes of the same dimension
vector and every zeta_{N,M} lies in nu^{-1} Z[nu^{-1}].  Crystal
structures are read off the basis in two independent ways (string
decompositions against the i-th coproduct slice, and depth strata of the
left ideals generated by divided powers); both land in a CrystalGraphB
and must agree.
"""

import weakref

from .scalars import LaurentPoly, RatFunc, bar, linear_nullspace, linear_solve, quantum_integer

__all__ = [
    "CanonicalElement",
    "CrystalGraphB",
    "b_lambda",
    "canonical_basis",
    "canonical_element",
    "crystal_graph",
    "degeneration_leq",
    "kashiwara_op",
    "lusztig_graph",
    "reineke_word",
    "triangular_bar_solve",
]


def degeneration_leq(alg, N, M):
    """Orbit-closure order: N <= M iff dim Hom(X, N) >= dim Hom(X, M)
    for every catalogued indecomposable X.

    Both classes must have the same dimension vector.
    """
    cat = alg.ref_catalog(_min_total(alg, N, M))
    if cat.dim_vector(N) != cat.dim_vector(M):
        raise ValueError("degeneration order only compares classes of equal dimension vector")
    hn = cat.hom_vector(N)
    hm = cat.hom_vector(M)
    return all(a >= b for a, b in zip(hn, hm))


def _min_total(alg, *isos):
    return max((sum(alg.dim_of(iso)) for iso in isos), default=0)


def _topological_vertices(quiver):
    """Vertex indices ordered source to sink; index order breaks ties."""
    n = quiver.n
    indeg = [0] * n
    outs = [[] for _ in range(n)]
    for s, t in quiver.arrows:
        if s != t:
            indeg[t] += 1
            outs[s].append(t)
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for t in sorted(outs[v]):
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
        ready.sort()
    if len(order) != n:
        raise ValueError("quiver has an oriented cycle; no topological vertex order")
    return order


def _adapted_indec_order(alg):
    """Total order on catalogued indecomposables such that whenever
    X comes before Y, Hom(Y, X) = 0 and Ext1(X, Y) = 0.

    Returns root indices, earliest block first.  Exists exactly in
    finite type; an unbreakable cycle raises.
    """
    cat = alg.ref_catalog()
    n = len(cat.roots)
    hom = cat.hom_matrix
    euler = alg.quiver.euler_form

    def ext(j, k):
        return hom[j][k] - euler(cat.roots[j], cat.roots[k])

    succs = [set() for _ in range(n)]
    indeg = [0] * n
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            # j is forced before k when a nonzero Hom(X_j, X_k) or a
            # nonzero Ext1(X_k, X_j) would disqualify the other order.
            if hom[j][k] > 0 or ext(k, j) > 0:
                if k not in succs[j]:
                    succs[j].add(k)
                    indeg[k] += 1
    ready = sorted(j for j in range(n) if indeg[j] == 0)
    order = []
    while ready:
        j = ready.pop(0)
        order.append(j)
        for k in sorted(succs[j]):
            indeg[k] -= 1
            if indeg[k] == 0:
                ready.append(k)
        ready.sort()
    if len(order) != n:
        raise ValueError("no adapted order: hom/ext constraints form a cycle")
    return order


def reineke_word(alg, M):
    """Monomial word (vertex, multiplicity letters) whose embedding is
    <M> plus strictly more degenerate terms.

    Blocks follow the adapted order on indecomposable summands; inside a
    block the letters list the block's dimension vector at the vertices
    in source-to-sink order.
    """
    if not alg.quiver.is_finite_type():
        raise ValueError("monomial words require a finite-type quiver")
    cat = alg.ref_catalog(_min_total(alg, M))
    order = _adapted_indec_order(alg)
    pos = {idx: r for r, idx in enumerate(order)}
    topo = _topological_vertices(alg.quiver)
    word = []
    for idx, mult in sorted(M.parts, key=lambda part: pos[part[0]]):
        block = [mult * x for x in cat.roots[idx]]
        for v in topo:
            if block[v]:
                word.append((v, block[v]))
    return tuple(word)


class CanonicalElement:
    """One bar-invariant basis element, stored by its PBW coordinates.

    ``zeta`` maps iso classes N to Laurent polynomials; the label's own
    coordinate is 1 and all others lie in nu^{-1} Z[nu^{-1}].
    """

    __slots__ = ("algebra", "label", "zeta")

    def __init__(self, algebra, label, zeta):
        self.algebra = algebra
        self.label = label
        self.zeta = dict(zeta)

    def pbw_coefficient(self, N):
        return self.zeta.get(N, LaurentPoly.zero())

    def hall_element(self):
        """Expansion back in the [N] basis."""
        cat = self.algebra.ref_catalog(_min_total(self.algebra, self.label))
        coeffs = {}
        for N, z in self.zeta.items():
            coeffs[N] = RatFunc.from_laurent(z.shift(cat.end_dim(N)))
        return self.algebra.element(coeffs)

    def weight(self):
        return self.algebra.dim_of(self.label)

    def __eq__(self, other):
        if not isinstance(other, CanonicalElement):
            return NotImplemented
        return self.label == other.label and self.zeta == other.zeta

    def __hash__(self):
        return hash((self.label, tuple(sorted((n.cache_key(), z.serialize()) for n, z in self.zeta.items()))))

    def __repr__(self):
        return "CanonicalElement(%s)" % self.algebra.display(self.label)


def triangular_bar_solve(A):
    """Solve the bar fixed-point recursion for a unitriangular matrix.

    A is a square list-of-rows matrix of Laurent polynomials, upper
    unitriangular in a fixed order (row/column 0 most degenerate).  The
    return value is the matrix Z with Z[i][j] the coefficient of basis
    row i in the bar-invariant column j; Z is upper unitriangular with
    strictly-above entries in nu^{-1} Z[nu^{-1}].

    Raises RuntimeError when A is not unitriangular or when the
    recursion ever produces a non-antisymmetric correction, both of
    which mean the claimed ordering is wrong.
    """
    n = len(A)
    one = LaurentPoly.one()
    zero = LaurentPoly.zero()
    for i in range(n):
        if A[i][i] != one:
            raise RuntimeError("non-unitriangular monomial matrix: diagonal entry is not 1")
        for j in range(i):
            if A[i][j]:
                raise RuntimeError("non-unitriangular monomial matrix: entry below the diagonal")
    # inverse of bar(A) by back-substitution, then R = A * bar(A)^{-1}
    barA = [[bar(A[i][j]) for j in range(n)] for i in range(n)]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = zero
            for k in range(i + 1, j + 1):
                if barA[i][k] and inv[k][j]:
                    acc = acc + barA[i][k] * inv[k][j]
            inv[i][j] = -acc
    R = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = zero
            for k in range(i, j + 1):
                if A[i][k] and inv[k][j]:
                    acc = acc + A[i][k] * inv[k][j]
            R[i][j] = acc
    Z = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            g = zero
            for k in range(i + 1, j + 1):
                if R[i][k] and Z[k][j]:
                    g = g + R[i][k] * bar(Z[k][j])
            if bar(g) != -g:
                raise RuntimeError("bar recursion failed: correction term is not antisymmetric")
            kept = {e: c for e, c in g.items() if e < 0}
            Z[i][j] = LaurentPoly(kept) if kept else zero
    return Z


class _WeightData:
    """Canonical-basis data for one dimension vector: the ordered class
    list, the zeta matrix, and its inverse for coordinate changes."""

    def __init__(self, alg, gamma, tiebreak=None):
        self.algebra = alg
        self.gamma = tuple(gamma)
        cat = alg.ref_catalog(sum(self.gamma))
        classes = alg.classes_of_dim(self.gamma)
        if tiebreak is None:
            tiebreak = alg.display

        def key(M):
            return (-sum(cat.hom_vector(M)), tiebreak(M))

        self.classes = sorted(classes, key=key)
        self.index = {M: i for i, M in enumerate(self.classes)}
        self.end_dims = [cat.end_dim(M) for M in self.classes]
        n = len(self.classes)
        # columns of A are monomial embeddings in PBW coordinates
        A = [[LaurentPoly.zero()] * n for _ in range(n)]
        for j, M in enumerate(self.classes):
            x = alg.ringel_embed(reineke_word(alg, M))
            for N in x.support():
                i = self.index[N]
                if i > j or (i < j and not degeneration_leq(alg, N, M)):
                    raise RuntimeError(
                        "non-unitriangular monomial matrix: %s appears in the word for %s"
                        % (alg.display(N), alg.display(M))
                    )
                A[i][j] = x.coefficient(N).as_laurent().shift(-self.end_dims[i])
        self.Z = triangular_bar_solve(A)
        self.Zinv = _unitriangular_inverse(self.Z)
        self.elements = []
        for j, M in enumerate(self.classes):
            zeta = {self.classes[i]: self.Z[i][j] for i in range(j + 1) if self.Z[i][j]}
            self.elements.append(CanonicalElement(alg, M, zeta))

    def pbw_coords(self, x):
        return [
            x.coefficient(N) / RatFunc.from_laurent(LaurentPoly.nu(self.end_dims[i]))
            for i, N in enumerate(self.classes)
        ]

    def b_coords(self, x):
        """Coordinates of x on the canonical basis of this weight."""
        pbw = self.pbw_coords(x)
        n = len(self.classes)
        out = []
        for i in range(n):
            acc = RatFunc.zero()
            for k in range(i, n):
                if self.Zinv[i][k] and pbw[k]:
                    acc = acc + RatFunc.from_laurent(self.Zinv[i][k]) * pbw[k]
            out.append(acc)
        return out

    def element_of(self, label):
        return self.elements[self.index[label]]


def _unitriangular_inverse(Z):
    n = len(Z)
    one = LaurentPoly.one()
    zero = LaurentPoly.zero()
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = zero
            for k in range(i + 1, j + 1):
                if Z[i][k] and inv[k][j]:
                    acc = acc + Z[i][k] * inv[k][j]
            inv[i][j] = -acc
    return inv


_MEMO = weakref.WeakKeyDictionary()


def _weight_data(alg, gamma, tiebreak=None):
    gamma = tuple(gamma)
    if tiebreak is not None:
        return _WeightData(alg, gamma, tiebreak)
    memo = _MEMO.setdefault(alg, {})
    if gamma not in memo:
        memo[gamma] = _WeightData(alg, gamma)
    return memo[gamma]


def canonical_basis(alg, gamma, tiebreak=None):
    """All canonical elements of one dimension vector, most degenerate
    label first.

    ``tiebreak`` replaces the display-name tie ordering used to pick
    the linear extension of the degeneration order; the output must not
    depend on it.
    """
    gamma = tuple(gamma)
    if any(g < 0 for g in gamma):
        return []
    return list(_weight_data(alg, gamma, tiebreak).elements)


def canonical_element(alg, M):
    """Canonical element labelled by the iso class M."""
    wd = _weight_data(alg, alg.dim_of(M))
    return wd.element_of(M)


# ---------------------------------------------------------------------------
# Kashiwara operators


def _classes_or_empty(alg, beta):
    if any(b < 0 for b in beta):
        return []
    return alg.classes_of_dim(tuple(beta))


def _i_kernel_basis(alg, i, beta):
    """Basis of the kernel of the i-th coproduct slice in weight beta.

    The slice sends x to its (eps_i, beta - eps_i) coproduct component
    paired against the simple at i on the left.
    """
    beta = tuple(beta)
    classes = _classes_or_empty(alg, beta)
    if not classes:
        return []
    left = tuple(1 if j == i else 0 for j in range(alg.quiver.n))
    si = alg.classes_of_dim(left)[0]
    right = tuple(b - l for b, l in zip(beta, left))
    targets = _classes_or_empty(alg, right)
    if not targets:
        return [alg.basis(N) for N in classes]
    rows = [[RatFunc.zero()] * len(classes) for _ in targets]
    for c, N in enumerate(classes):
        piece = alg.coproduct_component(alg.basis(N), left, right)
        for r, P in enumerate(targets):
            rows[r][c] = piece.coefficient(si, P)
    basis = []
    for vec in linear_nullspace(rows):
        coeffs = {N: v for N, v in zip(classes, vec) if v}
        basis.append(alg.element(coeffs))
    return basis


def _string_decomposition(alg, x, i):
    """Write x as sum_k E_i^(k) * u_k with every u_k killed by the i-th
    coproduct slice; returns [(k, u_k)] for the nonzero u_k."""
    gamma = x.weight()
    classes = alg.classes_of_dim(gamma)
    cols = []
    tags = []
    for k in range(gamma[i] + 1):
        beta = tuple(g - (k if j == i else 0) for j, g in enumerate(gamma))
        for w in _i_kernel_basis(alg, i, beta):
            prod = alg.product(alg.chevalley(i, k), w) if k else w
            cols.append([prod.coefficient(N) for N in classes])
            tags.append((k, w))
    if len(cols) != len(classes):
        raise RuntimeError("string decomposition failed: filtration dimensions are off")
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(classes))]
    rhs = [x.coefficient(N) for N in classes]
    sol = linear_solve(rows, rhs)
    if sol is None:
        raise RuntimeError("string decomposition failed: element is outside the divided-power filtration")
    out = []
    for coeff, (k, w) in zip(sol, tags):
        if coeff:
            out.append((k, w.scale(coeff)))
    return out


def kashiwara_op(alg, x, i, direction):
    """Shift the divided-power string of x at the vertex i.

    With x = sum_k E_i^(k) u_k (each u_k in the kernel of the i-th
    coproduct slice), ``raise`` returns sum_k E_i^(k+1) u_k and
    ``lower`` returns sum_{k>=1} E_i^(k-1) u_k.
    """
    if direction not in ("raise", "lower"):
        raise ValueError("direction must be 'raise' or 'lower'")
    if x.is_zero():
        return x
    total = alg.zero()
    for k, u in _string_decomposition(alg, x, i):
        kk = k + 1 if direction == "raise" else k - 1
        if kk < 0:
            continue
        term = alg.product(alg.chevalley(i, kk), u) if kk else u
        total = total + term
    return total


def string_support_top(alg, x, i):
    """Largest k with a nonzero u_k in the divided-power string of x.

    This is the raw filtration top; the crystal string length can be
    smaller because small-coefficient components die in the lattice
    quotient.
    """
    decomp = _string_decomposition(alg, x, i)
    return max((k for k, _ in decomp), default=0)


# ---------------------------------------------------------------------------
# Crystal graphs


class CrystalGraphB:
    """Colored graph on canonical-basis labels.

    Vertices are iso classes; each carries its dimension vector and the
    per-color string data.  Edges follow the raising operators, one map
    per color, with the lowering arrows stored as the exact reverses.
    """

    def __init__(self, quiver):
        self.quiver = quiver
        self.wt = {}
        self.phi = {}
        self.eps = {}
        self._e = {}
        self._f = {}
        # vertices whose missing raising arrows are cut off by the
        # enumeration bound rather than genuinely absent
        self.provisional = set()

    def add_vertex(self, label, gamma, phi, eps):
        self.wt[label] = tuple(gamma)
        self.phi[label] = tuple(phi)
        self.eps[label] = tuple(eps)

    def set_raise(self, label, i, target):
        self._e[(label, i)] = target
        self._f[(target, i)] = label

    def vertices(self):
        return sorted(self.wt, key=lambda m: (self.wt[m], m.cache_key()))

    def e_target(self, label, i):
        return self._e.get((label, i))

    def f_target(self, label, i):
        return self._f.get((label, i))

    def __len__(self):
        return len(self.wt)

    def __eq__(self, other):
        if not isinstance(other, CrystalGraphB):
            return NotImplemented
        return (
            self.wt == other.wt
            and self.phi == other.phi
            and self.eps == other.eps
            and self._e == other._e
        )

    def __hash__(self):
        return hash(frozenset(self._e.items()))

    def to_abstract(self):
        """Repackage as a free-standing crystal over the quiver's
        symmetrized weight pairing.

        Stored weights are dimension vectors, i.e. root coordinates;
        the abstract crystal wants pairing coordinates, so each one is
        pushed through the Cartan matrix.
        """
        from .crystals import AbstractCrystal, WeightLattice

        lattice = WeightLattice(self.quiver.cartan_matrix())
        verts = self.vertices()
        return AbstractCrystal(
            lattice,
            verts,
            wt={m: lattice.from_root_coords(self.wt[m]) for m in verts},
            eps={m: self.eps[m] for m in verts},
            phi={m: self.phi[m] for m in verts},
            e_edges=dict(self._e),
            f_edges=dict(self._f),
            provisional=frozenset(self.provisional),
        )

    def dot(self):
        """Deterministic DOT rendering; arrows follow the raising maps."""
        verts = self.vertices()
        ordinal = {m: n for n, m in enumerate(verts)}
        lines = ["digraph crystal {"]
        for m in verts:
            wt = ",".join(str(c) for c in self.wt[m])
            phi = ",".join(str(c) for c in self.phi[m])
            eps = ",".join(str(c) for c in self.eps[m])
            lines.append(
                '  "%s" [label="w=%s/%d", wt="%s", phi="%s", eps="%s"];'
                % (m.cache_key(), wt, ordinal[m], wt, phi, eps)
            )
        for m in verts:
            for i in range(self.quiver.n):
                tgt = self._e.get((m, i))
                if tgt is not None:
                    lines.append('  "%s" -> "%s" [color="%d"];' % (m.cache_key(), tgt.cache_key(), i))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _weights_under(quiver, bound):
    """All dimension vectors within the bound: componentwise for a
    tuple bound, total dimension for an integer."""
    n = quiver.n
    if isinstance(bound, int):
        caps = [bound] * n

        def ok(g):
            return sum(g) <= bound

    else:
        caps = list(bound)

        def ok(g):
            return True

    out = []

    def rec(prefix):
        if len(prefix) == n:
            if ok(prefix):
                out.append(tuple(prefix))
            return
        for c in range(caps[len(prefix)] + 1):
            rec(prefix + [c])

    rec([])
    return sorted(out)


def _pairing_row(quiver, i, gamma):
    cartan = quiver.cartan_matrix()
    return sum(cartan[i][j] * gamma[j] for j in range(quiver.n))


def _reduce_to_label(wd, x):
    """Label of the unique canonical element whose coordinate in x
    survives with value 1 as nu grows without bound; None when every
    coordinate dies."""
    survivor = None
    for idx, c in enumerate(wd.b_coords(x)):
        if not c:
            continue
        try:
            lim = c.nu_infinity_limit()
        except ArithmeticError:
            raise RuntimeError("lattice violation: unbounded crystal coordinate")
        if lim == 0:
            continue
        if lim != 1 or survivor is not None:
            raise RuntimeError("lattice violation: no unique crystal target")
        survivor = idx
    return None if survivor is None else wd.classes[survivor]


def crystal_graph(alg, weight_bound):
    """Crystal graph of the canonical basis from the Kashiwara
    operators, truncated to dimension vectors within the bound.

    Lowering arrows come from the operator followed by reduction in the
    lattice quotient; raising arrows are computed independently the same
    way, and the two must be mutual inverses.  phi_i counts the lowering
    steps to zero and eps_i = phi_i - <h_i, wt>.
    """
    quiver = alg.quiver
    graph = CrystalGraphB(quiver)
    weights = _weights_under(quiver, weight_bound)
    allowed = set(weights)
    lower_map = {}
    for gamma in weights:
        wd = _weight_data(alg, gamma)
        for elem in wd.elements:
            for i in range(quiver.n):
                down = tuple(g - (1 if j == i else 0) for j, g in enumerate(gamma))
                if any(c < 0 for c in down):
                    lower_map[(elem.label, i)] = None
                    continue
                lowered = kashiwara_op(alg, elem.hall_element(), i, "lower")
                if lowered.is_zero():
                    lower_map[(elem.label, i)] = None
                    continue
                lower_map[(elem.label, i)] = _reduce_to_label(_weight_data(alg, down), lowered)

    def phi_of(label, i):
        steps = 0
        cur = label
        while lower_map[(cur, i)] is not None:
            cur = lower_map[(cur, i)]
            steps += 1
        return steps

    for gamma in weights:
        wd = _weight_data(alg, gamma)
        for elem in wd.elements:
            phi = [phi_of(elem.label, i) for i in range(quiver.n)]
            eps = [phi[i] - _pairing_row(quiver, i, gamma) for i in range(quiver.n)]
            graph.add_vertex(elem.label, gamma, phi, eps)
    for gamma in weights:
        wd = _weight_data(alg, gamma)
        for elem in wd.elements:
            for i in range(quiver.n):
                up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
                if up not in allowed:
                    graph.provisional.add(elem.label)
                    continue
                raised = kashiwara_op(alg, elem.hall_element(), i, "raise")
                target = _reduce_to_label(_weight_data(alg, up), raised)
                if target is None:
                    raise RuntimeError("lattice violation: raising operator lost the lattice")
                if lower_map[(target, i)] != elem.label:
                    raise RuntimeError("lattice violation: raising and lowering disagree")
                graph.set_raise(elem.label, i, target)
    return graph


# ---------------------------------------------------------------------------
# Depth strata of divided-power ideals


def _ideal_depths(alg, gamma, i, side):
    """Divided-power depth of every canonical element of one weight.

    The depth of b is the largest n with b inside the span of
    E_i^(n) * U (side 'left') or U * E_i^(n) (side 'right').  Basis
    vectors of those spans are produced degree by degree; depth is read
    off by exact rank checks over the rational function field.
    """
    wd = _weight_data(alg, gamma)
    n_classes = len(wd.classes)
    depths = {}
    remaining = set(range(n_classes))
    max_n = gamma[i]
    for depth in range(max_n, -1, -1):
        if not remaining:
            break
        if depth == 0:
            for idx in remaining:
                depths[wd.classes[idx]] = 0
            break
        beta = tuple(g - (depth if j == i else 0) for j, g in enumerate(gamma))
        if any(b < 0 for b in beta):
            continue
        power = alg.chevalley(i, depth)
        span_rows = []
        for P in alg.classes_of_dim(beta):
            if side == "left":
                prod = alg.product(power, alg.basis(P))
            else:
                prod = alg.product(alg.basis(P), power)
            span_rows.append(wd.b_coords(prod))
        # b_M is in the span iff solving for it succeeds
        cols = [[span_rows[r][c] for r in range(len(span_rows))] for c in range(n_classes)]
        for idx in sorted(remaining):
            rhs = [RatFunc.one() if c == idx else RatFunc.zero() for c in range(n_classes)]
            if linear_solve(cols, rhs) is not None:
                depths[wd.classes[idx]] = depth
                remaining.discard(idx)
    return depths


def lusztig_graph(alg, weight_bound):
    """Crystal graph recomputed from divided-power ideal strata, with no
    use of the Kashiwara operators.

    phi_i(b) is the largest n with b in the left span of E_i^(n); the
    raising arrow at a vertex of depth n points to the unique canonical
    element congruent to E_i^(n+1) times the depth-0 witness of b.
    """
    quiver = alg.quiver
    graph = CrystalGraphB(quiver)
    weights = _weights_under(quiver, weight_bound)
    allowed = set(weights)
    depth_table = {}
    for gamma in weights:
        per_color = [_ideal_depths(alg, gamma, i, "left") for i in range(quiver.n)]
        wd = _weight_data(alg, gamma)
        for elem in wd.elements:
            phi = [per_color[i][elem.label] for i in range(quiver.n)]
            eps = [phi[i] - _pairing_row(quiver, i, gamma) for i in range(quiver.n)]
            graph.add_vertex(elem.label, gamma, phi, eps)
            depth_table[elem.label] = phi
    for gamma in weights:
        wd = _weight_data(alg, gamma)
        for elem in wd.elements:
            for i in range(quiver.n):
                up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
                if up not in allowed:
                    graph.provisional.add(elem.label)
                    continue
                target = _stratum_raise(alg, elem, i, depth_table)
                graph.set_raise(elem.label, i, target)
    return graph


def _stratum_raise(alg, elem, i, depth_table):
    """Raising arrow from ideal strata.

    For b of depth n, the product E_i * b equals [n+1] times a single
    canonical element of depth n+1 up to terms of depth n+2 or more, and
    that element is the arrow target.  Anything else is a hard error.
    """
    gamma = elem.weight()
    n = depth_table[elem.label][i]
    up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
    wd_up = _weight_data(alg, up)
    prod = alg.product(alg.chevalley(i, 1), elem.hall_element())
    coords = wd_up.b_coords(prod)
    survivor = None
    for idx, c in enumerate(coords):
        if not c:
            continue
        label = wd_up.classes[idx]
        if depth_table[label][i] >= n + 2:
            continue
        if survivor is not None:
            raise RuntimeError("stratum congruence failed: no unique survivor")
        survivor = (label, c)
    if survivor is None:
        raise RuntimeError("stratum congruence failed: product fell into deeper strata")
    label, c = survivor
    if c != RatFunc.from_laurent(quantum_integer(n + 1)):
        raise RuntimeError("stratum congruence failed: leading coefficient is not a quantum integer")
    if depth_table[label][i] != n + 1:
        raise RuntimeError("stratum congruence failed: survivor has the wrong depth")
    return label


# ---------------------------------------------------------------------------
# Integrable truncations


def b_lambda(alg, lam, weight_bound):
    """Canonical labels surviving the highest-weight cut at lambda.

    A label is kept when, for every vertex i, its depth in the right
    ideal generated by the divided powers of E_i stays at or below
    lambda_i.  Returns (labels, weight multiplicity table).
    """
    quiver = alg.quiver
    lam = tuple(lam)
    if len(lam) != quiver.n or any(l < 0 for l in lam):
        raise ValueError("lambda must list one nonnegative weight per vertex")
    kept = []
    weights = {}
    for gamma in _weights_under(quiver, weight_bound):
        wd = _weight_data(alg, gamma)
        if not wd.classes:
            continue
        per_color = [_ideal_depths(alg, gamma, i, "right") for i in range(quiver.n)]
        for elem in wd.elements:
            if all(per_color[i][elem.label] <= lam[i] for i in range(quiver.n)):
                kept.append(elem.label)
                weights[gamma] = weights.get(gamma, 0) + 1
    kept.sort(key=lambda m: (alg.dim_of(m), m.cache_key()))
    return kept, weights


def b_lambda_crystal(alg, lam, weight_bound):
    """The highest-weight cut at lambda as a free-standing crystal.

    Vertices are the kept labels; lowering arrows are inherited from the
    ambient graph and must stay inside the cut, while raising arrows
    that leave it are genuine zeros.  Weights move to pairing
    coordinates and shift down by lambda, so the empty label sits at
    -lambda.  The result must come out seminormal, with eps counting
    raising steps inside the cut; a mismatch is a hard error, reported
    as a bound problem when the ambient window is what cut the chain.
    """
    from .crystals import AbstractCrystal, WeightLattice

    quiver = alg.quiver
    lam = tuple(lam)
    kept, _ = b_lambda(alg, lam, weight_bound)
    kept_set = set(kept)
    ambient = crystal_graph(alg, weight_bound)
    lattice = WeightLattice(quiver.cartan_matrix())
    wt = {}
    eps = {}
    phi = {}
    e_edges = {}
    f_edges = {}
    for label in kept:
        gamma = ambient.wt[label]
        paired = lattice.from_root_coords(gamma)
        wt[label] = tuple(a - b for a, b in zip(paired, lam))
        phi[label] = ambient.phi[label]
        for i in range(quiver.n):
            down = ambient.f_target(label, i)
            if down is not None:
                if down not in kept_set:
                    raise RuntimeError("highest-weight cut is not closed under lowering")
                f_edges[(label, i)] = down
            up = ambient.e_target(label, i)
            if up is not None and up in kept_set:
                e_edges[(label, i)] = up
    for label in kept:
        per = []
        for i in range(quiver.n):
            steps = 0
            cur = label
            while (cur, i) in e_edges:
                cur = e_edges[(cur, i)]
                steps += 1
            expected = phi[label][i] - wt[label][i]
            if steps != expected:
                if ambient.e_target(cur, i) is None and cur in ambient.provisional:
                    raise RuntimeError("weight bound too small for the cut at this lambda")
                raise RuntimeError("highest-weight cut is not seminormal")
            per.append(steps)
        eps[label] = tuple(per)
    return AbstractCrystal(lattice, kept, wt, eps, phi, e_edges, f_edges)
