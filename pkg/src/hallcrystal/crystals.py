"""Finite colored crystals: axioms, tensor products, and structure tests.

A crystal here is a finite directed graph with one arrow color per
lattice direction, together with weight, string-length, and co-string
data on each vertex.  Weights are stored in pairing coordinates, so
<h_i, wt> is just wt[i] and the simple root alpha_j enters as the j-th
column of the Cartan matrix.  Infinite crystals appear as finite
windows; vertices whose missing arrows are truncation artifacts rather
than genuine zeros are tracked in a provisional set and skipped by the
structural checks.
"""

NEG_INF = float("-inf")

__all__ = [
    "NEG_INF",
    "AbstractCrystal",
    "AxiomReport",
    "ElementaryCrystal",
    "WeightLattice",
    "binfty_characterization_check",
    "character",
    "components",
    "iso_test",
    "tensor",
    "verify_axioms",
]


class WeightLattice:
    """Integer weight lattice with a fixed Cartan pairing."""

    def __init__(self, cartan):
        cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        if any(len(row) != len(cartan) for row in cartan):
            raise ValueError("Cartan matrix must be square")
        self.cartan = cartan
        self.rank = len(cartan)

    def pairing(self, i, wt):
        """<h_i, wt> in pairing coordinates."""
        return wt[i]

    def alpha(self, i):
        """The i-th simple root as a weight."""
        return tuple(self.cartan[j][i] for j in range(self.rank))

    def from_root_coords(self, gamma):
        """Weight of sum gamma_j alpha_j."""
        return tuple(
            sum(self.cartan[i][j] * gamma[j] for j in range(self.rank))
            for i in range(self.rank)
        )

    def zero(self):
        return (0,) * self.rank

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, WeightLattice):
            return NotImplemented
        return self.cartan == other.cartan

    def __hash__(self):
        return hash(self.cartan)

    def __repr__(self):
        return "WeightLattice(rank=%d)" % self.rank


class AbstractCrystal:
    """One finite piece of a colored crystal.

    Vertices are arbitrary hashable labels.  eps and phi hold one value
    per color, either an integer or NEG_INF; e_edges and f_edges map
    (label, color) pairs to labels, with absence meaning zero except at
    provisional vertices, where absence makes no claim.
    """

    def __init__(self, lattice, vertices, wt, eps, phi, e_edges, f_edges, provisional=frozenset()):
        self.lattice = lattice
        self._vertices = tuple(vertices)
        vertex_set = set(self._vertices)
        if len(vertex_set) != len(self._vertices):
            raise ValueError("duplicate vertex labels")
        self.wt = {b: tuple(wt[b]) for b in self._vertices}
        self.eps = {b: tuple(eps[b]) for b in self._vertices}
        self.phi = {b: tuple(phi[b]) for b in self._vertices}
        for table in (self.eps, self.phi):
            for b, vals in table.items():
                if len(vals) != lattice.rank:
                    raise ValueError("string data does not match the lattice rank")
        self._e = dict(e_edges)
        self._f = dict(f_edges)
        for (b, i), c in list(self._e.items()) + list(self._f.items()):
            if b not in vertex_set or c not in vertex_set:
                raise ValueError("edge endpoint is not a vertex")
            if not 0 <= i < lattice.rank:
                raise ValueError("edge color out of range")
        self.provisional = frozenset(provisional)

    @property
    def vertices(self):
        return self._vertices

    def colors(self):
        return range(self.lattice.rank)

    def wt_of(self, b):
        return self.wt[b]

    def eps_i(self, b, i):
        return self.eps[b][i]

    def phi_i(self, b, i):
        return self.phi[b][i]

    def e(self, b, i):
        return self._e.get((b, i))

    def f(self, b, i):
        return self._f.get((b, i))

    def __len__(self):
        return len(self._vertices)

    def __repr__(self):
        return "AbstractCrystal(%d vertices, rank %d)" % (len(self._vertices), self.lattice.rank)


class ElementaryCrystal(AbstractCrystal):
    """Window [lo, hi] of the one-color string crystal.

    Vertices are (color, n) with wt = n * alpha_color, phi = n and
    eps = -n at the color, and both string values NEG_INF elsewhere.
    The two window ends are provisional: the full crystal extends in
    both directions.
    """

    def __init__(self, lattice, color, lo, hi):
        if not 0 <= color < lattice.rank:
            raise ValueError("color out of range")
        if lo > hi:
            raise ValueError("empty window")
        self.color = color
        self.window = (lo, hi)
        verts = [(color, n) for n in range(lo, hi + 1)]
        alpha = lattice.alpha(color)
        wt = {}
        eps = {}
        phi = {}
        e_edges = {}
        f_edges = {}
        for _, n in verts:
            b = (color, n)
            wt[b] = tuple(n * a for a in alpha)
            phi[b] = tuple(n if j == color else NEG_INF for j in range(lattice.rank))
            eps[b] = tuple(-n if j == color else NEG_INF for j in range(lattice.rank))
            if n < hi:
                e_edges[(b, color)] = (color, n + 1)
            if n > lo:
                f_edges[(b, color)] = (color, n - 1)
        provisional = {(color, lo), (color, hi)}
        super().__init__(lattice, verts, wt, eps, phi, e_edges, f_edges, provisional)


class AxiomReport:
    """Outcome of the seven structural checks, one entry per axiom."""

    NAMES = (
        "phi-eps-weight",
        "raise-weight",
        "lower-weight",
        "raise-string",
        "lower-string",
        "mutual-inverse",
        "minus-infinity",
    )

    def __init__(self):
        self.results = {name: (True, None) for name in self.NAMES}

    def record(self, name, offender):
        if self.results[name][0]:
            self.results[name] = (False, offender)

    @property
    def ok(self):
        return all(flag for flag, _ in self.results.values())

    def failures(self):
        return {name: off for name, (flag, off) in self.results.items() if not flag}

    def __str__(self):
        lines = []
        for name in self.NAMES:
            flag, off = self.results[name]
            if flag:
                lines.append("%s: pass" % name)
            else:
                lines.append("%s: FAIL at %r" % (name, off))
        return "\n".join(lines)


def verify_axioms(crystal):
    """Check the seven crystal axioms and report per-axiom outcomes.

    All checks are conditional on arrows that are actually present, so
    truncation windows pass as long as their data is consistent.
    """
    report = AxiomReport()
    lat = crystal.lattice
    for b in crystal.vertices:
        for i in crystal.colors():
            phi = crystal.phi_i(b, i)
            eps = crystal.eps_i(b, i)
            if (phi == NEG_INF) != (eps == NEG_INF):
                report.record("phi-eps-weight", (b, i))
            elif phi != NEG_INF and phi != eps + lat.pairing(i, crystal.wt_of(b)):
                report.record("phi-eps-weight", (b, i))
            up = crystal.e(b, i)
            if up is not None:
                if crystal.wt_of(up) != lat.add(crystal.wt_of(b), lat.alpha(i)):
                    report.record("raise-weight", (b, i))
                if crystal.eps_i(up, i) != eps - 1 or crystal.phi_i(up, i) != phi + 1:
                    report.record("raise-string", (b, i))
                if crystal.f(up, i) != b:
                    report.record("mutual-inverse", (b, i))
            down = crystal.f(b, i)
            if down is not None:
                if crystal.wt_of(down) != lat.sub(crystal.wt_of(b), lat.alpha(i)):
                    report.record("lower-weight", (b, i))
                if crystal.eps_i(down, i) != eps + 1 or crystal.phi_i(down, i) != phi - 1:
                    report.record("lower-string", (b, i))
                if crystal.e(down, i) != b:
                    report.record("mutual-inverse", (b, i))
            if phi == NEG_INF and (up is not None or down is not None):
                report.record("minus-infinity", (b, i))
    return report


def tensor(left, right):
    """Tensor product crystal on pair labels.

    Raising acts on the left factor when phi_i(b1) >= eps_i(b2) and on
    the right factor otherwise; lowering switches at strict inequality.
    A missing factor arrow at a provisional vertex leaves the pair
    arrow undefined instead of claiming zero.
    """
    if left.lattice != right.lattice:
        raise ValueError("tensor factors live on different weight lattices")
    lat = left.lattice
    verts = [(b1, b2) for b1 in left.vertices for b2 in right.vertices]
    wt = {}
    eps = {}
    phi = {}
    e_edges = {}
    f_edges = {}
    provisional = set()
    for b1, b2 in verts:
        pair = (b1, b2)
        w1 = left.wt_of(b1)
        w2 = right.wt_of(b2)
        wt[pair] = lat.add(w1, w2)
        eps[pair] = tuple(
            max(left.eps_i(b1, i), right.eps_i(b2, i) - lat.pairing(i, w1))
            for i in range(lat.rank)
        )
        phi[pair] = tuple(
            max(right.phi_i(b2, i), left.phi_i(b1, i) + lat.pairing(i, w2))
            for i in range(lat.rank)
        )
        if b1 in left.provisional or b2 in right.provisional:
            provisional.add(pair)
        for i in range(lat.rank):
            p1 = left.phi_i(b1, i)
            e2 = right.eps_i(b2, i)
            if p1 >= e2:
                up = left.e(b1, i)
                if up is not None:
                    e_edges[(pair, i)] = (up, b2)
                elif b1 in left.provisional:
                    provisional.add(pair)
            else:
                up = right.e(b2, i)
                if up is not None:
                    e_edges[(pair, i)] = (b1, up)
                elif b2 in right.provisional:
                    provisional.add(pair)
            if p1 > e2:
                down = left.f(b1, i)
                if down is not None:
                    f_edges[(pair, i)] = (down, b2)
                elif b1 in left.provisional:
                    provisional.add(pair)
            else:
                down = right.f(b2, i)
                if down is not None:
                    f_edges[(pair, i)] = (b1, down)
                elif b2 in right.provisional:
                    provisional.add(pair)
    return AbstractCrystal(lat, verts, wt, eps, phi, e_edges, f_edges, provisional)


def components(crystal):
    """Connected components under all arrows, as restricted crystals.

    Components are listed by their first vertex in the ambient order,
    and each keeps the ambient vertex order.
    """
    neighbors = {b: [] for b in crystal.vertices}
    for (b, _), c in list(crystal._e.items()) + list(crystal._f.items()):
        neighbors[b].append(c)
        neighbors[c].append(b)
    seen = set()
    out = []
    for start in crystal.vertices:
        if start in seen:
            continue
        stack = [start]
        comp = set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(n for n in neighbors[cur] if n not in comp)
        seen |= comp
        verts = [b for b in crystal.vertices if b in comp]
        out.append(
            AbstractCrystal(
                crystal.lattice,
                verts,
                {b: crystal.wt[b] for b in verts},
                {b: crystal.eps[b] for b in verts},
                {b: crystal.phi[b] for b in verts},
                {(b, i): c for (b, i), c in crystal._e.items() if b in comp},
                {(b, i): c for (b, i), c in crystal._f.items() if b in comp},
                crystal.provisional & comp,
            )
        )
    return out


def _source_of(crystal):
    sources = [
        b
        for b in crystal.vertices
        if all(crystal.f(b, i) is None for i in crystal.colors())
    ]
    if len(sources) != 1:
        raise ValueError("not lowest weight: %d source vertices" % len(sources))
    return sources[0]


def _traversal_signature(crystal):
    """Canonical BFS transcript from the source.

    The transcript lists, in discovery order, each vertex's string data
    and the discovery indices of all its neighbors color by color, so
    two crystals are isomorphic as colored graphs with string data iff
    their transcripts agree.  Weights are deliberately excluded: they
    shift under embeddings into tensor products.
    """
    source = _source_of(crystal)
    index = {source: 0}
    queue = [source]
    sig = []
    pos = 0
    while pos < len(queue):
        cur = queue[pos]
        pos += 1
        entry = [tuple(crystal.eps[cur]), tuple(crystal.phi[cur])]
        for i in crystal.colors():
            for tag, mapping in (("e", crystal.e), ("f", crystal.f)):
                nxt = mapping(cur, i)
                if nxt is None:
                    entry.append((i, tag, None))
                else:
                    if nxt not in index:
                        index[nxt] = len(queue)
                        queue.append(nxt)
                    entry.append((i, tag, index[nxt]))
        sig.append(tuple(entry))
    if len(queue) != len(crystal.vertices):
        raise ValueError("crystal is not connected")
    return tuple(sig)


def iso_test(c1, c2):
    """Colored-graph isomorphism for connected crystals with a unique
    lowest vertex, by comparing canonical traversal transcripts."""
    if c1.lattice.rank != c2.lattice.rank:
        return False
    if len(c1) != len(c2):
        return False
    return _traversal_signature(c1) == _traversal_signature(c2)


def character(crystal):
    """Weight multiplicity table."""
    out = {}
    for b in crystal.vertices:
        w = crystal.wt_of(b)
        out[w] = out.get(w, 0) + 1
    return out


class CharacterizationReport:
    """Outcome of the four lowest-weight characterization conditions."""

    NAMES = ("integrality", "embedding", "image", "positivity")

    def __init__(self):
        self.results = {name: (True, None) for name in self.NAMES}

    def record(self, name, offender):
        if self.results[name][0]:
            self.results[name] = (False, offender)

    @property
    def ok(self):
        return all(flag for flag, _ in self.results.values())

    def failures(self):
        return {name: off for name, (flag, off) in self.results.items() if not flag}

    def __str__(self):
        return "\n".join(
            "%s: %s" % (name, "pass" if flag else "FAIL at %r" % (off,))
            for name, (flag, off) in self.results.items()
        )


def binfty_characterization_check(crystal, psi):
    """Test the four conditions that pin down the lowest-weight crystal
    of the positive half.

    ``psi`` maps each color i to a dict sending every vertex b to a pair
    (n, b') meaning b embeds as the n-th string vertex tensor b'.  The
    conditions: every string value is an integer; each psi is a strict
    embedding into elementary tensor crystal; the string part never goes
    below the origin; and every vertex of nonzero weight has a strictly
    positive string part at some color.
    """
    report = CharacterizationReport()
    lat = crystal.lattice
    for b in crystal.vertices:
        for i in crystal.colors():
            if crystal.phi_i(b, i) == NEG_INF or crystal.eps_i(b, i) == NEG_INF:
                report.record("integrality", (b, i))
    for i in crystal.colors():
        table = psi[i]
        if set(table) != set(crystal.vertices):
            report.record("embedding", (i, "domain mismatch"))
            continue
        if len({v for v in table.values()}) != len(table):
            report.record("embedding", (i, "not injective"))
        tops = [n for n, _ in table.values()]
        if any(n < 0 for n in tops):
            report.record("image", (i, min(tops)))
            continue
        window = ElementaryCrystal(lat, i, 0, max(tops) + 1)
        prod = tensor(window, crystal)
        for b, (n, rest) in table.items():
            pair = ((i, n), rest)
            if pair not in prod.wt:
                report.record("embedding", (b, i))
                continue
            if prod.wt_of(pair) != crystal.wt_of(b):
                report.record("embedding", (b, i))
            for j in crystal.colors():
                if prod.eps_i(pair, j) != crystal.eps_i(b, j) or prod.phi_i(
                    pair, j
                ) != crystal.phi_i(b, j):
                    report.record("embedding", (b, i, j))
            skip = pair in prod.provisional or b in crystal.provisional
            for j in crystal.colors():
                for this, that in ((crystal.e, prod.e), (crystal.f, prod.f)):
                    c = this(b, j)
                    pc = that(pair, j)
                    if c is None and pc is None:
                        continue
                    if c is None or pc is None:
                        if not skip:
                            report.record("embedding", (b, i, j))
                        continue
                    if pc != ((i, table[c][0]), table[c][1]):
                        report.record("embedding", (b, i, j))
    for b in crystal.vertices:
        if crystal.wt_of(b) == lat.zero():
            continue
        if not any(psi[i][b][0] > 0 for i in crystal.colors() if b in psi[i]):
            report.record("positivity", b)
    return report
