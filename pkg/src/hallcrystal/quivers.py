"""Quivers, dimension vectors, Euler and Cartan forms, root systems.

A quiver is an ordered list of named vertices plus a list of arrows.  The
vertex order given at construction is the canonical order used by every
downstream format and monomial ordering.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction


class Quiver:
    """Finite quiver with named, ordered vertices."""

    __slots__ = ("vertices", "arrows", "loops_allowed", "_index")

    def __init__(self, vertices, arrows, loops_allowed=False):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated vertex name")
        self._index = {v: i for i, v in enumerate(self.vertices)}
        idx_arrows = []
        for (s, t) in arrows:
            s, t = str(s), str(t)
            if s not in self._index or t not in self._index:
                raise ValueError(f"arrow endpoint not a vertex: ({s}, {t})")
            si, ti = self._index[s], self._index[t]
            if si == ti and not loops_allowed:
                raise ValueError(f"loop at vertex {s} not allowed")
            idx_arrows.append((si, ti))
        self.arrows = tuple(idx_arrows)
        self.loops_allowed = bool(loops_allowed)

    @property
    def n(self):
        return len(self.vertices)

    def vertex_index(self, name):
        return self._index[str(name)]

    def _check_dim(self, a):
        a = tuple(int(x) for x in a)
        if len(a) != self.n:
            raise ValueError("dimension vector size mismatch")
        return a

    def reversed_orientation(self):
        arrows = [(self.vertices[t], self.vertices[s]) for s, t in self.arrows]
        return Quiver(self.vertices, arrows, self.loops_allowed)

    # -- bilinear forms ------------------------------------------------------

    def euler_form(self, a, b):
        """<a,b> = sum_i a_i b_i - sum_{h: s->t} a_s b_t."""
        a = self._check_dim(a)
        b = self._check_dim(b)
        total = sum(x * y for x, y in zip(a, b))
        for s, t in self.arrows:
            total -= a[s] * b[t]
        return total

    def symmetrized_form(self, a, b):
        return self.euler_form(a, b) + self.euler_form(b, a)

    def cartan_matrix(self):
        units = [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]
        return tuple(
            tuple(self.symmetrized_form(units[i], units[j]) for j in range(self.n))
            for i in range(self.n)
        )

    def tits_form(self, a):
        return self.euler_form(a, a)

    def moduli_dimensions(self, a):
        """(dim of the matrix space, dim of the gauge group, their difference)."""
        a = self._check_dim(a)
        dim_e = sum(a[s] * a[t] for s, t in self.arrows)
        dim_g = sum(x * x for x in a)
        return dim_e, dim_g, dim_e - dim_g

    def flag_space_dimension(self, alphas):
        """Dimension of the space of (matrix, stable flag) pairs for a flag
        whose successive quotients, top first, have the given dimensions."""
        alphas = [self._check_dim(a) for a in alphas]
        gamma = tuple(sum(a[i] for a in alphas) for i in range(self.n))
        _, dim_g, _ = self.moduli_dimensions(gamma)
        total = dim_g
        for i in range(len(alphas)):
            for j in range(i, len(alphas)):
                total -= self.euler_form(alphas[i], alphas[j])
        return total

    # -- type recognition ----------------------------------------------------

    def _undirected_components(self):
        adj = {i: [] for i in range(self.n)}
        edge_count = 0
        has_loop = False
        multi = False
        seen_pairs = {}
        for s, t in self.arrows:
            if s == t:
                has_loop = True
                continue
            key = (min(s, t), max(s, t))
            seen_pairs[key] = seen_pairs.get(key, 0) + 1
            adj[s].append(t)
            adj[t].append(s)
            edge_count += 1
        multi = any(c > 1 for c in seen_pairs.values())
        comps = []
        todo = set(range(self.n))
        while todo:
            start = min(todo)
            stack = [start]
            comp = set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(adj[v])
            todo -= comp
            comps.append(sorted(comp))
        return comps, adj, seen_pairs, has_loop, multi

    def ade_components(self):
        """Classify each connected component of the underlying graph as a
        simply-laced Dynkin diagram; error when any component fails to match."""
        comps, adj, pairs, has_loop, multi = self._undirected_components()
        if has_loop or multi:
            raise ValueError("non-finite-type quiver")
        out = []
        for comp in comps:
            edges = sum(1 for (a, b) in pairs if a in comp)
            if edges != len(comp) - 1:
                raise ValueError("non-finite-type quiver")  # has a cycle
            degrees = {v: len(adj[v]) for v in comp}
            branch = [v for v in comp if degrees[v] >= 3]
            if any(degrees[v] > 3 for v in comp) or len(branch) > 1:
                raise ValueError("non-finite-type quiver")
            if not branch:
                out.append(("A", len(comp)))
                continue
            b = branch[0]
            arms = []
            for start in adj[b]:
                length = 1
                prev, cur = b, start
                while degrees[cur] == 2:
                    nxt = [w for w in adj[cur] if w != prev][0]
                    prev, cur = cur, nxt
                    length += 1
                arms.append(length)
            arms.sort()
            if arms[:2] == [1, 1]:
                out.append(("D", len(comp)))
            elif arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
                out.append(("E", len(comp)))
            else:
                raise ValueError("non-finite-type quiver")
        return out

    def is_finite_type(self):
        try:
            self.ade_components()
            return True
        except ValueError:
            return False

    def type_label(self):
        """'finite', 'affine', or 'wild', decided by the Tits form."""
        if self.is_finite_type():
            return "finite"
        units = [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]
        cartan = [[Fraction(self.symmetrized_form(units[i], units[j]))
                   for j in range(self.n)] for i in range(self.n)]
        if _is_psd(cartan):
            return "affine"
        return "wild"

    # -- roots ---------------------------------------------------------------

    def positive_roots(self):
        """All positive roots of the underlying diagram, sorted by total
        dimension and then lexicographically.  Finite type only."""
        self.ade_components()
        cartan = self.cartan_matrix()
        simples = [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]
        found = set(simples)
        frontier = list(simples)
        while frontier:
            alpha = frontier.pop()
            for i in range(self.n):
                pairing = sum(cartan[i][j] * alpha[j] for j in range(self.n))
                beta = tuple(alpha[j] - (pairing if j == i else 0) for j in range(self.n))
                if all(x >= 0 for x in beta) and any(beta) and beta not in found:
                    if self.tits_form(beta) == 1:
                        found.add(beta)
                        frontier.append(beta)
        return tuple(sorted(found, key=lambda r: (sum(r), r)))

    def kostant_count(self, g):
        """Number of multisets of positive roots summing to g."""
        g = self._check_dim(g)
        roots = self.positive_roots()
        counts = {tuple([0] * self.n): 1}
        for root in roots:
            new_counts = dict(counts)
            acc = {}
            for base, ways in counts.items():
                vec = base
                while True:
                    vec = tuple(v + r for v, r in zip(vec, root))
                    if any(v > gi for v, gi in zip(vec, g)):
                        break
                    acc[vec] = acc.get(vec, 0) + ways
            for vec, ways in acc.items():
                new_counts[vec] = new_counts.get(vec, 0) + ways
            counts = new_counts
        return counts.get(g, 0)

    # -- serialization -------------------------------------------------------

    def serialize(self):
        data = {
            "vertices": list(self.vertices),
            "arrows": [{"src": self.vertices[s], "tgt": self.vertices[t]}
                       for s, t in self.arrows],
        }
        if self.loops_allowed:
            data["loops_allowed"] = True
        return json.dumps(data, indent=2) + "\n"

    @staticmethod
    def parse(text):
        data = json.loads(text)
        if "vertices" not in data or "arrows" not in data:
            raise ValueError("quiver file needs 'vertices' and 'arrows'")
        arrows = [(a["src"], a["tgt"]) for a in data["arrows"]]
        return Quiver(data["vertices"], arrows, data.get("loops_allowed", False))

    @staticmethod
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            return Quiver.parse(fh.read())

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.serialize())

    def fingerprint(self):
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()[:12]

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return (self.vertices == other.vertices and self.arrows == other.arrows
                and self.loops_allowed == other.loops_allowed)

    def __hash__(self):
        return hash((self.vertices, self.arrows, self.loops_allowed))

    def __repr__(self):
        arrows = ", ".join(f"{self.vertices[s]}->{self.vertices[t]}" for s, t in self.arrows)
        return f"Quiver({'|'.join(self.vertices)}; {arrows})"


def _is_psd(matrix):
    """Positive semidefiniteness over the rationals, by checking that every
    principal minor is nonnegative (fine at <= 8 vertices)."""
    n = len(matrix)
    from itertools import combinations

    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            sub = [[matrix[i][j] for j in subset] for i in subset]
            if _det(sub) < 0:
                return False
    return True


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if m[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for row in range(col + 1, n):
            factor = m[row][col] * inv
            if factor:
                m[row] = [a - factor * b for a, b in zip(m[row], m[col])]
    return det


# -- stock quivers used throughout the tests and examples --------------------


def linear_quiver(n, name_prefix=""):
    """Type A_n with all arrows pointing i -> i+1."""
    vertices = [f"{name_prefix}{i}" for i in range(1, n + 1)]
    arrows = [(vertices[i], vertices[i + 1]) for i in range(n - 1)]
    return Quiver(vertices, arrows)


def kronecker_quiver():
    return Quiver(["1", "2"], [("1", "2"), ("1", "2")])


def jordan_quiver():
    return Quiver(["1"], [("1", "1")], loops_allowed=True)
