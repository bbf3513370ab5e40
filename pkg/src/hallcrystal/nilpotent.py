"""Doubled quiver points over a finite field and the crystal carried by
the irreducible components of the nilpotent locus.

A point assigns one matrix to every arrow of the doubled quiver.  The
moment condition at a vertex balances compositions in and out of it;
its solutions are unions of conormal spaces to the orbits of the
forward theory, so in finite type the components are labelled by iso
classes and sampled by fixing a forward representative and drawing the
backward maps from an exact kernel.  All string data is read off
generic samples: string lengths from image codimensions, the dual
string lengths from kernel dimensions, lowering by cutting a random
hyperplane through the image.  Selection among trials always prefers
the largest stratum, i.e. the smallest endomorphism algebra.
"""

import hashlib
import random
import warnings

from . import modp
from .canonical import _pairing_row, _weights_under
from .crystals import AbstractCrystal, WeightLattice, verify_axioms
from .reps import FqRep, IndecCatalog, ext_dim

DEFAULT_PRIME = 101
DEFAULT_TRIALS = 20

__all__ = [
    "DEFAULT_PRIME",
    "DEFAULT_TRIALS",
    "DoubledRep",
    "LambdaComponent",
    "LambdaPoint",
    "geometric_crystal",
    "moment_check",
    "nilpotency_check",
    "phi_star_vector",
    "phi_vector",
    "psi_embedding",
    "sample_conormal",
    "star_component",
    "tilde_f",
]

_CATALOGS = {}


def _catalog(quiver, p):
    key = (quiver.fingerprint(), p)
    if key not in _CATALOGS:
        _CATALOGS[key] = IndecCatalog(quiver, p)
    return _CATALOGS[key]


def _child_rng(seed, *parts):
    """Deterministic per-task generator; never the builtin hash."""
    text = "|".join(str(x) for x in (seed,) + parts)
    digest = hashlib.sha256(text.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


class DoubledRep:
    """Matrices on the doubled quiver: one per original arrow and one
    per reversal, over the p-element field.

    Forward matrices follow the representation convention (rows =
    target, columns = source); each backward matrix runs against its
    arrow, so bwd[a] has the transposed shape of fwd[a].
    """

    __slots__ = ("quiver", "p", "dims", "fwd", "bwd")

    def __init__(self, quiver, p, dims, fwd, bwd):
        self.quiver = quiver
        self.p = int(p)
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n or any(d < 0 for d in self.dims):
            raise ValueError("bad dimension vector")
        if len(fwd) != len(quiver.arrows) or len(bwd) != len(quiver.arrows):
            raise ValueError("need one matrix per arrow in each direction")
        fclean = []
        bclean = []
        for (s, t), f, b in zip(quiver.arrows, fwd, bwd):
            frows = [tuple(int(x) % self.p for x in row) for row in f]
            brows = [tuple(int(x) % self.p for x in row) for row in b]
            if len(frows) != self.dims[t] or any(len(r) != self.dims[s] for r in frows):
                raise ValueError("forward matrix shape mismatch")
            if len(brows) != self.dims[s] or any(len(r) != self.dims[t] for r in brows):
                raise ValueError("backward matrix shape mismatch")
            fclean.append(tuple(frows))
            bclean.append(tuple(brows))
        self.fwd = tuple(fclean)
        self.bwd = tuple(bclean)

    @staticmethod
    def zero(quiver, p, dims):
        dims = tuple(dims)
        fwd = [[[0] * dims[s] for _ in range(dims[t])] for s, t in quiver.arrows]
        bwd = [[[0] * dims[t] for _ in range(dims[s])] for s, t in quiver.arrows]
        return DoubledRep(quiver, p, dims, fwd, bwd)

    def total_dim(self):
        return sum(self.dims)

    def forward_rep(self):
        """The underlying representation along the original arrows."""
        return FqRep(self.quiver, self.p, self.dims, self.fwd)

    def star(self):
        """Transpose duality: every matrix flips across the arrow."""
        fwd = []
        bwd = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            ds, dt = self.dims[s], self.dims[t]
            fwd.append([[self.bwd[a][c][r] for c in range(ds)] for r in range(dt)])
            bwd.append([[self.fwd[a][c][r] for c in range(dt)] for r in range(ds)])
        return DoubledRep(self.quiver, self.p, self.dims, fwd, bwd)

    def moment_defect(self):
        """Per-vertex value of the balancing condition."""
        out = []
        for i in range(self.quiver.n):
            d = self.dims[i]
            acc = modp.zero_matrix(d, d)
            for a, (s, t) in enumerate(self.quiver.arrows):
                if s == i:
                    acc = modp.mat_add(acc, modp.mat_mul(self.bwd[a], self.fwd[a], self.p), self.p)
                if t == i:
                    acc = modp.mat_sub(acc, modp.mat_mul(self.fwd[a], self.bwd[a], self.p), self.p)
            out.append(acc)
        return out

    def __repr__(self):
        return "DoubledRep(dims=%r, p=%d)" % (self.dims, self.p)


LambdaPoint = DoubledRep


def moment_check(point):
    """True when the balancing condition vanishes at every vertex."""
    return all(
        all(all(x == 0 for x in row) for row in block)
        for block in point.moment_defect()
    )


def nilpotency_check(point):
    """True when all doubled-path compositions of twice the total
    dimension vanish, tested through the one big endomorphism they sum
    up to."""
    total = point.total_dim()
    if total == 0:
        return True
    offsets = []
    acc = 0
    for d in point.dims:
        offsets.append(acc)
        acc += d
    big = [[0] * total for _ in range(total)]

    def place(block, r0, c0):
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                big[r0 + r][c0 + c] = (big[r0 + r][c0 + c] + x) % point.p

    for a, (s, t) in enumerate(point.quiver.arrows):
        place(point.fwd[a], offsets[t], offsets[s])
        place(point.bwd[a], offsets[s], offsets[t])
    power = modp.mat_pow(big, 2 * total, point.p)
    return all(all(x == 0 for x in row) for row in power)


# ---------------------------------------------------------------------------
# Conormal sampling


def _conormal_data(quiver, label, p):
    """Forward representative plus a basis of the allowed backward maps.

    The backward maps solving the balancing condition at a fixed
    forward point form a linear space whose dimension must equal the
    self-extension dimension of the representative; anything else is a
    hard error.
    """
    cat = _catalog(quiver, p)
    rep = cat.realize(label)
    dims = rep.dims
    offsets = []
    acc = 0
    for s, t in quiver.arrows:
        offsets.append(acc)
        acc += dims[s] * dims[t]
    nvars = acc
    rows = []
    for i in range(quiver.n):
        if dims[i] == 0:
            continue
        for r in range(dims[i]):
            for c in range(dims[i]):
                row = [0] * nvars
                for a, (s, t) in enumerate(quiver.arrows):
                    x = rep.mats[a]
                    if s == i:
                        # + (bwd_a fwd_a)[r][c]
                        for k in range(dims[t]):
                            row[offsets[a] + r * dims[t] + k] = (
                                row[offsets[a] + r * dims[t] + k] + x[k][c]
                            ) % p
                    if t == i:
                        # - (fwd_a bwd_a)[r][c]
                        for k in range(dims[s]):
                            row[offsets[a] + k * dims[i] + c] = (
                                row[offsets[a] + k * dims[i] + c] - x[r][k]
                            ) % p
                if any(row):
                    rows.append(row)
    if not rows:
        rows = [[0] * nvars] if nvars else []
    basis = modp.kernel_basis(rows, p) if nvars else []
    expected = ext_dim(rep, rep)
    if len(basis) != expected:
        raise RuntimeError(
            "conormal fiber dimension %d does not match the self-extension count %d"
            % (len(basis), expected)
        )
    return rep, basis, offsets, nvars


def _draw_point(quiver, rep, basis, offsets, nvars, rng):
    p = rep.p
    dims = rep.dims
    vec = [0] * nvars
    for b in basis:
        c = rng.randrange(p)
        if c:
            for k, x in enumerate(b):
                if x:
                    vec[k] = (vec[k] + c * x) % p
    bwd = []
    for a, (s, t) in enumerate(quiver.arrows):
        mat = [
            [vec[offsets[a] + r * dims[t] + c] for c in range(dims[t])]
            for r in range(dims[s])
        ]
        bwd.append(mat)
    point = DoubledRep(quiver, p, dims, rep.mats, bwd)
    if not moment_check(point):
        raise RuntimeError("sampled point violates the balancing condition")
    if not nilpotency_check(point):
        raise RuntimeError("sampled point is not nilpotent")
    return point


def sample_conormal(quiver, label, p=DEFAULT_PRIME, seed=0):
    """One random point with forward part realizing the label."""
    if not quiver.is_finite_type():
        raise ValueError("conormal sampling requires finite type")
    rep, basis, offsets, nvars = _conormal_data(quiver, label, p)
    rng = _child_rng(seed, "conormal", quiver.fingerprint(), p, label.cache_key())
    return _draw_point(quiver, rep, basis, offsets, nvars, rng)


def _sample_batch(quiver, label, p, trials, seed, tag):
    rep, basis, offsets, nvars = _conormal_data(quiver, label, p)
    rng = _child_rng(seed, tag, quiver.fingerprint(), p, label.cache_key())
    return [_draw_point(quiver, rep, basis, offsets, nvars, rng) for _ in range(trials)]


def _entering_codims(point):
    """Codimension at each vertex of the joint image of the doubled
    arrows pointing into it."""
    out = []
    for i in range(point.quiver.n):
        d = point.dims[i]
        if d == 0:
            out.append(0)
            continue
        cols = []
        for a, (s, t) in enumerate(point.quiver.arrows):
            if t == i:
                cols.append(point.fwd[a])
            if s == i:
                cols.append(point.bwd[a])
        rows = [sum((list(m[r]) for m in cols), []) for r in range(d)]
        rank = modp.rank(rows, point.p) if rows and rows[0] else 0
        out.append(d - rank)
    return tuple(out)


# ---------------------------------------------------------------------------
# Components and string data


class LambdaComponent:
    """Irreducible component of the nilpotent locus, in finite type:
    the closure of the conormal space over one forward orbit.

    Carries the sampling parameters and caches the two string-length
    vectors."""

    def __init__(self, quiver, label, p=DEFAULT_PRIME, trials=DEFAULT_TRIALS, seed=0):
        if not quiver.is_finite_type():
            raise ValueError("component labels require finite type")
        self.quiver = quiver
        self.label = label
        self.p = p
        self.trials = trials
        self.seed = seed
        self._phi = None
        self._phi_star = None

    def dim_vector(self):
        return _catalog(self.quiver, self.p).dim_vector(self.label)

    def display(self):
        return _catalog(self.quiver, self.p).display(self.label)

    def phi(self):
        return phi_vector(self)

    def phi_star(self):
        return phi_star_vector(self)

    def star(self):
        return star_component(self)

    def lower(self, i):
        return tilde_f(self, i)

    def __eq__(self, other):
        if not isinstance(other, LambdaComponent):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.label == other.label
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.label, self.p))

    def __repr__(self):
        return "LambdaComponent(%s)" % self.display()


def _min_codims(samples, transform=None):
    per_sample = []
    for s in samples:
        if transform is not None:
            s = transform(s)
        per_sample.append(_entering_codims(s))
    n = len(per_sample[0])
    mins = tuple(min(row[i] for row in per_sample) for i in range(n))
    hits = min(
        sum(1 for row in per_sample if row[i] == mins[i]) for i in range(n)
    )
    if len(per_sample) >= 8 and hits * 4 <= len(per_sample):
        warnings.warn("sampling unstable: the generic stratum was rarely hit")
    return mins


def phi_vector(component, p=None, trials=None):
    """String lengths: generic codimension at each vertex of the image
    of the doubled arrows entering it, minimized over fresh samples."""
    p = component.p if p is None else p
    trials = component.trials if trials is None else trials
    cached = p == component.p and trials == component.trials
    if cached and component._phi is not None:
        return component._phi
    samples = _sample_batch(
        component.quiver, component.label, p, trials, component.seed, "phi"
    )
    mins = _min_codims(samples)
    if cached:
        component._phi = mins
    return mins


def phi_star_vector(component, p=None, trials=None):
    """Dual string lengths, read from the transposed samples."""
    p = component.p if p is None else p
    trials = component.trials if trials is None else trials
    cached = p == component.p and trials == component.trials
    if cached and component._phi_star is not None:
        return component._phi_star
    samples = _sample_batch(
        component.quiver, component.label, p, trials, component.seed, "phistar"
    )
    mins = _min_codims(samples, transform=lambda s: s.star())
    if cached:
        component._phi_star = mins
    return mins


def _identify_best(catalog, labels):
    """The label of the largest stratum observed: minimal endomorphism
    dimension, which must single out one label."""
    if not labels:
        raise RuntimeError("unstable: no sample landed in the generic stratum")
    scored = {}
    for label in labels:
        scored[label] = catalog.end_dim(label)
    best = min(scored.values())
    winners = [label for label, v in scored.items() if v == best]
    if len(winners) != 1:
        raise RuntimeError("unstable: tied maximal strata %r" % (sorted(w.cache_key() for w in winners),))
    return winners[0]


def _basis_complement(columns, d, p):
    """Extend independent columns to a basis with standard vectors."""
    rows = [list(c) for c in columns]
    full = list(rows)
    for k in range(d):
        e = [1 if j == k else 0 for j in range(d)]
        if modp.rank(full + [e], p) > modp.rank(full, p):
            full.append(e)
        if len(full) == d:
            break
    return full


def _cut_hyperplane(point, i, rng):
    """Restrict to a random hyperplane through the entering image at i.

    Entering maps are rewritten in coordinates of the hyperplane,
    leaving maps are restricted to it; the balancing condition survives
    exactly, which is re-checked."""
    quiver = point.quiver
    p = point.p
    d = point.dims[i]
    cols = []
    for a, (s, t) in enumerate(quiver.arrows):
        if t == i:
            cols.append(point.fwd[a])
        if s == i:
            cols.append(point.bwd[a])
    image_rows = [sum((list(m[r]) for m in cols), []) for r in range(d)]
    if image_rows and image_rows[0]:
        ann = modp.kernel_basis(modp.transpose(image_rows), p)
    else:
        ann = modp.kernel_basis([[0] * d], p)
    if not ann:
        raise RuntimeError("no hyperplane contains a full image")
    cov = None
    while cov is None or not any(cov):
        cov = [0] * d
        for b in ann:
            c = rng.randrange(p)
            if c:
                for k, x in enumerate(b):
                    cov[k] = (cov[k] + c * x) % p
    basis = modp.kernel_basis([cov], p)
    full = _basis_complement(basis, d, p)
    B = modp.transpose(full)
    Binv = modp.inverse(B, p)
    P = Binv[: d - 1]
    J = [row[: d - 1] for row in B]
    dims = tuple(x - 1 if j == i else x for j, x in enumerate(point.dims))
    fwd = []
    bwd = []
    for a, (s, t) in enumerate(quiver.arrows):
        f = [list(r) for r in point.fwd[a]]
        b = [list(r) for r in point.bwd[a]]
        if t == i:
            f = modp.mat_mul(P, f, p)
            b = modp.mat_mul(b, J, p)
        if s == i:
            f = modp.mat_mul(f, J, p)
            b = modp.mat_mul(P, b, p)
        fwd.append(f)
        bwd.append(b)
    cut = DoubledRep(quiver, p, dims, fwd, bwd)
    if not moment_check(cut):
        raise RuntimeError("restriction left the balanced locus")
    return cut


def tilde_f(component, i, p=None, trials=None):
    """Lowering at i: cut a generic hyperplane through the entering
    image of a generic sample and name the component of the result."""
    p = component.p if p is None else p
    trials = component.trials if trials is None else trials
    quiver = component.quiver
    phi = phi_vector(component, p, trials)
    if phi[i] == 0:
        return None
    cat = _catalog(quiver, p)
    samples = _sample_batch(quiver, component.label, p, trials, component.seed, "lower%d" % i)
    rng = _child_rng(component.seed, "cut", quiver.fingerprint(), p, component.label.cache_key(), i)
    seen = []
    for s in samples:
        if _entering_codims(s)[i] != phi[i]:
            continue
        cut = _cut_hyperplane(s, i, rng)
        seen.append(cat.identify(cut.forward_rep()))
    best = _identify_best(cat, seen)
    return LambdaComponent(quiver, best, p, trials, component.seed)


def star_component(component, p=None, trials=None):
    """The component holding the transposes of generic samples."""
    p = component.p if p is None else p
    trials = component.trials if trials is None else trials
    quiver = component.quiver
    cat = _catalog(quiver, p)
    samples = _sample_batch(quiver, component.label, p, trials, component.seed, "star")
    seen = []
    for s in samples:
        st = s.star()
        if not moment_check(st) or not nilpotency_check(st):
            raise RuntimeError("duality left the nilpotent locus")
        seen.append(cat.identify(st.forward_rep()))
    best = _identify_best(cat, seen)
    return LambdaComponent(quiver, best, p, trials, component.seed)


def psi_embedding(component, i, p=None, trials=None):
    """Pair (n, C') with n the dual string length at i and C' the
    n-fold starred lowering: transpose, lower n times, transpose."""
    n = phi_star_vector(component, p, trials)[i]
    if n == 0:
        return 0, component
    cur = star_component(component, p, trials)
    for _ in range(n):
        cur = tilde_f(cur, i, p, trials)
        if cur is None:
            raise RuntimeError("dual string ended before its declared length")
    return n, star_component(cur, p, trials)


# ---------------------------------------------------------------------------
# The crystal on components


def geometric_crystal(quiver, weight_bound, p=DEFAULT_PRIME, trials=DEFAULT_TRIALS, seed=0):
    """Crystal on component labels for all dimension vectors within the
    bound.

    Lowering arrows come from the hyperplane construction; raising
    arrows are their reverses, so lowering must biject the positive
    strata above each weight onto everything at that weight whenever
    the higher weight is inside the window.  The assembled crystal is
    checked against the axioms before being returned.
    """
    if not quiver.is_finite_type():
        raise ValueError("component crystals require finite type")
    cat = _catalog(quiver, p)
    weights = _weights_under(quiver, weight_bound)
    allowed = set(weights)
    lattice = WeightLattice(quiver.cartan_matrix())
    comps = {}
    by_weight = {}
    for gamma in weights:
        labels = sorted(cat.iso_classes_of_dim(gamma), key=lambda m: m.cache_key())
        by_weight[gamma] = labels
        for label in labels:
            comps[label] = LambdaComponent(quiver, label, p, trials, seed)
    wt = {}
    eps = {}
    phi = {}
    f_edges = {}
    e_edges = {}
    provisional = set()
    for gamma in weights:
        for label in by_weight[gamma]:
            comp = comps[label]
            ph = phi_vector(comp)
            phi[label] = ph
            eps[label] = tuple(
                ph[i] - _pairing_row(quiver, i, gamma) for i in range(quiver.n)
            )
            wt[label] = lattice.from_root_coords(gamma)
            for i in range(quiver.n):
                up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
                if up not in allowed:
                    provisional.add(label)
            for i in range(quiver.n):
                if ph[i] == 0:
                    continue
                target = tilde_f(comp, i)
                f_edges[(label, i)] = target.label
                key = (target.label, i)
                if key in e_edges:
                    raise RuntimeError("lowering is not injective across strata")
                e_edges[key] = label
    for gamma in weights:
        for label in by_weight[gamma]:
            for i in range(quiver.n):
                up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
                if up in allowed and (label, i) not in e_edges:
                    raise RuntimeError(
                        "no component lowers onto %s at color %d" % (cat.display(label), i)
                    )
    vertices = [label for gamma in weights for label in by_weight[gamma]]
    vertices.sort(key=lambda m: (wt[m], m.cache_key()))
    crystal = AbstractCrystal(
        lattice, vertices, wt, eps, phi, e_edges, f_edges, provisional
    )
    report = verify_axioms(crystal)
    if not report.ok:
        raise RuntimeError("component crystal fails the axioms: %s" % sorted(report.failures()))
    return crystal
