"""Doubled-quiver points, conormal sampling, and the component crystal."""

import pytest

from hallcrystal.canonical import crystal_graph, lusztig_graph
from hallcrystal.crystals import binfty_characterization_check, iso_test, verify_axioms
from hallcrystal.hall import HallAlgebra
from hallcrystal.nilpotent import (
    DEFAULT_PRIME,
    DEFAULT_TRIALS,
    DoubledRep,
    LambdaComponent,
    _catalog,
    _identify_best,
    geometric_crystal,
    moment_check,
    nilpotency_check,
    phi_star_vector,
    phi_vector,
    psi_embedding,
    sample_conormal,
    star_component,
    tilde_f,
)
from hallcrystal.quivers import Quiver, jordan_quiver, kronecker_quiver, linear_quiver
from hallcrystal.reps import ext_dim


@pytest.fixture(scope="module")
def a2():
    return linear_quiver(2)


@pytest.fixture(scope="module")
def cat(a2):
    return _catalog(a2, DEFAULT_PRIME)


@pytest.fixture(scope="module")
def named(a2, cat):
    out = {"S1": cat.simple_class(0), "S2": cat.simple_class(1)}
    for m in cat.iso_classes_of_dim((1, 1)):
        out[cat.display(m)] = m
    out["0"] = cat.iso_classes_of_dim((0, 0))[0]
    return out


@pytest.fixture(scope="module")
def geo(a2):
    return geometric_crystal(a2, 4)


def comp(a2, label):
    return LambdaComponent(a2, label)


class TestDoubledRep:
    def test_zero_point(self, a2):
        pt = DoubledRep.zero(a2, 7, (2, 3))
        assert pt.dims == (2, 3)
        assert pt.fwd[0] == ((0, 0), (0, 0), (0, 0))
        assert pt.total_dim() == 5

    def test_shape_validation(self, a2):
        with pytest.raises(ValueError):
            DoubledRep(a2, 7, (1, 1), [[[1], [2]]], [[[0]]])
        with pytest.raises(ValueError):
            DoubledRep(a2, 7, (1, 1), [[[1]]], [[[0], [0]]])
        with pytest.raises(ValueError):
            DoubledRep(a2, 7, (1,), [[[1]]], [[[0]]])

    def test_star_is_an_involution_on_points(self, a2):
        pt = DoubledRep(a2, 7, (2, 1), [[[1, 2]]], [[[3], [4]]])
        back = pt.star().star()
        assert back.fwd == pt.fwd and back.bwd == pt.bwd

    def test_star_transposes_across_the_arrow(self, a2):
        pt = DoubledRep(a2, 7, (2, 1), [[[1, 2]]], [[[3], [4]]])
        st = pt.star()
        assert st.fwd == (((3, 4),),)
        assert st.bwd == (((1,), (2,)),)

    def test_forward_rep_keeps_the_matrices(self, a2):
        pt = DoubledRep(a2, 7, (1, 1), [[[5]]], [[[0]]])
        assert pt.forward_rep().mats[0] == ((5,),)


class TestMomentCheck:
    def test_zero_point_passes(self, a2):
        assert moment_check(DoubledRep.zero(a2, 7, (2, 2)))

    def test_nonzero_product_fails(self, a2):
        pt = DoubledRep(a2, 101, (1, 1), [[[3]]], [[[5]]])
        assert not moment_check(pt)

    def test_one_sided_point_passes(self, a2):
        pt = DoubledRep(a2, 101, (1, 1), [[[3]]], [[[0]]])
        assert moment_check(pt)

    def test_defect_is_per_vertex(self, a2):
        pt = DoubledRep(a2, 101, (1, 1), [[[3]]], [[[5]]])
        defect = pt.moment_defect()
        assert defect[0] == [[15]] and defect[1] == [[101 - 15]]


class TestNilpotencyCheck:
    def test_zero_point(self, a2):
        assert nilpotency_check(DoubledRep.zero(a2, 7, (3, 2)))

    def test_invertible_loop_fails(self):
        j = jordan_quiver()
        pt = DoubledRep(j, 101, (2,), [[[1, 0], [0, 1]]], [[[0, 0], [0, 0]]])
        assert not nilpotency_check(pt)

    def test_nilpotent_loop_passes(self):
        j = jordan_quiver()
        pt = DoubledRep(j, 101, (2,), [[[0, 1], [0, 0]]], [[[0, 0], [0, 0]]])
        assert nilpotency_check(pt)

    def test_empty_point(self, a2):
        assert nilpotency_check(DoubledRep.zero(a2, 7, (0, 0)))


class TestConormalSampling:
    def test_rigid_classes_get_zero_backward_maps(self, a2, named):
        """No self-extensions leaves only the zero covector."""
        for name in ("S1", "S2", "I12"):
            pt = sample_conormal(a2, named[name], seed=5)
            assert all(all(x == 0 for row in m for x in row) for m in pt.bwd)

    def test_split_class_gets_a_scalar_on_the_reversed_arrow(self, a2, named):
        hits = 0
        for seed in range(8):
            pt = sample_conormal(a2, named["S1+S2"], seed=seed)
            assert all(x == 0 for row in pt.fwd[0] for x in row)
            if any(x for row in pt.bwd[0] for x in row):
                hits += 1
        assert hits >= 6

    def test_samples_satisfy_both_membership_conditions(self, a2, named):
        for name, m in named.items():
            pt = sample_conormal(a2, m, seed=11)
            assert moment_check(pt)
            assert nilpotency_check(pt)

    def test_backward_space_matches_self_extension_count(self, a2, cat, named):
        rep = cat.realize(named["S1+S2"])
        assert ext_dim(rep, rep) == 1
        pt = sample_conormal(a2, named["S1+S2"], seed=1)
        assert sum(1 for m in pt.bwd for row in m for x in row) == 1

    def test_deterministic_in_the_seed(self, a2, named):
        a = sample_conormal(a2, named["S1+S2"], seed=4)
        b = sample_conormal(a2, named["S1+S2"], seed=4)
        assert a.bwd == b.bwd

    def test_infinite_type_rejected(self, named):
        with pytest.raises(ValueError):
            sample_conormal(kronecker_quiver(), named["S1"])


class TestStringData:
    def test_phi_anchors(self, a2, named):
        assert phi_vector(comp(a2, named["S1"])) == (1, 0)
        assert phi_vector(comp(a2, named["S2"])) == (0, 1)
        assert phi_vector(comp(a2, named["I12"])) == (1, 0)
        assert phi_vector(comp(a2, named["S1+S2"])) == (0, 1)

    def test_dual_anchors(self, a2, named):
        assert phi_star_vector(comp(a2, named["I12"])) == (0, 1)
        assert phi_star_vector(comp(a2, named["S1+S2"])) == (1, 0)

    def test_nonzero_weight_has_a_positive_string(self, a2, cat):
        for gamma in [(1, 0), (1, 1), (2, 1), (2, 2)]:
            for label in cat.iso_classes_of_dim(gamma):
                assert max(phi_vector(comp(a2, label))) >= 1

    def test_phi_drops_by_one_along_lowering(self, a2, geo):
        for label in geo.vertices:
            c = comp(a2, label)
            ph = phi_vector(c)
            for i in range(2):
                if ph[i] >= 1:
                    assert phi_vector(tilde_f(c, i))[i] == ph[i] - 1

    def test_dual_length_is_the_length_of_the_transpose(self, a2, geo):
        for label in geo.vertices:
            c = comp(a2, label)
            assert phi_star_vector(c) == phi_vector(star_component(c))


class TestLowering:
    def test_split_class_lowers_to_a_simple(self, a2, named):
        down = tilde_f(comp(a2, named["S1+S2"]), 1)
        assert down.label == named["S1"]

    def test_simple_lowers_to_the_origin(self, a2, named):
        down = tilde_f(comp(a2, named["S1"]), 0)
        assert down.label == named["0"]

    def test_zero_string_gives_none(self, a2, named):
        assert tilde_f(comp(a2, named["S1"]), 1) is None

    def test_string_terminates_after_its_length(self, a2, cat):
        label = cat.iso_classes_of_dim((2, 0))[0]
        c = comp(a2, label)
        assert phi_vector(c)[0] == 2
        c = tilde_f(c, 0)
        c = tilde_f(c, 0)
        assert tilde_f(c, 0) is None

    def test_tied_strata_are_rejected(self, a2, cat, named):
        with pytest.raises(RuntimeError):
            _identify_best(cat, [named["S1"], named["S2"]])
        with pytest.raises(RuntimeError):
            _identify_best(cat, [])


class TestStar:
    def test_star_swaps_the_middle_components(self, a2, named):
        assert star_component(comp(a2, named["S1+S2"])).label == named["I12"]
        assert star_component(comp(a2, named["I12"])).label == named["S1+S2"]

    def test_star_fixes_simples(self, a2, named):
        assert star_component(comp(a2, named["S1"])).label == named["S1"]

    def test_involution_on_all_components(self, a2, geo):
        for label in geo.vertices:
            assert star_component(star_component(comp(a2, label))).label == label


class TestPsiEmbedding:
    def test_simple_maps_to_the_origin(self, a2, named):
        n, cprime = psi_embedding(comp(a2, named["S1"]), 0)
        assert n == 1 and cprime.label == named["0"]

    def test_zero_dual_length_is_the_identity(self, a2, named):
        n, cprime = psi_embedding(comp(a2, named["S1"]), 1)
        assert n == 0 and cprime.label == named["S1"]

    def test_weight_bookkeeping(self, a2, cat, geo):
        """The second slot drops exactly n copies of the simple root."""
        for label in geo.vertices:
            before = cat.dim_vector(label)
            for i in range(2):
                n, cprime = psi_embedding(comp(a2, label), i)
                after = cat.dim_vector(cprime.label)
                assert all(
                    b - (n if j == i else 0) == a
                    for j, (b, a) in enumerate(zip(before, after))
                )


class TestGeometricCrystal:
    def test_defaults(self):
        assert DEFAULT_PRIME == 101 and DEFAULT_TRIALS == 20

    def test_rank_one_is_a_single_string(self):
        g = geometric_crystal(linear_quiver(1), 3)
        assert len(g.vertices) == 4
        assert sorted(g.wt_of(v) for v in g.vertices) == [(0,), (2,), (4,), (6,)]
        bottom = [v for v in g.vertices if g.wt_of(v) == (0,)][0]
        chain = 0
        cur = bottom
        while g.e(cur, 0) is not None:
            cur = g.e(cur, 0)
            chain += 1
        assert chain == 3

    def test_counts_match_the_flag_counting_route(self, a2, cat, geo):
        alg = HallAlgebra(a2)
        from collections import Counter

        per_weight = Counter(cat.dim_vector(v) for v in geo.vertices)
        for gamma, count in per_weight.items():
            assert count == a2.kostant_count(gamma)
        assert len(geo.vertices) == 22

    def test_matches_the_algebraic_crystal_vertexwise(self, a2, geo):
        alg = HallAlgebra(a2)
        gb = crystal_graph(alg, 4)
        assert set(geo.vertices) == set(gb.vertices())
        for m in gb.vertices():
            for i in range(2):
                assert gb.f_target(m, i) == geo.f(m, i)
                assert gb.e_target(m, i) == geo.e(m, i)

    def test_three_routes_are_pairwise_isomorphic(self, a2, geo):
        alg = HallAlgebra(a2)
        ab = crystal_graph(alg, 4).to_abstract()
        lz = lusztig_graph(alg, 4).to_abstract()
        assert iso_test(geo, ab)
        assert iso_test(geo, lz)
        assert iso_test(ab, lz)

    def test_axioms_hold(self, geo):
        assert verify_axioms(geo).ok

    def test_stable_under_prime_and_seed(self, a2, geo):
        alt = geometric_crystal(a2, 4, p=211, trials=12, seed=9)
        assert set(alt.vertices) == set(geo.vertices)
        assert all(
            alt.f(v, i) == geo.f(v, i) for v in geo.vertices for i in range(2)
        )

    def test_characterization_with_the_dual_strings(self, a2, geo):
        psi = {}
        for i in range(2):
            table = {}
            for label in geo.vertices:
                n, cprime = psi_embedding(comp(a2, label), i)
                table[label] = (n, cprime.label)
            psi[i] = table
        assert binfty_characterization_check(geo, psi).ok

    def test_reversed_orientation(self):
        rev = Quiver(("1", "2"), (("2", "1"),))
        g = geometric_crystal(rev, 3)
        ab = crystal_graph(HallAlgebra(rev), 3).to_abstract()
        assert iso_test(g, ab)

    def test_rank_three(self):
        a3 = linear_quiver(3)
        g = geometric_crystal(a3, 3)
        ab = crystal_graph(HallAlgebra(a3), 3).to_abstract()
        assert len(g.vertices) == len(ab.vertices)
        assert iso_test(g, ab)

    def test_infinite_type_rejected(self):
        with pytest.raises(ValueError):
            geometric_crystal(kronecker_quiver(), 2)
