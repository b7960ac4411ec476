import itertools
from fractions import Fraction as F

import pytest

from famkit.boolalg import Algebra, GroundSet, SetElem, generate_algebra
from famkit.errors import DegenerateFamError, InputError, NotInAlgebraError
from famkit.fam import (
    Fam,
    classify,
    filter_fam,
    has_uap,
    point_mass,
    pushforward,
    restrict,
    uniform_fam,
    uniformly_supported,
)


def elem(ground, *indices):
    return SetElem.from_indices(ground, indices)


class TestEval:
    def test_empty_and_total(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, SetElem.full(g))
        assert fam(SetElem.empty(g)) == 0
        assert fam(SetElem.full(g)) == fam.total == 1

    def test_uniform_values(self):
        # Xi^u(x) = |x cap u| / |u| on the full power set
        g = GroundSet.of_size(10)
        fam = uniform_fam(g, SetElem.full(g))
        assert fam(elem(g, 0, 1, 2)) == F(3, 10)

    def test_not_in_algebra(self):
        g = GroundSet.of_size(4)
        alg = generate_algebra(g, [elem(g, 0, 1)])
        fam = Fam(alg, [F(1, 2), F(1, 2)])
        with pytest.raises(NotInAlgebraError):
            fam(elem(g, 0))

    def test_additivity_exhaustive(self):
        g = GroundSet.of_size(6)
        alg = generate_algebra(g, [elem(g, 0, 1), elem(g, 2), elem(g, 3, 4)])
        fam = Fam(alg, {a: F(i + 1, 7) for i, a in enumerate(alg.atoms)})
        elems = list(alg.elements())
        for x, y in itertools.product(elems, repeat=2):
            if x.disjoint(y):
                assert fam(x | y) == fam(x) + fam(y)

    def test_negative_weight_rejected(self):
        g = GroundSet.of_size(2)
        with pytest.raises(InputError):
            Fam(Algebra.power_set(g), [F(-1), F(2)])


class TestUniformFam:
    def test_full_support(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, SetElem.full(g))
        for i in range(4):
            assert fam(SetElem.singleton(g, i)) == F(1, 4)

    def test_point_mass(self):
        g = GroundSet.of_size(3)
        fam = uniform_fam(g, elem(g, 0))
        assert fam(elem(g, 0)) == 1
        assert fam(elem(g, 1, 2)) == 0

    def test_partial_support(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, elem(g, 0, 1))
        assert fam(elem(g, 0, 2)) == F(1, 2)

    def test_empty_support_rejected(self):
        g = GroundSet.of_size(3)
        with pytest.raises(InputError):
            uniform_fam(g, SetElem.empty(g))


class TestFilterFam:
    def test_principal_at_atom(self):
        g = GroundSet.of_size(4)
        alg = Algebra.power_set(g)
        fam = filter_fam(alg, elem(g, 2))
        # eval(b) = 1 iff the atom is below b; here <F> is the whole power set
        assert fam.algebra == alg
        for bits in range(16):
            b = SetElem(g, bits)
            assert fam(b) == (1 if 2 in b else 0)

    def test_whole_space_generator(self):
        g = GroundSet.of_size(3)
        fam = filter_fam(Algebra.power_set(g), SetElem.full(g))
        assert fam.algebra.atoms == (SetElem.full(g),)
        assert fam.total == 1

    def test_generated_filter_on_subalgebra(self):
        g = GroundSet.of_size(4)
        alg = Algebra(g, [elem(g, 0), elem(g, 1), elem(g, 2, 3)])
        fam = filter_fam(alg, elem(g, 2, 3))
        assert fam(elem(g, 2, 3)) == 1
        assert fam(elem(g, 0)) == 0
        assert fam(elem(g, 0, 1)) == 0

    def test_empty_intersection_rejected(self):
        g = GroundSet.of_size(4)
        alg = generate_algebra(g, [elem(g, 0, 1)])
        with pytest.raises(InputError):
            filter_fam(alg, [elem(g, 0, 1), elem(g, 2, 3)])


class TestPushforward:
    def test_identity(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, elem(g, 0, 1))
        out = pushforward(fam, list(range(4)), g)
        assert out.algebra == fam.algebra
        assert out.weights == fam.weights

    def test_paper_example_collapse(self):
        # uniform on ten points, h(0)=0 and h(k)=1 otherwise
        gx = GroundSet.of_size(10)
        gy = GroundSet.of_size(4)
        fam = uniform_fam(gx, SetElem.full(gx))
        out = pushforward(fam, [0] + [1] * 9, gy)
        assert out(elem(gy, 0)) == F(1, 10)
        assert out(elem(gy, 1)) == F(9, 10)
        assert out(elem(gy, 2)) == 0

    def test_constant_map(self):
        gx = GroundSet.of_size(5)
        gy = GroundSet.of_size(3)
        fam = uniform_fam(gx, elem(gx, 0, 1, 2))
        out = pushforward(fam, [2] * 5, gy)
        assert out(elem(gy, 2)) == 1
        assert out.total == fam.total

    def test_injective_values_match(self):
        # pulling the pushforward back along an injective h reproduces the values
        gx = GroundSet.of_size(4)
        gy = GroundSet.of_size(5)
        h = [3, 0, 2, 1]
        fam = Fam(Algebra.power_set(gx), [F(1, 8), F(3, 8), F(1, 4), F(1, 4)])
        out = pushforward(fam, h, gy)
        for bits in range(16):
            b = SetElem(gx, bits)
            image = SetElem.from_indices(gy, (h[x] for x in b.indices()))
            assert out(image) == fam(b)


class TestRestrict:
    def test_restrict_to_full(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, SetElem.full(g))
        out = restrict(fam, SetElem.full(g))
        assert out.total == 1 and out.algebra.atom_count == 4

    def test_restrict_uniform_to_half(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, SetElem.full(g))
        out = restrict(fam, elem(g, 0, 1))
        assert out.total == F(1, 2)
        assert all(w == F(1, 4) for w in out.weights)

    def test_restrict_point_mass_away(self):
        g = GroundSet.of_size(3)
        fam = point_mass(g, 0)
        out = restrict(fam, elem(g, 1, 2))
        assert out.total == 0

    def test_restrict_rejects_non_member(self):
        g = GroundSet.of_size(4)
        alg = generate_algebra(g, [elem(g, 0, 1)])
        fam = Fam(alg, [F(1, 2), F(1, 2)])
        with pytest.raises(NotInAlgebraError):
            restrict(fam, elem(g, 0))
        with pytest.raises(InputError):
            restrict(fam, SetElem.empty(g))


class TestClassify:
    def test_uniform_is_probability_and_sp_on_support(self):
        g = GroundSet.of_size(3)
        fam = uniform_fam(g, SetElem.full(g))
        flags = classify(fam)
        assert flags.probability and flags.strictly_positive
        assert not flags.free and not flags.finite_sets_null

    def test_zero_fam_is_free(self):
        g = GroundSet.of_size(3)
        fam = Fam(Algebra.power_set(g), [0, 0, 0])
        flags = classify(fam)
        assert flags.free and flags.finite_sets_null and not flags.probability

    def test_point_mass_not_free(self):
        g = GroundSet.of_size(3)
        assert not classify(point_mass(g, 1)).free

    def test_free_requires_singleton_atoms(self):
        g = GroundSet.of_size(4)
        alg = generate_algebra(g, [elem(g, 0, 1)])
        fam = Fam(alg, [0, 0])
        flags = classify(fam)
        assert flags.finite_sets_null and not flags.free


class TestUniformlySupported:
    def test_uniform_fam_witness(self):
        g = GroundSet.of_size(5)
        u = elem(g, 0, 2, 4)
        witness = uniformly_supported(uniform_fam(g, u))
        assert witness is not None and witness.d == 3

    def test_point_mass_d1(self):
        g = GroundSet.of_size(4)
        witness = uniformly_supported(point_mass(g, 2))
        assert witness is not None and witness.d == 1

    def test_third_two_thirds_counterexample(self):
        # Xi({0}) = 1/3, Xi({1}) = 2/3 forces l = 2 on a singleton
        g = GroundSet.of_size(4)
        fam = Fam(Algebra.power_set(g), [F(1, 3), F(2, 3), 0, 0])
        assert uniformly_supported(fam) is None

    def test_non_singleton_atoms_allow_support(self):
        g = GroundSet.of_size(4)
        alg = Algebra(g, [elem(g, 0), elem(g, 1), elem(g, 2, 3)])
        fam = Fam(alg, {elem(g, 0): F(1, 3), elem(g, 2, 3): F(2, 3)})
        witness = uniformly_supported(fam)
        assert witness is not None and witness.d == 3

    def test_degenerate(self):
        g = GroundSet.of_size(2)
        with pytest.raises(DegenerateFamError):
            uniformly_supported(Fam(Algebra.power_set(g), [0, 0]))

    def test_support_partition_shape(self):
        g = GroundSet.of_size(5)
        fam = uniform_fam(g, elem(g, 1, 3))
        witness = uniformly_supported(fam)
        support = witness.support
        # positive singletons first (by weight then mask), then the null rest
        assert elem(g, 1) in support.cells and elem(g, 3) in support.cells
        assert elem(g, 0, 2, 4) in support.cells


class TestHasUap:
    def test_uniform_has_uap(self):
        g = GroundSet.of_size(6)
        assert has_uap(uniform_fam(g, elem(g, 1, 2, 5)))

    def test_counterexample_lacks_uap(self):
        g = GroundSet.of_size(4)
        fam = Fam(Algebra.power_set(g), [F(1, 3), F(2, 3), 0, 0])
        assert not has_uap(fam)

    def test_zero_fam_has_uap(self):
        g = GroundSet.of_size(3)
        assert has_uap(Fam(Algebra.power_set(g), [0, 0, 0]))
