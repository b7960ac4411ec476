from fractions import Fraction as F

import pytest

from famkit.boolalg import Algebra, GroundSet, SetElem, generate_algebra
from famkit.errors import CapExceededError, FamkitError
from famkit.extend import PartialAssignment
from famkit.fam import Fam, uniform_fam
from famkit.oracle import (
    exhaustive_integral,
    exhaustive_integral_bounds,
    fm_feasible,
    scan_positivity_condition,
    scan_order_condition,
    set_partitions,
)
from famkit.simplex import FeasibilitySystem


def elem(ground, *indices):
    return SetElem.from_indices(ground, indices)


class TestFmFeasible:
    def test_empty_system(self):
        assert fm_feasible(FeasibilitySystem(n_vars=2))

    def test_forced_negative(self):
        system = FeasibilitySystem(
            n_vars=1, equalities=(((F(1),), F(-1)),)
        )
        assert not fm_feasible(system)

    def test_cross_section_system(self):
        g = GroundSet.of_size(4)
        alg = Algebra.power_set(g)
        rows = []
        for s, v in [
            (SetElem.full(g), F(1)),
            (elem(g, 0, 1), F(1, 3)),
            (elem(g, 0, 2), F(1, 2)),
        ]:
            rows.append(
                (tuple(F(1) if a.bits & s.bits else F(0) for a in alg.atoms), v)
            )
        assert fm_feasible(FeasibilitySystem(n_vars=4, equalities=tuple(rows)))

    def test_interval_rows(self):
        system = FeasibilitySystem(
            n_vars=2,
            equalities=(((F(1), F(1)), F(1)),),
            intervals=(((F(1), F(0)), F(3, 4), None),),
        )
        assert fm_feasible(system)
        system2 = FeasibilitySystem(
            n_vars=2,
            equalities=(((F(1), F(1)), F(1)),),
            intervals=(((F(1), F(0)), F(3, 2), None),),
        )
        assert not fm_feasible(system2)

    def test_var_cap(self):
        with pytest.raises(CapExceededError):
            fm_feasible(FeasibilitySystem(n_vars=13))


class TestScanF700:
    def test_additivity_violation(self):
        g = GroundSet.of_size(4)
        a = elem(g, 0, 1)
        assignment = PartialAssignment(
            g, [(SetElem.full(g), 1), (a, F(2, 3)), (~a, F(2, 3))]
        )
        assert not scan_positivity_condition(assignment)

    def test_single_pair(self):
        g = GroundSet.of_size(3)
        assert scan_positivity_condition(PartialAssignment(g, [(SetElem.full(g), 1)]))

    def test_cross_section_passes(self):
        g = GroundSet.of_size(4)
        assignment = PartialAssignment(
            g,
            [
                (SetElem.full(g), F(1)),
                (elem(g, 0, 1), F(1, 3)),
                (elem(g, 0, 2), F(1, 2)),
            ],
        )
        assert scan_positivity_condition(assignment, h_bound=3)


class TestScanM48:
    def test_self(self):
        g = GroundSet.of_size(4)
        fam = uniform_fam(g, elem(g, 0, 1))
        assert scan_order_condition(fam, fam)

    def test_total_mismatch(self):
        g = GroundSet.of_size(3)
        fam0 = Fam(Algebra.trivial(g), [1])
        fam1 = Fam(Algebra.trivial(g), [2])
        assert not scan_order_condition(fam0, fam1)

    def test_cross_section(self):
        g = GroundSet(["00", "01", "10", "11"])
        x_low = elem(g, 0, 1)
        x_row = elem(g, 0, 2)
        fam0 = Fam(generate_algebra(g, [x_low]), {x_low: F(1, 3), ~x_low: F(2, 3)})
        fam1 = Fam(generate_algebra(g, [x_row]), {x_row: F(1, 2), ~x_row: F(1, 2)})
        assert scan_order_condition(fam0, fam1)


class TestSetPartitions:
    def test_counts_are_bell_numbers(self):
        for n, bell in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)]:
            assert sum(1 for _ in set_partitions(range(n))) == bell

    def test_blocks_partition_the_items(self):
        for blocks in set_partitions("abcd"):
            flat = sorted(x for b in blocks for x in b)
            assert flat == ["a", "b", "c", "d"]


class TestExhaustiveIntegral:
    def test_uniform_average(self):
        g = GroundSet.of_size(5)
        u = elem(g, 0, 2, 4)
        fam = uniform_fam(g, u)
        f = [3, 9, 6, 100, 0]
        assert exhaustive_integral(f, fam) == F(3 + 6 + 0, 3)

    def test_constant(self):
        g = GroundSet.of_size(4)
        fam = Fam(generate_algebra(g, [elem(g, 0, 1)]), [F(1, 2), F(1)])
        assert exhaustive_integral([7, 7, 7, 7], fam) == F(21, 2)

    def test_two_atoms_weighted(self):
        g = GroundSet.of_size(2)
        fam = Fam(Algebra.power_set(g), [F(1, 4), F(3, 4)])
        assert exhaustive_integral([2, 6], fam) == F(1, 2) + F(18, 4)

    def test_non_integrable_raises(self):
        g = GroundSet.of_size(2)
        fam = Fam(Algebra.trivial(g), [1])
        lower, upper = exhaustive_integral_bounds([0, 1], fam)
        assert (lower, upper) == (0, 1)
        with pytest.raises(FamkitError):
            exhaustive_integral([0, 1], fam)

    def test_atom_partition_is_sharpest_for_atom_constant(self):
        g = GroundSet.of_size(4)
        alg = generate_algebra(g, [elem(g, 0, 1)])
        fam = Fam(alg, [F(1, 3), F(2, 3)])
        f = [5, 5, 2, 2]
        lower, upper = exhaustive_integral_bounds(f, fam)
        atom_value = F(5, 3) + F(4, 3)
        assert lower == upper == atom_value
