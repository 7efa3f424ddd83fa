from math import factorial

import pytest

from algebra.config import WorkbenchConfig
from algebra.congruence import CongruenceLattice
from algebra.endomorphism import EndoMonoid, EndomorphismSearch
from algebra.errors import (
    EnumerationCapExceeded,
    InvariantViolation,
    NotFullyInvariant,
    NotGenerating,
    NotInvariant,
    OracleBoundExceeded,
)
from algebra.semigroup import SemigroupBuilder


class TestEnumerateEnd:
    def test_trivial_semigroup(self):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(1))
        assert ends.elements == ((0,),)

    def test_left_zero_two_has_every_map(self):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(2))
        assert ends.elements == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_z3(self):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.cyclic_group(3))
        assert ends.elements == ((0, 0, 0), (0, 1, 2), (0, 2, 1))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_left_zero_counts(self, n):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(n))
        assert len(ends) == n ** n
        assert len(EndomorphismSearch.aut_group(ends)) == factorial(n)

    @pytest.mark.parametrize("n, phi", [(2, 1), (3, 2), (4, 2), (6, 2)])
    def test_cyclic_counts(self, n, phi):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.cyclic_group(n))
        assert len(ends) == n
        assert len(EndomorphismSearch.aut_group(ends)) == phi

    def test_matches_the_brute_force_oracle(self, semilattice2):
        assert EndomorphismSearch.brute_force_end(semilattice2).elements == \
            EndomorphismSearch.enumerate_end(semilattice2).elements
        assert len(EndomorphismSearch.brute_force_end(SemigroupBuilder.left_zero(3))) == 27
        assert len(EndomorphismSearch.brute_force_end(SemigroupBuilder.cyclic_group(4))) == 4

    def test_parallel_search_matches_sequential(self):
        klein = SemigroupBuilder.direct_product(SemigroupBuilder.cyclic_group(2), SemigroupBuilder.cyclic_group(2))
        sequential = EndomorphismSearch.enumerate_end(klein)
        parallel = EndomorphismSearch.enumerate_end(klein, WorkbenchConfig(workers=2))
        assert parallel.elements == sequential.elements
        assert len(sequential) == 16

    def test_cap(self):
        with pytest.raises(EnumerationCapExceeded):
            EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(4), WorkbenchConfig(cap_end=100))

    def test_cap_in_a_parallel_search(self):
        config = WorkbenchConfig(workers=2, cap_end=10)
        with pytest.raises(EnumerationCapExceeded, match="exceeds the configured limit 10"):
            EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(4), config)

    def test_oracle_bound(self):
        with pytest.raises(OracleBoundExceeded):
            EndomorphismSearch.brute_force_end(SemigroupBuilder.left_zero(5), WorkbenchConfig(oracle_bound=1000))


class TestEndoMonoid:
    def test_composition_applies_the_column_first(self, z4_ends):
        double = z4_ends.position[(0, 2, 0, 2)]
        negate = z4_ends.position[(0, 3, 2, 1)]
        zero = z4_ends.position[(0, 0, 0, 0)]
        assert z4_ends.composition[double, double] == zero
        assert z4_ends.composition[negate, negate] == z4_ends.identity_index

    def test_left_zero_composition(self):
        ends = EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(2))
        swap = ends.position[(1, 0)]
        constant = ends.position[(0, 0)]
        # swap after constant-0 is constant-1
        assert ends.elements[ends.composition[swap, constant]] == (1, 1)
        assert ends.elements[ends.composition[constant, swap]] == (0, 0)

    def test_as_semigroup_is_associative(self, lz3_ends):
        monoid = lz3_ends.as_semigroup()
        assert monoid.order == 27
        assert SemigroupBuilder.first_associativity_failure(monoid.table) is None

    def test_requires_the_identity(self, z4):
        with pytest.raises(InvariantViolation):
            EndoMonoid(z4, [(0, 0, 0, 0)])

    def test_units_submonoid(self, z4_ends):
        auts = z4_ends.units_submonoid()
        assert auts.automorphisms_only
        assert auts.elements == ((0, 1, 2, 3), (0, 3, 2, 1))


class TestInducedEndo:
    def test_identity_induces_identity(self, z4):
        parity = CongruenceLattice.parse(z4, "{0 2}{1 3}")
        induced = EndomorphismSearch.induced_endo(SemigroupBuilder.identity_morphism(z4), parity)
        assert induced.map == (0, 1)

    def test_negation_induces_identity(self, z4):
        parity = CongruenceLattice.parse(z4, "{0 2}{1 3}")
        assert EndomorphismSearch.induced_endo((0, 3, 2, 1), parity).map == (0, 1)

    def test_doubling_induces_zero(self, z4):
        parity = CongruenceLattice.parse(z4, "{0 2}{1 3}")
        assert EndomorphismSearch.induced_endo((0, 2, 0, 2), parity).map == (0, 0)

    def test_map_that_breaks_the_congruence(self, lz3):
        rho = CongruenceLattice.parse(lz3, "{0 1}{2}")
        with pytest.raises(NotInvariant) as raised:
            EndomorphismSearch.induced_endo((0, 2, 0), rho)
        assert raised.value.pair == (0, 1)


class TestRestrictionToQuotient:
    def test_parity_of_z4(self, z4, z4_ends):
        restriction = EndomorphismSearch.restriction_to_quotient(z4_ends, CongruenceLattice.parse(z4, "{0 2}{1 3}"))
        assert restriction.target.elements == ((0, 0), (0, 1))
        assert restriction.morphism.map == (0, 1, 0, 1)
        assert restriction.end_congruence.congruence.blocks == ((0, 2), (1, 3))
        assert restriction.image_size == 2

    def test_equality_is_injective(self, z4, z4_ends):
        restriction = EndomorphismSearch.restriction_to_quotient(z4_ends, CongruenceLattice.equality(z4))
        assert restriction.morphism.injective
        assert restriction.end_congruence.congruence.is_equality

    def test_universal_is_constant(self, lz3, lz3_ends):
        restriction = EndomorphismSearch.restriction_to_quotient(lz3_ends, CongruenceLattice.universal(lz3))
        assert set(restriction.morphism.map) == {0}
        assert restriction.end_congruence.congruence.is_universal

    def test_requires_full_invariance(self, lz3, lz3_ends):
        with pytest.raises(NotFullyInvariant) as raised:
            EndomorphismSearch.restriction_to_quotient(lz3_ends, CongruenceLattice.parse(lz3, "{0 1}{2}"))
        assert raised.value.witness == ((0, 2, 0), 0, 1)

    def test_automorphism_variant(self, z4, z4_ends):
        restriction = EndomorphismSearch.restriction_to_quotient(
            z4_ends.units_submonoid(), CongruenceLattice.parse(z4, "{0 2}{1 3}")
        )
        assert restriction.target.elements == ((0, 1),)
        assert restriction.morphism.map == (0, 0)


class TestHopfian:
    def test_left_zero_three(self, lz3, lz3_ends):
        report = EndomorphismSearch.hopfian_report(lz3_ends, CongruenceLattice.rho_chain(lz3))
        assert len(report.surjective) == 6
        assert report.surjective == report.bijective
        assert report.induced_surjective

    def test_z4(self, z4_ends):
        report = EndomorphismSearch.hopfian_report(z4_ends)
        surjective = {z4_ends.elements[i] for i in report.surjective}
        assert surjective == {(0, 1, 2, 3), (0, 3, 2, 1)}
        assert set(report.units) == set(report.surjective)
        assert report.surjective_idempotents == (z4_ends.identity_index,)
        assert report.induced_surjective is None

    def test_trivial_semigroup(self):
        report = EndomorphismSearch.hopfian_report(EndomorphismSearch.enumerate_end(SemigroupBuilder.left_zero(1)))
        assert report.surjective == report.bijective == (0,)
        assert report.hopfian


class TestExtensionCensus:
    def test_free_semilattice(self, semilattice2):
        census = EndomorphismSearch.extension_census(semilattice2, [0, 1])
        assert (census.extendable, census.total) == (9, 9)
        assert census.relatively_free and census.restriction_injective

    def test_left_zero_on_all_elements(self, lz3):
        census = EndomorphismSearch.extension_census(lz3, [0, 1, 2])
        assert (census.extendable, census.total) == (27, 27)

    def test_z4_on_one_generator(self, z4):
        census = EndomorphismSearch.extension_census(z4, [1])
        assert (census.extendable, census.total) == (4, 4)

    def test_z4_on_redundant_generators(self, z4):
        census = EndomorphismSearch.extension_census(z4, [1, 2])
        assert (census.extendable, census.total) == (4, 16)
        assert not census.relatively_free

    def test_non_generating_set(self, z4):
        with pytest.raises(NotGenerating) as raised:
            EndomorphismSearch.extension_census(z4, [2])
        assert raised.value.missing == 1

    def test_restriction_to_generators(self, z4_ends):
        assert EndomorphismSearch.restriction_to_generators(z4_ends, [1]) == ((0,), (1,), (2,), (3,))
