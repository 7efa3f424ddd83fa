import numpy as np
import pytest

from algebra.config import WorkbenchConfig
from algebra.congruence import CongruenceLattice
from algebra.errors import (
    DomainError,
    NotAHomomorphism,
    NotAssociative,
    OracleBoundExceeded,
    OutOfRangeEntry,
    SizeBoundExceeded,
)
from algebra.semigroup import FiniteSemigroup, SemigroupBuilder, render_map


class TestValidateTable:
    def test_left_zero_table_is_valid(self):
        semigroup = SemigroupBuilder.validate_table(2, [[0, 0], [1, 1]])
        assert semigroup.order == 2
        assert semigroup.mul(1, 0) == 1

    def test_two_element_group_is_valid(self):
        semigroup = SemigroupBuilder.validate_table(2, [[0, 1], [1, 0]])
        assert semigroup.rows == ((0, 1), (1, 0))

    def test_reports_first_non_associative_triple(self):
        with pytest.raises(NotAssociative) as raised:
            SemigroupBuilder.validate_table(2, [[0, 1], [0, 0]])
        assert raised.value.triple == (1, 0, 1)

    def test_out_of_range_entry(self):
        with pytest.raises(OutOfRangeEntry) as raised:
            SemigroupBuilder.validate_table(2, [[0, 2], [1, -1]])
        assert raised.value.position == (0, 1)
        assert raised.value.value == 2

    def test_wrong_shape(self):
        with pytest.raises(DomainError):
            SemigroupBuilder.validate_table(2, [[0, 0, 0], [1, 1, 1]])

    def test_duplicate_labels(self):
        with pytest.raises(DomainError):
            SemigroupBuilder.validate_table(2, [[0, 0], [1, 1]], labels=["x", "x"])

    def test_size_bound(self):
        with pytest.raises(SizeBoundExceeded):
            SemigroupBuilder.validate_table(4, np.zeros((4, 4), dtype=int), config=WorkbenchConfig(max_order=3))

    def test_table_is_read_only(self):
        semigroup = SemigroupBuilder.left_zero(2)
        with pytest.raises(ValueError):
            semigroup.table[0, 0] = 1


class TestConstructors:
    def test_left_zero(self):
        assert SemigroupBuilder.left_zero(1).rows == ((0,),)
        assert SemigroupBuilder.left_zero(2).rows == ((0, 0), (1, 1))
        assert SemigroupBuilder.left_zero(4).rows == tuple((i,) * 4 for i in range(4))

    def test_cyclic_group(self):
        z6 = SemigroupBuilder.cyclic_group(6)
        assert all(z6.mul(a, b) == (a + b) % 6 for a in range(6) for b in range(6))
        assert SemigroupBuilder.cyclic_group(1).order == 1

    def test_free_semilattice_on_two_letters(self):
        semilattice = SemigroupBuilder.free_semilattice(2)
        assert semilattice.rows == ((0, 2, 2), (2, 1, 2), (2, 2, 2))
        assert semilattice.labels == ("a", "b", "ab")
        assert semilattice.generators == (0, 1)

    def test_free_semilattice_on_three_letters_is_idempotent(self):
        semilattice = SemigroupBuilder.free_semilattice(3)
        assert semilattice.order == 7
        assert SemigroupBuilder.idempotents(semilattice) == tuple(range(7))
        assert np.array_equal(semilattice.table, semilattice.table.T)

    def test_rejects_non_positive_sizes(self):
        with pytest.raises(DomainError):
            SemigroupBuilder.left_zero(0)
        with pytest.raises(DomainError):
            SemigroupBuilder.cyclic_group(0)
        with pytest.raises(DomainError):
            SemigroupBuilder.free_semilattice(0)


class TestDirectProduct:
    def test_trivial_factor_keeps_the_table(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        product = SemigroupBuilder.direct_product(SemigroupBuilder.left_zero(1), z4)
        assert product == z4

    def test_left_zero_square_is_left_zero(self):
        lz2 = SemigroupBuilder.left_zero(2)
        assert SemigroupBuilder.direct_product(lz2, lz2) == SemigroupBuilder.left_zero(4)

    def test_klein_four_group(self):
        c2 = SemigroupBuilder.cyclic_group(2)
        klein = SemigroupBuilder.direct_product(c2, c2)
        assert klein.rows == tuple(tuple(i ^ j for j in range(4)) for i in range(4))

    def test_size_bound(self):
        with pytest.raises(SizeBoundExceeded):
            SemigroupBuilder.direct_product(
                SemigroupBuilder.cyclic_group(3),
                SemigroupBuilder.cyclic_group(3),
                WorkbenchConfig(max_order=8)
            )


class TestGenerators:
    def test_closure_in_discovery_order(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        assert SemigroupBuilder.closure(z4, [1]) == [1, 2, 3, 0]
        assert sorted(SemigroupBuilder.closure(z4, [2])) == [0, 2]

    @pytest.mark.parametrize("semigroup, expected", [
        (SemigroupBuilder.left_zero(3), (0, 1, 2)),
        (SemigroupBuilder.cyclic_group(4), (1,)),
        (SemigroupBuilder.free_semilattice(2), (0, 1)),
    ])
    def test_minimal_generating_set(self, semigroup, expected):
        assert SemigroupBuilder.minimal_generating_set(semigroup) == expected

    def test_generating_set_is_irredundant(self):
        z6 = SemigroupBuilder.cyclic_group(6)
        generators = SemigroupBuilder.minimal_generating_set(z6)
        assert SemigroupBuilder.generates(z6, generators)
        for g in generators:
            rest = [x for x in generators if x != g]
            assert not rest or not SemigroupBuilder.generates(z6, rest)

    def test_idempotents(self):
        assert SemigroupBuilder.idempotents(SemigroupBuilder.left_zero(2)) == (0, 1)
        assert SemigroupBuilder.idempotents(SemigroupBuilder.cyclic_group(4)) == (0,)


class TestQuotient:
    def test_equality_gives_a_copy(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        quotient, projection = SemigroupBuilder.quotient(z4, CongruenceLattice.equality(z4))
        assert quotient == z4
        assert projection.bijective

    def test_universal_gives_the_trivial_semigroup(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        quotient, projection = SemigroupBuilder.quotient(z4, CongruenceLattice.universal(z4))
        assert quotient.order == 1
        assert set(projection.map) == {0}

    def test_parity_quotient_of_z4(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        parity = CongruenceLattice.parse(z4, "{0 2}{1 3}")
        quotient, projection = SemigroupBuilder.quotient(z4, parity)
        assert quotient.rows == ((0, 1), (1, 0))
        assert projection.map == (0, 1, 0, 1)

    def test_labels_follow_blocks(self):
        semilattice = SemigroupBuilder.free_semilattice(2)
        congruence = CongruenceLattice.principal_congruence(semilattice, 0, 2)
        quotient, _ = SemigroupBuilder.quotient(semilattice, congruence)
        assert quotient.labels[0].startswith("{a")


class TestMorphisms:
    def test_identity(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        identity = SemigroupBuilder.check_morphism(range(4), z4, z4)
        assert identity.bijective
        assert identity == SemigroupBuilder.identity_morphism(z4)

    def test_every_map_between_left_zero_semigroups(self):
        lz3 = SemigroupBuilder.left_zero(3)
        lz2 = SemigroupBuilder.left_zero(2)
        morphism = SemigroupBuilder.check_morphism([1, 1, 0], lz3, lz2)
        assert morphism.surjective and not morphism.injective

    def test_translation_is_not_a_homomorphism(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        with pytest.raises(NotAHomomorphism) as raised:
            SemigroupBuilder.check_morphism([1, 2, 3, 0], z4, z4)
        assert raised.value.pair == (0, 0)

    def test_map_of_wrong_length(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        with pytest.raises(DomainError):
            SemigroupBuilder.check_morphism([0, 0], z4, z4)

    def test_compose_applies_the_argument_first(self):
        z4 = SemigroupBuilder.cyclic_group(4)
        double = SemigroupBuilder.check_morphism([0, 2, 0, 2], z4, z4)
        negate = SemigroupBuilder.check_morphism([0, 3, 2, 1], z4, z4)
        assert double.compose(double).map == (0, 0, 0, 0)
        assert negate.compose(negate).map == (0, 1, 2, 3)
        assert double.compose(negate).map == (0, 2, 0, 2)

    def test_render_map(self):
        assert render_map((0, 2, 1)) == "[0 2 1]"


class TestEnumeration:
    def test_counts_of_labeled_semigroups(self):
        assert len(SemigroupBuilder.enumerate_semigroups(1)) == 1
        assert len(SemigroupBuilder.enumerate_semigroups(2)) == 8
        assert len(SemigroupBuilder.enumerate_semigroups(3)) == 113

    def test_every_enumerated_table_validates(self):
        for semigroup in SemigroupBuilder.enumerate_semigroups(2):
            assert SemigroupBuilder.first_associativity_failure(semigroup.table) is None

    def test_order_four_exceeds_the_oracle_bound(self):
        with pytest.raises(OracleBoundExceeded):
            SemigroupBuilder.enumerate_semigroups(4)


class TestBuiltins:
    def test_tokens(self):
        assert SemigroupBuilder.from_builtin("cyclic:4") == SemigroupBuilder.cyclic_group(4)
        assert SemigroupBuilder.from_builtin("left-zero:3") == SemigroupBuilder.left_zero(3)
        assert SemigroupBuilder.from_builtin("semilattice:2").order == 3

    @pytest.mark.parametrize("token", ["bogus:3", "cyclic:x", "cyclic", "cyclic:\u00b2", "cyclic:-2"])
    def test_bad_tokens(self, token):
        with pytest.raises(DomainError):
            SemigroupBuilder.from_builtin(token)

    def test_size_bound(self):
        with pytest.raises(SizeBoundExceeded):
            SemigroupBuilder.from_builtin("left-zero:5000")

    def test_equality_and_hash_follow_the_table(self):
        a = FiniteSemigroup(np.array([[0, 1], [1, 0]]))
        b = SemigroupBuilder.cyclic_group(2)
        assert a == b and hash(a) == hash(b)
