import logging
import re
import string
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra.config import WorkbenchConfig, resolve
from algebra.errors import (
    DomainError,
    NotAHomomorphism,
    NotAssociative,
    OracleBoundExceeded,
    OutOfRangeEntry,
    SizeBoundExceeded,
)

if TYPE_CHECKING:
    from algebra.congruence import Congruence

logger = logging.getLogger(__name__)


class FiniteSemigroup:
    """
    A finite semigroup given by its multiplication table over 0..n-1.

    Instances are only produced by SemigroupBuilder, which validates closure
    and associativity; the table is stored read-only.
    """

    def __init__(
        self,
        table: np.ndarray,
        labels: Optional[Sequence[str]] = None,
        generators: Optional[Sequence[int]] = None
    ):
        table = np.array(table, dtype=np.intp)
        table.setflags(write=False)
        self.table = table
        self.rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in table.tolist())
        self.labels: Optional[Tuple[str, ...]] = tuple(labels) if labels is not None else None
        # Filled in by SemigroupBuilder.minimal_generating_set
        self.generators: Optional[Tuple[int, ...]] = (
            tuple(sorted(generators)) if generators is not None else None
        )

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def label(self, element: int) -> str:
        if self.labels is None:
            return str(element)
        return self.labels[element]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteSemigroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.order, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteSemigroup(order={self.order})"


@dataclass(frozen=True)
class Morphism:
    """An element map between finite semigroups that respects multiplication."""
    domain: FiniteSemigroup
    codomain: FiniteSemigroup
    map: Tuple[int, ...]
    surjective: bool
    injective: bool

    @property
    def bijective(self) -> bool:
        return self.surjective and self.injective

    def __call__(self, element: int) -> int:
        return self.map[element]

    def as_array(self) -> np.ndarray:
        return np.array(self.map, dtype=np.intp)

    def compose(self, first: "Morphism") -> "Morphism":
        """
        Composite self ∘ first (apply ``first``, then ``self``)

        Args:
            first (Morphism): Morphism whose codomain is this morphism's domain

        Returns:
            Morphism: The composite, a homomorphism by construction
        """
        if first.codomain != self.domain:
            raise DomainError("composite is undefined: codomain and domain differ")
        images = tuple(self.map[x] for x in first.map)
        return Morphism(
            domain=first.domain,
            codomain=self.codomain,
            map=images,
            surjective=len(set(images)) == self.codomain.order,
            injective=len(set(images)) == len(images)
        )


def render_map(images: Sequence[int]) -> str:
    return "[" + " ".join(str(i) for i in images) + "]"


class SemigroupBuilder:
    @staticmethod
    def validate_table(
        order: int,
        table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        config: Optional[WorkbenchConfig] = None,
        check_associativity: bool = True
    ) -> FiniteSemigroup:
        """
        Validate a multiplication table and wrap it as a FiniteSemigroup

        Args:
            order (int): Number of elements n
            table (Sequence[Sequence[int]]): n x n table of element indices
            labels (Optional[Sequence[str]]): Display names, one per element
            config (Optional[WorkbenchConfig]): Limits
            check_associativity (bool): Run the n^3 associativity test

        Returns:
            FiniteSemigroup: The validated semigroup
        """
        config = resolve(config)
        if order < 1:
            raise DomainError(f"order must be positive, got {order}")
        if order > config.max_order:
            raise SizeBoundExceeded("semigroup order", order, config.max_order)

        array = np.asarray(table, dtype=np.int64)
        if array.shape != (order, order):
            raise DomainError(f"table has shape {array.shape}, expected ({order}, {order})")

        out_of_range = np.argwhere((array < 0) | (array >= order))
        if len(out_of_range):
            row, col = (int(v) for v in out_of_range[0])
            raise OutOfRangeEntry((row, col), int(array[row, col]), order)

        if check_associativity:
            failure = SemigroupBuilder.first_associativity_failure(array)
            if failure is not None:
                raise NotAssociative(*failure)

        if labels is not None:
            if len(labels) != order:
                raise DomainError(f"expected {order} labels, got {len(labels)}")
            if len(set(labels)) != order:
                raise DomainError("labels must be pairwise distinct")

        return FiniteSemigroup(array, labels=labels)

    @staticmethod
    def first_associativity_failure(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
        """
        Lexicographically first triple (a, b, c) with (ab)c != a(bc), if any

        One slice per a keeps memory at n^2 while still covering all n^3 triples.
        """
        table = np.asarray(table, dtype=np.intp)
        for a in range(table.shape[0]):
            row = table[a]
            left = table[row]        # left[b, c] = (a b) c
            right = row[table]       # right[b, c] = a (b c)
            mismatches = np.argwhere(left != right)
            if len(mismatches):
                b, c = (int(v) for v in mismatches[0])
                return a, b, c
        return None

    @staticmethod
    def left_zero(n: int, labels: Optional[Sequence[str]] = None) -> FiniteSemigroup:
        if n < 1:
            raise DomainError(f"left-zero semigroup needs n >= 1, got {n}")
        table = np.repeat(np.arange(n)[:, None], n, axis=1)
        return SemigroupBuilder.validate_table(n, table, labels=labels, check_associativity=False)

    @staticmethod
    def cyclic_group(n: int) -> FiniteSemigroup:
        if n < 1:
            raise DomainError(f"cyclic group needs n >= 1, got {n}")
        elements = np.arange(n)
        table = (elements[:, None] + elements[None, :]) % n
        return SemigroupBuilder.validate_table(n, table, check_associativity=False)

    @staticmethod
    def free_semilattice(k: int, config: Optional[WorkbenchConfig] = None) -> FiniteSemigroup:
        """
        Free semilattice on k generators: nonempty subsets under union

        Element i is the bitmask i + 1, so masks appear in increasing numeric
        order and the generators are the k singleton masks.

        Args:
            k (int): Number of free generators
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            FiniteSemigroup: Semilattice of order 2^k - 1
        """
        config = resolve(config)
        if k < 1 or k > 63:
            raise DomainError(f"free semilattice needs 1 <= k <= 63, got {k}")
        order = 2 ** k - 1
        if order > config.max_order:
            raise SizeBoundExceeded("semilattice order", order, config.max_order)

        masks = np.arange(1, order + 1)
        table = (masks[:, None] | masks[None, :]) - 1
        letters = string.ascii_lowercase if k <= 26 else None
        labels = None
        if letters is not None:
            labels = [
                "".join(letters[bit] for bit in range(k) if mask >> bit & 1)
                for mask in masks.tolist()
            ]
        semigroup = SemigroupBuilder.validate_table(
            order, table, labels=labels, config=config, check_associativity=False
        )
        semigroup.generators = tuple((1 << bit) - 1 for bit in range(k))
        return semigroup

    @staticmethod
    def direct_product(
        left: FiniteSemigroup,
        right: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None
    ) -> FiniteSemigroup:
        """
        Componentwise product; pair (a, b) gets index a * |right| + b
        """
        config = resolve(config)
        order = left.order * right.order
        if order > config.max_order:
            raise SizeBoundExceeded("direct product order", order, config.max_order)

        m = right.order
        table = (
            left.table[:, None, :, None] * m + right.table[None, :, None, :]
        ).reshape(order, order)

        labels = None
        if left.labels is not None or right.labels is not None:
            labels = [
                f"({left.label(a)},{right.label(b)})"
                for a in range(left.order) for b in range(right.order)
            ]
        return SemigroupBuilder.validate_table(
            order, table, labels=labels, config=config, check_associativity=False
        )

    @staticmethod
    def closure(semigroup: FiniteSemigroup, elements: Iterable[int]) -> List[int]:
        """
        Subsemigroup generated by ``elements``, in discovery order

        Every product of generators is reached by right-multiplying a shorter
        product by one generator, so a breadth-first scan over right
        multiplications is exhaustive.
        """
        generators = list(dict.fromkeys(elements))
        discovered = list(generators)
        seen = set(discovered)
        rows = semigroup.rows
        position = 0
        while position < len(discovered):
            current = rows[discovered[position]]
            position += 1
            for g in generators:
                z = current[g]
                if z not in seen:
                    seen.add(z)
                    discovered.append(z)
        return discovered

    @staticmethod
    def generates(semigroup: FiniteSemigroup, elements: Iterable[int]) -> bool:
        return len(SemigroupBuilder.closure(semigroup, elements)) == semigroup.order

    @staticmethod
    def minimal_generating_set(semigroup: FiniteSemigroup) -> Tuple[int, ...]:
        """
        Irredundant generating set, cached on the semigroup

        A greedy scan in index order adds every element not yet generated; a
        pruning pass then drops any member the others already generate. Members
        kept by the pruning pass stay necessary because later removals only
        shrink the remaining set.

        Args:
            semigroup (FiniteSemigroup): Semigroup to generate

        Returns:
            Tuple[int, ...]: Sorted irredundant generating set
        """
        if semigroup.generators is not None:
            return semigroup.generators

        chosen: List[int] = []
        generated: set = set()
        for element in range(semigroup.order):
            if element not in generated:
                chosen.append(element)
                generated = set(SemigroupBuilder.closure(semigroup, chosen))

        for element in list(chosen):
            rest = [g for g in chosen if g != element]
            if rest and SemigroupBuilder.generates(semigroup, rest):
                chosen = rest

        semigroup.generators = tuple(sorted(chosen))
        logger.debug("generating set of order-%d semigroup: %s", semigroup.order, semigroup.generators)
        return semigroup.generators

    @staticmethod
    def idempotents(semigroup: FiniteSemigroup) -> Tuple[int, ...]:
        diagonal = semigroup.table[np.arange(semigroup.order), np.arange(semigroup.order)]
        return tuple(int(i) for i in np.flatnonzero(diagonal == np.arange(semigroup.order)))

    @staticmethod
    def quotient(
        semigroup: FiniteSemigroup,
        congruence: "Congruence"
    ) -> Tuple[FiniteSemigroup, Morphism]:
        """
        Quotient S/ρ with blocks ordered by least member, and the projection p

        Args:
            semigroup (FiniteSemigroup): Carrier S
            congruence (Congruence): Congruence ρ on S

        Returns:
            Tuple[FiniteSemigroup, Morphism]: S/ρ and the surjection p: S -> S/ρ
        """
        blocks = np.array(congruence.block_of, dtype=np.intp)
        representatives = np.array(congruence.representatives, dtype=np.intp)
        table = blocks[semigroup.table[np.ix_(representatives, representatives)]]

        labels = None
        if semigroup.labels is not None:
            labels = [
                "{" + " ".join(semigroup.label(x) for x in block) + "}"
                for block in congruence.blocks
            ]
        quotient = SemigroupBuilder.validate_table(
            congruence.index, table, labels=labels, check_associativity=False
        )
        projection = Morphism(
            domain=semigroup,
            codomain=quotient,
            map=tuple(congruence.block_of),
            surjective=True,
            injective=congruence.index == semigroup.order
        )
        return quotient, projection

    @staticmethod
    def check_morphism(
        images: Sequence[int],
        domain: FiniteSemigroup,
        codomain: FiniteSemigroup
    ) -> Morphism:
        """
        Verify f(ab) = f(a)f(b) for all pairs

        Args:
            images (Sequence[int]): Raw map, one image per domain element
            domain (FiniteSemigroup): Source semigroup A
            codomain (FiniteSemigroup): Target semigroup B

        Returns:
            Morphism: The verified morphism with its surjective/injective flags
        """
        f = np.asarray(images, dtype=np.int64)
        if f.shape != (domain.order,):
            raise DomainError(f"map has {f.size} entries, expected {domain.order}")
        if len(f) and (f.min() < 0 or f.max() >= codomain.order):
            raise DomainError(f"map entries must lie in [0, {codomain.order})")

        lhs = f[domain.table]
        rhs = codomain.table[f[:, None], f[None, :]]
        mismatches = np.argwhere(lhs != rhs)
        if len(mismatches):
            a, b = (int(v) for v in mismatches[0])
            raise NotAHomomorphism(a, b)

        distinct = len(set(f.tolist()))
        return Morphism(
            domain=domain,
            codomain=codomain,
            map=tuple(int(v) for v in f),
            surjective=distinct == codomain.order,
            injective=distinct == domain.order
        )

    @staticmethod
    def identity_morphism(semigroup: FiniteSemigroup) -> Morphism:
        return Morphism(
            domain=semigroup,
            codomain=semigroup,
            map=tuple(range(semigroup.order)),
            surjective=True,
            injective=True
        )

    @staticmethod
    def enumerate_semigroups(
        order: int,
        config: Optional[WorkbenchConfig] = None,
        batch_size: int = 8192
    ) -> List[FiniteSemigroup]:
        """
        Every associative table of the given order (labeled, not up to isomorphism)

        Args:
            order (int): Order n
            config (Optional[WorkbenchConfig]): Limits; n^(n^2) must stay within oracle_bound
            batch_size (int): Tables checked per vectorized batch

        Returns:
            List[FiniteSemigroup]: Semigroups in lexicographic order of their row-major tables
        """
        config = resolve(config)
        cells = order * order
        total = order ** cells
        if total > config.oracle_bound:
            raise OracleBoundExceeded("tables to scan", total, config.oracle_bound)

        weights = order ** np.arange(cells - 1, -1, -1, dtype=np.int64)
        a_index = np.arange(order)[None, :, None, None]
        c_index = np.arange(order)[None, None, None, :]
        found: List[FiniteSemigroup] = []
        for start in range(0, total, batch_size):
            codes = np.arange(start, min(start + batch_size, total), dtype=np.int64)
            tables = (codes[:, None] // weights[None, :] % order).reshape(-1, order, order)
            batch = np.arange(len(tables))[:, None, None, None]
            left = tables[batch, tables[:, :, :, None], c_index]
            right = tables[batch, a_index, tables[:, None, :, :]]
            associative = np.all((left == right).reshape(len(tables), -1), axis=1)
            for table in tables[associative]:
                found.append(FiniteSemigroup(table))

        logger.info("found %d semigroup tables of order %d", len(found), order)
        return found

    @staticmethod
    def from_builtin(token: str, config: Optional[WorkbenchConfig] = None) -> FiniteSemigroup:
        """
        Build a named example from a token such as ``left-zero:3`` or ``cyclic:4``

        Args:
            token (str): ``<kind>:<parameter>``, kind one of left-zero, cyclic, semilattice
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            FiniteSemigroup: The constructed semigroup
        """
        kind, _, parameter = token.partition(":")
        if not re.fullmatch(r"[0-9]+", parameter):
            raise DomainError(f"builtin token needs a numeric parameter: {token!r}")
        size = int(parameter)
        config = resolve(config)
        builders = {
            "left-zero": SemigroupBuilder.left_zero,
            "cyclic": SemigroupBuilder.cyclic_group,
            "semilattice": lambda k: SemigroupBuilder.free_semilattice(k, config),
        }
        if kind not in builders:
            raise DomainError(f"unknown builtin semigroup {kind!r}")
        if kind != "semilattice" and size > config.max_order:
            raise SizeBoundExceeded("semigroup order", size, config.max_order)
        return builders[kind](size)


BUILTIN_KINDS: Dict[str, str] = {
    "left-zero": "left-zero semigroup of order N",
    "cyclic": "cyclic group of order N",
    "semilattice": "free semilattice on K generators",
}
