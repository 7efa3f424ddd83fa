import logging
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from algebra.config import WorkbenchConfig, resolve
from algebra.errors import (
    CarrierMismatch,
    CongruenceCapExceeded,
    DomainError,
    NotACongruence,
    OracleBoundExceeded,
    ParseError,
    SizeBoundExceeded,
)
from algebra.semigroup import FiniteSemigroup, Morphism
from algebra.union_find import UnionFind

logger = logging.getLogger(__name__)

Witness = Tuple[Tuple[int, ...], int, int]


def canonical_labels(labels: Iterable[Any]) -> Tuple[int, ...]:
    """Renumber block labels by first appearance, i.e. by least member."""
    ids: dict = {}
    return tuple(ids.setdefault(label, len(ids)) for label in labels)


@dataclass(frozen=True)
class Congruence:
    """
    A compatible partition of a finite semigroup.

    ``block_of[x]`` is the block id of x; ids are numbered by least member,
    so two congruences are equal exactly when their arrays are equal.
    """
    carrier: FiniteSemigroup = field(compare=False, repr=False)
    block_of: Tuple[int, ...]
    index: int

    @cached_property
    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        members: List[List[int]] = [[] for _ in range(self.index)]
        for element, block in enumerate(self.block_of):
            members[block].append(element)
        return tuple(tuple(block) for block in members)

    @cached_property
    def representatives(self) -> Tuple[int, ...]:
        return tuple(block[0] for block in self.blocks)

    @property
    def is_equality(self) -> bool:
        return self.index == len(self.block_of)

    @property
    def is_universal(self) -> bool:
        return self.index == 1

    def related(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def render(self) -> str:
        return "".join("{" + " ".join(str(x) for x in block) + "}" for block in self.blocks)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class CongruenceFamily:
    """A deduplicated set of congruences on one carrier, ordered by (index, block_of)."""
    carrier: FiniteSemigroup = field(compare=False, repr=False)
    members: Tuple[Congruence, ...]

    @staticmethod
    def of(carrier: FiniteSemigroup, congruences: Iterable[Congruence]) -> "CongruenceFamily":
        unique = {}
        for congruence in congruences:
            if len(congruence.block_of) != carrier.order:
                raise CarrierMismatch(carrier.order, len(congruence.block_of))
            unique.setdefault(congruence.block_of, congruence)
        ordered = sorted(unique.values(), key=lambda c: (c.index, c.block_of))
        return CongruenceFamily(carrier=carrier, members=tuple(ordered))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Congruence]:
        return iter(self.members)

    def __contains__(self, congruence: object) -> bool:
        return congruence in self.members

    def of_index(self, index: int) -> Tuple[Congruence, ...]:
        return tuple(c for c in self.members if c.index == index)


@dataclass(frozen=True)
class InvarianceVerdict:
    """Outcome of an invariance predicate; ``witness`` is (f, a, b) when it fails."""
    holds: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.holds


class CongruenceLattice:
    @staticmethod
    def from_labels(
        carrier: FiniteSemigroup,
        labels: Sequence[Any],
        validate: bool = True
    ) -> Congruence:
        """
        Build a congruence from any block labeling of the carrier

        Args:
            carrier (FiniteSemigroup): Semigroup the partition lives on
            labels (Sequence[Any]): One hashable block label per element
            validate (bool): Check left/right compatibility

        Returns:
            Congruence: The canonically numbered congruence
        """
        if len(labels) != carrier.order:
            raise CarrierMismatch(carrier.order, len(labels))
        block_of = canonical_labels(labels)
        if validate:
            failure = CongruenceLattice.compatibility_failure(carrier, block_of)
            if failure is not None:
                raise NotACongruence(*failure)
        return Congruence(carrier=carrier, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def compatibility_failure(
        carrier: FiniteSemigroup,
        block_of: Sequence[int]
    ) -> Optional[Tuple[int, int, int]]:
        """
        Least (a, b, s) with a ~ b whose left or right translation by s splits them

        Each element is compared with its block's least member; that relation
        generates the partition, so checking it is enough. A split pair a < b
        always has a split pair (least member, a or b) under the same s that
        is no larger, so the minimum over those pairs is the global least.
        """
        blocks = np.asarray(block_of, dtype=np.intp)
        first_member = {}
        for element, block in enumerate(block_of):
            first_member.setdefault(block, element)
        reps = np.array([first_member[b] for b in block_of], dtype=np.intp)
        table = carrier.table

        image = blocks[table]
        left_bad = image != blocks[table[:, reps]]     # [s, a]: s·a vs s·rep(a)
        right_bad = image != blocks[table[reps, :]]    # [a, s]: a·s vs rep(a)·s
        candidates = [(int(reps[a]), int(a), int(s)) for s, a in np.argwhere(left_bad)]
        candidates.extend((int(reps[a]), int(a), int(s)) for a, s in np.argwhere(right_bad))
        return min(candidates, default=None)

    @staticmethod
    def equality(carrier: FiniteSemigroup) -> Congruence:
        return Congruence(carrier=carrier, block_of=tuple(range(carrier.order)), index=carrier.order)

    @staticmethod
    def universal(carrier: FiniteSemigroup) -> Congruence:
        return Congruence(carrier=carrier, block_of=(0,) * carrier.order, index=1)

    @staticmethod
    def parse(carrier: FiniteSemigroup, text: str) -> Congruence:
        """
        Read a congruence literal such as ``{0 2}{1 3}``, ``equality`` or ``universal``

        Args:
            carrier (FiniteSemigroup): Semigroup the literal refers to
            text (str): The literal

        Returns:
            Congruence: The validated congruence
        """
        literal = text.strip()
        if literal == "equality":
            return CongruenceLattice.equality(carrier)
        if literal == "universal":
            return CongruenceLattice.universal(carrier)

        if not re.fullmatch(r"(\s*\{[\d\s]*\}\s*)+", literal):
            raise ParseError(f"malformed congruence literal {text!r}")
        labels: List[Optional[int]] = [None] * carrier.order
        for block_id, body in enumerate(re.findall(r"\{([\d\s]*)\}", literal)):
            members = [int(token) for token in body.split()]
            if not members:
                raise ParseError(f"empty block in congruence literal {text!r}")
            for element in members:
                if element >= carrier.order:
                    raise ParseError(f"element {element} is outside the carrier of order {carrier.order}")
                if labels[element] is not None:
                    raise ParseError(f"element {element} appears in two blocks")
                labels[element] = block_id
        missing = [x for x, label in enumerate(labels) if label is None]
        if missing:
            raise ParseError(f"congruence literal does not cover element {missing[0]}")
        return CongruenceLattice.from_labels(carrier, labels)

    @staticmethod
    def _close(
        carrier: FiniteSemigroup,
        seeds: Iterable[Tuple[int, int]],
        base: Optional[Congruence] = None
    ) -> Congruence:
        """
        Smallest congruence containing ``base`` and the ``seeds`` pairs

        Every pair that actually merges two classes queues its left and right
        translations; ``base`` is already compatible, so its pairs are merged
        without queueing.
        """
        n = carrier.order
        rows = carrier.rows
        forest = UnionFind(n)
        if base is not None:
            for element, rep in enumerate(base.representatives[b] for b in base.block_of):
                forest.union(element, rep)

        pending = list(seeds)
        while pending:
            x, y = pending.pop()
            if forest.union(x, y):
                row_x, row_y = rows[x], rows[y]
                for s in range(n):
                    pending.append((rows[s][x], rows[s][y]))
                    pending.append((row_x[s], row_y[s]))

        block_of = tuple(forest.labels())
        return Congruence(carrier=carrier, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def principal_congruence(carrier: FiniteSemigroup, a: int, b: int) -> Congruence:
        if not (0 <= a < carrier.order and 0 <= b < carrier.order):
            raise DomainError(f"({a}, {b}) is not a pair of elements of an order-{carrier.order} semigroup")
        return CongruenceLattice._close(carrier, [(a, b)])

    @staticmethod
    def _same_carrier(rho: Congruence, sigma: Congruence) -> None:
        if len(rho.block_of) != len(sigma.block_of) or rho.carrier != sigma.carrier:
            raise CarrierMismatch(len(rho.block_of), len(sigma.block_of))

    @staticmethod
    def meet(rho: Congruence, sigma: Congruence) -> Congruence:
        CongruenceLattice._same_carrier(rho, sigma)
        block_of = canonical_labels(zip(rho.block_of, sigma.block_of))
        return Congruence(carrier=rho.carrier, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def meet_all(carrier: FiniteSemigroup, congruences: Iterable[Congruence]) -> Congruence:
        """Common refinement of a family; the empty meet is the universal congruence."""
        return reduce(CongruenceLattice.meet, congruences, CongruenceLattice.universal(carrier))

    @staticmethod
    def join(rho: Congruence, sigma: Congruence) -> Congruence:
        CongruenceLattice._same_carrier(rho, sigma)
        seeds = [(x, sigma.representatives[sigma.block_of[x]]) for x in range(len(sigma.block_of))]
        return CongruenceLattice._close(rho.carrier, seeds, base=rho)

    @staticmethod
    def refines(rho: Congruence, sigma: Congruence) -> bool:
        """True iff rho ⊆ sigma, i.e. every rho-block lies inside a sigma-block."""
        CongruenceLattice._same_carrier(rho, sigma)
        reps = rho.representatives
        return all(
            sigma.block_of[x] == sigma.block_of[reps[rho.block_of[x]]]
            for x in range(len(rho.block_of))
        )

    @staticmethod
    def all_congruences(
        carrier: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None
    ) -> CongruenceFamily:
        """
        The complete congruence lattice by join-closure of principal congruences

        Starting from equality, every known congruence is joined with every
        principal congruence Cg(a, b) it does not already contain. Every
        congruence is a join of principal ones, so the worklist is exhaustive.

        Args:
            carrier (FiniteSemigroup): Semigroup S
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            CongruenceFamily: All congruences on S
        """
        config = resolve(config)
        n = carrier.order
        if n > config.max_order:
            raise SizeBoundExceeded("semigroup order", n, config.max_order)

        equality = CongruenceLattice.equality(carrier)
        known = {equality.block_of: equality}
        worklist = [equality]
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        while worklist:
            current = worklist.pop()
            for a, b in pairs:
                if current.block_of[a] == current.block_of[b]:
                    continue
                joined = CongruenceLattice._close(carrier, [(a, b)], base=current)
                if joined.block_of not in known:
                    known[joined.block_of] = joined
                    worklist.append(joined)
                    if len(known) > config.cap_congruences:
                        raise CongruenceCapExceeded("congruence count", len(known), config.cap_congruences)

        logger.info("order-%d semigroup has %d congruences", n, len(known))
        return CongruenceFamily.of(carrier, known.values())

    @staticmethod
    def _compatible_rows(carrier: FiniteSemigroup, labelings: np.ndarray) -> np.ndarray:
        """Mask of the rows of an (m, n) labeling matrix that are congruences."""
        table = carrier.table
        m, n = labelings.shape
        # Least member of each element's block, row by row
        same = labelings[:, :, None] == labelings[:, None, :]
        reps = np.argmax(same, axis=2)
        batch = np.arange(m)[:, None, None]
        image = labelings[:, table]
        left = labelings[batch, table[:, reps].transpose(1, 0, 2)]
        right = labelings[batch, table[reps, :]]
        ok = (image == left) & (image == right)
        return ok.reshape(m, -1).all(axis=1)

    @staticmethod
    def set_partitions(n: int) -> Iterator[Tuple[int, ...]]:
        """All partitions of 0..n-1 as restricted growth strings, in lexicographic order."""
        labels = [0] * n

        def extend(position: int, blocks: int) -> Iterator[Tuple[int, ...]]:
            if position == n:
                yield tuple(labels)
                return
            for block in range(blocks + 1):
                labels[position] = block
                yield from extend(position + 1, max(blocks, block + 1))

        if n == 0:
            return iter(())
        return extend(1, 1)

    @staticmethod
    def bell_number(n: int) -> int:
        row = [1]
        for _ in range(n):
            following = [row[-1]]
            for value in row:
                following.append(following[-1] + value)
            row = following
        return row[0]

    @staticmethod
    def brute_force_congruences(
        carrier: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None,
        batch_size: int = 4096
    ) -> CongruenceFamily:
        """
        Oracle: filter every partition of the carrier by the compatibility invariant
        """
        config = resolve(config)
        n = carrier.order
        bell = CongruenceLattice.bell_number(n)
        if bell > config.oracle_bound:
            raise OracleBoundExceeded("partitions to scan", bell, config.oracle_bound)

        found = []
        pending: List[Tuple[int, ...]] = []

        def flush() -> None:
            if not pending:
                return
            labelings = np.array(pending, dtype=np.intp)
            for labels in labelings[CongruenceLattice._compatible_rows(carrier, labelings)]:
                block_of = tuple(int(v) for v in labels)
                found.append(Congruence(carrier=carrier, block_of=block_of, index=max(block_of) + 1))
            pending.clear()

        for labels in CongruenceLattice.set_partitions(n):
            pending.append(labels)
            if len(pending) == batch_size:
                flush()
        flush()
        return CongruenceFamily.of(carrier, found)

    @staticmethod
    def congruences_of_index_at_most(
        carrier: FiniteSemigroup,
        n: int,
        config: Optional[WorkbenchConfig] = None,
        lattice: Optional[CongruenceFamily] = None
    ) -> CongruenceFamily:
        if n < 1:
            raise DomainError(f"index bound must be at least 1, got {n}")
        if lattice is None:
            lattice = CongruenceLattice.all_congruences(carrier, config)
        return CongruenceFamily.of(carrier, (c for c in lattice if c.index <= n))

    @staticmethod
    def index_two_congruences(
        carrier: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None,
        batch_size: int = 4096
    ) -> CongruenceFamily:
        """
        Congruences of index exactly 2, by scanning every two-block partition

        Element 0 always sits in block 0; bit i - 1 of the mask puts element i
        in block 1, so masks 1 .. 2^(n-1) - 1 list each partition once.

        Args:
            carrier (FiniteSemigroup): Semigroup S
            config (Optional[WorkbenchConfig]): Limits; 2^(n-1) - 1 must stay within cap_congruences
            batch_size (int): Partitions checked per vectorized batch

        Returns:
            CongruenceFamily: The index-2 congruences
        """
        config = resolve(config)
        n = carrier.order
        candidates = 2 ** (n - 1) - 1
        if candidates > config.cap_congruences:
            raise CongruenceCapExceeded("two-block partitions", candidates, config.cap_congruences)

        shifts = np.arange(n - 1, dtype=np.int64)
        found = []
        for start in range(1, candidates + 1, batch_size):
            masks = np.arange(start, min(start + batch_size, candidates + 1), dtype=np.int64)
            labelings = np.zeros((len(masks), n), dtype=np.intp)
            labelings[:, 1:] = (masks[:, None] >> shifts[None, :]) & 1
            for labels in labelings[CongruenceLattice._compatible_rows(carrier, labelings)]:
                block_of = tuple(int(v) for v in labels)
                found.append(Congruence(carrier=carrier, block_of=block_of, index=2))
        return CongruenceFamily.of(carrier, found)

    @staticmethod
    def rho_n(
        carrier: FiniteSemigroup,
        n: int,
        config: Optional[WorkbenchConfig] = None,
        lattice: Optional[CongruenceFamily] = None
    ) -> Congruence:
        """
        Meet of all congruences of index at most n

        The result may have index larger than n.

        Args:
            carrier (FiniteSemigroup): Semigroup S
            n (int): Index bound
            config (Optional[WorkbenchConfig]): Limits
            lattice (Optional[CongruenceFamily]): Precomputed lattice of S

        Returns:
            Congruence: rho_n
        """
        bounded = CongruenceLattice.congruences_of_index_at_most(carrier, n, config, lattice)
        return CongruenceLattice.meet_all(carrier, bounded)

    @staticmethod
    def rho_chain(
        carrier: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None,
        lattice: Optional[CongruenceFamily] = None
    ) -> Tuple[Congruence, ...]:
        """rho_1 ⊇ rho_2 ⊇ ... ⊇ rho_|S| with repeats removed; ends at equality."""
        if lattice is None:
            lattice = CongruenceLattice.all_congruences(carrier, config)
        chain: List[Congruence] = []
        for n in range(1, carrier.order + 1):
            rho = CongruenceLattice.rho_n(carrier, n, config, lattice)
            if not chain or chain[-1] != rho:
                chain.append(rho)
        return tuple(chain)

    @staticmethod
    def pullback_congruence(f: Morphism, rho: Congruence) -> Congruence:
        """(f×f)^-1(rho) on the domain of f: a ~ b iff f(a) rho f(b)."""
        if len(rho.block_of) != f.codomain.order:
            raise CarrierMismatch(f.codomain.order, len(rho.block_of))
        block_of = canonical_labels(rho.block_of[image] for image in f.map)
        return Congruence(carrier=f.domain, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def kernel(f: Morphism) -> Congruence:
        block_of = canonical_labels(f.map)
        return Congruence(carrier=f.domain, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def _as_maps(maps: Any) -> List[Tuple[int, ...]]:
        if hasattr(maps, "elements"):
            items = maps.elements
        else:
            items = [m.map if isinstance(m, Morphism) else tuple(m) for m in maps]
        return sorted(set(tuple(int(x) for x in m) for m in items))

    @staticmethod
    def invariance_witness(rho: Congruence, maps: Any) -> Optional[Witness]:
        """
        Lexicographically least (f, a, b) with a rho b but f(a), f(b) unrelated

        Args:
            rho (Congruence): Congruence on the common carrier
            maps (Any): An EndoMonoid, or an iterable of Morphisms or raw maps

        Returns:
            Optional[Witness]: None when every map respects rho
        """
        candidates = CongruenceLattice._as_maps(maps)
        if not candidates:
            return None
        blocks = np.asarray(rho.block_of, dtype=np.intp)
        reps = np.array([rho.representatives[b] for b in rho.block_of], dtype=np.intp)
        images = np.array(candidates, dtype=np.intp)
        image_blocks = blocks[images]
        respected = np.all(image_blocks == image_blocks[:, reps], axis=1)
        failing = np.flatnonzero(~respected)
        if not len(failing):
            return None

        f = images[failing[0]]
        related = blocks[:, None] == blocks[None, :]
        separated = blocks[f][:, None] != blocks[f][None, :]
        a, b = (int(v) for v in np.argwhere(related & separated)[0])
        return candidates[failing[0]], a, b

    @staticmethod
    def is_fully_invariant(rho: Congruence, ends: Any) -> InvarianceVerdict:
        witness = CongruenceLattice.invariance_witness(rho, ends)
        return InvarianceVerdict(holds=witness is None, witness=witness)

    @staticmethod
    def is_characteristic(rho: Congruence, auts: Any) -> InvarianceVerdict:
        """As is_fully_invariant, over automorphisms only."""
        witness = CongruenceLattice.invariance_witness(rho, auts)
        return InvarianceVerdict(holds=witness is None, witness=witness)

    @staticmethod
    def invariant_core(rho: Congruence, maps: Any) -> Congruence:
        """
        ⋂ (f×f)^-1(rho) over the given maps

        Over all of End S (which contains the identity) this is the largest
        fully invariant congruence inside rho; over Aut S, the largest
        characteristic one.
        """
        blocks = np.asarray(rho.block_of, dtype=np.intp)
        columns = [tuple(int(v) for v in blocks[np.asarray(m)]) for m in CongruenceLattice._as_maps(maps)]
        block_of = canonical_labels(zip(rho.block_of, *columns))
        return Congruence(carrier=rho.carrier, block_of=block_of, index=max(block_of) + 1)

    @staticmethod
    def fully_invariant_core(rho: Congruence, ends: Any) -> Congruence:
        return CongruenceLattice.invariant_core(rho, ends)

    @staticmethod
    def characteristic_core(rho: Congruence, auts: Any) -> Congruence:
        return CongruenceLattice.invariant_core(rho, auts)

    @staticmethod
    def restriction_to_pairs(rho: Congruence, elements: Iterable[int]) -> FrozenSet[Tuple[int, int]]:
        """rho ∩ (X×X), as the set of related pairs x < y drawn from X."""
        chosen = sorted(set(elements))
        return frozenset(
            (x, y) for i, x in enumerate(chosen) for y in chosen[i + 1:] if rho.related(x, y)
        )
