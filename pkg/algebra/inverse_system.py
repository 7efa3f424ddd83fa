import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, List, Optional, Tuple

import numpy as np

from algebra.config import WorkbenchConfig, resolve
from algebra.congruence import Congruence, CongruenceLattice
from algebra.endomorphism import EndomorphismSearch, Map
from algebra.errors import (
    CongruenceCapExceeded,
    DomainError,
    InvariantViolation,
    LevelOutOfRange,
    NoEqualityMember,
    NotAChain,
    NotSurjective,
    OracleBoundExceeded,
    SizeBoundExceeded,
)
from algebra.semigroup import FiniteSemigroup, Morphism, SemigroupBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Thread:
    """One element of a limit: a component per level, compatible with every connecting map."""
    components: Tuple[int, ...]


@dataclass(frozen=True)
class InverseSystem:
    """
    A chain S_0 <- S_1 <- ... <- S_k of surjective morphisms.

    ``connecting[i]`` maps ``levels[i + 1]`` onto ``levels[i]``.
    """
    levels: Tuple[FiniteSemigroup, ...]
    connecting: Tuple[Morphism, ...]

    def __post_init__(self):
        if not self.levels:
            raise DomainError("an inverse system needs at least one level")
        if len(self.connecting) != len(self.levels) - 1:
            raise DomainError(
                f"{len(self.levels)} levels need {len(self.levels) - 1} connecting maps, "
                f"got {len(self.connecting)}"
            )
        for i, pi in enumerate(self.connecting):
            if pi.domain != self.levels[i + 1] or pi.codomain != self.levels[i]:
                raise DomainError(f"connecting map {i} does not run from level {i + 1} to level {i}")
            if not pi.surjective:
                missing = min(set(range(self.levels[i].order)) - set(pi.map))
                raise NotSurjective(i, missing)

    @property
    def top(self) -> FiniteSemigroup:
        return self.levels[-1]

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(level.order for level in self.levels)


@dataclass(frozen=True)
class CanonicalMap:
    """s ↦ (p_ρ(s))_ρ from a semigroup into the limit of its quotient tower."""
    images: Tuple[Tuple[int, ...], ...]
    thread_count: int
    injective: bool
    surjective: bool
    collision: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class Theorem9Report:
    """
    Finite check of End S ≅ lim End S/ρ̂ over a chain of congruences.

    ``injective`` is the point-separation condition, ``surjective`` says every
    thread is hit, and ``homomorphism`` that the canonical map respects
    composition componentwise.
    """
    family: Tuple[str, ...]
    end_size: int
    level_sizes: Tuple[int, ...]
    thread_count: int
    injective: bool
    surjective: bool
    homomorphism: bool
    automorphisms: bool = False
    injectivity_witness: Optional[Tuple[Map, Map]] = None
    surjectivity_witness: Optional[Tuple[int, ...]] = None

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective and self.homomorphism


@dataclass(frozen=True)
class LevelDiagnostic:
    word_length: int
    order: int
    index_two_formula: int
    index_two_count: Optional[int]


@dataclass(frozen=True)
class LeftZeroTower:
    """Left-zero semigroups on binary words of length 1..k, erasing the last letter downward."""
    system: InverseSystem
    diagnostics: Tuple[LevelDiagnostic, ...] = field(default=())

    @property
    def depth(self) -> int:
        return len(self.system.levels)

    def level(self, word_length: int) -> FiniteSemigroup:
        if not 1 <= word_length <= self.depth:
            raise LevelOutOfRange(word_length, self.depth)
        return self.system.levels[word_length - 1]


class TowerBuilder:
    @staticmethod
    def order_chain(chain: Iterable[Congruence]) -> Tuple[Congruence, ...]:
        """
        Deduplicate and sort coarsest-to-finest; every member must refine the previous one
        """
        unique = {}
        for congruence in chain:
            unique.setdefault(congruence.block_of, congruence)
        ordered = sorted(unique.values(), key=lambda c: (c.index, c.block_of))
        for i in range(len(ordered) - 1):
            if not CongruenceLattice.refines(ordered[i + 1], ordered[i]):
                raise NotAChain(i, i + 1)
        return tuple(ordered)

    @staticmethod
    def _collapse(coarse: Congruence, fine: Congruence) -> Tuple[int, ...]:
        """Block map S/fine -> S/coarse, read off each fine block's least member."""
        return tuple(coarse.block_of[rep] for rep in fine.representatives)

    @staticmethod
    def build_tower_from_family(
        semigroup: FiniteSemigroup,
        family: Iterable[Congruence],
        include_top: bool = True
    ) -> InverseSystem:
        """
        Tower of quotients S/ρ along a refinement chain, with S itself on top

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            family (Iterable[Congruence]): Congruences on S forming a chain under refinement
            include_top (bool): Append S above the finest quotient

        Returns:
            InverseSystem: The tower with its block-collapsing connecting maps
        """
        chain = TowerBuilder.order_chain(family)
        if not chain and not include_top:
            raise DomainError("an empty family gives an empty tower")

        quotients = [SemigroupBuilder.quotient(semigroup, rho)[0] for rho in chain]
        connecting = [
            SemigroupBuilder.check_morphism(
                TowerBuilder._collapse(chain[i], chain[i + 1]), quotients[i + 1], quotients[i]
            )
            for i in range(len(chain) - 1)
        ]
        levels = list(quotients)
        if include_top:
            if chain:
                connecting.append(
                    SemigroupBuilder.check_morphism(chain[-1].block_of, semigroup, quotients[-1])
                )
            levels.append(semigroup)
        return InverseSystem(levels=tuple(levels), connecting=tuple(connecting))

    @staticmethod
    def limit_threads(
        system: InverseSystem,
        config: Optional[WorkbenchConfig] = None
    ) -> Tuple[Thread, ...]:
        """
        All compatible threads, by extending level-0 elements upward through fibers

        Every thread is determined by its top component, so the count is |top level|.

        Args:
            system (InverseSystem): The tower
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            Tuple[Thread, ...]: Threads in lexicographic order
        """
        config = resolve(config)
        if system.top.order > config.max_order:
            raise SizeBoundExceeded("thread count", system.top.order, config.max_order)

        threads: List[Tuple[int, ...]] = [(x,) for x in range(system.levels[0].order)]
        for i, pi in enumerate(system.connecting):
            fibers: List[List[int]] = [[] for _ in range(system.levels[i].order)]
            for y, x in enumerate(pi.map):
                fibers[x].append(y)
            threads = [thread + (y,) for thread in threads for y in fibers[thread[-1]]]
        logger.debug("tower with orders %s has %d threads", system.orders, len(threads))
        return tuple(Thread(components=t) for t in threads)

    @staticmethod
    def brute_force_threads(
        system: InverseSystem,
        config: Optional[WorkbenchConfig] = None
    ) -> Tuple[Thread, ...]:
        """Oracle: filter the full product of the levels by compatibility."""
        config = resolve(config)
        total = math.prod(system.orders)
        if total > config.oracle_bound:
            raise OracleBoundExceeded("level product", total, config.oracle_bound)
        found = []
        for candidate in product(*(range(order) for order in system.orders)):
            if all(pi.map[candidate[i + 1]] == candidate[i] for i, pi in enumerate(system.connecting)):
                found.append(Thread(components=candidate))
        return tuple(found)

    @staticmethod
    def canonical_map_to_limit(
        semigroup: FiniteSemigroup,
        family: Iterable[Congruence],
        config: Optional[WorkbenchConfig] = None
    ) -> CanonicalMap:
        """
        Compare S with the limit of its quotient tower (S itself left out)

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            family (Iterable[Congruence]): Nonempty refinement chain on S
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            CanonicalMap: Images, thread count and bijectivity verdicts
        """
        chain = TowerBuilder.order_chain(family)
        system = TowerBuilder.build_tower_from_family(semigroup, chain, include_top=False)
        threads = {t.components for t in TowerBuilder.limit_threads(system, config)}
        images = tuple(
            tuple(rho.block_of[s] for rho in chain) for s in range(semigroup.order)
        )
        first_seen = {}
        collision = None
        for s, image in enumerate(images):
            if image in first_seen:
                collision = (first_seen[image], s)
                break
            first_seen[image] = s
        return CanonicalMap(
            images=images,
            thread_count=len(threads),
            injective=collision is None,
            surjective=set(images) == threads,
            collision=collision
        )

    @staticmethod
    def verify_theorem9(
        semigroup: FiniteSemigroup,
        family: Iterable[Congruence],
        config: Optional[WorkbenchConfig] = None,
        automorphisms: bool = False,
        require_equality: bool = True
    ) -> Theorem9Report:
        """
        Check End S ≅ lim End S/ρ̂ along a chain of fully invariant congruences

        The limit is taken over the image monoids End S/ρ̂ (images of r_ρ), with
        connecting maps read off the least endomorphism in each ρ̂-block. With
        ``automorphisms`` the same is done for Aut S and characteristic
        congruences. ``require_equality=False`` lets a family that misses the
        equality congruence through, so the point-separation failure is
        reported with a witness instead of raised.

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            family (Iterable[Congruence]): Refinement chain of invariant congruences
            config (Optional[WorkbenchConfig]): Limits
            automorphisms (bool): Verify the Aut S analogue
            require_equality (bool): Raise NoEqualityMember when equality is absent

        Returns:
            Theorem9Report: Verdicts and witnesses
        """
        config = resolve(config)
        chain = TowerBuilder.order_chain(family)
        if not chain:
            raise DomainError("the family is empty")
        if require_equality and not chain[-1].is_equality:
            raise NoEqualityMember()

        ends = EndomorphismSearch.enumerate_end(semigroup, config)
        if automorphisms:
            ends = ends.units_submonoid()
        restrictions = [EndomorphismSearch.restriction_to_quotient(ends, rho, config) for rho in chain]
        hats = [r.end_congruence.congruence for r in restrictions]
        monoid = ends.as_semigroup()

        levels = [SemigroupBuilder.quotient(monoid, hat)[0] for hat in hats]
        connecting = []
        for i in range(len(hats) - 1):
            collapse = TowerBuilder._collapse(hats[i], hats[i + 1])
            if any(collapse[hats[i + 1].block_of[f]] != hats[i].block_of[f] for f in range(len(ends))):
                raise InvariantViolation(f"connecting map {i} between End S/ρ̂ levels is not well defined")
            connecting.append(SemigroupBuilder.check_morphism(collapse, levels[i + 1], levels[i]))
        system = InverseSystem(levels=tuple(levels), connecting=tuple(connecting))
        threads = [t.components for t in TowerBuilder.limit_threads(system, config)]

        images = [tuple(hat.block_of[f] for hat in hats) for f in range(len(ends))]
        injectivity_witness = None
        first_seen = {}
        for f, image in enumerate(images):
            if image in first_seen:
                injectivity_witness = (ends.elements[first_seen[image]], ends.elements[f])
                break
            first_seen[image] = f

        hit = set(images)
        missed = [t for t in threads if t not in hit]

        composition = ends.composition
        homomorphism = True
        for hat, level in zip(hats, levels):
            blocks = np.asarray(hat.block_of, dtype=np.intp)
            if not np.array_equal(blocks[composition], level.table[blocks[:, None], blocks[None, :]]):
                homomorphism = False

        report = Theorem9Report(
            family=tuple(rho.render() for rho in chain),
            end_size=len(ends),
            level_sizes=tuple(level.order for level in levels),
            thread_count=len(threads),
            injective=injectivity_witness is None,
            surjective=not missed,
            homomorphism=homomorphism,
            automorphisms=automorphisms,
            injectivity_witness=injectivity_witness,
            surjectivity_witness=missed[0] if missed else None
        )
        logger.info(
            "limit check: |End S| = %d, levels %s, %d threads, isomorphism %s",
            report.end_size, report.level_sizes, report.thread_count, report.isomorphism
        )
        return report

    @staticmethod
    def word_labels(length: int) -> List[str]:
        """Binary words of the given length; the first letter is the most significant bit."""
        return [format(w, f"0{length}b") for w in range(2 ** length)]

    @staticmethod
    def left_zero_tower(k: int, config: Optional[WorkbenchConfig] = None) -> LeftZeroTower:
        """
        Left-zero semigroups on words of length 1..k with the erase-last-letter maps

        Each level carries the number of its index-2 congruences, enumerated
        when the two-block partitions fit under cap_congruences, next to the
        closed form 2^(m-1) - 1 for order m.

        Args:
            k (int): Number of levels
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            LeftZeroTower: The tower and its per-level diagnostics
        """
        config = resolve(config)
        if k < 1:
            raise DomainError(f"a tower needs at least one level, got {k}")
        if 2 ** k > config.max_order:
            raise SizeBoundExceeded("top level order", 2 ** k, config.max_order)

        levels = [
            SemigroupBuilder.left_zero(2 ** i, labels=TowerBuilder.word_labels(i))
            for i in range(1, k + 1)
        ]
        connecting = [
            SemigroupBuilder.check_morphism(
                [w >> 1 for w in range(levels[i + 1].order)], levels[i + 1], levels[i]
            )
            for i in range(k - 1)
        ]
        system = InverseSystem(levels=tuple(levels), connecting=tuple(connecting))

        diagnostics = []
        for i, level in enumerate(levels, start=1):
            try:
                count = len(CongruenceLattice.index_two_congruences(level, config))
            except CongruenceCapExceeded:
                logger.warning("index-2 congruences of the order-%d level were not enumerated", level.order)
                count = None
            diagnostics.append(LevelDiagnostic(
                word_length=i,
                order=level.order,
                index_two_formula=2 ** (level.order - 1) - 1,
                index_two_count=count
            ))
        return LeftZeroTower(system=system, diagnostics=tuple(diagnostics))

    @staticmethod
    def shift_between_levels(tower: LeftZeroTower, i: int) -> Morphism:
        """
        Erase the first letter: words of length i + 1 onto words of length i

        Args:
            tower (LeftZeroTower): A left-zero tower with level i + 1 present
            i (int): Target word length

        Returns:
            Morphism: The shift, verified surjective and not injective
        """
        if i < 1 or i + 1 > tower.depth:
            raise LevelOutOfRange(i + 1, tower.depth)
        source = tower.level(i + 1)
        target = tower.level(i)
        mask = 2 ** i - 1
        shift = SemigroupBuilder.check_morphism([w & mask for w in range(source.order)], source, target)
        if not shift.surjective or shift.injective:
            raise InvariantViolation(f"shift onto level {i} should be surjective and not injective")
        return shift

    @staticmethod
    def shift_commutes(tower: LeftZeroTower, i: int) -> bool:
        """
        Erasing the first letter then the last equals erasing the last then the first

        Compared as maps from words of length i + 2 to words of length i.
        """
        if i < 1 or i + 2 > tower.depth:
            raise LevelOutOfRange(i + 2, tower.depth)
        upper_shift = TowerBuilder.shift_between_levels(tower, i + 1)
        lower_shift = TowerBuilder.shift_between_levels(tower, i)
        erase_upper = tower.system.connecting[i]
        erase_lower = tower.system.connecting[i - 1]
        return lower_shift.compose(erase_upper).map == erase_lower.compose(upper_shift).map
