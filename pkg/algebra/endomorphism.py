import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.config import WorkbenchConfig, resolve
from algebra.congruence import Congruence, CongruenceLattice
from algebra.errors import (
    DomainError,
    EnumerationCapExceeded,
    InvariantViolation,
    NotFullyInvariant,
    NotGenerating,
    NotInvariant,
    OracleBoundExceeded,
    SizeBoundExceeded,
)
from algebra.semigroup import FiniteSemigroup, Morphism, SemigroupBuilder

logger = logging.getLogger(__name__)

Map = Tuple[int, ...]


class EndoMonoid:
    """
    End S as a finite monoid: canonically sorted maps plus their composition table.

    ``composition[i][j]`` is the index of ``elements[i] ∘ elements[j]`` (apply
    ``elements[j]`` first). With ``automorphisms_only`` the instance holds Aut S.
    """

    def __init__(
        self,
        carrier: FiniteSemigroup,
        elements: Sequence[Map],
        config: Optional[WorkbenchConfig] = None,
        automorphisms_only: bool = False
    ):
        self.carrier = carrier
        self.elements: Tuple[Map, ...] = tuple(sorted(set(tuple(e) for e in elements)))
        self.automorphisms_only = automorphisms_only
        self._config = resolve(config)
        self.position: Dict[Map, int] = {e: i for i, e in enumerate(self.elements)}
        identity = tuple(range(carrier.order))
        if identity not in self.position:
            raise InvariantViolation("endomorphism set does not contain the identity map")
        self.identity_index = self.position[identity]

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.intp).reshape(len(self.elements), self.carrier.order)

    @cached_property
    def composition(self) -> np.ndarray:
        size = len(self.elements)
        if size > self._config.composition_limit:
            raise SizeBoundExceeded("composition table side", size, self._config.composition_limit)
        maps = self.array
        table = np.empty((size, size), dtype=np.intp)
        for i in range(size):
            # Row i: elements[i] applied after each elements[j]
            composed = maps[i][maps]
            try:
                table[i] = [self.position[tuple(row)] for row in composed.tolist()]
            except KeyError as missing:
                raise InvariantViolation(f"End S is not closed under composition: {missing}") from None
        table.setflags(write=False)
        return table

    @cached_property
    def unit_indices(self) -> Tuple[int, ...]:
        table = self.composition
        inverse = (table == self.identity_index) & (table.T == self.identity_index)
        return tuple(int(i) for i in np.flatnonzero(inverse.any(axis=1)))

    @cached_property
    def surjective_indices(self) -> Tuple[int, ...]:
        n = self.carrier.order
        return tuple(i for i, f in enumerate(self.elements) if len(set(f)) == n)

    @cached_property
    def bijective_indices(self) -> Tuple[int, ...]:
        n = self.carrier.order
        return tuple(
            i for i, f in enumerate(self.elements)
            if len(set(f)) == len(f) and set(f) == set(range(n))
        )

    def as_semigroup(self) -> FiniteSemigroup:
        """The composition table as a validated FiniteSemigroup (cached)."""
        if "_semigroup" not in self.__dict__:
            size = len(self.elements)
            self.__dict__["_semigroup"] = SemigroupBuilder.validate_table(
                size,
                self.composition,
                config=self._config.with_overrides(max_order=max(size, self._config.max_order)),
                check_associativity=size <= self._config.associativity_check_limit
            )
        return self.__dict__["_semigroup"]

    def morphism(self, index: int) -> Morphism:
        images = self.elements[index]
        distinct = len(set(images))
        return Morphism(
            domain=self.carrier,
            codomain=self.carrier,
            map=images,
            surjective=distinct == self.carrier.order,
            injective=distinct == self.carrier.order
        )

    def units_submonoid(self) -> "EndoMonoid":
        """Aut S as an EndoMonoid of its own."""
        return EndoMonoid(
            self.carrier,
            [self.elements[i] for i in self.unit_indices],
            config=self._config,
            automorphisms_only=True
        )


@dataclass(frozen=True)
class EndCongruence:
    """The kernel congruence ρ̂ on End S induced by a congruence ρ on S."""
    base: EndoMonoid = field(repr=False)
    congruence: Congruence
    source: Congruence


@dataclass(frozen=True)
class Restriction:
    """r_ρ: End S -> End(S/ρ) with its kernel ρ̂ and the target monoid."""
    morphism: Morphism
    end_congruence: EndCongruence
    target: EndoMonoid = field(repr=False)
    quotient: FiniteSemigroup = field(repr=False)
    projection: Morphism = field(repr=False)

    @property
    def image_size(self) -> int:
        return self.end_congruence.congruence.index


@dataclass(frozen=True)
class HopfianReport:
    surjective: Tuple[int, ...]
    bijective: Tuple[int, ...]
    units: Tuple[int, ...]
    surjective_idempotents: Tuple[int, ...]
    closed_under_composition: bool
    induced_surjective: Optional[bool]

    @property
    def hopfian(self) -> bool:
        return set(self.surjective) == set(self.bijective)


@dataclass(frozen=True)
class ExtensionCensus:
    generators: Tuple[int, ...]
    extendable: int
    total: int
    restriction_injective: bool

    @property
    def relatively_free(self) -> bool:
        return self.extendable == self.total


@dataclass(frozen=True)
class GeneratorPlan:
    """
    Memoized expressions for extending generator images to a full map.

    ``steps[k]`` lists (y, j, z, defines) for level k: z = y · g_j, where
    ``defines`` says whether z first receives its image here or is checked.
    ``preassigned[k]`` is set when g_k is already a product of earlier generators.
    """
    generators: Tuple[int, ...]
    steps: Tuple[Tuple[Tuple[int, int, int, bool], ...], ...]
    preassigned: Tuple[bool, ...]


def _search(
    rows: Tuple[Tuple[int, ...], ...],
    plan: GeneratorPlan,
    first_images: Optional[Sequence[int]],
    cap: int
) -> List[Map]:
    """Backtracking over generator images; one branch per first-generator image."""
    n = len(rows)
    generators = plan.generators
    depth = len(generators)
    f = [-1] * n
    found: List[Map] = []

    def descend(k: int) -> None:
        if k == depth:
            found.append(tuple(f))
            if len(found) > cap:
                raise EnumerationCapExceeded("endomorphism count", len(found), cap)
            return
        g = generators[k]
        candidates = first_images if (k == 0 and first_images is not None) else range(n)
        for image in candidates:
            if plan.preassigned[k]:
                if f[g] != image:
                    continue
            else:
                f[g] = image
            consistent = True
            for y, j, z, defines in plan.steps[k]:
                value = rows[f[y]][f[generators[j]]]
                if defines:
                    f[z] = value
                elif f[z] != value:
                    consistent = False
                    break
            if consistent:
                descend(k + 1)

    descend(0)
    return found


def _search_branch(arguments: Tuple) -> Tuple[List[Map], bool]:
    """One worker branch; a cap overflow comes back as a flag so the parent raises it."""
    rows, plan, first_images, cap = arguments
    try:
        return _search(rows, plan, first_images, cap), False
    except EnumerationCapExceeded:
        return [], True


class EndomorphismSearch:
    @staticmethod
    def generator_plan(semigroup: FiniteSemigroup, generators: Sequence[int]) -> GeneratorPlan:
        """
        Precompute, level by level, how each element is expressed from generator images

        After levels 0..k every element of <g_0..g_k> has an image, and every
        relation f(y g_j) = f(y) f(g_j) with y in that subsemigroup and j <= k
        is either used to define an image or checked. Checking f(yg) = f(y)f(g)
        for all y and all generators g is enough for f to be a homomorphism.

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            generators (Sequence[int]): Ordered generating set

        Returns:
            GeneratorPlan: The extension plan
        """
        rows = semigroup.rows
        gens = tuple(dict.fromkeys(generators))
        defined: List[int] = []
        is_defined = [False] * semigroup.order
        steps = []
        preassigned = []
        for k, g in enumerate(gens):
            level: List[Tuple[int, int, int, bool]] = []
            pending = [(y, k) for y in defined]
            preassigned.append(is_defined[g])
            if not is_defined[g]:
                is_defined[g] = True
                defined.append(g)
                pending.extend((g, j) for j in range(k + 1))
            position = 0
            while position < len(pending):
                y, j = pending[position]
                position += 1
                z = rows[y][gens[j]]
                if is_defined[z]:
                    level.append((y, j, z, False))
                else:
                    is_defined[z] = True
                    defined.append(z)
                    level.append((y, j, z, True))
                    pending.extend((z, i) for i in range(k + 1))
            steps.append(tuple(level))
        return GeneratorPlan(generators=gens, steps=tuple(steps), preassigned=tuple(preassigned))

    @staticmethod
    def extensions(
        semigroup: FiniteSemigroup,
        generators: Sequence[int],
        config: Optional[WorkbenchConfig] = None
    ) -> List[Map]:
        """All endomorphisms, found as the generator assignments that extend."""
        config = resolve(config)
        plan = EndomorphismSearch.generator_plan(semigroup, generators)
        rows = semigroup.rows
        n = semigroup.order
        if config.workers > 1 and plan.generators:
            branches = [(rows, plan, [image], config.cap_end) for image in range(n)]
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                outcomes = list(pool.map(_search_branch, branches))
            if any(overflowed for _, overflowed in outcomes):
                raise EnumerationCapExceeded("endomorphism count", config.cap_end + 1, config.cap_end)
            results = [m for found, _ in outcomes for m in found]
        else:
            results = _search(rows, plan, None, config.cap_end)
        if len(results) > config.cap_end:
            raise EnumerationCapExceeded("endomorphism count", len(results), config.cap_end)
        return sorted(results)

    @staticmethod
    def enumerate_end(
        semigroup: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None
    ) -> EndoMonoid:
        """
        End S by backtracking over images of an irredundant generating set

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            EndoMonoid: All endomorphisms, lexicographically sorted
        """
        config = resolve(config)
        if semigroup.order > config.max_order:
            raise SizeBoundExceeded("semigroup order", semigroup.order, config.max_order)
        generators = SemigroupBuilder.minimal_generating_set(semigroup)
        maps = EndomorphismSearch.extensions(semigroup, generators, config)
        logger.info("End S of an order-%d semigroup has %d elements", semigroup.order, len(maps))
        return EndoMonoid(semigroup, maps, config=config)

    @staticmethod
    def brute_force_end(
        semigroup: FiniteSemigroup,
        config: Optional[WorkbenchConfig] = None,
        batch_size: int = 8192
    ) -> EndoMonoid:
        """
        Oracle: filter all n^n maps by the homomorphism law
        """
        config = resolve(config)
        n = semigroup.order
        total = n ** n
        if total > config.oracle_bound:
            raise OracleBoundExceeded("maps to scan", total, config.oracle_bound)

        table = semigroup.table
        weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        found: List[Map] = []
        for start in range(0, total, batch_size):
            codes = np.arange(start, min(start + batch_size, total), dtype=np.int64)
            maps = (codes[:, None] // weights[None, :]) % n
            lhs = maps[:, table]
            rhs = table[maps[:, :, None], maps[:, None, :]]
            valid = np.all((lhs == rhs).reshape(len(maps), -1), axis=1)
            found.extend(tuple(int(v) for v in row) for row in maps[valid])
        return EndoMonoid(semigroup, found, config=config)

    @staticmethod
    def aut_group(ends: EndoMonoid) -> Tuple[int, ...]:
        """
        Indices of bijective endomorphisms, checked against the monoid's units
        """
        bijective = ends.bijective_indices
        if set(bijective) != set(ends.unit_indices):
            logger.error("units %s differ from bijections %s", ends.unit_indices, bijective)
            raise InvariantViolation("units of End S differ from its bijective elements")
        return bijective

    @staticmethod
    def _as_map(f: object) -> Map:
        if isinstance(f, Morphism):
            return f.map
        return tuple(int(x) for x in f)

    @staticmethod
    def induced_endo(
        f: object,
        rho: Congruence,
        quotient: Optional[FiniteSemigroup] = None
    ) -> Morphism:
        """
        f′([x]) = [f(x)] on S/ρ

        Args:
            f (object): Endomorphism of S, as a Morphism or a raw map
            rho (Congruence): Congruence that f respects
            quotient (Optional[FiniteSemigroup]): S/ρ, when already built

        Returns:
            Morphism: The induced endomorphism of S/ρ
        """
        images = EndomorphismSearch._as_map(f)
        witness = CongruenceLattice.invariance_witness(rho, [images])
        if witness is not None:
            raise NotInvariant(witness[1], witness[2])
        if quotient is None:
            quotient, _ = SemigroupBuilder.quotient(rho.carrier, rho)
        induced = [rho.block_of[images[rep]] for rep in rho.representatives]
        return SemigroupBuilder.check_morphism(induced, quotient, quotient)

    @staticmethod
    def restriction_to_quotient(
        ends: EndoMonoid,
        rho: Congruence,
        config: Optional[WorkbenchConfig] = None
    ) -> Restriction:
        """
        The projection r_ρ: End S -> End(S/ρ) and its kernel ρ̂

        For an Aut S instance the target is Aut(S/ρ) and ρ must be characteristic.

        Args:
            ends (EndoMonoid): End S (or Aut S)
            rho (Congruence): Fully invariant (or characteristic) congruence
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            Restriction: r_ρ as a verified monoid morphism, ρ̂, and End(S/ρ)
        """
        verdict = CongruenceLattice.is_fully_invariant(rho, ends)
        if not verdict:
            kind = "characteristic" if ends.automorphisms_only else "fully invariant"
            raise NotFullyInvariant(verdict.witness, kind=kind)

        quotient, projection = SemigroupBuilder.quotient(ends.carrier, rho)
        target = EndomorphismSearch.enumerate_end(quotient, config)
        if ends.automorphisms_only:
            target = target.units_submonoid()

        reps = rho.representatives
        images = []
        for f in ends.elements:
            induced = tuple(rho.block_of[f[rep]] for rep in reps)
            if induced not in target.position:
                raise InvariantViolation(f"induced map {list(induced)} is missing from the target monoid")
            images.append(target.position[induced])

        r = SemigroupBuilder.check_morphism(images, ends.as_semigroup(), target.as_semigroup())
        if r.map[ends.identity_index] != target.identity_index:
            raise InvariantViolation("r_ρ does not send the identity to the identity")

        kernel = CongruenceLattice.kernel(r)
        if CongruenceLattice.compatibility_failure(kernel.carrier, kernel.block_of) is not None:
            raise InvariantViolation("kernel of r_ρ is not a congruence on End S")
        return Restriction(
            morphism=r,
            end_congruence=EndCongruence(base=ends, congruence=kernel, source=rho),
            target=target,
            quotient=quotient,
            projection=projection
        )

    @staticmethod
    def hopfian_report(
        ends: EndoMonoid,
        congruences: Sequence[Congruence] = ()
    ) -> HopfianReport:
        """
        Surjective endomorphisms against bijections and units

        Also checks that the surjective elements form a subsemigroup whose only
        idempotent is the identity, and that each surjective endomorphism
        induces surjective maps on the quotients by ``congruences`` (which must
        be fully invariant). Any failure is a defect and raises.

        Args:
            ends (EndoMonoid): End S
            congruences (Sequence[Congruence]): Fully invariant congruences to pass to

        Returns:
            HopfianReport: The verified report
        """
        surjective = ends.surjective_indices
        table = ends.composition
        surjective_set = set(surjective)
        closed = all(int(table[i, j]) in surjective_set for i in surjective for j in surjective)
        idempotents = tuple(i for i in surjective if int(table[i, i]) == i)

        induced_surjective = None
        if congruences:
            induced_surjective = True
            for rho in congruences:
                quotient, _ = SemigroupBuilder.quotient(ends.carrier, rho)
                for i in surjective:
                    if not EndomorphismSearch.induced_endo(ends.elements[i], rho, quotient).surjective:
                        induced_surjective = False

        report = HopfianReport(
            surjective=surjective,
            bijective=ends.bijective_indices,
            units=ends.unit_indices,
            surjective_idempotents=idempotents,
            closed_under_composition=closed,
            induced_surjective=induced_surjective
        )
        if (
            not report.hopfian
            or set(report.units) != surjective_set
            or not closed
            or idempotents != (ends.identity_index,)
            or induced_surjective is False
        ):
            logger.error("Hopfian check failed: %s", report)
            raise InvariantViolation("a surjective endomorphism of a finite semigroup is not invertible")
        return report

    @staticmethod
    def restriction_to_generators(ends: EndoMonoid, generators: Sequence[int]) -> Tuple[Map, ...]:
        """The map End S -> S^X, f ↦ f|X, listed in End S order."""
        return tuple(tuple(f[x] for x in generators) for f in ends.elements)

    @staticmethod
    def extension_census(
        semigroup: FiniteSemigroup,
        generators: Sequence[int],
        config: Optional[WorkbenchConfig] = None
    ) -> ExtensionCensus:
        """
        How many maps X -> S extend to endomorphisms, against all |S|^|X| maps

        Args:
            semigroup (FiniteSemigroup): Semigroup S
            generators (Sequence[int]): Generating set X
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            ExtensionCensus: Counts, and whether restriction to X is injective on End S
        """
        chosen = tuple(sorted(set(generators)))
        if not chosen:
            raise DomainError("generating set must be nonempty")
        if any(x < 0 or x >= semigroup.order for x in chosen):
            raise DomainError(f"generators must be elements of an order-{semigroup.order} semigroup")
        reached = set(SemigroupBuilder.closure(semigroup, chosen))
        if len(reached) != semigroup.order:
            missing = min(set(range(semigroup.order)) - reached)
            raise NotGenerating(missing)

        ends = EndoMonoid(semigroup, EndomorphismSearch.extensions(semigroup, chosen, config), config=config)
        restrictions = EndomorphismSearch.restriction_to_generators(ends, chosen)
        return ExtensionCensus(
            generators=chosen,
            extendable=len(ends),
            total=semigroup.order ** len(chosen),
            restriction_injective=len(set(restrictions)) == len(restrictions)
        )
