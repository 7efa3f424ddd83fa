import logging
from typing import List, Optional

import pandas as pd

from algebra.config import WorkbenchConfig, resolve
from algebra.congruence import Congruence, CongruenceLattice
from algebra.endomorphism import EndomorphismSearch
from algebra.errors import DomainError, OracleBoundExceeded
from algebra.inverse_system import TowerBuilder
from algebra.semigroup import FiniteSemigroup, SemigroupBuilder, render_map
from data_ingestion.semigroup_reader import SemigroupReader
from data_ingestion.tower_reader import TowerReader
from orchestrator.report import Report

logger = logging.getLogger(__name__)


class AnalysisCoordinator:
    def __init__(self, config: Optional[WorkbenchConfig] = None):
        """
        Strings the algebra kernels together into command reports

        Args:
            config (Optional[WorkbenchConfig]): Limits passed to every kernel
        """
        self.config = resolve(config)

    def load(self, source: str) -> FiniteSemigroup:
        return SemigroupReader.load(source, self.config)

    def parse_family(self, semigroup: FiniteSemigroup, family: str) -> List[Congruence]:
        """Congruence literals separated by ';'."""
        literals = [literal for literal in family.split(";") if literal.strip()]
        if not literals:
            raise DomainError("the family is empty")
        return [CongruenceLattice.parse(semigroup, literal) for literal in literals]

    def cmd_validate(self, source: str) -> Report:
        """
        Order, associativity, idempotents and an irredundant generating set

        Args:
            source (str): Semigroup file path or builtin token

        Returns:
            Report: The validation report
        """
        semigroup = self.load(source)
        idempotents = SemigroupBuilder.idempotents(semigroup)
        generators = SemigroupBuilder.minimal_generating_set(semigroup)

        report = Report("validate", inputs=[("source", source)])
        report.add("order", semigroup.order)
        report.add("associative", True)
        report.add("idempotent_count", len(idempotents))
        report.add("idempotents", [semigroup.label(e) for e in idempotents])
        report.add("generating_set", [semigroup.label(g) for g in generators])
        return report

    def cmd_analyze(
        self,
        source: str,
        congruences: bool = True,
        end: bool = True,
        aut: bool = True,
        fully_invariant: bool = True,
        characteristic: bool = True,
        hopfian: bool = True,
        census: bool = True,
        index_bound: Optional[int] = None
    ) -> Report:
        """
        Congruence lattice, End/Aut, invariance verdicts, Hopfian check and census

        Args:
            source (str): Semigroup file path or builtin token
            congruences (bool): List the congruence lattice
            end (bool): List End S
            aut (bool): List Aut S
            fully_invariant (bool): Verdict per congruence over End S
            characteristic (bool): Verdict per congruence over Aut S
            hopfian (bool): Surjective/bijective/unit comparison
            census (bool): Extension census over the generating set
            index_bound (Optional[int]): Also report rho_n for this n

        Returns:
            Report: The analysis report
        """
        semigroup = self.load(source)
        report = Report("analyze", inputs=[("source", source), ("index_bound", index_bound)])
        report.add("order", semigroup.order)

        lattice = None
        if congruences or fully_invariant or characteristic or hopfian or index_bound is not None:
            lattice = CongruenceLattice.all_congruences(semigroup, self.config)
        if congruences:
            report.add("congruence_count", len(lattice))
            report.add("congruences", [rho.render() for rho in lattice])

        ends = None
        if end or aut or fully_invariant or characteristic or hopfian or index_bound is not None:
            ends = EndomorphismSearch.enumerate_end(semigroup, self.config)
        if end:
            report.add("end_size", len(ends))
            report.add("endomorphisms", [render_map(f) for f in ends.elements])

        auts = None
        if aut or characteristic:
            EndomorphismSearch.aut_group(ends)
            auts = ends.units_submonoid()
        if aut:
            report.add("aut_size", len(auts))
            report.add("automorphisms", [render_map(f) for f in auts.elements])

        if fully_invariant or characteristic:
            rows = []
            for rho in lattice:
                row = {"congruence": rho.render(), "index": rho.index}
                for enabled, name, predicate, maps in (
                    (fully_invariant, "fully_invariant", CongruenceLattice.is_fully_invariant, ends),
                    (characteristic, "characteristic", CongruenceLattice.is_characteristic, auts),
                ):
                    if not enabled:
                        continue
                    verdict = predicate(rho, maps)
                    row[name] = verdict.holds
                    if verdict.witness is not None:
                        f, a, b = verdict.witness
                        report.witness(
                            congruence=rho.render(),
                            property=name.replace("_", " "),
                            map=render_map(f),
                            pair=f"{a} {b}"
                        )
                rows.append(row)
            report.add("invariance", pd.DataFrame(rows, dtype=object))

        if hopfian:
            chain = CongruenceLattice.rho_chain(semigroup, self.config, lattice)
            verdict = EndomorphismSearch.hopfian_report(ends, chain)
            report.add("hopfian", verdict.hopfian)
            report.add("surjective_count", len(verdict.surjective))
            report.add("bijective_count", len(verdict.bijective))
            report.add("unit_count", len(verdict.units))
            report.add("surjective_idempotent_count", len(verdict.surjective_idempotents))
            report.add("induced_maps_surjective", verdict.induced_surjective)

        if index_bound is not None:
            rho = CongruenceLattice.rho_n(semigroup, index_bound, self.config, lattice)
            report.add("rho_n", rho.render())
            report.add("rho_n_index", rho.index)
            report.add("rho_n_fully_invariant", CongruenceLattice.is_fully_invariant(rho, ends).holds)

        if census:
            generators = SemigroupBuilder.minimal_generating_set(semigroup)
            result = EndomorphismSearch.extension_census(semigroup, generators, self.config)
            report.add("census_generators", [semigroup.label(g) for g in result.generators])
            report.add("census_extendable", result.extendable)
            report.add("census_total", result.total)
            report.add("relatively_free", result.relatively_free)
            report.add("restriction_injective", result.restriction_injective)
        return report

    def cmd_rho(self, source: str, n: Optional[int] = None) -> Report:
        """
        One rho_n, or the whole sequence rho_1 ⊇ rho_2 ⊇ ... ⊇ rho_|S|
        """
        semigroup = self.load(source)
        lattice = CongruenceLattice.all_congruences(semigroup, self.config)
        report = Report("rho", inputs=[("source", source), ("n", n)])
        if n is not None:
            rho = CongruenceLattice.rho_n(semigroup, n, self.config, lattice)
            report.add("rho_n", rho.render())
            report.add("index", rho.index)
            return report

        rows = []
        for bound in range(1, semigroup.order + 1):
            rho = CongruenceLattice.rho_n(semigroup, bound, self.config, lattice)
            rows.append({"n": bound, "index": rho.index, "rho_n": rho.render()})
        report.add("chain", pd.DataFrame(rows, dtype=object))
        return report

    def cmd_theorem9(
        self,
        source: str,
        family: Optional[str] = None,
        automorphisms: bool = False
    ) -> Report:
        """
        Verify End S ≅ lim End S/ρ̂ (or the Aut S analogue) along a chain

        Args:
            source (str): Semigroup file path or builtin token
            family (Optional[str]): ';'-separated congruence literals; defaults to the rho_n chain
            automorphisms (bool): Verify Aut S against characteristic congruences

        Returns:
            Report: Sizes and the injective/surjective/isomorphism verdicts
        """
        semigroup = self.load(source)
        if family is None:
            chain = list(CongruenceLattice.rho_chain(semigroup, self.config))
        else:
            chain = self.parse_family(semigroup, family)

        result = TowerBuilder.verify_theorem9(semigroup, chain, self.config, automorphisms=automorphisms)
        monoid = "Aut S" if automorphisms else "End S"
        report = Report("theorem9", inputs=[
            ("source", source),
            ("family", family if family is not None else "rho chain"),
            ("monoid", monoid),
        ])
        report.add("family_members", list(result.family))
        report.add("monoid_size", result.end_size)
        report.add("level_sizes", list(result.level_sizes))
        report.add("thread_count", result.thread_count)
        report.add("injective", result.injective)
        report.add("surjective", result.surjective)
        report.add("homomorphism", result.homomorphism)
        report.add("isomorphism", result.isomorphism)
        if result.injectivity_witness is not None:
            f, g = result.injectivity_witness
            report.witness(kind="not injective", first=render_map(f), second=render_map(g))
        if result.surjectivity_witness is not None:
            report.witness(kind="not surjective", thread=render_map(result.surjectivity_witness))
        return report

    def cmd_tower_left_zero(self, levels: int) -> Report:
        """
        Left-zero tower diagnostics: orders, index-2 counts and shift verdicts

        Args:
            levels (int): Number of levels k

        Returns:
            Report: Per-level table plus thread count
        """
        tower = TowerBuilder.left_zero_tower(levels, self.config)
        rows = []
        for diagnostic in tower.diagnostics:
            i = diagnostic.word_length
            row = {
                "word_length": i,
                "order": diagnostic.order,
                "index2_count": diagnostic.index_two_count,
                "index2_formula": diagnostic.index_two_formula,
                "shift_surjective": None,
                "shift_injective": None,
            }
            if i < tower.depth:
                shift = TowerBuilder.shift_between_levels(tower, i)
                row["shift_surjective"] = shift.surjective
                row["shift_injective"] = shift.injective
            rows.append(row)

        report = Report("tower", inputs=[("kind", "left-zero"), ("levels", levels)])
        report.add("depth", tower.depth)
        report.add("levels", pd.DataFrame(rows, dtype=object))
        report.add("thread_count", len(TowerBuilder.limit_threads(tower.system, self.config)))
        commutes = None
        if tower.depth >= 3:
            commutes = all(TowerBuilder.shift_commutes(tower, i) for i in range(1, tower.depth - 1))
        report.add("shift_commutes_with_erasure", commutes)
        return report

    def cmd_tower_file(self, path: str) -> Report:
        system = TowerReader.read(path, self.config)
        threads = TowerBuilder.limit_threads(system, self.config)
        try:
            oracle_agrees = TowerBuilder.brute_force_threads(system, self.config) == threads
        except OracleBoundExceeded:
            logger.warning("tower too large for the brute-force thread check")
            oracle_agrees = None

        report = Report("tower", inputs=[("kind", "file"), ("path", path)])
        report.add("depth", len(system.levels))
        report.add("level_orders", list(system.orders))
        report.add("thread_count", len(threads))
        report.add("brute_force_agrees", oracle_agrees)
        return report

    def cmd_end(self, source: str) -> Report:
        semigroup = self.load(source)
        ends = EndomorphismSearch.enumerate_end(semigroup, self.config)
        idempotent = [f for f in ends.elements if tuple(f[x] for x in f) == f]

        report = Report("end", inputs=[("source", source)])
        report.add("end_size", len(ends))
        report.add("surjective_count", len(ends.surjective_indices))
        report.add("idempotent_count", len(idempotent))
        report.add("endomorphisms", [render_map(f) for f in ends.elements])
        return report

    def cmd_aut(self, source: str) -> Report:
        semigroup = self.load(source)
        ends = EndomorphismSearch.enumerate_end(semigroup, self.config)
        EndomorphismSearch.aut_group(ends)
        auts = ends.units_submonoid()

        report = Report("aut", inputs=[("source", source)])
        report.add("aut_size", len(auts))
        report.add("automorphisms", [render_map(f) for f in auts.elements])
        return report
