from pathlib import Path
from typing import Callable

import pytest

from algebra.config import DEFAULT_CONFIG, WorkbenchConfig
from algebra.congruence import CongruenceFamily, CongruenceLattice
from algebra.endomorphism import EndoMonoid, EndomorphismSearch
from algebra.semigroup import FiniteSemigroup, SemigroupBuilder
from data_ingestion.semigroup_reader import SemigroupReader


@pytest.fixture
def config() -> WorkbenchConfig:
    return DEFAULT_CONFIG


@pytest.fixture
def z4() -> FiniteSemigroup:
    return SemigroupBuilder.cyclic_group(4)


@pytest.fixture
def lz3() -> FiniteSemigroup:
    return SemigroupBuilder.left_zero(3)


@pytest.fixture
def semilattice2() -> FiniteSemigroup:
    return SemigroupBuilder.free_semilattice(2)


@pytest.fixture
def z4_ends(z4) -> EndoMonoid:
    return EndomorphismSearch.enumerate_end(z4)


@pytest.fixture
def lz3_ends(lz3) -> EndoMonoid:
    return EndomorphismSearch.enumerate_end(lz3)


@pytest.fixture(scope="session")
def left_zero_8_lattice() -> CongruenceFamily:
    return CongruenceLattice.all_congruences(SemigroupBuilder.left_zero(8))


@pytest.fixture
def semigroup_file(tmp_path) -> Callable[[FiniteSemigroup, str], Path]:
    """Write a semigroup to a file under tmp_path and return its path."""
    def write(semigroup: FiniteSemigroup, name: str = "semigroup.txt") -> Path:
        path = tmp_path / name
        SemigroupReader.write(semigroup, path)
        return path
    return write
