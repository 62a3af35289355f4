import numpy as np
import pytest

from qdt.measures import AlternativeSet
from qdt.state import EvolutionGenerator, make_density
from qdt.tensor import SpaceLayout

SQRT_HALF = 1.0 / np.sqrt(2.0)


@pytest.fixture
def qubit():
    return SpaceLayout.single('A', 2)


@pytest.fixture
def alt_subject():
    return SpaceLayout.from_pairs([('A', 2), ('S', 2)])


@pytest.fixture
def three_factor():
    return SpaceLayout.from_pairs([('A', 2), ('B', 2), ('S', 2)])


@pytest.fixture
def standard_alts():
    return AlternativeSet.standard(2, 'A')


@pytest.fixture
def plus_minus_alts():
    return AlternativeSet(np.array([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]]), 'A')


@pytest.fixture
def decoherence_setup(alt_subject):
    """A ⊗ S durumu ve çarpım özbazlı üreteç (ε = 0.3, 1.1, 1.9, 3.2)."""
    state = make_density([0.6, 0.3 + 0.2j, 0.4, 0.1 - 0.5j], alt_subject)
    gen = EvolutionGenerator.from_energies([0.3, 1.1, 1.9, 3.2], alt_subject)
    return state, gen
