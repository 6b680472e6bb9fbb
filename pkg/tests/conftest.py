"""Shared session fixtures for the expensive lattice computations."""

import pytest

from lat40.autgroup import full_aut
from lat40.construction import build_O40
from lat40.enumeration import vectors_of_norm_at_most
from lat40.frames import gamma_group, orthogonal_census
from lat40.vectortypes import refine_to_irreducible


@pytest.fixture(scope="session")
def o40():
    return build_O40()


@pytest.fixture(scope="session")
def s40(o40):
    return vectors_of_norm_at_most(o40, 4)


@pytest.fixture(scope="session")
def irreducible(s40):
    return refine_to_irreducible(s40)


@pytest.fixture(scope="session")
def gamma():
    return gamma_group()


@pytest.fixture(scope="session")
def census(s40, gamma):
    return orthogonal_census(s40, gamma)


@pytest.fixture(scope="session")
def aut(o40, s40, gamma, irreducible):
    return full_aut(o40, s40, gamma, partition=irreducible)
