"""Shared frame fields; factorizing a grid of frames is the slow part of the suite."""

import pytest

from src.frames import DomainGrid, frame_field
from src.kmatrix import KMatrix
from src.loops import UnitCircleGrid
from src.potentials import degree1_chart, vacuum_potential

CIRCLE_N = 64
TRUNCATION = 16

CHART_K = KMatrix(0.3, 0.2)


@pytest.fixture(scope="session")
def circle():
    return UnitCircleGrid(CIRCLE_N)


@pytest.fixture(scope="session")
def vacuum_frames(circle):
    return frame_field(vacuum_potential(), DomainGrid((-0.5, 0.5), (-0.5, 0.5), 5, 5), circle, TRUNCATION)


@pytest.fixture(scope="session")
def vacuum_patch_frames(circle):
    return frame_field(vacuum_potential(), DomainGrid((-0.125, 0.125), (-0.125, 0.125), 9, 9),
                       circle, TRUNCATION)


@pytest.fixture(scope="session")
def chart_frames(circle):
    xi = degree1_chart(CHART_K.A, CHART_K.B, 0.25, 0.25)
    return frame_field(xi, DomainGrid((-0.5, 0.5), (-0.05, 0.05), 5, 3), circle, TRUNCATION)
