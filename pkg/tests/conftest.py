"""Shared eigensolver fixtures, session-scoped so each slow solve runs once."""
import numpy as np
import pytest

from boxmodes.fencing import WireLayout
from boxmodes.helmholtz import Grid, dominant_eigenmode, rasterize_wires

SIDE = 0.072


@pytest.fixture(scope="session")
def grid257():
    return Grid(side=SIDE, resolution=257)


@pytest.fixture(scope="session")
def empty_257(grid257):
    return dominant_eigenmode(grid257)


@pytest.fixture(scope="session")
def center_wire_layout():
    return WireLayout(centers=np.array([[SIDE / 2, SIDE / 2]]), diameter=500e-6)


@pytest.fixture(scope="session")
def ring_257(grid257, center_wire_layout):
    # toroidal fundamental of the cavity with one shorted center wire
    mask = rasterize_wires(grid257, center_wire_layout)
    return dominant_eigenmode(grid257, mask=mask)
