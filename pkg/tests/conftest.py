"""共享夹具"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cavity_route.domain import HexLatticeDescriptor, HexLink, SystemParams


@pytest.fixture
def resonant() -> SystemParams:
    return SystemParams(omega_c=1.0, delta=0.0, g=65.0, j=1.0)


@pytest.fixture
def dispersive() -> SystemParams:
    return SystemParams(omega_c=1.0, delta=-1000.0, g=65.0, j=1.0)


@pytest.fixture
def two_vertex_lattice() -> HexLatticeDescriptor:
    """两个顶点经端口 1 相连，各带一个上传端口，其余槽位悬空"""
    return HexLatticeDescriptor(vertices=(0, 1), links=(HexLink(0, 1, 1, 1),), uploads=(0, 1))
