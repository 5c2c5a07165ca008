"""拓扑构建与哈密顿量组装单元测试"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cavity_route.domain import (
    Edge,
    HamiltonianMatrix,
    HexLatticeDescriptor,
    HexLink,
    NetworkSpec,
    Site,
    SiteRole,
    SystemParams,
    build_diamond_chain,
    build_hex_lattice,
    build_single_excitation_hamiltonian,
    build_switch,
)
from cavity_route.domain.network import SWITCH_SIGNS


class TestSystemParams:
    """SystemParams 校验"""

    def test_atom_frequency_is_derived(self):
        params = SystemParams(omega_c=1.0, delta=-1000.0)
        assert params.omega_a == 1001.0
        assert not params.is_resonant

    @pytest.mark.parametrize("field", ["g", "j"])
    def test_non_positive_coupling_rejected(self, field: str):
        with pytest.raises(ValueError):
            SystemParams(**{field: 0.0})

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            SystemParams(delta=float("nan"))


class TestNetworkSpec:
    """NetworkSpec 不变量"""

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Edge(1, 1)

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError):
            Edge(0, 1, 2)

    def test_duplicate_pair_rejected(self):
        sites = (Site(0, "1"), Site(1, "2"))
        with pytest.raises(ValueError):
            NetworkSpec(sites=sites, edges=(Edge(0, 1), Edge(1, 0, -1)))

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(ValueError):
            NetworkSpec(sites=(Site(0, "1"),), edges=(Edge(0, 3),))

    def test_non_contiguous_ids_rejected(self):
        with pytest.raises(ValueError):
            NetworkSpec(sites=(Site(0, "1"), Site(2, "3")), edges=())


class TestDiamondChain:
    """菱形链构建"""

    def test_single_block_edges(self, resonant: SystemParams):
        spec = build_diamond_chain(1, resonant)

        assert spec.n_sites == 4
        assert [s.label for s in spec.sites] == ["1", "2", "3", "4"]
        assert {(e.k, e.l, e.sign) for e in spec.edges} == {
            (0, 1, 1),
            (0, 2, 1),
            (1, 3, 1),
            (2, 3, -1),
        }

    def test_two_blocks_negative_edges(self, resonant: SystemParams):
        spec = build_diamond_chain(2, resonant)

        assert spec.n_sites == 7
        assert len(spec.edges) == 8
        negative = {(e.k + 1, e.l + 1) for e in spec.edges if e.sign < 0}
        assert negative == {(3, 4), (6, 7)}

    def test_roles(self, resonant: SystemParams):
        spec = build_diamond_chain(3, resonant)

        vertices = [int(s.label) for s in spec.sites_with_role(SiteRole.VERTEX)]
        controls = [int(s.label) for s in spec.sites_with_role(SiteRole.CONTROL)]
        assert vertices == [1, 4, 7, 10]
        assert controls == [2, 3, 5, 6, 8, 9]

    def test_zero_length_rejected(self, resonant: SystemParams):
        with pytest.raises(ValueError):
            build_diamond_chain(0, resonant)


class TestSwitch:
    """3D 开关构建"""

    def test_couplings_follow_hadamard_signs(self, resonant: SystemParams):
        spec = build_switch(resonant)
        signs = {(e.k, e.l): e.sign for e in spec.edges}

        assert len(spec.edges) == 16
        assert signs[(4 + 2, 3)] == -1
        assert all(signs[(4, j)] == 1 for j in range(4))
        assert all(4 <= e.k < 8 and 0 <= e.l < 4 for e in spec.edges)

    def test_sign_rows_orthogonal(self):
        assert np.array_equal(SWITCH_SIGNS @ SWITCH_SIGNS.T, 4 * np.eye(4))

    def test_roles(self, resonant: SystemParams):
        spec = build_switch(resonant)
        assert [s.role for s in spec.sites[:4]] == [SiteRole.UPLOAD] + [SiteRole.PORT] * 3
        assert all(s.role is SiteRole.CONTROL for s in spec.sites[4:])


class TestHexLattice:
    """六角格构建"""

    def test_two_vertex_counts(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)

        assert spec.n_sites == 15
        assert len(spec.edges) == 32

    def test_link_couples_to_all_inner_sites(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        link = next(s.id for s in spec.sites if "|" in s.label)

        assert len(spec.neighbors(link)) == 8

    def test_on_site_terms_counted_once(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        h = build_single_excitation_hamiltonian(spec).matrix

        assert np.allclose(np.diag(h)[0::2], resonant.omega_c)
        assert np.all(h[0::2, 1::2][np.diag_indices(spec.n_sites)] == resonant.g)

    def test_empty_lattice(self, resonant: SystemParams):
        spec = build_hex_lattice(HexLatticeDescriptor(), resonant)
        assert spec.n_sites == 0
        assert spec.edges == ()

    def test_port_collision_rejected(self):
        with pytest.raises(ValueError):
            HexLatticeDescriptor(
                vertices=(0, 1, 2),
                links=(HexLink(0, 1, 1, 1), HexLink(0, 1, 2, 2)),
            )

    def test_port_index_range(self):
        with pytest.raises(ValueError):
            HexLink(0, 0, 1, 1)


class TestHamiltonian:
    """单激发哈密顿量组装"""

    def test_single_cell(self):
        params = SystemParams(omega_c=2.0, delta=0.5, g=3.0, j=1.0)
        spec = NetworkSpec(sites=(Site(0, "1"),), edges=(), params=params)

        h = build_single_excitation_hamiltonian(spec).matrix

        assert np.array_equal(h, [[2.0, 3.0], [3.0, 1.5]])

    def test_chain_negative_entry(self, resonant: SystemParams):
        h = build_single_excitation_hamiltonian(build_diamond_chain(1, resonant)).matrix

        assert h.shape == (8, 8)
        # 1 起编号的腔 3 与腔 4
        assert h[4, 6] == -resonant.j

    def test_symmetric_and_quasi_uniform(self, dispersive: SystemParams):
        h = build_single_excitation_hamiltonian(build_diamond_chain(3, dispersive)).matrix
        hopping = h[0::2, 0::2] - np.diag(np.diag(h[0::2, 0::2]))

        assert np.array_equal(h, h.T)
        assert set(np.abs(hopping[hopping != 0])) == {dispersive.j}
        assert np.all(np.diag(h)[1::2] == dispersive.omega_a)

    def test_row_layout(self, resonant: SystemParams):
        """测试第 2i 行为腔模、第 2i+1 行为原子"""
        spec = build_switch(resonant)
        h = build_single_excitation_hamiltonian(spec).matrix

        for site in range(spec.n_sites):
            c = HamiltonianMatrix.cavity_index(site)
            a = HamiltonianMatrix.atom_index(site)
            assert (c, a) == (2 * site, 2 * site + 1)
            assert h[c, a] == resonant.g
            assert h[a, a] == resonant.omega_a
        assert h[HamiltonianMatrix.cavity_index(0), HamiltonianMatrix.cavity_index(4)] == resonant.j

    def test_matrix_read_only(self, resonant: SystemParams):
        h = build_single_excitation_hamiltonian(build_switch(resonant))
        with pytest.raises(ValueError):
            h.matrix[0, 0] = 5.0
