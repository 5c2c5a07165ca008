"""集体基变换与分块单元测试"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cavity_route.domain import (
    ExcitationState,
    HexLatticeDescriptor,
    ModeRef,
    SystemParams,
    block_decompose,
    build_diamond_chain,
    build_hex_lattice,
    build_single_excitation_hamiltonian,
    build_switch,
    chain_collective_basis,
    collective_basis,
    eigendecompose,
    extract_block,
    identity_transform,
    propagate,
)
from cavity_route.domain.network import hex_layout
from cavity_route.domain.subspaces import BlockGroup, OrthogonalTransform

ROOT2 = math.sqrt(2.0)


class TestChainBasis:
    """菱形链 ± 集体基"""

    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_residual_vanishes(self, n: int, resonant: SystemParams):
        spec = build_diamond_chain(n, resonant)
        blocks, residual = block_decompose(
            build_single_excitation_hamiltonian(spec), collective_basis(spec)
        )

        assert residual <= 1e-12
        assert [b.name for b in blocks] == [f"H{i}" for i in range(1, n + 2)]

    def test_block_sizes(self, resonant: SystemParams):
        spec = build_diamond_chain(2, resonant)
        blocks, _ = block_decompose(
            build_single_excitation_hamiltonian(spec), collective_basis(spec)
        )
        assert [b.dim for b in blocks] == [4, 6, 4]
        assert sum(b.dim for b in blocks) == spec.dim

    def test_orthogonal(self):
        q = chain_collective_basis(4).q
        assert np.max(np.abs(q.T @ q - np.eye(q.shape[0]))) <= 1e-12

    def test_end_block_matrix(self):
        params = SystemParams(omega_c=1.0, delta=0.5, g=65.0, j=1.0)
        h1 = extract_block(build_diamond_chain(1, params), "H1")

        assert h1.labels == ("c_1", "a_1", "c_1^+", "a_1^+")
        expected = np.array(
            [
                [1.0, 65.0, ROOT2, 0.0],
                [65.0, 0.5, 0.0, 0.0],
                [ROOT2, 0.0, 1.0, 65.0],
                [0.0, 0.0, 65.0, 0.5],
            ]
        )
        assert np.allclose(h1.matrix, expected, atol=1e-12)

    def test_bulk_block_matrix(self, resonant: SystemParams):
        h2 = extract_block(build_diamond_chain(2, resonant), "H2")

        assert h2.labels == ("c_1^-", "a_1^-", "c_2", "a_2", "c_2^+", "a_2^+")
        cavities = h2.matrix[0::2, 0::2]
        assert np.allclose(cavities[0, 1], ROOT2, atol=1e-12)
        assert np.allclose(cavities[1, 2], ROOT2, atol=1e-12)
        assert abs(cavities[0, 2]) <= 1e-12
        assert np.allclose(np.diag(h2.matrix[0::2, 1::2]), resonant.g)


class TestHadamardBasis:
    """开关与六角格的 Hadamard 集体基"""

    def test_switch_blocks(self, resonant: SystemParams):
        spec = build_switch(resonant)
        blocks, residual = block_decompose(
            build_single_excitation_hamiltonian(spec), collective_basis(spec)
        )

        assert residual <= 1e-12
        assert [b.name for b in blocks] == ["Hmu0", "Hmu1", "Hmu2", "Hmu3"]
        assert all(b.dim == 4 for b in blocks)

    def test_switch_block_coupling_is_2j(self, dispersive: SystemParams):
        block = extract_block(build_switch(dispersive), "Hmu2")

        assert block.labels == ("nu_2^c", "nu_2^a", "xi_mu2^c", "xi_mu2^a")
        assert np.allclose(block.matrix[0, 2], 2.0 * dispersive.j, atol=1e-12)
        assert np.allclose(np.diag(block.matrix), [1.0, 1001.0, 1.0, 1001.0])

    def test_hex_residual_and_blocks(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        blocks, residual = block_decompose(
            build_single_excitation_hamiltonian(spec), collective_basis(spec)
        )

        assert residual <= 1e-12
        hops = [b for b in blocks if b.kind == "hop"]
        assert [b.name for b in hops] == ["H0,1"]
        assert hops[0].dim == 6
        assert sorted(b.dim for b in blocks) == [4] * 6 + [6]

    def test_hop_block_couplings(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        hop = extract_block(build_hex_lattice(two_vertex_lattice, resonant), "Hmu,lambda")
        cavities = hop.matrix[0::2, 0::2]

        assert np.allclose(cavities[0, 1], 2.0, atol=1e-12)
        assert np.allclose(cavities[1, 2], 2.0, atol=1e-12)

    def test_hop_block_invariant_under_full_evolution(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        """从 hop 块基矢出发，完整哈密顿量演化后不离开该子空间"""
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        transform = collective_basis(spec)
        rows = transform.group("H0,1").rows
        start = transform.q[transform.index("xi_mu1^a@0")]

        psi = ExcitationState(vac=0.0, amps=start)
        spectrum = eigendecompose(build_single_excitation_hamiltonian(spec))
        for t in (0.3, 1.1, 2.2233, 7.5):
            evolved = propagate(spectrum, psi, t)
            inside = transform.q[list(rows)] @ evolved.amps
            assert abs(np.vdot(inside, inside).real - 1.0) <= 1e-10

    def test_upload_slot_is_own_block(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        layout = hex_layout(two_vertex_lattice)
        block = extract_block(spec, "Hmu0@1")

        upload = spec.sites[layout.upload_site(1)].label
        assert block.labels[:2] == (f"{upload}^c", f"{upload}^a")


class TestExtractBlock:
    """子空间提取与别名"""

    def test_matches_decomposition(self, resonant: SystemParams):
        spec = build_diamond_chain(3, resonant)
        blocks, _ = block_decompose(
            build_single_excitation_hamiltonian(spec), collective_basis(spec)
        )
        for block in blocks:
            assert np.allclose(
                extract_block(spec, block.name).matrix, block.matrix, atol=1e-12
            )

    def test_alias_resolves_to_first_vertex(
        self, resonant: SystemParams, two_vertex_lattice: HexLatticeDescriptor
    ):
        spec = build_hex_lattice(two_vertex_lattice, resonant)
        assert extract_block(spec, "Hmu0").name == "Hmu0@0"
        assert extract_block(spec, "hop").name == "H0,1"

    def test_unknown_selector(self, resonant: SystemParams):
        with pytest.raises(ValueError):
            extract_block(build_diamond_chain(1, resonant), "H7")

    def test_hop_alias_needs_lattice(self, resonant: SystemParams):
        with pytest.raises(ValueError):
            extract_block(build_switch(resonant), "Hmu,lambda")


class TestTransformValidation:
    """变换与分块的前置条件"""

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError):
            OrthogonalTransform(
                q=np.array([[1.0, 1.0], [0.0, 1.0]]),
                labels=("x", "y"),
                groups=(BlockGroup("H", "whole", (0, 1)),),
            )

    def test_groups_must_partition(self):
        with pytest.raises(ValueError):
            OrthogonalTransform(
                q=np.eye(2), labels=("x", "y"), groups=(BlockGroup("H", "whole", (0,)),)
            )

    def test_dimension_mismatch(self, resonant: SystemParams):
        h = build_single_excitation_hamiltonian(build_diamond_chain(1, resonant))
        with pytest.raises(ValueError):
            block_decompose(h, identity_transform(3))

    def test_identity_keeps_whole_matrix(self, resonant: SystemParams):
        spec = build_diamond_chain(1, resonant)
        h = build_single_excitation_hamiltonian(spec)
        blocks, residual = block_decompose(h, identity_transform(spec.n_sites))

        assert residual == 0.0
        assert np.array_equal(blocks[0].matrix, h.matrix)

    def test_source_mode_is_collective_basis_vector(self, resonant: SystemParams):
        """链首原子本身就是 ℋ_1 的基矢 |a_1⟩"""
        transform = chain_collective_basis(2)
        assert transform.row("a_1")[ModeRef(0).index] == 1.0
