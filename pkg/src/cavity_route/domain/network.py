"""领域服务 - 拓扑构建与单激发哈密顿量组装"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .models import (
    Edge,
    HamiltonianMatrix,
    HexLatticeDescriptor,
    NetworkSpec,
    Site,
    SiteRole,
    SystemParams,
)

# 开关耦合矩阵 M / J 的符号，行 i 为内部格点 μ_i，列 j 为外部槽位 ν_j
# Sylvester 序的第 1、2 行互换
SWITCH_SIGNS = linalg.hadamard(4, dtype=int)[[0, 2, 1, 3]]
SWITCH_SIGNS.setflags(write=False)


def build_diamond_chain(n: int, params: SystemParams) -> NetworkSpec:
    """构建 3N+1 个格点的菱形链

    每个顶点腔与一对平行的控制腔相连，控制腔再连到下一个顶点；
    控制对中第二个腔（1 起编号 3n）与下一个顶点之间的耦合为 −J。
    """
    if n < 1:
        raise ValueError(f"链长 N 必须 ≥ 1，得到 {n}")

    sites = []
    for site_id in range(3 * n + 1):
        # 1 起编号 3n−2 以及 3N+1 为顶点
        role = SiteRole.VERTEX if site_id % 3 == 0 else SiteRole.CONTROL
        sites.append(Site(id=site_id, label=str(site_id + 1), role=role))

    edges = []
    for block in range(1, n + 1):
        vertex, upper, lower, nxt = 3 * block - 3, 3 * block - 2, 3 * block - 1, 3 * block
        edges.extend(
            [
                Edge(vertex, upper, 1),
                Edge(vertex, lower, 1),
                Edge(upper, nxt, 1),
                Edge(lower, nxt, -1),
            ]
        )

    return NetworkSpec(sites=tuple(sites), edges=tuple(edges), params=params)


def build_switch(params: SystemParams) -> NetworkSpec:
    """构建单个 3D 开关：外部 ν_0..ν_3（编号 0-3），内部控制 μ_0..μ_3（编号 4-7）"""
    sites = [Site(id=0, label="nu_0", role=SiteRole.UPLOAD)]
    sites += [Site(id=j, label=f"nu_{j}", role=SiteRole.PORT) for j in range(1, 4)]
    sites += [Site(id=4 + i, label=f"mu_{i}", role=SiteRole.CONTROL) for i in range(4)]

    edges = [
        Edge(4 + i, j, int(SWITCH_SIGNS[i, j])) for i in range(4) for j in range(4)
    ]
    return NetworkSpec(sites=tuple(sites), edges=tuple(edges), params=params)


@dataclass(frozen=True)
class HexLayout:
    """六角格的格点布局：每个顶点的 4 个内部格点及 4 个槽位所占的格点"""

    sites: tuple[Site, ...]
    inner: dict[int, tuple[int, ...]]
    slots: dict[tuple[int, int], int]

    def upload_site(self, vertex: int) -> int:
        return self.slots[(vertex, 0)]


def hex_layout(desc: HexLatticeDescriptor) -> HexLayout:
    """按描述确定格点编号：内部格点、链接、上传端口、悬空槽位依次排列"""
    sites: list[Site] = []
    inner: dict[int, tuple[int, ...]] = {}
    slots: dict[tuple[int, int], int] = {}

    def add(label: str, role: SiteRole) -> int:
        site_id = len(sites)
        sites.append(Site(id=site_id, label=label, role=role))
        return site_id

    for v in desc.vertices:
        inner[v] = tuple(add(f"{v}.mu_{i}", SiteRole.CONTROL) for i in range(4))

    for link in desc.links:
        label = f"{link.a}.nu_{link.port_a}|{link.b}.nu_{link.port_b}"
        site_id = add(label, SiteRole.PORT)
        slots[(link.a, link.port_a)] = site_id
        slots[(link.b, link.port_b)] = site_id

    for v in desc.uploads:
        slots[(v, 0)] = add(f"{v}.nu_0", SiteRole.UPLOAD)

    for v in desc.vertices:
        for slot in range(4):
            if (v, slot) not in slots:
                slots[(v, slot)] = add(f"{v}.nu_{slot}", SiteRole.PLAIN)

    return HexLayout(sites=tuple(sites), inner=inner, slots=slots)


def build_hex_lattice(desc: HexLatticeDescriptor, params: SystemParams) -> NetworkSpec:
    """构建六角格网络

    每个顶点是一个开关，局部哈密顿量之和中共享的链接格点只计一次在位能，
    顶点与槽位之间的每次关联只贡献耦合项。
    """
    layout = hex_layout(desc)
    edges = []
    for v in desc.vertices:
        for i, inner_site in enumerate(layout.inner[v]):
            for slot in range(4):
                sign = int(SWITCH_SIGNS[i, slot])
                edges.append(Edge(inner_site, layout.slots[(v, slot)], sign))
    return NetworkSpec(sites=layout.sites, edges=tuple(edges), params=params)


def build_single_excitation_hamiltonian(spec: NetworkSpec) -> HamiltonianMatrix:
    """组装单激发子空间中的 2M×2M 哈密顿量（真空扇区不在矩阵中）"""
    p = spec.params
    h = np.zeros((spec.dim, spec.dim), dtype=float)

    for site in spec.sites:
        c = HamiltonianMatrix.cavity_index(site.id)
        a = HamiltonianMatrix.atom_index(site.id)
        h[c, c] = p.omega_c
        h[a, a] = p.omega_c - p.delta
        h[c, a] = h[a, c] = p.g

    for edge in spec.edges:
        k, l = HamiltonianMatrix.cavity_index(edge.k), HamiltonianMatrix.cavity_index(edge.l)
        h[k, l] = h[l, k] = edge.sign * p.j

    return HamiltonianMatrix(h)
