"""领域服务 - 集体基变换与不变子空间分块"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .models import HamiltonianMatrix, NetworkSpec, SiteRole
from .network import SWITCH_SIGNS, build_single_excitation_hamiltonian

ORTHOGONALITY_TOLERANCE = 1e-12
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class BlockGroup:
    """变换后基矢的一个分组，对应一个不变子空间"""

    name: str
    kind: str
    rows: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class OrthogonalTransform:
    """正交基变换，q 的每一行是一个新基矢（以标准基 |j⟩ 表示）

    变换后的哈密顿量为 q·H·qᵀ。
    """

    q: np.ndarray
    labels: tuple[str, ...]
    groups: tuple[BlockGroup, ...]

    def __post_init__(self) -> None:
        q = np.array(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"变换矩阵必须是方阵，得到形状 {q.shape}")
        if len(self.labels) != q.shape[0]:
            raise ValueError("标签数量与基矢数量不一致")
        drift = np.max(np.abs(q.T @ q - np.eye(q.shape[0]))) if q.size else 0.0
        if drift > ORTHOGONALITY_TOLERANCE:
            raise ValueError(f"变换不正交: max|qᵀq − I| = {drift:.3e}")
        rows = sorted(r for g in self.groups for r in g.rows)
        if rows != list(range(q.shape[0])):
            raise ValueError("分组必须恰好划分所有基矢")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"未知基矢标签: {label}") from None

    def row(self, label: str) -> np.ndarray:
        return self.q[self.index(label)]

    def group(self, name: str) -> BlockGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise ValueError(f"未知子空间: {name}")


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    """从集体基中提取的不变子空间哈密顿量"""

    name: str
    kind: str
    matrix: np.ndarray
    labels: tuple[str, ...]
    rows: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"子空间 {self.name} 中没有基矢 {label}") from None


class _RowBuilder:
    """按分组顺序逐行累积变换矩阵"""

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.labels: list[str] = []
        self.groups: list[BlockGroup] = []

    def add(self, label: str, entries: dict[int, float]) -> int:
        row = np.zeros(self.dim)
        for index, value in entries.items():
            row[index] = value
        self.rows.append(row)
        self.labels.append(label)
        return len(self.rows) - 1

    def group(self, name: str, kind: str, rows: Sequence[int]) -> None:
        self.groups.append(BlockGroup(name=name, kind=kind, rows=tuple(rows)))

    def build(self) -> OrthogonalTransform:
        q = np.array(self.rows) if self.rows else np.zeros((0, 0))
        return OrthogonalTransform(q=q, labels=tuple(self.labels), groups=tuple(self.groups))


def chain_collective_basis(n: int) -> OrthogonalTransform:
    """菱形链的 ± 集体基，按 ℋ_1, ℋ_2, …, ℋ_{N+1} 分组"""
    if n < 1:
        raise ValueError(f"链长 N 必须 ≥ 1，得到 {n}")
    builder = _RowBuilder(2 * (3 * n + 1))

    # 1 起标准基 |6n−5⟩ 对应 0 起下标 6n−6
    def single(cell: int, b: int) -> dict[int, float]:
        return {6 * cell - 6 + b: 1.0}

    def pair(cell: int, b: int, sign: int) -> dict[int, float]:
        return {6 * cell - 4 + b: _INV_SQRT2, 6 * cell - 2 + b: sign * _INV_SQRT2}

    def plain(cell: int) -> list[int]:
        return [
            builder.add(f"c_{cell}", single(cell, 0)),
            builder.add(f"a_{cell}", single(cell, 1)),
        ]

    def symmetric(cell: int, sign: int) -> list[int]:
        tag = "+" if sign > 0 else "-"
        return [
            builder.add(f"c_{cell}^{tag}", pair(cell, 0, sign)),
            builder.add(f"a_{cell}^{tag}", pair(cell, 1, sign)),
        ]

    builder.group("H1", "end", plain(1) + symmetric(1, 1))
    for cell in range(1, n):
        rows = symmetric(cell, -1) + plain(cell + 1) + symmetric(cell + 1, 1)
        builder.group(f"H{cell + 1}", "bulk", rows)
    builder.group(f"H{n + 1}", "end", symmetric(n, -1) + plain(n + 1))
    return builder.build()


@dataclass(frozen=True)
class _Vertex:
    inner: tuple[int, ...]
    slots: tuple[int, ...]


def _hadamard_transform(
    n_sites: int, vertices: Sequence[_Vertex], site_labels: Sequence[str]
) -> OrthogonalTransform:
    builder = _RowBuilder(2 * n_sites)
    single_vertex = len(vertices) == 1

    def tag(v: int) -> str:
        return "" if single_vertex else f"@{v}"

    xi: dict[tuple[int, int], list[int]] = {}
    for v, vertex in enumerate(vertices):
        for k in range(4):
            xi[(v, k)] = [
                builder.add(
                    f"xi_mu{k}^{name}{tag(v)}",
                    {2 * s + b: 0.5 * SWITCH_SIGNS[k, i] for i, s in enumerate(vertex.inner)},
                )
                for b, name in ((0, "c"), (1, "a"))
            ]

    occupants: dict[int, list[tuple[int, int]]] = {}
    for v, vertex in enumerate(vertices):
        for k, site in enumerate(vertex.slots):
            occupants.setdefault(site, []).append((v, k))

    def outer(site: int) -> list[int]:
        return [
            builder.add(f"{site_labels[site]}^c", {2 * site: 1.0}),
            builder.add(f"{site_labels[site]}^a", {2 * site + 1: 1.0}),
        ]

    hops: list[tuple[int, tuple[int, int], tuple[int, int]]] = []
    for v, vertex in enumerate(vertices):
        for k, site in enumerate(vertex.slots):
            owners = occupants[site]
            if len(owners) == 1:
                name = f"Hmu{k}{tag(v)}"
                builder.group(name, "slot", outer(site) + xi[(v, k)])
            elif len(owners) == 2:
                if owners[0] == (v, k):
                    hops.append((site, owners[0], owners[1]))
            else:
                raise ValueError(f"格点 {site} 同时占据了 {len(owners)} 个槽位")

    for site, first, second in hops:
        rows = xi[first] + outer(site) + xi[second]
        builder.group(f"H{first[0]},{second[0]}", "hop", rows)

    claimed = set(occupants)
    for vertex in vertices:
        claimed.update(vertex.inner)
    for site in range(n_sites):
        if site not in claimed:
            builder.group(f"cell:{site_labels[site]}", "cell", outer(site))

    return builder.build()


def switch_collective_basis(
    inner_sites: Sequence[int], slot_sites: Sequence[int], n_sites: int
) -> OrthogonalTransform:
    """单个开关的 Hadamard 集体基，外部格点保持不变"""
    if len(inner_sites) != 4:
        raise ValueError(f"开关需要恰好 4 个内部格点，得到 {len(inner_sites)}")
    if len(slot_sites) != 4:
        raise ValueError(f"开关需要恰好 4 个槽位格点，得到 {len(slot_sites)}")
    vertex = _Vertex(inner=tuple(inner_sites), slots=tuple(slot_sites))
    labels = [f"s{i}" for i in range(n_sites)]
    return _hadamard_transform(n_sites, [vertex], labels)


def identity_transform(n_sites: int) -> OrthogonalTransform:
    """不做分解的恒等变换，所有基矢归为一组"""
    dim = 2 * n_sites
    labels = tuple(f"{i // 2}^{'ca'[i % 2]}" for i in range(dim))
    return OrthogonalTransform(
        q=np.eye(dim), labels=labels, groups=(BlockGroup("H", "whole", tuple(range(dim))),)
    )


def _vertex_groups(spec: NetworkSpec) -> list[_Vertex]:
    by_neighbors: dict[frozenset[int], list[int]] = {}
    for site in spec.sites_with_role(SiteRole.CONTROL):
        key = frozenset(spec.neighbors(site.id))
        by_neighbors.setdefault(key, []).append(site.id)

    vertices = []
    for outer_sites, inner in sorted(by_neighbors.items(), key=lambda kv: min(kv[1])):
        if len(inner) != 4 or len(outer_sites) != 4:
            raise ValueError("控制格点无法分组为 4 内部 + 4 槽位的开关顶点")
        inner = sorted(inner)
        slots: dict[int, int] = {}
        for site in outer_sites:
            signs = np.array([spec.neighbors(i)[site] for i in inner])
            matches = [k for k in range(4) if np.array_equal(SWITCH_SIGNS[:, k], signs)]
            if len(matches) != 1 or matches[0] in slots:
                raise ValueError(f"格点 {site} 的耦合符号不匹配任何开关槽位")
            slots[matches[0]] = site
        vertices.append(_Vertex(inner=tuple(inner), slots=tuple(slots[k] for k in range(4))))
    return vertices


def collective_basis(spec: NetworkSpec) -> OrthogonalTransform:
    """根据拓扑结构选择集体基：含 vertex 角色为菱形链，否则为开关/六角格"""
    if spec.sites_with_role(SiteRole.VERTEX):
        if (spec.n_sites - 1) % 3 or spec.n_sites < 4:
            raise ValueError(f"{spec.n_sites} 个格点不构成菱形链")
        return chain_collective_basis((spec.n_sites - 1) // 3)

    vertices = _vertex_groups(spec)
    if not vertices:
        raise ValueError("该拓扑没有可用的集体基")
    return _hadamard_transform(spec.n_sites, vertices, [s.label for s in spec.sites])


def block_decompose(
    h: HamiltonianMatrix, t: OrthogonalTransform
) -> tuple[list[BlockHamiltonian], float]:
    """计算 q·H·qᵀ，按分组切出块，并返回块外最大绝对值残差"""
    if h.dim != t.dim:
        raise ValueError(f"维数不一致: H 为 {h.dim}，变换为 {t.dim}")

    rotated = t.q @ h.matrix @ t.q.T
    in_block = np.zeros(rotated.shape, dtype=bool)
    blocks = []
    for g in t.groups:
        idx = np.array(g.rows, dtype=int)
        in_block[np.ix_(idx, idx)] = True
        matrix = rotated[np.ix_(idx, idx)].copy()
        matrix.setflags(write=False)
        blocks.append(
            BlockHamiltonian(
                name=g.name,
                kind=g.kind,
                matrix=matrix,
                labels=tuple(t.labels[r] for r in g.rows),
                rows=g.rows,
            )
        )

    off_block = np.abs(rotated[~in_block])
    residual = float(off_block.max()) if off_block.size else 0.0
    return blocks, residual


def _resolve(name: str, blocks: Sequence[BlockHamiltonian]) -> BlockHamiltonian:
    by_name = {b.name: b for b in blocks}
    if name in by_name:
        return by_name[name]
    if name.startswith("Hmu") and "@" not in name and f"{name}@0" in by_name:
        return by_name[f"{name}@0"]
    if name in ("Hmu,lambda", "hop"):
        for block in blocks:
            if block.kind == "hop":
                return block
    raise ValueError(f"未知子空间选择器: {name}（可选: {', '.join(by_name)}）")


def extract_block(spec: NetworkSpec, which: str) -> BlockHamiltonian:
    """提取指定不变子空间的小矩阵，如 H1、H2、Hmu0、Hmu,lambda"""
    blocks, _ = block_decompose(build_single_excitation_hamiltonian(spec), collective_basis(spec))
    return _resolve(which, blocks)
