"""领域模型 - 物理参数、网络拓扑与单激发态"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """物理参数（ħ = 1）

    omega_c 为腔模频率，delta = Ω_c − Ω_a 为失谐，g 为原子-腔耦合，j 为腔间跃迁强度。
    原子跃迁频率由 omega_c − delta 推出，不单独存储。
    """

    omega_c: float = 1.0
    delta: float = 0.0
    g: float = 65.0
    j: float = 1.0

    def __post_init__(self) -> None:
        for name in ("omega_c", "delta", "g", "j"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"参数 {name} 必须为有限实数")
        if self.g <= 0:
            raise ValueError("原子-腔耦合 g 必须大于 0")
        if self.j <= 0:
            raise ValueError("腔间耦合 j 必须大于 0")

    @property
    def omega_a(self) -> float:
        return self.omega_c - self.delta

    @property
    def is_resonant(self) -> bool:
        return self.delta == 0.0


class SiteRole(Enum):
    """格点角色"""

    VERTEX = "vertex"
    CONTROL = "control"
    PORT = "port"
    UPLOAD = "upload"
    PLAIN = "plain"


@dataclass(frozen=True)
class Site:
    """单个原子-腔单元"""

    id: int
    label: str
    role: SiteRole = SiteRole.PLAIN


@dataclass(frozen=True)
class Edge:
    """腔间耦合边，有效耦合为 sign · J"""

    k: int
    l: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"边 ({self.k}, {self.l}) 的符号必须为 ±1")
        if self.k == self.l:
            raise ValueError(f"不允许自环: ({self.k}, {self.l})")

    @property
    def pair(self) -> frozenset[int]:
        return frozenset((self.k, self.l))


@dataclass(frozen=True)
class NetworkSpec:
    """网络拓扑（聚合根）：格点 + 带符号的边 + 物理参数"""

    sites: tuple[Site, ...]
    edges: tuple[Edge, ...]
    params: SystemParams = field(default_factory=SystemParams)

    def __post_init__(self) -> None:
        for expected, site in enumerate(self.sites):
            if site.id != expected:
                raise ValueError(f"格点编号必须从 0 开始连续，位置 {expected} 处为 {site.id}")

        seen: set[frozenset[int]] = set()
        for edge in self.edges:
            for end in (edge.k, edge.l):
                if not 0 <= end < self.n_sites:
                    raise ValueError(f"边 ({edge.k}, {edge.l}) 引用了不存在的格点 {end}")
            if edge.pair in seen:
                raise ValueError(f"边 ({edge.k}, {edge.l}) 重复")
            seen.add(edge.pair)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def dim(self) -> int:
        """单激发子空间维数（不含真空）"""
        return 2 * self.n_sites

    def sites_with_role(self, role: SiteRole) -> list[Site]:
        return [s for s in self.sites if s.role is role]

    def neighbors(self, site_id: int) -> dict[int, int]:
        """返回 {邻居编号: 符号}"""
        result: dict[int, int] = {}
        for edge in self.edges:
            if edge.k == site_id:
                result[edge.l] = edge.sign
            elif edge.l == site_id:
                result[edge.k] = edge.sign
        return result


@dataclass(frozen=True)
class HexLink:
    """六角格链接：顶点 a 的端口 port_a 与顶点 b 的端口 port_b 共享一个链接格点"""

    a: int
    port_a: int
    b: int
    port_b: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"链接两端不能是同一顶点 {self.a}")
        for port in (self.port_a, self.port_b):
            if port not in (1, 2, 3):
                raise ValueError(f"平面端口编号必须在 1..3 之间，得到 {port}")

    def port_at(self, vertex: int) -> int:
        if vertex == self.a:
            return self.port_a
        if vertex == self.b:
            return self.port_b
        raise ValueError(f"顶点 {vertex} 不在链接 ({self.a}, {self.b}) 上")

    def other(self, vertex: int) -> int:
        return self.b if vertex == self.a else self.a


@dataclass(frozen=True)
class HexLatticeDescriptor:
    """六角格描述：顶点、平面链接、带离面上传端口的顶点"""

    vertices: tuple[int, ...] = ()
    links: tuple[HexLink, ...] = ()
    uploads: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("顶点编号重复")
        known = set(self.vertices)

        used: set[tuple[int, int]] = set()
        for link in self.links:
            for vertex, port in ((link.a, link.port_a), (link.b, link.port_b)):
                if vertex not in known:
                    raise ValueError(f"链接引用了未知顶点 {vertex}")
                if (vertex, port) in used:
                    raise ValueError(f"端口冲突: 顶点 {vertex} 的端口 {port} 被多个链接占用")
                used.add((vertex, port))

        for vertex in self.uploads:
            if vertex not in known:
                raise ValueError(f"上传端口引用了未知顶点 {vertex}")
        if len(set(self.uploads)) != len(self.uploads):
            raise ValueError("上传顶点重复")

    def link_between(self, u: int, v: int) -> HexLink:
        for link in self.links:
            if {link.a, link.b} == {u, v}:
                return link
        raise ValueError(f"顶点 {u} 与 {v} 之间没有链接")


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """单激发哈密顿量矩阵，格点 i 的腔模对应行 2i，原子对应行 2i+1"""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"哈密顿量必须是方阵，得到形状 {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def cavity_index(site: int) -> int:
        return 2 * site

    @staticmethod
    def atom_index(site: int) -> int:
        return 2 * site + 1


class ModeKind(Enum):
    CAVITY = "cavity"
    ATOM = "atom"


@dataclass(frozen=True)
class ModeRef:
    """某格点上的腔模或原子"""

    site: int
    kind: ModeKind = ModeKind.ATOM

    @property
    def index(self) -> int:
        return 2 * self.site + (1 if self.kind is ModeKind.ATOM else 0)


@dataclass(frozen=True, eq=False)
class ExcitationState:
    """真空振幅 + 每个腔模/原子的复振幅（值对象）"""

    vac: complex
    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size % 2:
            raise ValueError("振幅向量长度必须为 2M")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "vac", complex(self.vac))
        if abs(self.norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"态未归一化: |vac|² + Σ|amps|² = {self.norm:.3e}")

    @property
    def norm(self) -> float:
        return abs(self.vac) ** 2 + float(np.vdot(self.amps, self.amps).real)

    @property
    def n_sites(self) -> int:
        return self.amps.size // 2

    def with_amps(self, amps: np.ndarray) -> "ExcitationState":
        return ExcitationState(vac=self.vac, amps=amps)

    @classmethod
    def excited(cls, n_sites: int, mode: ModeRef) -> "ExcitationState":
        """单个模式被激发的态"""
        return cls.encode(0.0, 1.0, n_sites, mode)

    @classmethod
    def encode(
        cls, alpha: complex, beta: complex, n_sites: int, mode: ModeRef
    ) -> "ExcitationState":
        """编码 α|0⟩ + β|1⟩：|0⟩ 为真空，|1⟩ 为 mode 上的单激发"""
        if not 0 <= mode.site < n_sites:
            raise ValueError(f"格点 {mode.site} 超出范围 0..{n_sites - 1}")
        scale = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if scale == 0:
            raise ValueError("α 与 β 不能同时为 0")
        amps = np.zeros(2 * n_sites, dtype=complex)
        amps[mode.index] = beta / scale
        return cls(vac=alpha / scale, amps=amps)
