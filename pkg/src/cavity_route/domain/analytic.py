"""领域服务 - 4×4 与 6×6 不变子空间的闭式演化振幅

两类块都可以拆成若干个独立的"腔模-原子"二能级问题：
4×4 块按对称/反对称腔模组合拆成两个分支，
6×6 块按三腔直链的三个本征模拆成三个分支。
每个分支的振幅只依赖于失谐常数 A、B、C1、C2、C3 之一。
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np

from .models import HexLatticeDescriptor, HexLink, SystemParams
from .network import build_diamond_chain, build_hex_lattice, build_switch
from .propagator import eigendecompose
from .subspaces import BlockHamiltonian, extract_block

U4_LABELS = ("c_1", "a_1", "c_1^+", "a_1^+")
U6_LABELS = ("c_1^-", "a_1^-", "c_2", "a_2", "c_2^+", "a_2^+")
SLOT_LABELS = ("nu_0^c", "nu_0^a", "xi_mu0^c", "xi_mu0^a")
HOP_LABELS = (
    "xi_mu1^c@0",
    "xi_mu1^a@0",
    "0.nu_1|1.nu_1^c",
    "0.nu_1|1.nu_1^a",
    "xi_mu1^c@1",
    "xi_mu1^a@1",
)

# 三腔直链本征模 (φ_k(0), φ_k(1), φ_k(2))，腔能量偏移依次为 +√2κ, 0, −√2κ
_CHAIN_MODES = (
    (0.5, 1.0 / math.sqrt(2.0), 0.5),
    (1.0 / math.sqrt(2.0), 0.0, -1.0 / math.sqrt(2.0)),
    (0.5, -1.0 / math.sqrt(2.0), 0.5),
)


@dataclass(frozen=True)
class AnalyticConstants:
    """闭式振幅中出现的分支宽度（每个分支劈裂的 2 倍）"""

    a: float
    b: float
    c1: float
    c2: float
    c3: float

    @classmethod
    def from_params(cls, params: SystemParams, coupling_scale: float) -> "AnalyticConstants":
        """coupling_scale 为块内腔-腔耦合 κ（链为 √2J，开关为 2J）"""
        d, g2 = params.delta, 4.0 * params.g**2
        root2k = math.sqrt(2.0) * coupling_scale
        return cls(
            a=math.sqrt((coupling_scale + d) ** 2 + g2),
            b=math.sqrt((coupling_scale - d) ** 2 + g2),
            c1=math.sqrt(d**2 + g2),
            c2=math.sqrt((root2k + d) ** 2 + g2),
            c3=math.sqrt((root2k - d) ** 2 + g2),
        )


@dataclass(frozen=True, eq=False)
class AmplitudeSet:
    """块内各基矢上的复振幅"""

    u: np.ndarray
    labels: tuple[str, ...]

    @property
    def norm(self) -> float:
        return float(np.vdot(self.u, self.u).real)

    def __getitem__(self, label: str) -> complex:
        return complex(self.u[self.labels.index(label)])


def _branch(
    params: SystemParams, shift: float, width: float, t: float
) -> tuple[complex, complex]:
    """腔能量 Ω_c + shift、原子能量 Ω_c − Δ 的二能级分支，从原子出发

    返回 (原子→原子, 原子→腔) 振幅，width = √((shift + Δ)² + 4G²)。
    """
    mean = params.omega_c + (shift - params.delta) / 2.0
    half_gap = (shift + params.delta) / 2.0
    upper = np.exp(-1j * (mean + width / 2.0) * t)
    lower = np.exp(-1j * (mean - width / 2.0) * t)
    ratio = 2.0 * half_gap / width
    atom = 0.5 * (1.0 - ratio) * upper + 0.5 * (1.0 + ratio) * lower
    cavity = params.g / width * (upper - lower)
    return complex(atom), complex(cavity)


def _check_inputs(t: float, labels: Sequence[str], dim: int) -> None:
    if not math.isfinite(t):
        raise ValueError("时间必须有限")
    if len(labels) != dim:
        raise ValueError(f"需要 {dim} 个基矢名称，得到 {len(labels)}")


def analytic_u4(
    params: SystemParams,
    coupling_scale: float,
    t: float,
    labels: Sequence[str] = U4_LABELS,
) -> AmplitudeSet:
    """4×4 块从原子源态 |a_1⟩ 出发的振幅，顺序为 (c_1, a_1, c_1^+, a_1^+)

    labels 为块内基矢的名称，默认是菱形链端块的命名。
    """
    _check_inputs(t, labels, 4)
    k = AnalyticConstants.from_params(params, coupling_scale)
    s_atom, s_cavity = _branch(params, coupling_scale, k.a, t)
    d_atom, d_cavity = _branch(params, -coupling_scale, k.b, t)
    u = np.array(
        [
            (s_cavity + d_cavity) / 2.0,
            (s_atom + d_atom) / 2.0,
            (s_cavity - d_cavity) / 2.0,
            (s_atom - d_atom) / 2.0,
        ]
    )
    return AmplitudeSet(u=u, labels=tuple(labels))


def analytic_u6(
    params: SystemParams,
    coupling_scale: float,
    t: float,
    labels: Sequence[str] = U6_LABELS,
) -> AmplitudeSet:
    """6×6 块从集体源态 |a_1^-⟩ 出发的振幅，顺序为 (c_1^-, a_1^-, c_2, a_2, c_2^+, a_2^+)"""
    _check_inputs(t, labels, 6)
    k = AnalyticConstants.from_params(params, coupling_scale)
    root2k = math.sqrt(2.0) * coupling_scale
    branches = (
        _branch(params, root2k, k.c2, t),
        _branch(params, 0.0, k.c1, t),
        _branch(params, -root2k, k.c3, t),
    )
    u = np.zeros(6, dtype=complex)
    for mode, (atom, cavity) in zip(_CHAIN_MODES, branches):
        for q in range(3):
            weight = mode[0] * mode[q]
            u[2 * q] += weight * cavity
            u[2 * q + 1] += weight * atom
    return AmplitudeSet(u=u, labels=tuple(labels))


Formula = Callable[[SystemParams, float, float], AmplitudeSet]


@dataclass(frozen=True)
class _Oracle:
    formula: Formula
    coupling: Callable[[SystemParams], float]
    block: Callable[[SystemParams], BlockHamiltonian]


def _two_vertex_lattice() -> HexLatticeDescriptor:
    return HexLatticeDescriptor(
        vertices=(0, 1), links=(HexLink(0, 1, 1, 1),), uploads=(0, 1)
    )


ORACLES: dict[str, _Oracle] = {
    "H1": _Oracle(
        analytic_u4,
        lambda p: math.sqrt(2.0) * p.j,
        lambda p: extract_block(build_diamond_chain(1, p), "H1"),
    ),
    "H2": _Oracle(
        analytic_u6,
        lambda p: math.sqrt(2.0) * p.j,
        lambda p: extract_block(build_diamond_chain(2, p), "H2"),
    ),
    "Hmu0": _Oracle(
        partial(analytic_u4, labels=SLOT_LABELS),
        lambda p: 2.0 * p.j,
        lambda p: extract_block(build_switch(p), "Hmu0"),
    ),
    "Hmu,lambda": _Oracle(
        partial(analytic_u6, labels=HOP_LABELS),
        lambda p: 2.0 * p.j,
        lambda p: extract_block(build_hex_lattice(_two_vertex_lattice(), p), "hop"),
    ),
}


def validate_analytic(
    params: SystemParams,
    block: str,
    grid: Sequence[float],
    formula: Formula | None = None,
) -> float:
    """闭式振幅与数值传播子在时间网格上的最大绝对偏差

    数值参照为对应拓扑构建出的真实块，源态为块内第 2 个基矢（原子）。
    formula 可替换闭式公式，用于校验器自检。
    """
    if block not in ORACLES:
        raise ValueError(f"未知块: {block}（可选: {', '.join(ORACLES)}）")
    times = np.asarray(grid, dtype=float)
    if times.size == 0:
        raise ValueError("时间网格不能为空")

    oracle = ORACLES[block]
    matrix = oracle.block(params)
    spectrum = eigendecompose(matrix)
    numeric = np.column_stack(
        [spectrum.amplitudes(1, target, times) for target in range(matrix.dim)]
    )

    scale = oracle.coupling(params)
    formula = formula or oracle.formula
    error = 0.0
    for row, t in zip(numeric, times):
        u = formula(params, scale, float(t)).u
        if u.size != row.size:
            raise ValueError(f"公式给出 {u.size} 个振幅，块维数为 {row.size}")
        error = max(error, float(np.max(np.abs(u - row))))
    return error
