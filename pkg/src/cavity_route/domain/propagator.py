"""领域服务 - 本征分解传播子、态度量与转移时间搜索"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import linalg, optimize

from .models import (
    ExcitationState,
    HamiltonianMatrix,
    ModeKind,
    ModeRef,
    NetworkSpec,
    SystemParams,
)
from .subspaces import BlockHamiltonian

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12

DEFAULT_GRID_POINTS = 20001
DEFAULT_REFINE_TOL = 1e-6
RESONANT_WINDOW = (0.0, 10.0)
DISPERSIVE_WINDOW = (0.0, 600.0)

# 网格至少在最快玻尔频率的每个周期内采样这么多点
SAMPLES_PER_PERIOD = 32
MAX_GRID_POINTS = 20_000_000
REFINE_CANDIDATES = 64
PEAK_TOLERANCE = 1e-4
_CHUNK = 65536

MatrixLike = HamiltonianMatrix | BlockHamiltonian | np.ndarray


@dataclass(frozen=True, eq=False)
class Spectrum:
    """实对称矩阵的本征分解，本征值升序"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def evolve(self, vector: np.ndarray, t: float) -> np.ndarray:
        """e^{−iHt}·vector"""
        v = self.eigenvectors
        return v @ (np.exp(-1j * self.eigenvalues * t) * (v.T @ vector))

    def amplitudes(self, source: int, target: int, times: np.ndarray) -> np.ndarray:
        """⟨target|e^{−iHt}|source⟩ 在一组时刻上的值"""
        coeffs = self.eigenvectors[target] * self.eigenvectors[source]
        return np.exp(-1j * np.outer(times, self.eigenvalues)) @ coeffs


@dataclass(frozen=True)
class TransferTime:
    """转移时间搜索结果"""

    t_star: float
    fidelity: float
    phase: float


def _as_matrix(h: MatrixLike) -> np.ndarray:
    if isinstance(h, (HamiltonianMatrix, BlockHamiltonian)):
        return np.asarray(h.matrix, dtype=float)
    return np.asarray(h, dtype=float)


def default_window(params: SystemParams) -> tuple[float, float]:
    """共振区 (0, 10)，色散区 (0, 600)"""
    return RESONANT_WINDOW if params.is_resonant else DISPERSIVE_WINDOW


def eigendecompose(h: MatrixLike) -> Spectrum:
    """实对称矩阵的本征分解"""
    m = _as_matrix(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"需要方阵，得到形状 {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOLERANCE * scale:
        raise ValueError("矩阵不对称，无法进行厄米本征分解")
    eigenvalues, eigenvectors = linalg.eigh(m)
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def propagate(s: Spectrum, psi: ExcitationState, t: float) -> ExcitationState:
    """精确演化 e^{−iHt}，真空分量保持不变"""
    if psi.amps.size != s.dim:
        raise ValueError(f"维数不一致: 态为 {psi.amps.size}，谱为 {s.dim}")
    if not math.isfinite(t):
        raise ValueError("演化时间必须有限")
    return psi.with_amps(s.evolve(psi.amps, t))


def photon_population(psi: ExcitationState, spec: NetworkSpec) -> float:
    """所有腔模的布居之和 F"""
    if psi.amps.size != spec.dim:
        raise ValueError(f"维数不一致: 态为 {psi.amps.size}，网络为 {spec.dim}")
    cavities = psi.amps[0::2]
    return float(np.vdot(cavities, cavities).real)


def site_population(psi: ExcitationState, site: int, kind: ModeKind) -> float:
    if not 0 <= site < psi.n_sites:
        raise ValueError(f"格点 {site} 超出范围 0..{psi.n_sites - 1}")
    return float(abs(psi.amps[ModeRef(site, kind).index]) ** 2)


@dataclass(frozen=True, eq=False)
class BlockCurves:
    """子空间内的布居曲线：F 为腔模布居之和，其余为各基矢布居"""

    times: np.ndarray
    photon: np.ndarray
    populations: dict[str, np.ndarray]


def block_populations(
    block: BlockHamiltonian, source: int, times: Sequence[float]
) -> BlockCurves:
    """从块内 source 基矢出发，计算各基矢布居随时间的变化"""
    if not 0 <= source < block.dim:
        raise ValueError(f"源下标 {source} 超出块维数 {block.dim}")
    spectrum = eigendecompose(block)
    t = np.asarray(times, dtype=float)
    populations = {
        label: np.abs(spectrum.amplitudes(source, k, t)) ** 2
        for k, label in enumerate(block.labels)
    }
    photon = sum(
        (p for label, p in populations.items() if "^c" in label or label.startswith("c_")),
        start=np.zeros_like(t),
    )
    return BlockCurves(times=t, photon=photon, populations=populations)


def _scan(
    spectrum: Spectrum, source: int, target: int, times: np.ndarray, max_workers: int | None
) -> np.ndarray:
    chunks = [times[i : i + _CHUNK] for i in range(0, times.size, _CHUNK)]
    work = partial(spectrum.amplitudes, source, target)
    if max_workers == 1 or len(chunks) == 1:
        parts = [work(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(work, chunks))
    return np.abs(np.concatenate(parts)) ** 2


def _refine(
    spectrum: Spectrum,
    source: int,
    target: int,
    bracket: tuple[float, float, float],
    grid_value: float,
    refine_tol: float,
) -> tuple[float, float]:
    def loss(t: float) -> float:
        return -float(abs(spectrum.amplitudes(source, target, np.array([t]))[0]) ** 2)

    middle = bracket[1]
    xtol = refine_tol / max(2.0 * abs(middle), refine_tol)
    try:
        result = optimize.minimize_scalar(
            loss, bracket=bracket, method="golden", options={"xtol": xtol}
        )
    except ValueError:
        return middle, grid_value
    if -result.fun < grid_value:
        return middle, grid_value
    return float(result.x), float(-result.fun)


def find_transfer_time(
    h: MatrixLike,
    source: int,
    target: int,
    window: tuple[float, float] = RESONANT_WINDOW,
    grid_points: int = DEFAULT_GRID_POINTS,
    refine_tol: float = DEFAULT_REFINE_TOL,
    max_workers: int | None = None,
) -> TransferTime:
    """搜索 |⟨target|e^{−iHt}|source⟩|² 的首个近最优峰

    均匀网格扫描后，对网格值最高的若干局部极大做黄金分割细化；
    按时间顺序找到第一个与最优细化值相差不超过 PEAK_TOLERANCE 的峰，
    在其连续的合格峰中取最大者。
    """
    t_lo, t_hi = window
    if not (math.isfinite(t_lo) and math.isfinite(t_hi)) or t_lo >= t_hi:
        raise ValueError(f"搜索窗口为空: {window}")
    if grid_points < 100:
        raise ValueError(f"网格点数必须 ≥ 100，得到 {grid_points}")
    if refine_tol <= 0:
        raise ValueError("细化容差必须为正")

    spectrum = eigendecompose(h)
    for name, index in (("source", source), ("target", target)):
        if not 0 <= index < spectrum.dim:
            raise ValueError(f"{name} 下标 {index} 超出维数 {spectrum.dim}")

    spread = float(spectrum.eigenvalues[-1] - spectrum.eigenvalues[0])
    needed = math.ceil(SAMPLES_PER_PERIOD * (t_hi - t_lo) * spread / (2 * math.pi)) + 1
    n = max(grid_points, needed)
    if n > MAX_GRID_POINTS:
        logger.warning("网格点数 %d 超过上限，截断为 %d", n, MAX_GRID_POINTS)
        n = MAX_GRID_POINTS

    times = np.linspace(t_lo, t_hi, n)
    fidelity = _scan(spectrum, source, target, times, max_workers)

    peaks = np.flatnonzero((fidelity[1:-1] > fidelity[:-2]) & (fidelity[1:-1] >= fidelity[2:])) + 1
    if peaks.size == 0:
        k = int(np.argmax(fidelity))
        amp = spectrum.amplitudes(source, target, times[k : k + 1])[0]
        return TransferTime(float(times[k]), float(fidelity[k]), float(np.angle(amp)))

    ranked = peaks[np.argsort(-fidelity[peaks], kind="stable")][:REFINE_CANDIDATES]
    refined: dict[int, tuple[float, float]] = {}
    for k in sorted(ranked.tolist()):
        bracket = (float(times[k - 1]), float(times[k]), float(times[k + 1]))
        refined[k] = _refine(spectrum, source, target, bracket, float(fidelity[k]), refine_tol)

    best = max(value for _, value in refined.values())
    values = [refined[k][1] if k in refined else float(fidelity[k]) for k in peaks.tolist()]
    qualifying = [v >= best - PEAK_TOLERANCE for v in values]
    first = qualifying.index(True)
    last = first
    while last + 1 < len(values) and qualifying[last + 1]:
        last += 1
    chosen = max(range(first, last + 1), key=lambda i: (values[i], -i))

    k = int(peaks[chosen])
    t_star, peak = refined.get(k, (float(times[k]), float(fidelity[k])))
    amp = spectrum.amplitudes(source, target, np.array([t_star]))[0]
    return TransferTime(t_star=t_star, fidelity=peak, phase=float(np.angle(amp)))
