"""领域服务 - 路由调度、局部相位翻转与调度执行"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .models import (
    ExcitationState,
    HamiltonianMatrix,
    HexLatticeDescriptor,
    ModeKind,
    ModeRef,
    NetworkSpec,
)
from .network import SWITCH_SIGNS, build_single_excitation_hamiltonian, hex_layout
from .propagator import eigendecompose
from .subspaces import OrthogonalTransform, block_decompose, collective_basis

DEFAULT_SAMPLES_PER_WINDOW = 50
SWITCH_INNER_SITES = (4, 5, 6, 7)


@dataclass(frozen=True)
class Evolve:
    """在完整哈密顿量下自由演化 duration"""

    duration: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.duration) or self.duration < 0:
            raise ValueError(f"演化时长必须为非负有限值，得到 {self.duration}")


@dataclass(frozen=True)
class PhaseFlip:
    """对若干原子施加局部 σ_z：激发态振幅乘以 −1"""

    sites: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.sites)) != len(self.sites):
            raise ValueError(f"翻转格点重复: {self.sites}")


@dataclass(frozen=True)
class PhaseShift:
    """对单个原子的激发态振幅乘以 e^{iθ}（接收端相位补偿）"""

    site: int
    angle: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.angle):
            raise ValueError("相位必须有限")


Step = Evolve | PhaseFlip | PhaseShift


@dataclass(frozen=True)
class Schedule:
    """路由程序：按顺序执行的演化与局部操作"""

    steps: tuple[Step, ...]
    source: ModeRef
    target: ModeRef

    @property
    def flips(self) -> list[PhaseFlip]:
        return [s for s in self.steps if isinstance(s, PhaseFlip)]

    def validate_for(self, spec: NetworkSpec) -> None:
        def check(site: int, what: str) -> None:
            if not 0 <= site < spec.n_sites:
                raise ValueError(f"{what} 格点 {site} 超出网络范围 0..{spec.n_sites - 1}")

        check(self.source.site, "源")
        check(self.target.site, "目标")
        for step in self.steps:
            if isinstance(step, PhaseFlip):
                for site in step.sites:
                    check(site, "翻转")
            elif isinstance(step, PhaseShift):
                check(step.site, "相移")


def total_evolution_time(schedule: Schedule) -> float:
    """调度中所有演化窗口的总时长 T"""
    return math.fsum(s.duration for s in schedule.steps if isinstance(s, Evolve))


@dataclass(frozen=True, eq=False)
class TraceResult:
    """调度执行轨迹：采样时刻上的腔模布居、跟踪模式布居与归一化"""

    times: np.ndarray
    f_photon: np.ndarray
    populations: dict[str, np.ndarray]
    norms: np.ndarray
    final_state: ExcitationState
    final_amplitude: complex
    total_time: float

    @property
    def final_fidelity(self) -> float:
        return abs(self.final_amplitude) ** 2

    @property
    def max_photon(self) -> float:
        return float(self.f_photon.max())

    @property
    def mean_photon(self) -> float:
        """按采样时刻的梯形积分求时间平均"""
        if self.total_time == 0:
            return float(self.f_photon[0])
        return float(integrate.trapezoid(self.f_photon, self.times) / self.total_time)


def _check_atoms(psi: ExcitationState, sites: Sequence[int]) -> None:
    for site in sites:
        if not 0 <= site < psi.n_sites:
            raise ValueError(f"原子格点 {site} 超出范围 0..{psi.n_sites - 1}")


def local_phase_flip(psi: ExcitationState, atom_sites: Sequence[int]) -> ExcitationState:
    """局部 σ_z：所列原子的激发振幅取反，腔模与真空不变"""
    _check_atoms(psi, atom_sites)
    amps = psi.amps.copy()
    for site in atom_sites:
        amps[HamiltonianMatrix.atom_index(site)] *= -1
    return psi.with_amps(amps)


def local_phase_shift(psi: ExcitationState, site: int, angle: float) -> ExcitationState:
    _check_atoms(psi, [site])
    amps = psi.amps.copy()
    amps[HamiltonianMatrix.atom_index(site)] *= np.exp(1j * angle)
    return psi.with_amps(amps)


def _apply(psi: ExcitationState, step: PhaseFlip | PhaseShift) -> ExcitationState:
    if isinstance(step, PhaseFlip):
        return local_phase_flip(psi, step.sites)
    return local_phase_shift(psi, step.site, step.angle)


def chain_routing_schedule(n: int, t1: float, t2: float) -> Schedule:
    """菱形链路由：端块 t1，每个体块 t2，每两个窗口之间翻转所有 3n 号原子

    总时长 T = 2·t1 + (N−1)·t2。
    """
    if n < 1:
        raise ValueError(f"链长 N 必须 ≥ 1，得到 {n}")
    for name, value in (("t1", t1), ("t2", t2)):
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"{name} 必须为正，得到 {value}")

    # 1 起编号 3n 即 0 起 3n−1
    flip = PhaseFlip(tuple(3 * k - 1 for k in range(1, n + 1)))
    steps: list[Step] = [Evolve(t1)]
    for _ in range(n - 1):
        steps += [flip, Evolve(t2)]
    steps += [flip, Evolve(t1)]
    return Schedule(steps=tuple(steps), source=ModeRef(0), target=ModeRef(3 * n))


def switch_port_flip(inner_sites: Sequence[int], i: int, j: int) -> PhaseFlip:
    """把 |ξ_{μi}^a⟩ 转为 |ξ_{μj}^a⟩ 的翻转：作用在两行 Hadamard 符号不同的内部原子上"""
    if len(inner_sites) != 4:
        raise ValueError(f"开关需要 4 个内部格点，得到 {len(inner_sites)}")
    for port in (i, j):
        if port not in range(4):
            raise ValueError(f"端口编号必须在 0..3 之间，得到 {port}")
    if i == j:
        raise ValueError(f"起止端口相同: {i}")
    differ = np.flatnonzero(SWITCH_SIGNS[i] != SWITCH_SIGNS[j])
    return PhaseFlip(tuple(inner_sites[k] for k in differ))


def switch_schedule(
    port: int, t: float, inner_sites: Sequence[int] = SWITCH_INNER_SITES
) -> Schedule:
    """单开关：ν_0 上传后翻转到端口 port，再演化 t 下载到 ν_port"""
    if port not in (1, 2, 3):
        raise ValueError(f"重定向端口必须为 1..3，得到 {port}")
    if not math.isfinite(t) or t <= 0:
        raise ValueError(f"演化时间必须为正，得到 {t}")
    steps = (Evolve(t), switch_port_flip(inner_sites, 0, port), Evolve(t))
    return Schedule(steps=steps, source=ModeRef(0), target=ModeRef(port))


def hex_routing_schedule(
    desc: HexLatticeDescriptor, path: Sequence[int], t_upload: float, t_hop: float
) -> Schedule:
    """六角格路由：在 path[0] 上传，沿链接逐跳转发，在 path[-1] 下载"""
    if len(path) < 2:
        raise ValueError("路径至少需要两个顶点（上传与下载顶点不能相同）")
    for name, value in (("t_upload", t_upload), ("t_hop", t_hop)):
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"{name} 必须为正，得到 {value}")
    for end in (path[0], path[-1]):
        if end not in desc.uploads:
            raise ValueError(f"顶点 {end} 没有上传端口")
    # 折返时进出端口相同
    for i, (before, after) in enumerate(zip(path, path[2:])):
        if before == after:
            raise ValueError(f"路径在顶点 {path[i + 1]} 处立即折返回顶点 {before}")

    layout = hex_layout(desc)
    steps: list[Step] = [Evolve(t_upload)]
    port = 0
    for here, there in zip(path, path[1:]):
        link = desc.link_between(here, there)
        outgoing = link.port_at(here)
        steps += [switch_port_flip(layout.inner[here], port, outgoing), Evolve(t_hop)]
        port = link.port_at(there)
    steps += [switch_port_flip(layout.inner[path[-1]], port, 0), Evolve(t_upload)]

    return Schedule(
        steps=tuple(steps),
        source=ModeRef(layout.upload_site(path[0])),
        target=ModeRef(layout.upload_site(path[-1])),
    )


def _mode_label(spec: NetworkSpec, mode: ModeRef) -> str:
    prefix = "U" if mode.kind is ModeKind.ATOM else "C"
    return f"{prefix}_{spec.sites[mode.site].label}"


def _source_amplitude(initial: ExcitationState, schedule: Schedule) -> complex:
    amplitude = complex(initial.amps[schedule.source.index])
    if amplitude == 0:
        raise ValueError("初态在源模式上的振幅为 0，无法定义转移振幅")
    return amplitude


def run_schedule(
    spec: NetworkSpec,
    schedule: Schedule,
    initial: ExcitationState,
    samples_per_window: int = DEFAULT_SAMPLES_PER_WINDOW,
    tracked: Sequence[ModeRef] | None = None,
) -> TraceResult:
    """在完整网络哈密顿量下执行调度，并在每个演化窗口内均匀采样"""
    if samples_per_window < 2:
        raise ValueError(f"每窗口采样数必须 ≥ 2，得到 {samples_per_window}")
    if initial.amps.size != spec.dim:
        raise ValueError(f"初态维数 {initial.amps.size} 与网络维数 {spec.dim} 不一致")
    schedule.validate_for(spec)
    modes = list(tracked) if tracked is not None else [schedule.source, schedule.target]
    for mode in modes:
        if not 0 <= mode.site < spec.n_sites:
            raise ValueError(f"跟踪格点 {mode.site} 超出网络范围")
    source_amplitude = _source_amplitude(initial, schedule)

    spectrum = eigendecompose(build_single_excitation_hamiltonian(spec))
    vac_weight = abs(initial.vac) ** 2

    times = [np.zeros(1)]
    snapshots = [initial.amps[:, None]]
    psi, clock = initial, 0.0
    for step in schedule.steps:
        if not isinstance(step, Evolve):
            psi = _apply(psi, step)
            continue
        offsets = np.linspace(0.0, step.duration, samples_per_window)[1:]
        coeffs = spectrum.eigenvectors.T @ psi.amps
        phases = np.exp(-1j * np.outer(spectrum.eigenvalues, offsets))
        window = spectrum.eigenvectors @ (phases * coeffs[:, None])
        times.append(clock + offsets)
        snapshots.append(window)
        psi = psi.with_amps(window[:, -1])
        clock += step.duration

    amps = np.concatenate(snapshots, axis=1)
    weights = np.abs(amps) ** 2
    populations = {_mode_label(spec, m): weights[m.index] for m in modes}
    return TraceResult(
        times=np.concatenate(times),
        f_photon=weights[0::2].sum(axis=0),
        populations=populations,
        norms=vac_weight + weights.sum(axis=0),
        final_state=psi,
        final_amplitude=complex(psi.amps[schedule.target.index]) / source_amplitude,
        total_time=total_evolution_time(schedule),
    )


def run_schedule_blockwise(
    spec: NetworkSpec,
    schedule: Schedule,
    initial: ExcitationState,
    transform: OrthogonalTransform | None = None,
) -> ExcitationState:
    """在集体基中逐块演化执行调度，局部操作在格点基中施加"""
    schedule.validate_for(spec)
    transform = transform or collective_basis(spec)
    blocks, _ = block_decompose(build_single_excitation_hamiltonian(spec), transform)
    spectra = [(np.array(b.rows), eigendecompose(b)) for b in blocks]

    q = transform.q
    psi = initial
    for step in schedule.steps:
        if not isinstance(step, Evolve):
            psi = _apply(psi, step)
            continue
        rotated = q @ psi.amps
        evolved = np.empty_like(rotated)
        for rows, spectrum in spectra:
            evolved[rows] = spectrum.evolve(rotated[rows], step.duration)
        psi = psi.with_amps(q.T @ evolved)
    return psi


@dataclass(frozen=True)
class BellTransfer:
    """纠缠转移结果：参考比特与接收原子的 Bell 保真度"""

    fidelity: float
    compensation_phase: float
    amplitude: complex


def entanglement_transfer(
    spec: NetworkSpec, schedule: Schedule, compensate: bool = True
) -> BellTransfer:
    """参考比特 R 与发送原子处于 (|0⟩_R|vac⟩ + |1⟩_R|a_src⟩)/√2

    真空分支不演化；接收端可追加相移 −arg(u) 补偿转移相位。
    返回末态与理想 (|0⟩_R|vac⟩ + |1⟩_R|a_tgt⟩)/√2 的重叠平方。
    """
    if schedule.target.kind is not ModeKind.ATOM:
        raise ValueError("纠缠转移的目标必须是原子")
    initial = ExcitationState.excited(spec.n_sites, schedule.source)
    trace = run_schedule(spec, schedule, initial, samples_per_window=2)
    u = trace.final_amplitude
    phase = -float(np.angle(u))

    final = trace.final_state
    if compensate:
        final = local_phase_shift(final, schedule.target.site, phase)
    # 联合态两分支各带 1/√2，理想态同理
    overlap = 0.5 * (1.0 + complex(final.amps[schedule.target.index]))
    return BellTransfer(
        fidelity=abs(overlap) ** 2,
        compensation_phase=phase,
        amplitude=u,
    )
