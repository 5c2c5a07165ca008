"""应用层模型 - 运行配置与用例结果"""

from dataclasses import dataclass, field
from pathlib import Path

from cavity_route.domain import (
    BlockHamiltonian,
    HexLatticeDescriptor,
    NetworkSpec,
    Schedule,
    TraceResult,
)

TOPOLOGIES = ("diamond_chain", "switch", "hex_lattice", "custom")


@dataclass
class ProtocolOptions:
    """协议配置：块选择、端口/路径、转移时间来源与搜索参数

    times 为 None 表示 "auto"，由 find_transfer_time 在 window 内求出。
    """

    block: str = "H1"
    source: int = 1
    target: int | None = None
    port: int = 1
    path: list[int] = field(default_factory=list)
    times: dict[str, float] | None = None
    window: tuple[float, float] | None = None
    grid_points: int = 20001
    refine_tol: float = 1e-6
    compensate: bool = True


@dataclass
class OutputOptions:
    path: Path | None = None
    samples_per_window: int = 50


@dataclass
class RunConfig:
    """一次运行的完整配置"""

    topology: str
    spec: NetworkSpec
    n: int | None = None
    lattice: HexLatticeDescriptor | None = None
    protocol: ProtocolOptions = field(default_factory=ProtocolOptions)
    output: OutputOptions = field(default_factory=OutputOptions)

    def __post_init__(self) -> None:
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"未知拓扑: {self.topology}（可选: {', '.join(TOPOLOGIES)}）")


@dataclass
class BlocksResult:
    """分块结果"""

    passed: bool
    names: list[str]
    sizes: list[int]
    residual: float
    blocks: list[BlockHamiltonian]
    output_path: str = ""


@dataclass
class TransferTimeResult:
    """转移时间搜索结果"""

    passed: bool
    block: str
    source: int
    target: int
    t_star: float
    fidelity: float
    phase: float
    output_path: str = ""


@dataclass
class AnalyticCheck:
    block: str
    regime: str
    max_error: float


@dataclass
class AnalyticReport:
    """闭式振幅校验报告"""

    passed: bool
    checks: list[AnalyticCheck]

    @property
    def max_error(self) -> float:
        return max((c.max_error for c in self.checks), default=0.0)


@dataclass
class SimulationResult:
    """路由调度执行结果"""

    passed: bool
    schedule: Schedule
    trace: TraceResult
    transfer_times: dict[str, float]
    output_path: str = ""

    @property
    def fidelity(self) -> float:
        return self.trace.final_fidelity


@dataclass
class EntanglementResult:
    """纠缠转移结果"""

    passed: bool
    bell_fidelity: float
    compensation_phase: float
    amplitude: complex
    compensated: bool
    transfer_times: dict[str, float]
