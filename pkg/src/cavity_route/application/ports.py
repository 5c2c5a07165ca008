"""端口定义 - 出站端口接口"""

from collections.abc import Sequence
from pathlib import Path
from typing import Protocol

from cavity_route.domain import BlockHamiltonian, TraceResult
from cavity_route.domain.propagator import BlockCurves

from .models import RunConfig


class TraceWriterPort(Protocol):
    """轨迹写出端口 - 仿真结果持久化抽象"""

    def write_trace(
        self, trace: TraceResult, path: Path, t_stars: Sequence[float], phase: float
    ) -> Path:
        """写出调度轨迹，返回文件路径"""
        ...

    def write_block_curves(
        self, curves: BlockCurves, path: Path, t_star: float, fidelity: float, phase: float
    ) -> Path:
        """写出单个块内的布居曲线"""
        ...

    def write_blocks(self, blocks: Sequence[BlockHamiltonian], path: Path) -> Path:
        """写出各块矩阵"""
        ...


class ConfigLoaderPort(Protocol):
    """配置读取端口"""

    def load(self, path: Path) -> RunConfig:
        """读取并校验运行配置，非法配置抛出 ValueError"""
        ...
