"""出站适配器 - CSV 轨迹与块矩阵写出"""

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from cavity_route.domain import BlockHamiltonian, TraceResult
from cavity_route.domain.propagator import BlockCurves


class CsvTraceWriter:
    """CSV 写出适配器，数值统一为 %.12f"""

    NUMBER_FORMAT = "%.12f"
    DELIMITER = ","

    def _ensure_parent(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def footer(t_stars: Sequence[float], fidelity: float, phase: float) -> str:
        stars = ";".join(f"{t:.12f}" for t in t_stars)
        return f"# t_star={stars} fidelity={fidelity:.12f} phase={phase:.12f}"

    def _save(self, path: Path, columns: list[np.ndarray], header: str, footer: str) -> Path:
        self._ensure_parent(path)
        np.savetxt(
            path,
            np.column_stack(columns),
            fmt=self.NUMBER_FORMAT,
            delimiter=self.DELIMITER,
            header=header,
            footer=footer,
            comments="",
        )
        return path

    def write_trace(
        self, trace: TraceResult, path: Path, t_stars: Sequence[float], phase: float
    ) -> Path:
        """表头 t,F,<跟踪模式>,norm；末行为转移时间、末态保真度与相位"""
        labels = list(trace.populations)
        header = self.DELIMITER.join(["t", "F", *labels, "norm"])
        columns = [trace.times, trace.f_photon, *trace.populations.values(), trace.norms]
        return self._save(path, columns, header, self.footer(t_stars, trace.final_fidelity, phase))

    def write_block_curves(
        self, curves: BlockCurves, path: Path, t_star: float, fidelity: float, phase: float
    ) -> Path:
        """块内布居曲线，norm 列为所有基矢布居之和"""
        labels = list(curves.populations)
        header = self.DELIMITER.join(["t", "F", *labels, "norm"])
        populations = list(curves.populations.values())
        norm = np.sum(populations, axis=0)
        columns = [curves.times, curves.photon, *populations, norm]
        return self._save(path, columns, header, self.footer([t_star], fidelity, phase))

    def write_blocks(self, blocks: Sequence[BlockHamiltonian], path: Path) -> Path:
        """每个块先写一行注释（名称、类型、基矢标签），再写矩阵各行"""
        self._ensure_parent(path)
        with path.open("w", encoding="utf-8") as f:
            for block in blocks:
                labels = ";".join(block.labels)
                f.write(f"# block={block.name} kind={block.kind} labels={labels}\n")
                np.savetxt(f, block.matrix, fmt=self.NUMBER_FORMAT, delimiter=self.DELIMITER)
        return path
