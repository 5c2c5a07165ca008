"""CSV 写出适配器单元测试"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cavity_route.adapters.outbound.trace_csv import CsvTraceWriter
from cavity_route.domain import (
    ExcitationState,
    SystemParams,
    block_populations,
    build_diamond_chain,
    chain_routing_schedule,
    extract_block,
    run_schedule,
)


def _chain_trace(params: SystemParams):
    spec = build_diamond_chain(1, params)
    schedule = chain_routing_schedule(1, 2.2232, 2.2232)
    initial = ExcitationState.excited(spec.n_sites, schedule.source)
    return run_schedule(spec, schedule, initial, samples_per_window=11)


class TestCsvTraceWriter:
    """CsvTraceWriter 单元测试"""

    def test_directory_auto_creation(self, tmp_path: Path, resonant: SystemParams):
        """测试父目录自动创建"""
        path = tmp_path / "runs" / "nested" / "trace.csv"

        written = CsvTraceWriter().write_trace(_chain_trace(resonant), path, [2.2232], 0.0)

        assert written == path
        assert path.exists()

    def test_trace_header_and_rows(self, tmp_path: Path, resonant: SystemParams):
        """测试表头与数据行数"""
        trace = _chain_trace(resonant)
        path = CsvTraceWriter().write_trace(trace, tmp_path / "t.csv", [2.2232], 0.5)

        lines = path.read_text(encoding="utf-8").splitlines()

        assert lines[0] == "t,F,U_1,U_4,norm"
        assert len(lines) == 1 + trace.times.size + 1
        assert all(len(line.split(",")) == 5 for line in lines[1:-1])

    def test_norm_column_prints_one(self, tmp_path: Path, resonant: SystemParams):
        """测试 norm 列在 12 位小数下恒为 1"""
        path = CsvTraceWriter().write_trace(
            _chain_trace(resonant), tmp_path / "t.csv", [2.2232], 0.0
        )

        rows = path.read_text(encoding="utf-8").splitlines()[1:-1]
        assert {row.split(",")[-1] for row in rows} == {"1.000000000000"}

    def test_times_non_decreasing(self, tmp_path: Path, resonant: SystemParams):
        """测试时间列单调不减"""
        path = CsvTraceWriter().write_trace(
            _chain_trace(resonant), tmp_path / "t.csv", [2.2232], 0.0
        )

        data = np.loadtxt(path, delimiter=",", skiprows=1, comments="#")
        assert np.all(np.diff(data[:, 0]) >= 0)
        assert data[0, 0] == 0.0

    def test_footer(self, tmp_path: Path, resonant: SystemParams):
        """测试末行记录转移时间、保真度与相位"""
        trace = _chain_trace(resonant)
        path = CsvTraceWriter().write_trace(
            trace, tmp_path / "t.csv", [2.2232, 3.1414], -1.25
        )

        footer = path.read_text(encoding="utf-8").splitlines()[-1]
        assert footer == (
            f"# t_star=2.223200000000;3.141400000000 "
            f"fidelity={trace.final_fidelity:.12f} phase=-1.250000000000"
        )

    def test_block_curves(self, tmp_path: Path, resonant: SystemParams):
        """测试块布居曲线的表头与归一化"""
        block = extract_block(build_diamond_chain(1, resonant), "H1")
        curves = block_populations(block, 1, np.linspace(0.0, 2.2232, 21))

        path = CsvTraceWriter().write_block_curves(
            curves, tmp_path / "h1.csv", 2.2232, 0.9999, 0.1
        )

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,F,c_1,a_1,c_1^+,a_1^+,norm"
        assert {row.split(",")[-1] for row in lines[1:-1]} == {"1.000000000000"}
        assert lines[-1].startswith("# t_star=2.223200000000 fidelity=0.999900000000")

    def test_blocks_file(self, tmp_path: Path, resonant: SystemParams):
        """测试块矩阵文件：每块一行注释加矩阵行"""
        spec = build_diamond_chain(2, resonant)
        blocks = [extract_block(spec, name) for name in ("H1", "H2", "H3")]

        path = CsvTraceWriter().write_blocks(blocks, tmp_path / "blocks.csv")

        lines = path.read_text(encoding="utf-8").splitlines()
        headers = [line for line in lines if line.startswith("#")]
        assert headers[0] == "# block=H1 kind=end labels=c_1;a_1;c_1^+;a_1^+"
        assert [h.split()[1] for h in headers] == ["block=H1", "block=H2", "block=H3"]
        assert len(lines) == 3 + 4 + 6 + 4
