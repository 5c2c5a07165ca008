"""应用服务 - RoutingService"""

import logging
from dataclasses import replace

import numpy as np

from cavity_route.domain import (
    ExcitationState,
    NetworkSpec,
    Schedule,
    build_single_excitation_hamiltonian,
    block_decompose,
    block_populations,
    chain_routing_schedule,
    collective_basis,
    entanglement_transfer,
    extract_block,
    find_transfer_time,
    hex_routing_schedule,
    identity_transform,
    run_schedule,
    switch_schedule,
    total_evolution_time,
    validate_analytic,
)
from cavity_route.domain.analytic import ORACLES
from cavity_route.domain.propagator import default_window
from cavity_route.domain.subspaces import BlockHamiltonian

from .models import (
    AnalyticCheck,
    AnalyticReport,
    BlocksResult,
    EntanglementResult,
    RunConfig,
    SimulationResult,
    TransferTimeResult,
)
from .ports import TraceWriterPort

logger = logging.getLogger(__name__)

RESIDUAL_THRESHOLD = 1e-12
ANALYTIC_THRESHOLD = 1e-9
ROUTING_THRESHOLD = 0.99
BELL_THRESHOLD = 0.99
TRANSFER_THRESHOLD = 0.999

DISPERSIVE_DELTA = -1000.0
ANALYTIC_GRID_POINTS = 101

# 自动求时间时各时间键对应的 (块, 源下标, 目标下标)
_AUTO_BLOCKS = {
    "t1": ("H1", 1, 3),
    "t2": ("H2", 1, 5),
    "t": ("Hmu0", 1, 3),
    "upload": ("Hmu0", 1, 3),
    "hop": ("hop", 1, 5),
}


class RoutingService:
    """路由模拟应用服务"""

    def __init__(
        self, trace_writer: TraceWriterPort, max_workers: int | None = None
    ) -> None:
        self.trace_writer = trace_writer
        self.max_workers = max_workers

    def blocks(self, config: RunConfig) -> BlocksResult:
        """集体基分块，报告块大小与块外残差"""
        spec = config.spec
        try:
            transform = collective_basis(spec)
        except ValueError:
            if config.topology != "custom":
                raise
            logger.info("自定义拓扑没有集体基，使用恒等变换")
            transform = identity_transform(spec.n_sites)

        h = build_single_excitation_hamiltonian(spec)
        blocks, residual = block_decompose(h, transform)
        result = BlocksResult(
            passed=residual <= RESIDUAL_THRESHOLD,
            names=[b.name for b in blocks],
            sizes=[b.dim for b in blocks],
            residual=residual,
            blocks=blocks,
        )
        logger.info("分块 %s，残差 %.3e", ",".join(map(str, result.sizes)), residual)

        if config.output.path is not None:
            path = self.trace_writer.write_blocks(blocks, config.output.path)
            result.output_path = str(path)
            logger.info("块矩阵已写入 %s", path)
        return result

    def _matrix(self, spec: NetworkSpec, which: str) -> BlockHamiltonian:
        if which != "full":
            return extract_block(spec, which)
        matrix = build_single_excitation_hamiltonian(spec).matrix
        labels = tuple(f"{s.label}^{kind}" for s in spec.sites for kind in "ca")
        return BlockHamiltonian(
            name="full",
            kind="whole",
            matrix=matrix,
            labels=labels,
            rows=tuple(range(spec.dim)),
        )

    def transfer_time(self, config: RunConfig) -> TransferTimeResult:
        """在指定块（或完整哈密顿量 "full"）上搜索转移时间"""
        options = config.protocol
        block = self._matrix(config.spec, options.block)
        target = options.target if options.target is not None else block.dim - 1
        window = options.window or default_window(config.spec.params)

        found = find_transfer_time(
            block,
            options.source,
            target,
            window=window,
            grid_points=options.grid_points,
            refine_tol=options.refine_tol,
            max_workers=self.max_workers,
        )
        logger.info(
            "块 %s: t*=%.6f fidelity=%.6f phase=%.6f",
            block.name,
            found.t_star,
            found.fidelity,
            found.phase,
        )
        result = TransferTimeResult(
            passed=found.fidelity >= TRANSFER_THRESHOLD,
            block=block.name,
            source=options.source,
            target=target,
            t_star=found.t_star,
            fidelity=found.fidelity,
            phase=found.phase,
        )

        if config.output.path is not None:
            n = max(config.output.samples_per_window, 2)
            times = np.linspace(0.0, found.t_star, n)
            curves = block_populations(block, options.source, times)
            path = self.trace_writer.write_block_curves(
                curves, config.output.path, found.t_star, found.fidelity, found.phase
            )
            result.output_path = str(path)
            logger.info("块布居曲线已写入 %s", path)
        return result

    def validate_analytic(self, config: RunConfig) -> AnalyticReport:
        """在共振与色散两种区间下，逐块比较闭式振幅与数值传播子"""
        base = config.spec.params
        regimes = {
            "resonant": (replace(base, delta=0.0), 10.0),
            "dispersive": (replace(base, delta=DISPERSIVE_DELTA), 600.0),
        }
        checks = []
        for block in ORACLES:
            for regime, (params, t_max) in regimes.items():
                grid = np.linspace(0.0, t_max, ANALYTIC_GRID_POINTS)
                error = validate_analytic(params, block, grid)
                logger.info("闭式振幅 %s/%s 最大误差 %.3e", block, regime, error)
                checks.append(AnalyticCheck(block=block, regime=regime, max_error=error))
        return AnalyticReport(
            passed=all(c.max_error <= ANALYTIC_THRESHOLD for c in checks), checks=checks
        )

    def _resolve_times(self, config: RunConfig, keys: tuple[str, ...]) -> dict[str, float]:
        options = config.protocol
        if options.times is not None:
            missing = [k for k in keys if k not in options.times]
            if missing:
                raise ValueError(f"缺少转移时间: {', '.join(missing)}")
            return {k: float(options.times[k]) for k in keys}

        if options.window is None:
            raise ValueError('"times": "auto" 需要搜索窗口（protocol.window 或 --tmax）')
        resolved = {}
        for key in keys:
            name, source, target = _AUTO_BLOCKS[key]
            found = find_transfer_time(
                extract_block(config.spec, name),
                source,
                target,
                window=options.window,
                grid_points=options.grid_points,
                refine_tol=options.refine_tol,
                max_workers=self.max_workers,
            )
            logger.info(
                "自动转移时间 %s (%s): t*=%.6f fidelity=%.6f",
                key,
                name,
                found.t_star,
                found.fidelity,
            )
            resolved[key] = found.t_star
        return resolved

    def _schedule(self, config: RunConfig) -> tuple[Schedule, dict[str, float]]:
        if config.topology == "diamond_chain":
            n = config.n or 1
            times = self._resolve_times(config, ("t1", "t2") if n > 1 else ("t1",))
            t2 = times.get("t2", times["t1"])
            return chain_routing_schedule(n, times["t1"], t2), times
        if config.topology == "switch":
            times = self._resolve_times(config, ("t",))
            return switch_schedule(config.protocol.port, times["t"]), times
        if config.topology == "hex_lattice" and config.lattice is not None:
            times = self._resolve_times(config, ("upload", "hop"))
            schedule = hex_routing_schedule(
                config.lattice, config.protocol.path, times["upload"], times["hop"]
            )
            return schedule, times
        raise ValueError(f"拓扑 {config.topology} 没有可用的路由调度")

    def _run(self, config: RunConfig, expected: str) -> SimulationResult:
        if config.topology != expected:
            raise ValueError(f"该命令需要拓扑 {expected}，配置为 {config.topology}")
        schedule, times = self._schedule(config)
        logger.info(
            "调度 %d 步，%d 次翻转，总时长 %.6f",
            len(schedule.steps),
            len(schedule.flips),
            total_evolution_time(schedule),
        )

        initial = ExcitationState.excited(config.spec.n_sites, schedule.source)
        trace = run_schedule(
            config.spec, schedule, initial, samples_per_window=config.output.samples_per_window
        )
        result = SimulationResult(
            passed=trace.final_fidelity >= ROUTING_THRESHOLD,
            schedule=schedule,
            trace=trace,
            transfer_times=times,
        )
        logger.info("末态保真度 %.6f，最大腔模布居 %.4f", trace.final_fidelity, trace.max_photon)

        if config.output.path is not None:
            phase = float(np.angle(trace.final_amplitude))
            path = self.trace_writer.write_trace(
                trace, config.output.path, list(times.values()), phase
            )
            result.output_path = str(path)
            logger.info("轨迹已写入 %s", path)
        return result

    def simulate(self, config: RunConfig) -> SimulationResult:
        """菱形链端到端路由"""
        return self._run(config, "diamond_chain")

    def switch(self, config: RunConfig) -> SimulationResult:
        """单开关端口重定向"""
        return self._run(config, "switch")

    def route(self, config: RunConfig) -> SimulationResult:
        """六角格沿路径路由"""
        return self._run(config, "hex_lattice")

    def entangle(self, config: RunConfig) -> EntanglementResult:
        """沿当前拓扑的路由调度做纠缠转移"""
        schedule, times = self._schedule(config)
        outcome = entanglement_transfer(
            config.spec, schedule, compensate=config.protocol.compensate
        )
        logger.info(
            "Bell 保真度 %.6f，|u|=%.6f，补偿相位 %.6f",
            outcome.fidelity,
            abs(outcome.amplitude),
            outcome.compensation_phase,
        )
        return EntanglementResult(
            passed=outcome.fidelity >= BELL_THRESHOLD,
            bell_fidelity=outcome.fidelity,
            compensation_phase=outcome.compensation_phase,
            amplitude=outcome.amplitude,
            compensated=config.protocol.compensate,
            transfer_times=times,
        )


