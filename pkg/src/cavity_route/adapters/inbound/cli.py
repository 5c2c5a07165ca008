"""入站适配器 - 命令行"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from cavity_route.adapters.outbound.config import JsonConfigLoader, threads_from_env
from cavity_route.adapters.outbound.trace_csv import CsvTraceWriter
from cavity_route.application import (
    ConfigLoaderPort,
    RoutingService,
    RunConfig,
    SimulationResult,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, required=True, help="JSON 运行配置路径")
    common.add_argument("--out", type=Path, help="输出 CSV 路径，覆盖配置中的 output.path")
    common.add_argument("--tmax", type=float, help="搜索窗口 (0, tmax)")
    common.add_argument("--grid", type=int, help="转移时间搜索的网格点数")
    common.add_argument("--samples", type=int, help="每个演化窗口的采样数")
    common.add_argument("--strict", action="store_true", help="数值验收不通过时以 1 退出")
    common.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-route", description="腔 QED 网络完美路由模拟器"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = _common_options()

    sub.add_parser("blocks", parents=[common], help="集体基分块与块外残差")
    transfer = sub.add_parser("transfer-time", parents=[common], help="搜索块内转移时间")
    transfer.add_argument("--block", help="子空间选择器，如 H1、H2、Hmu0、Hmu,lambda、full")
    transfer.add_argument("--source", type=int, help="块内源基矢下标（0 起）")
    transfer.add_argument("--target", type=int, help="块内目标基矢下标（0 起）")
    sub.add_parser("validate-analytic", parents=[common], help="闭式振幅与数值传播子对比")
    sub.add_parser("simulate", parents=[common], help="菱形链端到端路由")
    sub.add_parser("switch", parents=[common], help="单开关端口重定向")
    sub.add_parser("route", parents=[common], help="六角格路径路由")
    sub.add_parser("entangle", parents=[common], help="纠缠转移与相位补偿")
    return parser


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """命令行参数覆盖配置文件中的对应项"""
    if args.tmax is not None:
        if args.tmax <= 0:
            raise ValueError(f"--tmax 必须为正，得到 {args.tmax}")
        config.protocol.window = (0.0, args.tmax)
    if args.grid is not None:
        if args.grid < 100:
            raise ValueError(f"--grid 必须 ≥ 100，得到 {args.grid}")
        config.protocol.grid_points = args.grid
    if args.samples is not None:
        if args.samples < 2:
            raise ValueError(f"--samples 必须 ≥ 2，得到 {args.samples}")
        config.output.samples_per_window = args.samples
    if args.out is not None:
        config.output.path = args.out
    for name in ("block", "source", "target"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(config.protocol, name, value)
    return config


def _blocks(service: RoutingService, config: RunConfig) -> bool:
    result = service.blocks(config)
    print(f"blocks: {','.join(map(str, result.sizes))} residual: {result.residual:.3e}")
    print(f"names: {','.join(result.names)}")
    return result.passed


def _transfer_time(service: RoutingService, config: RunConfig) -> bool:
    result = service.transfer_time(config)
    print(
        f"block: {result.block} source: {result.source} target: {result.target} "
        f"t_star: {result.t_star:.6f} fidelity: {result.fidelity:.6f} "
        f"phase: {result.phase:.6f}"
    )
    return result.passed


def _validate_analytic(service: RoutingService, config: RunConfig) -> bool:
    report = service.validate_analytic(config)
    for check in report.checks:
        print(f"{check.block} {check.regime} max_error: {check.max_error:.3e}")
    return report.passed


def _routing(
    run: Callable[[RoutingService, RunConfig], SimulationResult],
) -> Callable[[RoutingService, RunConfig], bool]:
    def handler(service: RoutingService, config: RunConfig) -> bool:
        result = run(service, config)
        times = " ".join(f"{k}={v:.6f}" for k, v in result.transfer_times.items())
        trace = result.trace
        print(
            f"fidelity: {result.fidelity:.6f} total_time: {trace.total_time:.6f} "
            f"max_F: {trace.max_photon:.6f} mean_F: {trace.mean_photon:.6f}"
        )
        print(f"times: {times}")
        return result.passed

    return handler


def _entangle(service: RoutingService, config: RunConfig) -> bool:
    result = service.entangle(config)
    print(
        f"bell_fidelity: {result.bell_fidelity:.6f} |u|: {abs(result.amplitude):.6f} "
        f"compensation_phase: {result.compensation_phase:.6f} "
        f"compensated: {str(result.compensated).lower()}"
    )
    return result.passed


COMMANDS: dict[str, Callable[[RoutingService, RunConfig], bool]] = {
    "blocks": _blocks,
    "transfer-time": _transfer_time,
    "validate-analytic": _validate_analytic,
    "simulate": _routing(RoutingService.simulate),
    "switch": _routing(RoutingService.switch),
    "route": _routing(RoutingService.route),
    "entangle": _entangle,
}


def run_command(
    argv: Sequence[str] | None = None, loader: ConfigLoaderPort | None = None
) -> int:
    """解析参数并执行子命令，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    if args.verbose:
        logging.getLogger("cavity_route").setLevel(logging.DEBUG)

    try:
        config = apply_overrides((loader or JsonConfigLoader()).load(args.config), args)
        service = RoutingService(CsvTraceWriter(), max_workers=threads_from_env())
        passed = COMMANDS[args.command](service, config)
    except ValueError as e:
        logger.error("配置错误: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        logger.error("写出失败: %s", e)
        return EXIT_FAILURE

    if args.strict and not passed:
        logger.error("数值验收未通过: %s", args.command)
        return EXIT_FAILURE
    return EXIT_OK
