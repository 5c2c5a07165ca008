"""应用层 - 用例编排，连接领域与端口"""

from .models import (
    AnalyticCheck,
    AnalyticReport,
    BlocksResult,
    EntanglementResult,
    OutputOptions,
    ProtocolOptions,
    RunConfig,
    SimulationResult,
    TransferTimeResult,
)
from .ports import ConfigLoaderPort, TraceWriterPort
from .service import RoutingService

__all__ = [
    "RoutingService",
    "TraceWriterPort",
    "ConfigLoaderPort",
    "RunConfig",
    "ProtocolOptions",
    "OutputOptions",
    "BlocksResult",
    "TransferTimeResult",
    "AnalyticCheck",
    "AnalyticReport",
    "SimulationResult",
    "EntanglementResult",
]
