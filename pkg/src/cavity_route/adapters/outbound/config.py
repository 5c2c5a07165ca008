"""出站适配器 - JSON 配置读取与 NetworkSpec 序列化"""

import json
import os
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from cavity_route.application.models import OutputOptions, ProtocolOptions, RunConfig
from cavity_route.domain import (
    Edge,
    HexLatticeDescriptor,
    HexLink,
    NetworkSpec,
    Site,
    SiteRole,
    SystemParams,
    build_diamond_chain,
    build_hex_lattice,
    build_switch,
)

THREADS_ENV = "CAVITY_ROUTE_THREADS"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParamsModel(_Strict):
    omega_c: float = 1.0
    delta: float = 0.0
    g: float = Field(default=65.0, gt=0)
    j: float = Field(default=1.0, gt=0)

    def to_domain(self) -> SystemParams:
        return SystemParams(omega_c=self.omega_c, delta=self.delta, g=self.g, j=self.j)


class SiteModel(_Strict):
    id: int = Field(ge=0)
    label: str
    role: SiteRole = SiteRole.PLAIN


class NetworkSpecModel(_Strict):
    """NetworkSpec 的 JSON 文档：边写作 [k, l, sign]"""

    sites: list[SiteModel]
    edges: list[tuple[int, int, Literal[1, -1]]] = Field(default_factory=list)
    params: ParamsModel = Field(default_factory=ParamsModel)

    def to_domain(self) -> NetworkSpec:
        return NetworkSpec(
            sites=tuple(Site(id=s.id, label=s.label, role=s.role) for s in self.sites),
            edges=tuple(Edge(k, l, sign) for k, l, sign in self.edges),
            params=self.params.to_domain(),
        )

    @classmethod
    def from_domain(cls, spec: NetworkSpec) -> "NetworkSpecModel":
        p = spec.params
        return cls(
            sites=[SiteModel(id=s.id, label=s.label, role=s.role) for s in spec.sites],
            edges=[(e.k, e.l, e.sign) for e in spec.edges],
            params=ParamsModel(omega_c=p.omega_c, delta=p.delta, g=p.g, j=p.j),
        )


class LatticeModel(_Strict):
    vertices: list[int]
    links: list[tuple[int, int, int, int]] = Field(default_factory=list)
    uploads: list[int] = Field(default_factory=list)

    def to_domain(self) -> HexLatticeDescriptor:
        return HexLatticeDescriptor(
            vertices=tuple(self.vertices),
            links=tuple(HexLink(a, pa, b, pb) for a, pa, b, pb in self.links),
            uploads=tuple(self.uploads),
        )


class ProtocolModel(_Strict):
    block: str = "H1"
    source: int = Field(default=1, ge=0)
    target: int | None = Field(default=None, ge=0)
    port: int = 1
    path: list[int] = Field(default_factory=list)
    times: Literal["auto"] | dict[str, float] = "auto"
    window: tuple[float, float] | None = None
    grid_points: int = Field(default=20001, ge=100)
    refine_tol: float = Field(default=1e-6, gt=0)
    compensate: bool = True

    @model_validator(mode="after")
    def _check_window(self) -> "ProtocolModel":
        if self.window is not None and self.window[0] >= self.window[1]:
            raise ValueError(f"搜索窗口为空: {self.window}")
        return self


class OutputModel(_Strict):
    path: Path | None = None
    samples_per_window: int = Field(default=50, ge=2)


class RunConfigModel(_Strict):
    """运行配置文档：恰好一个与 topology 对应的拓扑参数"""

    topology: Literal["diamond_chain", "switch", "hex_lattice", "custom"]
    n: int | None = Field(default=None, ge=1)
    lattice: LatticeModel | None = None
    network: NetworkSpecModel | None = None
    params: ParamsModel = Field(default_factory=ParamsModel)
    protocol: ProtocolModel = Field(default_factory=ProtocolModel)
    output: OutputModel = Field(default_factory=OutputModel)

    @model_validator(mode="after")
    def _check_topology(self) -> "RunConfigModel":
        required = {"diamond_chain": "n", "hex_lattice": "lattice", "custom": "network"}
        given = [k for k in ("n", "lattice", "network") if getattr(self, k) is not None]
        expected = [required[self.topology]] if self.topology in required else []
        if given != expected:
            raise ValueError(
                f"拓扑 {self.topology} 需要参数 {expected or '无'}，实际给出 {given or '无'}"
            )
        return self

    def to_domain(self) -> RunConfig:
        params = self.params.to_domain()
        lattice = self.lattice.to_domain() if self.lattice is not None else None
        if self.topology == "diamond_chain":
            spec = build_diamond_chain(self.n, params)
        elif self.topology == "switch":
            spec = build_switch(params)
        elif self.topology == "hex_lattice":
            spec = build_hex_lattice(lattice, params)
        else:
            spec = self.network.to_domain()

        p = self.protocol
        protocol = ProtocolOptions(
            block=p.block,
            source=p.source,
            target=p.target,
            port=p.port,
            path=list(p.path),
            times=None if p.times == "auto" else dict(p.times),
            window=p.window,
            grid_points=p.grid_points,
            refine_tol=p.refine_tol,
            compensate=p.compensate,
        )
        output = OutputOptions(
            path=self.output.path, samples_per_window=self.output.samples_per_window
        )
        return RunConfig(
            topology=self.topology,
            spec=spec,
            n=self.n,
            lattice=lattice,
            protocol=protocol,
            output=output,
        )


def network_to_json(spec: NetworkSpec) -> str:
    return NetworkSpecModel.from_domain(spec).model_dump_json(indent=2)


def network_from_json(text: str) -> NetworkSpec:
    return NetworkSpecModel.model_validate_json(text).to_domain()


class JsonConfigLoader:
    """JSON 配置读取适配器"""

    def load(self, path: Path) -> RunConfig:
        """读取配置文件，文件不可读或内容非法均抛出 ValueError"""
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ValueError(f"无法读取配置文件 {path}: {e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"配置文件 {path} 不是合法 JSON: {e}") from e
        return RunConfigModel.model_validate(data).to_domain()


def threads_from_env() -> int | None:
    """读取 CAVITY_ROUTE_THREADS，未设置返回 None"""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} 必须为正整数，得到 {raw!r}") from None
    if value < 1:
        raise ValueError(f"{THREADS_ENV} 必须为正整数，得到 {raw!r}")
    return value
