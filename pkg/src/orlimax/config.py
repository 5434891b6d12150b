"""Run configuration: a single TOML file with nested sections.

The config owns everything a run needs: group instance, grid box and
resolution, Young functions, ball-family parameters, corpus tags, probe
parameters, and the output seed. ``RunConfig.prepare`` builds (and
validates) all of it up front so commands never emit partial output after
a configuration error.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .corpus import make_corpus
from .family import BallFamily, build_ball_family
from .fields import GridSpec, SampledField
from .groups import GroupSpec, calibrate_constants, euclidean, heisenberg1
from .io import CorruptFieldError, read_field_csv
from .young import LInfinityYoung, PowerYoung, TabulatedYoung, YoungFunction

__all__ = ["ConfigError", "RunConfig", "Prepared", "load_config", "parse_young"]

_MAX_POINTS = {1: 4097, 2: 513, 3: 129}


class ConfigError(ValueError):
    pass


def parse_young(desc) -> YoungFunction:
    """Young function from a table {kind=...} or shorthand string 'power:2'."""
    if isinstance(desc, str):
        name, _, arg = desc.partition(":")
        if name == "power":
            return PowerYoung(float(arg or 2.0))
        if name == "linfty":
            return LInfinityYoung(float(arg) if arg else 1.0)
        raise ConfigError(f"unknown young shorthand {desc!r}")
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError(f"young entry must have a 'kind': {desc!r}")
    kind = desc["kind"]
    if kind == "power":
        return PowerYoung(float(desc.get("p", 2.0)))
    if kind == "linfty":
        return LInfinityYoung(float(desc.get("threshold", 1.0)))
    if kind == "tabulated":
        path = desc.get("csv")
        if path is None:
            raise ConfigError("tabulated young entry needs csv=PATH")
        if "tail_exponent" not in desc:
            raise ConfigError("tabulated young entry needs a declared tail_exponent")
        rows = []
        for ln, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"{path}, row {ln}: expected 't,value'")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"{path}, row {ln}: {exc}") from exc
        t, v = zip(*rows)
        try:
            return TabulatedYoung(
                t,
                v,
                tail_exponent=float(desc["tail_exponent"]),
                head_exponent=(
                    float(desc["head_exponent"]) if "head_exponent" in desc else None
                ),
                label=desc.get("label", f"tabulated({Path(path).name})"),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"unknown young kind {kind!r}")


@dataclass
class RunConfig:
    group: dict
    grid: dict
    young: list = field(default_factory=list)
    family: dict = field(default_factory=dict)
    corpus: dict = field(default_factory=dict)
    charac: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)
    fields_section: dict = field(default_factory=dict)
    bench: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.output.get("seed", 0))

    @property
    def threads(self) -> int:
        return max(1, int(self.output.get("threads", 1)))

    @property
    def out_dir(self) -> Path:
        return Path(self.output.get("dir", "out"))

    def make_group(self) -> GroupSpec:
        kind = self.group.get("kind", "euclidean")
        if kind == "euclidean":
            spec = euclidean(int(self.group.get("n", 1)))
        elif kind == "heisenberg1":
            spec = heisenberg1()
        else:
            raise ConfigError(f"unknown group kind {kind!r}")
        if "c1" in self.group and "c0" in self.group:
            from dataclasses import replace

            return replace(
                spec,
                c1=float(self.group["c1"]),
                c0=float(self.group["c0"]),
                calibration_resolution=self.group.get("calibration_resolution"),
            )
        resolution = int(self.group.get("calibration_resolution", 0)) or (
            129 if spec.coord_dim >= 3 else 257
        )
        return calibrate_constants(spec, resolution=resolution, seed=self.seed)

    def make_grid(self, group: GroupSpec) -> GridSpec:
        try:
            lo = tuple(float(v) for v in self.grid["lo"])
            hi = tuple(float(v) for v in self.grid["hi"])
            points = tuple(int(v) for v in self.grid["points"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad [grid] section: {exc}") from exc
        ndim = len(points)
        limit = _MAX_POINTS.get(ndim)
        if limit is None:
            raise ConfigError(f"unsupported grid dimension {ndim}")
        if any(p > limit for p in points):
            raise ConfigError(
                f"resolution limit exceeded: {points} > {limit} per axis in {ndim}-d"
            )
        try:
            return GridSpec(group, lo, hi, points)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def make_young(self) -> list[YoungFunction]:
        entries = self.young or [{"kind": "power", "p": 2.0}]
        return [parse_young(e) for e in entries]

    def make_family(self, grid: GridSpec) -> BallFamily:
        fam = self.family
        try:
            return build_ball_family(
                grid,
                centers_stride=int(fam.get("centers_stride", 4)),
                r_min=float(fam["r_min"]) if "r_min" in fam else None,
                ratio=float(fam.get("ratio", math.sqrt(2.0))),
                count=int(fam["count"]) if "count" in fam else None,
                cover=bool(fam.get("cover", True)),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def make_corpus(self, grid: GridSpec) -> list[tuple[str, SampledField]]:
        tags = list(self.corpus.get("tags", ["indicator", "random-smooth"]))
        try:
            fields = make_corpus(grid, tags, seed=self.seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        for name, path in self.fields_section.items():
            try:
                fields.append((f"file:{name}", read_field_csv(path, grid)))
            except (OSError, CorruptFieldError) as exc:
                raise ConfigError(str(exc)) from exc
        return fields


@dataclass
class Prepared:
    config: RunConfig
    group: GroupSpec
    grid: GridSpec
    young: list[YoungFunction]
    family: BallFamily
    corpus: list[tuple[str, SampledField]]


def prepare(config: RunConfig) -> Prepared:
    """Build and validate every configured object before any output."""
    group = config.make_group()
    grid = config.make_grid(group)
    return Prepared(
        config,
        group,
        grid,
        config.make_young(),
        config.make_family(grid),
        config.make_corpus(grid),
    )


def load_config(path) -> RunConfig:
    try:
        raw = tomllib.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    known = {
        "group",
        "grid",
        "young",
        "family",
        "corpus",
        "charac",
        "verify",
        "fields",
        "bench",
        "output",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "group" not in raw or "grid" not in raw:
        raise ConfigError("config needs [group] and [grid] sections")
    return RunConfig(
        group=raw["group"],
        grid=raw["grid"],
        young=raw.get("young", []),
        family=raw.get("family", {}),
        corpus=raw.get("corpus", {}),
        charac=raw.get("charac", {}),
        verify=raw.get("verify", {}),
        fields_section=raw.get("fields", {}),
        bench=raw.get("bench", {}),
        output=raw.get("output", {}),
    )
