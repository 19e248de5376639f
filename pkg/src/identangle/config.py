"""JSON configuration for ensembles and parameter sweeps.

Ensemble configs list one particle per entry with a spin and detector
angles.  On load the particles are reordered spin-up first (the ordering
the detection machinery expects) and the applied permutation is kept so
callers can report results against the original ordering.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, replace
from typing import Iterator, List, Tuple

from .detection import ParticleEnsemble
from .errors import ConfigError
from .states import SpatialMode, Spin, Statistics

MAX_GRID_POINTS = 10 ** 6

_PATH_RE = re.compile(r"^particles\[(\d+)\]\.(theta|omega|phi|gamma)$")


@dataclass(frozen=True)
class ParticleConfig:
    spin: Spin
    theta: float
    omega: float = 0.0
    phi: float = math.pi / 2
    gamma: float = 0.0


@dataclass(frozen=True)
class EnsembleConfig:
    """Parsed ensemble: particles sorted spin-up first.

    ``source_order`` maps the stored position to the index the particle had
    in the input file, so outputs can reference the original ordering.
    """

    particles: Tuple[ParticleConfig, ...]
    statistics: Statistics = Statistics.BOSON
    source_order: Tuple[int, ...] = ()

    @property
    def n_up(self) -> int:
        return sum(1 for p in self.particles if p.spin is Spin.UP)

    @property
    def n_total(self) -> int:
        return len(self.particles)

    def ensemble(self) -> ParticleEnsemble:
        modes = tuple(
            SpatialMode(theta=p.theta, omega=p.omega, phi=p.phi, gamma=p.gamma)
            for p in self.particles
        )
        return ParticleEnsemble(self.n_up, modes)

    def with_value(self, path: str, value: float) -> "EnsembleConfig":
        """Copy of the config with one angle replaced (sweep support)."""
        index, attr = parse_parameter_path(path, self.n_total)
        particles = list(self.particles)
        particles[index] = replace(particles[index], **{attr: value})
        return replace(self, particles=tuple(particles))


def parse_parameter_path(path: str, n_particles: int) -> Tuple[int, str]:
    m = _PATH_RE.match(path)
    if not m:
        raise ConfigError(
            f"bad parameter path {path!r}; expected particles[i].theta|omega|phi|gamma"
        )
    index = int(m.group(1))
    if index >= n_particles:
        raise ConfigError(
            f"parameter path {path!r} indexes particle {index}, "
            f"but the config holds {n_particles}"
        )
    return index, m.group(2)


def _angle(entry: dict, key: str, default: float, scale: float, where: str) -> float:
    value = entry.get(key, None)
    if value is None:
        return default
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{where}: field {key!r} must be a number, got {value!r}")
    return float(value) * scale


def parse_ensemble_config(text: str) -> EnsembleConfig:
    """Parse an ensemble config from JSON text.

    Schema: {"particles": [{"spin": "up"|"down", "theta": x, "omega": y,
    "phi": z, "gamma": g}, ...], "statistics": "boson"|"fermion",
    "degrees": bool}.  omega, phi and gamma are optional; angles are
    radians unless "degrees" is true.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    raw_particles = data.get("particles")
    if not isinstance(raw_particles, list) or not raw_particles:
        raise ConfigError("config must hold a non-empty 'particles' list")
    scale = math.pi / 180.0 if data.get("degrees", False) else 1.0
    stat_name = data.get("statistics", "boson")
    try:
        statistics = Statistics(stat_name)
    except ValueError:
        raise ConfigError(
            f"statistics must be 'boson' or 'fermion', got {stat_name!r}"
        ) from None

    particles: List[ParticleConfig] = []
    for i, entry in enumerate(raw_particles):
        where = f"particles[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where}: each particle must be an object")
        spin_name = entry.get("spin")
        if spin_name not in ("up", "down"):
            raise ConfigError(f"{where}: field 'spin' must be 'up' or 'down'")
        if "theta" not in entry:
            raise ConfigError(f"{where}: field 'theta' is required")
        theta = _angle(entry, "theta", 0.0, scale, where)
        omega = _angle(entry, "omega", 0.0, scale, where)
        phi = _angle(entry, "phi", math.pi / 2, scale, where)
        gamma = _angle(entry, "gamma", 0.0, scale, where)
        if not 0.0 <= theta <= math.pi / 2:
            raise ConfigError(f"{where}: theta must lie in [0, pi/2], got {theta}")
        if not 0.0 <= phi <= math.pi / 2:
            raise ConfigError(f"{where}: phi must lie in [0, pi/2], got {phi}")
        particles.append(
            ParticleConfig(Spin(spin_name), theta, omega, phi, gamma)
        )

    # stable sort: ups first, original order retained inside each group
    order = sorted(
        range(len(particles)), key=lambda i: particles[i].spin.index
    )
    return EnsembleConfig(
        particles=tuple(particles[i] for i in order),
        statistics=statistics,
        source_order=tuple(order),
    )


def dump_ensemble_config(config: EnsembleConfig) -> str:
    """Serialize a parsed config back to JSON (radians, stored order)."""
    payload = {
        "statistics": config.statistics.value,
        "particles": [
            {
                "spin": p.spin.value,
                "theta": p.theta,
                "omega": p.omega,
                "phi": p.phi,
                "gamma": p.gamma,
            }
            for p in config.particles
        ],
    }
    return json.dumps(payload, indent=2)


@dataclass(frozen=True)
class SweepAxis:
    path: str
    values: Tuple[float, ...]


@dataclass(frozen=True)
class SweepSpec:
    axes: Tuple[SweepAxis, ...]

    @property
    def size(self) -> int:
        size = 1
        for axis in self.axes:
            size *= len(axis.values)
        return size

    def grid(self) -> Iterator[Tuple[float, ...]]:
        """Grid points in lexicographic order of the axis value lists."""
        return itertools.product(*(axis.values for axis in self.axes))


def parse_sweep_spec(text: str, config: EnsembleConfig) -> SweepSpec:
    """Parse a sweep spec from JSON text.

    Schema: {"axes": [{"path": "particles[0].theta", "start": a, "stop": b,
    "steps": k} | {"path": ..., "values": [...]}]}.  Multiple axes form the
    cross product, capped at 10^6 points.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid sweep JSON: {exc.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("axes"), list):
        raise ConfigError("sweep spec must be an object with an 'axes' list")
    if not data["axes"]:
        raise ConfigError("sweep spec needs at least one axis")
    axes: List[SweepAxis] = []
    for i, entry in enumerate(data["axes"]):
        if not isinstance(entry, dict) or "path" not in entry:
            raise ConfigError(f"axes[{i}]: each axis needs a 'path'")
        path = entry["path"]
        parse_parameter_path(path, config.n_total)
        if "values" in entry:
            values = entry["values"]
            if not isinstance(values, list) or not values:
                raise ConfigError(f"axes[{i}]: 'values' must be a non-empty list")
            points = tuple(float(v) for v in values)
        else:
            missing = [k for k in ("start", "stop", "steps") if k not in entry]
            if missing:
                raise ConfigError(
                    f"axes[{i}]: needs 'values' or 'start'/'stop'/'steps' "
                    f"(missing {missing})"
                )
            steps = entry["steps"]
            if not isinstance(steps, int) or steps < 1:
                raise ConfigError(f"axes[{i}]: 'steps' must be an integer >= 1")
            start, stop = float(entry["start"]), float(entry["stop"])
            if steps == 1:
                points = (start,)
            else:
                h = (stop - start) / (steps - 1)
                points = tuple(start + k * h for k in range(steps))
        axes.append(SweepAxis(path, points))
    spec = SweepSpec(tuple(axes))
    if spec.size > MAX_GRID_POINTS:
        raise ConfigError(
            f"sweep grid holds {spec.size} points, above the cap of {MAX_GRID_POINTS}"
        )
    return spec
