"""Flat INI run configuration for the simulation commands.

Example::

    [lattice]
    N = 2048
    L = 409.6

    [packet]
    k0 = 0.75
    sigma_x = 10
    content = positive

    [engine]
    t_final = 40
    n_records = 257

    [output]
    csv = run.csv
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dirac import DiracAlgebra, Lattice, PacketSpec, gaussian_packet

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]

_SCHEMA = {
    "lattice": {"N": int, "L": float},
    "packet": {
        "x0": float,
        "k0": float,
        "sigma_x": float,
        "content": str,
        "w_plus": float,
        "w_minus": float,
        "spinor": str,
    },
    "engine": {"mc2": float, "t_final": float, "n_records": int, "tau0": float},
    "output": {"csv": str, "precision": int, "frequency": bool},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    N: int = 2048
    L: float = 409.6
    packet: PacketSpec = field(default_factory=lambda: PacketSpec(k0=0.75, sigma_x=10.0))
    mc2: float = 1.0
    t_final: float = 40.0
    n_records: int = 257
    tau0: float | None = None
    csv: str | None = None
    precision: int = 12
    frequency: bool = False

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.N, self.L)

    @property
    def algebra(self) -> DiracAlgebra:
        return DiracAlgebra(self.mc2)

    @property
    def tau0_value(self) -> float:
        return 1.0 / self.mc2 if self.tau0 is None else self.tau0

    def validate(self) -> RunConfig:
        """Check every downstream precondition; raises :class:`ConfigError`."""
        try:
            lattice = self.lattice
            algebra = self.algebra
            if not self.t_final > 0:
                raise ValueError("t_final must be positive")
            if self.n_records < 2:
                raise ValueError("n_records must be ≥ 2")
            if self.tau0_value < 0:
                raise ValueError("tau0 must be ≥ 0")
            if not 1 <= self.precision <= 17:
                raise ValueError("precision must be within 1..17")
            gaussian_packet(lattice, self.packet, algebra)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def _parse_spinor(text: str) -> tuple[complex, complex]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError("spinor needs two comma-separated complex components")
    try:
        return complex(parts[0].replace(" ", "")), complex(parts[1].replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad spinor component: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(
        interpolation=None, default_section="__none__", inline_comment_prefixes=(";", "#")
    )
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(" ".join(str(exc).split())) from exc

    values: dict[str, object] = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            kind = _SCHEMA[section].get(key)
            if kind is None:
                raise ConfigError(f"unknown key {section}.{key}")
            try:
                if kind is bool:
                    value = cp.getboolean(section, key)
                elif kind is int:
                    value = int(raw)
                else:
                    value = kind(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc
            values[key] = value

    packet_keys = _SCHEMA["packet"].keys()
    packet_args = {k: values.pop(k) for k in list(values) if k in packet_keys}
    if "spinor" in packet_args:
        packet_args["spinor"] = _parse_spinor(packet_args["spinor"])
    defaults = RunConfig().packet
    try:
        packet = replace(defaults, **packet_args)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(packet=packet, **values).validate()


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)
