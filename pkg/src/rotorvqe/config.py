"""Plain-text experiment configuration.

Files hold one `key = value` pair per line, with `#` comments and blank
lines ignored.  The same grammar is reused verbatim for command-line
overrides, so `--set shots=5000` and a config line `shots = 5000` are
interchangeable.  Parse problems raise :class:`ConfigError` with the
offending line; semantic problems (say, a diffusion tuple of the wrong
length) surface later as ``ValueError`` when the run config is built.
"""

from __future__ import annotations

from .driver import CALIBRATED, FIXED, NELDER_MEAD, SPSA, VqeConfig
from .potential import BISTABLE, MONOSTABLE, ChainSpec, DihedralSpec
from .qsim import EXACT, FULL, LINEAR, NOISY, SAMPLED, NoiseSpec, symmetric_confusion


class ConfigError(Exception):
    """A config line or override that cannot be parsed."""


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None


def _parse_floats(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_parse_float(p) for p in parts)


def _parse_ints(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of integers")
    return tuple(_parse_int(p) for p in parts)


def _parse_dihedrals(text: str) -> tuple:
    """`bistable:0.5,monostable:1.0` -> a DihedralSpec per entry."""
    specs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        kind, sep, barrier = part.partition(":")
        if not sep:
            raise ValueError(f"dihedral {part!r} needs the form kind:barrier")
        kind = kind.strip().lower()
        if kind not in (BISTABLE, MONOSTABLE):
            raise ValueError(f"unknown dihedral kind {kind!r}")
        specs.append(DihedralSpec(kind, _parse_float(barrier)))
    if not specs:
        raise ValueError("expected at least one dihedral")
    return tuple(specs)


def _parse_ladder(text: str) -> tuple:
    """`4,2;4,4;8,4` -> one kept-count tuple per rung."""
    rungs = [r for r in text.split(";") if r.strip()]
    if not rungs:
        raise ValueError("expected semicolon-separated rungs")
    return tuple(_parse_ints(r) for r in rungs)


def _choice(options):
    def parse(text: str) -> str:
        lowered = text.strip().lower()
        if lowered not in options:
            raise ValueError(f"expected one of {', '.join(options)}; got {text!r}")
        return lowered

    return parse


_PARSERS = {
    "dihedrals": _parse_dihedrals,
    "diffusion": _parse_floats,
    "kept": _parse_ints,
    "ladder": _parse_ladder,
    "harmonics": _parse_int,
    "depth": _parse_int,
    "entangler": _choice((LINEAR, FULL)),
    "mode": _choice((EXACT, SAMPLED, NOISY)),
    "shots": _parse_int,
    "grouping": _parse_bool,
    "mitigate": _parse_bool,
    "p1": _parse_float,
    "p2": _parse_float,
    "readout_flip": _parse_float,
    "optimizer": _choice((SPSA, NELDER_MEAD)),
    "gain_policy": _choice((FIXED, CALIBRATED)),
    "iterations": _parse_int,
    "restarts": _parse_int,
    "seed": _parse_int,
    "workers": _parse_int,
    "barriers": _parse_floats,
    "repetitions": _parse_int,
}

DEFAULT_SETTINGS = {
    "dihedrals": (DihedralSpec(BISTABLE, 0.5), DihedralSpec(MONOSTABLE, 1.0)),
    "diffusion": (1.0, 1.0, 1.0),
    "kept": (4, 2),
    "ladder": None,
    "harmonics": 16,
    "depth": 1,
    "entangler": LINEAR,
    "mode": EXACT,
    "shots": 20000,
    "grouping": True,
    "mitigate": True,
    "p1": 2e-4,
    "p2": 7e-3,
    "readout_flip": 0.02,
    "optimizer": SPSA,
    "gain_policy": CALIBRATED,
    "iterations": 600,
    "restarts": 60,
    "seed": 2021,
    "workers": 1,
    "barriers": (0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    "repetitions": 200,
}


def parse_assignment(text: str, where: str) -> tuple:
    """Parse one `key=value` pair; `where` labels error messages."""
    key, sep, value = text.partition("=")
    if not sep:
        raise ConfigError(f"{where}: expected key=value, got {text.strip()!r}")
    key = key.strip().lower()
    if key not in _PARSERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        return key, _PARSERS[key](value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {key}: {exc}") from None


def parse_config(text: str) -> dict:
    """Parse a whole config file body into a settings dict."""
    settings = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = parse_assignment(line, f"line {number}")
        settings[key] = value
    return settings


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_config(handle.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


def apply_overrides(settings: dict, pairs) -> dict:
    merged = dict(settings)
    for pair in pairs or ():
        key, value = parse_assignment(pair, f"override {pair.strip()!r}")
        merged[key] = value
    return merged


def resolve_settings(config_path=None, overrides=None) -> dict:
    """Defaults, then the config file, then command-line overrides."""
    settings = dict(DEFAULT_SETTINGS)
    if config_path is not None:
        settings.update(load_config(config_path))
    return apply_overrides(settings, overrides)


def build_vqe_config(settings: dict) -> VqeConfig:
    """Materialize a run config; semantic mistakes raise ValueError here."""
    chain = ChainSpec(
        dihedrals=tuple(settings["dihedrals"]),
        diffusion=tuple(settings["diffusion"]),
    )
    noise = NoiseSpec(
        p1=settings["p1"],
        p2=settings["p2"],
        readout=symmetric_confusion(settings["readout_flip"]),
    )
    return VqeConfig(
        chain=chain,
        kept_counts=settings["kept"],
        ladder=settings["ladder"],
        harmonics=settings["harmonics"],
        depth=settings["depth"],
        entangler=settings["entangler"],
        mode=settings["mode"],
        shots=settings["shots"],
        noise=noise,
        mitigate=settings["mitigate"],
        grouping=settings["grouping"],
        optimizer=settings["optimizer"],
        iterations=settings["iterations"],
        gain_policy=settings["gain_policy"],
        restarts=settings["restarts"],
        seed=settings["seed"],
        workers=settings["workers"],
    )
