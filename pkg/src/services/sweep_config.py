"""
Sweep config files: one "[experiment]" header per configuration followed by
key=value lines whose keys mirror ExperimentConfig fields. '#' and ';' start
comment lines. Unknown keys are rejected.
"""
from pathlib import Path

from errors import ConfigFileError, InvalidParameter
from services.montecarlo import ExperimentConfig

SECTION = "[experiment]"
REQUIRED_KEYS = ("algorithm", "n", "p")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(text):
    lowered = text.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_algorithm(text):
    return text.lower()


FIELD_PARSERS = {
    "algorithm": _parse_algorithm,
    "n": int,
    "p": float,
    "beta": float,
    "alpha": float,
    "replicates": int,
    "base_seed": int,
    "max_rounds": int,
    "strict_decoding": _parse_bool,
    "payload_check": _parse_bool,
}


def _build(fields, header_line):
    missing = [k for k in REQUIRED_KEYS if k not in fields]
    if missing:
        raise ConfigFileError(f"experiment is missing required keys: {', '.join(missing)}", header_line)
    try:
        return ExperimentConfig(**fields)
    except (InvalidParameter, ValueError) as e:
        raise ConfigFileError(str(e), header_line)


def parse_sweep_config(text: str) -> list[ExperimentConfig]:
    configs = []
    fields = None
    header_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("["):
            if line.lower() != SECTION:
                raise ConfigFileError(f"unknown section {line!r}", lineno)
            if fields is not None:
                configs.append(_build(fields, header_line))
            fields, header_line = {}, lineno
            continue
        if fields is None:
            raise ConfigFileError("key=value line before the first [experiment] header", lineno)
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigFileError(f"expected key=value, got {line!r}", lineno)
        if key not in FIELD_PARSERS:
            raise ConfigFileError(f"unknown key {key!r}", lineno)
        if key in fields:
            raise ConfigFileError(f"duplicate key {key!r}", lineno)
        try:
            fields[key] = FIELD_PARSERS[key](value)
        except ValueError as e:
            raise ConfigFileError(f"bad value for {key}: {e}", lineno)
    if fields is not None:
        configs.append(_build(fields, header_line))
    if not configs:
        raise ConfigFileError("no experiments defined")
    return configs


def load_sweep_config(path) -> list[ExperimentConfig]:
    return parse_sweep_config(Path(path).read_text(encoding="utf-8"))
