"""File formats: configuration, spectrum and identification-result JSON."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import FasteningConfig
from .errors import ConfigError


def sig15(v: float) -> float:
    """Round to 15 significant digits (round-trips through JSON unchanged)."""
    return float(f"{float(v):.15g}")


def load_config(path: str | Path) -> FasteningConfig:
    data = _read_json(path)
    if not isinstance(data, dict) or "a" not in data:
        raise ConfigError(f"{path}: expected a JSON object with key 'a'")
    a = data["a"]
    if not isinstance(a, list) or len(a) != 8:
        raise ConfigError(f"{path}: 'a' must be a list of 8 numbers a1..a8")
    try:
        coeffs = [float(v) for v in a]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: non-numeric coefficient ({exc})") from None
    return FasteningConfig.from_coefficients(coeffs)


def config_payload(config: FasteningConfig) -> dict:
    return {"a": [sig15(v) for v in config.coefficients]}


def load_spectrum(path: str | Path) -> list[float]:
    """Read ``{"s": [...]}`` JSON or plain text with one value per line."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = _parse_json(text, path)
        if not isinstance(data, dict) or not isinstance(data.get("s"), list):
            raise ConfigError(f"{path}: expected a JSON object with list 's'")
        items = data["s"]
    else:
        items = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        items = [ln for ln in items if ln]
    try:
        return [float(v) for v in items]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: non-numeric eigenvalue ({exc})") from None


def spectrum_payload(values, residuals=None) -> dict:
    out: dict[str, Any] = {"s": [sig15(v) for v in values]}
    if residuals is not None:
        out["residuals"] = [sig15(r) for r in residuals]
    return out


def result_payload(result) -> dict:
    """JSON form of an :class:`~rod_hearing.inverse.IdentificationResult`."""
    return {
        "rank": int(result.rank),
        "gap": sig15(result.gap),
        "x": [sig15(v) for v in result.xvector.values],
        "primary": {
            **config_payload(result.primary_config),
            "labels": [str(lbl) for lbl in result.labels],
        },
        "dual": {
            **config_payload(result.dual_config),
            "labels": [str(lbl) for lbl in result.dual_labels],
        },
        "fit_residual": sig15(result.fit_residual),
        "x_distance": sig15(result.x_distance),
        "singular_values": [sig15(v) for v in result.singular_values],
        "alternatives": [config_payload(c) for c in result.alternatives],
    }


def write_json(path: str | Path, payload: Any) -> None:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return _parse_json(text, path)


def _parse_json(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
