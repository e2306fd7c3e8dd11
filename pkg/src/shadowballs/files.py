"""JSON documents: domains, shadow configurations and certificates.

Configuration::

    {"dim": 2|3, "point": [...], "mode": "open"|"closed",
     "balls": [{"center": [...], "radius": r}, ...]}

Certificate::

    {"covered": bool, "margin": m, "checks": {"outside_point": bool,
     "pairwise_disjoint": bool, "centers_on_boundary": bool|null},
     "witness": [...]|null, "samples_used": n}

Floats are written with ``repr``, the shortest string that reads back to the
same double, so files round-trip losslessly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .constructions import ShadowConfig
from .domains.shapes import Domain, domain_from_dict
from .domains.theorems import Certificate
from .geom import Ball


class FormatError(ValueError):
    pass


def config_to_dict(cfg: ShadowConfig) -> dict:
    return {
        "dim": cfg.dim,
        "point": [float(c) for c in cfg.x0],
        "mode": cfg.mode,
        "balls": [
            {"center": [float(c) for c in b.center], "radius": float(b.radius)} for b in cfg.balls
        ],
    }


def config_from_dict(doc: dict) -> ShadowConfig:
    try:
        dim = int(doc["dim"])
        point = [float(c) for c in doc["point"]]
        mode = doc.get("mode", "closed")
        balls = [Ball(b["center"], b["radius"], mode) for b in doc["balls"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed configuration: {exc}") from None
    if len(point) != dim or any(b.dim != dim for b in balls):
        raise FormatError("configuration coordinates do not match its dim")
    return ShadowConfig(point, tuple(balls))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{path} must hold a JSON object")
    return doc


def read_config(path) -> ShadowConfig:
    return config_from_dict(_load(path))


def write_config(path, cfg: ShadowConfig) -> None:
    Path(path).write_text(dumps(config_to_dict(cfg)), encoding="utf-8")


def read_domain(path) -> Domain:
    return domain_from_dict(_load(path))


def write_domain(path, d: Domain) -> None:
    Path(path).write_text(dumps(d.to_dict()), encoding="utf-8")


def write_certificate(path, cert: Certificate) -> None:
    Path(path).write_text(dumps(cert.to_dict()), encoding="utf-8")


def read_certificate(path) -> dict:
    return _load(path)
