"""Tower description files.

A description is a JSON object ``{p, f0, steps: [{kind, params}], prec}``
with ``kind`` one of ``artin-schreier`` (params ``q``, ``alpha``),
``unramified`` (params ``d`` and optionally ``modulus``) or ``radical``
(params ``r``, ``beta``).  Coefficient expressions use the syntax of
:mod:`charp_nbg.expr` and may name the generators of earlier steps.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import DegenerateInput
from .extfield import ArtinSchreier, Radical, Tower, Unramified

SHIPPED = ("q2b1", "q2b3", "q3b1", "q3b2", "q4b1", "q4b3", "mixed", "tame2", "tame-nonp")


def shipped_path(name: str):
    return resources.files("charp_nbg") / "configs" / f"{name}.json"


def read_description(source) -> dict:
    """Load a description from a dict, a file path or a shipped name."""
    if isinstance(source, dict):
        return source
    path = Path(source)
    if path.is_file():
        text = path.read_text()
    else:
        name = path.name[:-5] if path.name.endswith(".json") else path.name
        if name not in SHIPPED:
            raise DegenerateInput(f"no tower file or shipped configuration named {source!r}")
        text = shipped_path(name).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DegenerateInput(f"malformed tower description: {exc}") from exc


def step_from_json(entry: dict):
    kind = entry.get("kind")
    params = dict(entry.get("params", {}))
    name = params.pop("name", None)
    try:
        if kind == "artin-schreier":
            return ArtinSchreier(params["alpha"], int(params["q"]), name)
        if kind == "unramified":
            modulus = params.get("modulus")
            return Unramified(int(params["d"]), tuple(modulus) if modulus else None, name)
        if kind == "radical":
            return Radical(int(params["r"]), params["beta"], name)
    except KeyError as exc:
        raise DegenerateInput(f"step {kind!r} is missing parameter {exc}") from exc
    raise DegenerateInput(f"unknown step kind {kind!r}")


def build_tower(description: dict) -> Tower:
    try:
        tower = Tower.over(int(description["p"]), int(description.get("f0", 1)),
                           description.get("modulus"))
    except KeyError as exc:
        raise DegenerateInput("tower description needs 'p'") from exc
    for entry in description.get("steps", []):
        tower = tower.extend(step_from_json(entry))
    return tower


def load_tower(source):
    """(tower, precision or None) from a description source."""
    desc = read_description(source)
    return build_tower(desc), desc.get("prec")


def tower_to_json(tower: Tower, prec=None) -> dict:
    out = tower.describe()
    for entry, step in zip(out["steps"], tower.steps):
        entry["params"]["name"] = step.name
    out["prec"] = prec
    return out
