"""Scene files and report output.

A scene is a small TOML document::

    [scene]
    manifold = "disk2"
    field = "(1, 0)"
    mode = "T1"                     # optional default selector
    zero_hints = [[0.5, 0.0]]       # optional

    [options]
    epsilon = 0.05                  # (0, 0.1]
    tol = 1e-8                      # [1e-12, 1e-4]
    grid_spacing = 0.02
    seed = 0

Errors carry the line number of the offending key (or section).
"""

from __future__ import annotations

import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .charts import DEFAULT_SPACING, DEFAULT_TOL, ModelManifold, catalog, get_manifold
from .errors import BoundaryIndexError, SceneError
from .fieldlang import FieldDef, parse_field

SCENE_KEYS = {"manifold", "field", "mode", "zero_hints"}
OPTION_KEYS = {"epsilon", "tol", "grid_spacing", "seed"}


@dataclass(frozen=True)
class Scene:
    path: str
    manifold: ModelManifold
    field: FieldDef
    mode: Optional[str] = None
    epsilon: Optional[float] = None
    tol: float = DEFAULT_TOL
    grid_spacing: float = DEFAULT_SPACING
    seed: int = 0
    zero_hints: tuple = ()

    def options(self) -> dict:
        """Keyword options understood by the index and verify functions."""
        out = {"tol": self.tol, "h": self.grid_spacing, "hints": self.zero_hints, "seed": self.seed}
        if self.epsilon is not None:
            out["eps"] = self.epsilon
        return out

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "manifold": self.manifold.name,
            "field": self.field.source_text,
            "mode": self.mode,
            "options": {
                "epsilon": self.epsilon,
                "tol": self.tol,
                "grid_spacing": self.grid_spacing,
                "seed": self.seed,
            },
            "zero_hints": [list(h) for h in self.zero_hints],
        }


def _key_lines(text: str) -> dict:
    """Map ``section.key`` (and ``section``) to 1-based line numbers."""
    lines = {}
    section = ""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        m = re.match(r"^\[([A-Za-z0-9_]+)\]$", line)
        if m:
            section = m.group(1)
            lines.setdefault(section, i)
            continue
        m = re.match(r"^([A-Za-z0-9_]+)\s*=", line)
        if m:
            lines.setdefault(f"{section}.{m.group(1)}", i)
    return lines


def parse_scene(text: str, path: str = "<scene>") -> Scene:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SceneError(f"syntax error: {exc}", int(m.group(1)) if m else None, path) from None
    lines = _key_lines(text)

    def err(msg, key):
        return SceneError(msg, lines.get(key, lines.get(key.split(".")[0])), path)

    for sec in data:
        if sec not in ("scene", "options"):
            raise err(f"unknown section [{sec}]", sec)
    if "scene" not in data:
        raise SceneError("missing [scene] section", 1, path)
    sc = data["scene"]
    opts = data.get("options", {})
    for k in sc:
        if k not in SCENE_KEYS:
            raise err(f"unknown key '{k}' in [scene]", f"scene.{k}")
    for k in opts:
        if k not in OPTION_KEYS:
            raise err(f"unknown key '{k}' in [options]", f"options.{k}")

    if "manifold" not in sc:
        names = ", ".join(m.name for m in catalog())
        raise err(f"missing manifold name in [scene] (one of {names})", "scene")
    try:
        m = get_manifold(str(sc["manifold"]))
    except KeyError as exc:
        raise err(exc.args[0], "scene.manifold") from None
    if "field" not in sc:
        raise err("missing field in [scene]", "scene")
    try:
        f = parse_field(str(sc["field"]), m.dim)
    except BoundaryIndexError as exc:
        raise err(f"field: {exc}", "scene.field") from None

    eps = opts.get("epsilon")
    if eps is not None and not (isinstance(eps, (int, float)) and 0 < eps <= 0.1):
        raise err(f"epsilon must lie in (0, 0.1], got {eps!r}", "options.epsilon")
    tol = opts.get("tol", DEFAULT_TOL)
    if not (isinstance(tol, (int, float)) and 1e-12 <= tol <= 1e-4):
        raise err(f"tol must lie in [1e-12, 1e-4], got {tol!r}", "options.tol")
    h = opts.get("grid_spacing", DEFAULT_SPACING)
    if not (isinstance(h, (int, float)) and 0 < h <= 0.2):
        raise err(f"grid_spacing must lie in (0, 0.2], got {h!r}", "options.grid_spacing")
    seed = opts.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise err(f"seed must be an integer, got {seed!r}", "options.seed")

    hints = []
    for hp in sc.get("zero_hints", []):
        if not (isinstance(hp, list) and len(hp) == m.dim and all(isinstance(c, (int, float)) for c in hp)):
            raise err(f"zero_hints entries must be {m.dim}-element number lists", "scene.zero_hints")
        hints.append(tuple(float(c) for c in hp))
    mode = sc.get("mode")
    return Scene(path, m, f, None if mode is None else str(mode), eps, float(tol), float(h), seed, tuple(hints))


def load_scene(path) -> Scene:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc.strerror}", None, str(path)) from None
    return parse_scene(text, str(path))


def dumps_report(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory and a rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
