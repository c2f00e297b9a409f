"""Access to bundled data files and pkg: path tokens."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

__all__ = ["data_path", "resolve_path"]

PKG_PREFIX = "pkg:"


def data_path(*parts: str) -> Path:
    """Path to a file bundled under the package data directory."""
    return Path(str(resources.files("mentorminer").joinpath("data", *parts)))


def resolve_path(token: str) -> Path:
    """Resolve a config path token; ``pkg:NAME`` points at bundled data."""
    if token.startswith(PKG_PREFIX):
        return data_path(token[len(PKG_PREFIX):])
    return Path(token)
