"""
Run manifests recording the configuration, version and tolerances.
"""

import hashlib
from collections.abc import Mapping
from typing import TextIO

import tomlkit
from typing_extensions import override

from .. import __version__
from ..config import RunConfig, serialize_config
from .base import Writer

Manifest = Mapping[str, object]


def config_hash(config: RunConfig) -> str:
    """
    Compute the SHA-256 digest of the serialized configuration.
    """

    text = serialize_config(config)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_manifest(
    config: RunConfig, results: Mapping[str, object] | None = None
) -> dict[str, object]:
    """
    Collect the dotted keys of a run manifest: the configuration hash, the
    package version, the run mode, all tolerances and additional results.
    """

    manifest: dict[str, object] = {
        "run.mode": config.run.mode,
        "run.config_hash": config_hash(config),
        "run.version": __version__,
    }
    for key, value in config.tolerance.model_dump().items():
        manifest[f"tolerance.{key}"] = value
    if results:
        manifest.update(
            (f"result.{key}", value) for key, value in results.items()
        )
    return manifest


class ManifestWriter(Writer[Manifest]):
    """
    Run manifest file writer with one dotted key per line.
    """

    @override
    def serialize(self, file: TextIO) -> None:
        for key, value in self._model.items():
            _ = file.write(f"{key} = {tomlkit.item(value).as_string()}\n")
