"""
Run configuration file reader and writer.
"""

from typing import TextIO

from typing_extensions import override

from ..config import RunConfig, parse_config, serialize_config
from .base import Reader, Writer


class ConfigReader(Reader[RunConfig]):
    """
    Run configuration file reader.
    """

    @override
    def parse(self, file: TextIO) -> RunConfig:
        return parse_config(file.read())


class ConfigWriter(Writer[RunConfig]):
    """
    Run configuration file writer with one dotted key per line.
    """

    @override
    def serialize(self, file: TextIO) -> None:
        _ = file.write(serialize_config(self._model))
