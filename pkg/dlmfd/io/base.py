"""
Abstract base classes for file reading and writing.
"""

import logging
from abc import ABCMeta, abstractmethod
from pathlib import Path
from typing import Generic, TextIO, TYPE_CHECKING, TypeVar

if TYPE_CHECKING:
    from _typeshed import OpenTextModeReading, OpenTextModeWriting
else:
    OpenTextModeReading = str
    OpenTextModeWriting = str

LOGGER = logging.getLogger(__name__)

# Object being read/written
T = TypeVar("T")


class Reader(Generic[T], metaclass=ABCMeta):
    """
    File reader.
    """

    _mode: OpenTextModeReading = "r"
    _encoding: str = "utf-8"

    def __init__(self, path: Path) -> None:
        self._path: Path = path

    @property
    def path(self) -> Path:
        """
        Retrieve the path from which to read the object.
        """

        return self._path

    def read(self) -> T:
        """
        Read the file from the path and parse the object from it.
        """

        with self._path.open(self._mode, encoding=self._encoding) as file:
            return self.parse(file)

    @abstractmethod
    def parse(self, file: TextIO) -> T:
        """
        Parse an open file and return the object from it.

        This method raises `ValueError` or subclasses if the file contents are
        malformed or have inconsistent or out-of-range values.
        """

        raise NotImplementedError("Must be implemented by subclasses")


class Writer(Generic[T], metaclass=ABCMeta):
    """
    File writer.
    """

    _mode: OpenTextModeWriting = "w"
    _encoding: str = "utf-8"
    _newline: str | None = None

    def __init__(self, path: Path, model: T) -> None:
        self._path: Path = path
        self._model: T = model

    @property
    def path(self) -> Path:
        """
        Retrieve the path to which to write the object.
        """

        return self._path

    def write(self) -> None:
        """
        Write the object to the path, creating parent directories as needed.
        """

        self._path.parent.mkdir(parents=True, exist_ok=True)
        with self._path.open(
            self._mode, encoding=self._encoding, newline=self._newline
        ) as file:
            self.serialize(file)
        LOGGER.debug("Wrote %s", self._path)

    @abstractmethod
    def serialize(self, file: TextIO) -> None:
        """
        Write a serialized variant of the object to the open file.
        """

        raise NotImplementedError("Must be implemented by subclasses")
