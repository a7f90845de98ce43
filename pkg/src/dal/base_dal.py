import logging
import os
import tempfile
from pathlib import Path
from typing import Generic, Optional, TypeVar, Union

T = TypeVar('T')

PathLike = Union[str, Path]

logger = logging.getLogger(__name__)


class BaseDAL(Generic[T]):
    """File-backed access to one kind of document."""

    encoding = "utf-8"

    def __init__(self, base_dir: Optional[PathLike] = None):
        self.base_dir = Path(base_dir) if base_dir is not None else None

    def resolve(self, path: PathLike) -> Path:
        """Resolve a path against the base directory."""
        path = Path(path)
        if self.base_dir is not None and not path.is_absolute():
            return self.base_dir / path
        return path

    def read_text(self, path: PathLike) -> str:
        """Read a UTF-8 document."""
        with open(self.resolve(path), encoding=self.encoding, newline="") as handle:
            return handle.read()

    def write_text(self, path: PathLike, text: str) -> Path:
        """Write a document atomically (temp file in the same directory, then rename)."""
        target = self.resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
        try:
            with os.fdopen(fd, "w", encoding=self.encoding, newline="\n") as handle:
                handle.write(text)
            os.replace(temp_name, target)
        except BaseException:
            if os.path.exists(temp_name):
                os.unlink(temp_name)
            raise
        logger.debug("wrote %s (%d chars)", target, len(text))
        return target

    def delete(self, path: PathLike) -> bool:
        """Delete a document if present."""
        target = self.resolve(path)
        if target.exists():
            target.unlink()
            return True
        return False
