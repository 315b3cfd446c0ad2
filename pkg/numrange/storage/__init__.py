from .base import BaseStorage
from .filesystem import FileSystem

__all__ = ["BaseStorage", "FileSystem"]
