import os
import os.path as osp
import tempfile

from .base import BaseStorage


class FileSystem(BaseStorage):
    """Use filesystem as storage backend.

    The id is a path relative to ``root_dir``. Writes go to a temporary file in
    the target folder which then replaces the destination, so readers never see
    a partial artifact.
    """

    def __init__(self, root_dir):
        self.root_dir = root_dir

    def path(self, id):
        return osp.join(self.root_dir, id)

    def write(self, id, data):
        filepath = self.path(id)
        folder = osp.dirname(filepath) or "."
        os.makedirs(folder, exist_ok=True)
        mode = "w" if isinstance(data, str) else "wb"
        encoding = "utf-8" if mode == "w" else None
        fd, tmp = tempfile.mkstemp(prefix=f".{osp.basename(filepath)}.", suffix=".tmp", dir=folder)
        try:
            with os.fdopen(fd, mode, encoding=encoding, newline="" if mode == "w" else None) as fout:
                fout.write(data)
            os.chmod(tmp, 0o644)
            os.replace(tmp, filepath)
        except BaseException:
            if osp.exists(tmp):
                os.remove(tmp)
            raise
        return filepath

    def read(self, id):
        with open(self.path(id), encoding="utf-8") as fin:
            return fin.read()

    def exists(self, id):
        return osp.exists(self.path(id))
