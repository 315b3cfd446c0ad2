from abc import ABCMeta, abstractmethod


class BaseStorage(metaclass=ABCMeta):
    """Base class of artifact storage"""

    @abstractmethod
    def write(self, id, data):
        """Abstract interface of writing an artifact

        Args:
            id (str): unique id of the artifact in the storage, e.g. ``"cloud.json"``.
            data (bytes or str): content to be stored.
        """
        return

    @abstractmethod
    def read(self, id):
        """Abstract interface of reading an artifact back

        Args:
            id (str): unique id of the artifact in the storage.

        Returns:
            str: the stored text.
        """
        return ""

    @abstractmethod
    def exists(self, id):
        """Check the existence of some artifact

        Args:
            id (str): unique id of the artifact in the storage

        Returns:
            bool: whether the artifact exists
        """
        return False
