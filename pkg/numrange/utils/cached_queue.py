from collections import OrderedDict
from queue import Queue

import numpy as np


def hashable(key):
    """Turn a task key into something usable as a dict key.

    >>> hashable([1, (2, 3)])
    (1, (2, 3))
    """
    if isinstance(key, np.ndarray):
        return (key.dtype.str, key.shape, key.tobytes())
    if isinstance(key, dict):
        return tuple(sorted((k, hashable(v)) for k, v in key.items()))
    if isinstance(key, (list, tuple)):
        return tuple(hashable(v) for v in key)
    return key


class CachedQueue(Queue):
    """Queue that silently drops items whose key it has already seen.

    The :class:`ThreadPool` feeds its workers from one of these, so a task
    submitted twice in a batch is processed once.

    Attributes:
        cache_capacity (int): keys remembered, 0 for unlimited.
        key (callable or None): maps an item to its duplicate-check key.
    """

    def __init__(self, maxsize=0, cache_capacity=0, key=None):
        super().__init__(maxsize)
        self.cache_capacity = cache_capacity
        self.key = key
        self._cache = OrderedDict()

    def is_duplicated(self, item):
        """Record the key of ``item``; True if it was already recorded.

        The oldest key is forgotten once ``cache_capacity`` is reached.
        """
        key = hashable(self.key(item) if self.key is not None else item)
        if key in self._cache:
            return True
        if 0 < self.cache_capacity <= len(self._cache):
            self._cache.popitem(last=False)
        self._cache[key] = None
        return False

    def put(self, item, block=True, timeout=None, dup_callback=None):
        if not self.is_duplicated(item):
            super().put(item, block, timeout)
        elif dup_callback is not None:
            dup_callback(item)

    def put_nowait(self, item, dup_callback=None):
        self.put(item, block=False, dup_callback=dup_callback)
