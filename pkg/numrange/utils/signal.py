from threading import Lock


class Signal:
    """Named flags shared by the workers of one pool.

    ``set`` records the first value of a name as its initial value, and
    ``reset`` restores those. ``trip`` sets values only once per batch, so the
    first failing worker wins.

    Attributes:
        _signals (dict): current values.
        _init_status (dict): values restored by :meth:`reset`.
    """

    def __init__(self):
        self._signals = {}
        self._init_status = {}
        self._lock = Lock()

    def set(self, **signals):
        with self._lock:
            for name, value in signals.items():
                self._init_status.setdefault(name, value)
                self._signals[name] = value

    def trip(self, flag, **signals):
        """Set ``flag`` to True together with ``signals`` unless it is already set.

        Returns:
            bool: whether this call tripped the flag.
        """
        with self._lock:
            if self._signals.get(flag):
                return False
            self._signals[flag] = True
            self._signals.update(signals)
            return True

    def reset(self):
        with self._lock:
            self._signals = dict(self._init_status)

    def get(self, name):
        """Value of ``name``, None when unknown."""
        return self._signals.get(name)

    def names(self):
        return list(self._signals)
