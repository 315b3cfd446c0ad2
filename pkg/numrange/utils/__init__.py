from .cached_queue import CachedQueue
from .signal import Signal
from .thread_pool import ThreadPool, Worker

__all__ = ["CachedQueue", "Signal", "ThreadPool", "Worker"]
