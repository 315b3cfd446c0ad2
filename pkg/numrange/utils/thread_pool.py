import logging
import queue
from threading import Thread, current_thread

from .cached_queue import CachedQueue
from .signal import Signal


class Worker(Thread):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.daemon = True


class ThreadPool:
    """Simple implementation of a thread pool

    This is the base class of the batch runners (:class:`CloudSampler`,
    :class:`RestartRunner`, :class:`ConeTester`). It incorporates two FIFO
    queues and a number of "workers", namely threads. Every task is put into
    ``in_queue`` together with its submission index; each worker takes tasks
    from the queue, calls :meth:`process` and puts ``(index, result)`` into
    ``out_queue``. :meth:`map` reduces the results in index order, so the
    outcome never depends on thread scheduling.

    Note:
        Tasks whose :meth:`task_key` was already seen in the current batch are
        dropped by the :class:`CachedQueue`.

    Attributes:
        name (str): thread pool name.
        thread_num (int): number of available threads.
        in_queue (CachedQueue): input queue of ``(index, task)`` items.
        out_queue (Queue): output queue of ``(index, result)`` items.
        workers (list): a list of working threads.
        signal (Signal): failure flag and first error shared by the workers.
        logger (Logger): standard python logger.
    """

    def __init__(self, thread_num=1, name=None):
        self.thread_num = max(1, int(thread_num))
        self.name = name if name else __name__
        self.in_queue = self._new_in_queue()
        self.out_queue = queue.Queue()
        self.workers = []
        self.signal = Signal()
        self.signal.set(failed=False, error=None)
        self.logger = logging.getLogger(self.name)

    def _new_in_queue(self):
        return CachedQueue(key=lambda item: self.task_key(*item))

    def task_key(self, idx, task):
        """Key used to drop duplicate tasks; the default keeps every task."""
        return idx

    def process(self, task, **kwargs):
        raise NotImplementedError

    def init_workers(self, *args, **kwargs):
        self.workers = []
        for i in range(self.thread_num):
            worker = Worker(target=self.worker_exec, name=f"{self.name}-{i + 1:03d}", args=args, kwargs=kwargs)
            self.workers.append(worker)

    def start(self, *args, **kwargs):
        self.init_workers(*args, **kwargs)
        for worker in self.workers:
            self.logger.debug("thread %s started", worker.name)
            worker.start()

    def input(self, task, block=True, timeout=None):
        self.in_queue.put(task, block, timeout)

    def output(self, task, block=True, timeout=None):
        self.out_queue.put(task, block, timeout)

    def worker_exec(self, **kwargs):
        """Target function of workers.

        A worker exits when the input queue is drained or another worker failed.
        """
        while not self.signal.get("failed"):
            try:
                idx, task = self.in_queue.get_nowait()
            except queue.Empty:
                break
            try:
                result = self.process(task, **kwargs)
            except Exception as e:
                self.logger.error("exception in thread %s on task #%d: %s", current_thread().name, idx, e)
                self.signal.trip("failed", error=e)
            else:
                self.output((idx, result))
            finally:
                self.in_queue.task_done()
        self.logger.debug("thread %s exit", current_thread().name)

    def map(self, tasks, **kwargs):
        """Process ``tasks`` and return the results in submission order.

        Args:
            tasks (iterable): task payloads passed one by one to :meth:`process`.
            **kwargs: extra keyword arguments for :meth:`process`.

        Returns:
            list: results of the non-duplicate tasks, in submission order.
        """
        self.signal.reset()
        self.in_queue = self._new_in_queue()
        self.out_queue = queue.Queue()
        for idx, task in enumerate(tasks):
            self.input((idx, task))
        if self.thread_num == 1:
            self.worker_exec(**kwargs)
        else:
            self.start(**kwargs)
            for worker in self.workers:
                worker.join()
        if self.signal.get("failed"):
            raise self.signal.get("error")
        results = []
        while not self.out_queue.empty():
            results.append(self.out_queue.get_nowait())
        results.sort(key=lambda item: item[0])
        return [result for _, result in results]
