import threading
import time
from queue import Queue
from typing import Any, Callable, List, Sequence

from .config import logger


class ThreadController:
    def __init__(self):
        self.enqueuing = True
        self._counters = {
            'runs_enqueued': 0,
            'runs_completed': 0,
            'runs_failed': 0,
        }
        self._locks = {name: threading.RLock() for name in self._counters}

    def done_enqueuing(self):
        logger.debug('set done_enqueuing')
        self.enqueuing = False

    def is_done_enqueuing(self):
        return not self.enqueuing

    def increment(self, counter_name):
        """Increments the counter specified by `counter_name`."""
        with self._locks[counter_name]:
            self._counters[counter_name] += 1

    def get(self, counter_name):
        """Returns the value of the counter specified by `counter_name`."""
        return self._counters[counter_name]

    @property
    def finished(self) -> int:
        return self.get('runs_completed') + self.get('runs_failed')


def enqueue_jobs(job_queue: Queue, jobs: Sequence, controller: ThreadController, workers: int):
    """Enqueues (index, job) pairs followed by one stop marker per worker."""
    for index, job in enumerate(jobs):
        job_queue.put((index, job))
        controller.increment('runs_enqueued')
    for _ in range(workers):
        job_queue.put(None)
    controller.done_enqueuing()


def process_jobs(job_queue: Queue, runner: Callable, results: List, controller: ThreadController, verbose=False):
    """
    Runs jobs until a stop marker arrives. A job that raises stores its exception in place of a
    result so the caller can turn it into a failure record.
    """
    while (item := job_queue.get()) is not None:
        index, job = item
        try:
            results[index] = runner(job)
            controller.increment('runs_completed')
        except Exception as exc:
            logger.error(f'run {index} failed: {exc!r}')
            results[index] = exc
            controller.increment('runs_failed')
        if verbose:
            logger.debug(f'{controller.finished}/{controller.get("runs_enqueued")} runs finished')


def run_threads(jobs: Sequence, runner: Callable[[Any], Any], workers: int = 1, verbose: bool = False) -> List:
    """
    Runs `runner` over `jobs` on a pool of worker threads.

    Args:
        jobs: Work items; each is handed to `runner` exactly once
        runner: Callable executed on a worker thread
        workers: Number of worker threads
        verbose: Log per-job progress

    Returns:
        Results in job order; failed jobs contribute their exception
    """
    start_time = time.time()
    workers = max(1, min(workers, len(jobs))) if jobs else 1
    controller = ThreadController()
    job_queue: Queue = Queue()
    results: List = [None] * len(jobs)

    threads = {
        'enqueue': threading.Thread(target=enqueue_jobs, args=(job_queue, jobs, controller, workers)),
        'process': [
            threading.Thread(target=process_jobs, args=(job_queue, runner, results, controller, verbose))
            for _ in range(workers)
        ],
    }

    threads['enqueue'].start()
    for worker in threads['process']:
        worker.start()

    threads['enqueue'].join()
    for worker in threads['process']:
        worker.join()

    logger.info(
        f'{controller.get("runs_completed")} runs completed, {controller.get("runs_failed")} failed '
        f'in {time.time() - start_time:.2f} seconds on {workers} thread(s)'
    )
    return results
