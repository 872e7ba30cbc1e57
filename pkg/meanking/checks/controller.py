import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional

from tqdm import tqdm

from meanking.config import get_settings

logger = logging.getLogger(__name__)


class SweepController:
	"""Worker pool shared by the verification suites and protocol sweeps.

	Usage: call `start()` to spin up the pool, then `map()` independent jobs.
	Results always come back in input order, whatever order they finish in.
	"""

	def __init__(self, threads: Optional[int] = None, progress: bool = False):
		self.threads = threads
		self.progress = progress
		self._pool: Optional[ThreadPoolExecutor] = None

	def start(self) -> None:
		if self._pool is None:
			workers = self.threads or get_settings().worker_count()
			self._pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="meanking")
			logger.debug("sweep pool started with %d workers", workers)

	def stop(self) -> None:
		if self._pool:
			try:
				self._pool.shutdown(wait=True)
			finally:
				self._pool = None

	def map(self, fn: Callable[[Any], Any], items: Iterable[Any], desc: str = "") -> List[Any]:
		items = list(items)
		if self._pool is None:
			self.start()
		results = self._pool.map(fn, items)
		return list(tqdm(results, total=len(items), desc=desc, disable=not self.progress, leave=False))

	def __enter__(self) -> "SweepController":
		self.start()
		return self

	def __exit__(self, *exc) -> None:
		self.stop()
