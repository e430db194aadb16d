"Shared exceptions, logging and the enumeration scan base class"

import asyncio
import logging
import os
from abc import abstractmethod
from csv import DictWriter
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

import colorlog
import pandas as pd
from tqdm.asyncio import tqdm

import wittkit


class WittkitException(Exception):
    """Base exception class for the library"""

    EXIT_CODE = 1

    def __init__(self, err):
        self.msg = err

    def __str__(self):
        return self.msg


class UsageError(WittkitException):
    EXIT_CODE = 2


class PrecisionError(WittkitException):
    """The certified window cannot decide the requested claim."""

    EXIT_CODE = 3


class PrecisionExhausted(PrecisionError):
    pass


class InsufficientPrecision(PrecisionError):
    def __init__(self, err, index: Optional[Any] = None):
        super().__init__(err)
        self.index = index


class SizeCap(WittkitException):
    EXIT_CODE = 4


class MathDomainError(WittkitException):
    EXIT_CODE = 5


class NonUnit(MathDomainError):
    pass


class RingMismatch(MathDomainError):
    pass


class NotInIR(MathDomainError):
    pass


class UnsupportedRing(MathDomainError):
    pass


class NonLocalRing(MathDomainError):
    pass


class DegreeViolation(MathDomainError):
    def __init__(self, err, entry: Optional[Any] = None):
        super().__init__(err)
        self.entry = entry


class NotBijective(MathDomainError):
    pass


class InvalidZink(MathDomainError):
    pass


class NotInvertible(MathDomainError):
    pass


class NotMinuscule(MathDomainError):
    pass


class NotInDoubleCoset(MathDomainError):
    def __init__(self, err, divisors: Optional[Sequence[int]] = None):
        super().__init__(err)
        self.divisors = list(divisors or [])


class NotAPoint(MathDomainError):
    pass


class NotEquivariant(MathDomainError):
    pass


class SplitFailure(MathDomainError):
    pass


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a verification, truthy iff it passed."""

    name: str
    passed: bool
    witness: Optional[Any] = None
    samples: int = 0

    def __bool__(self):
        return self.passed

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        if self.witness is None:
            return f"{self.name}: {status}"
        return f"{self.name}: {status} (witness: {self.witness})"


LOG_FORMAT = "%(log_color)s[%(asctime)s %(levelname)s]%(reset)s %(white)s%(message)s"


def get_logger(name: str, log_dir: Optional[str] = None, level=logging.INFO):
    logger = colorlog.getLogger(name)
    if logger.handlers and log_dir is None:
        return logger

    logger.setLevel(logging.DEBUG)
    logger.handlers = []  # Reset handlers
    handler = colorlog.StreamHandler()
    handler.setFormatter(
        colorlog.ColoredFormatter(
            LOG_FORMAT,
            datefmt="%H:%M:%S",
            reset=True,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red",
            },
        )
    )
    handler.setLevel(level)
    logger.addHandler(handler)
    if log_dir is not None:
        fhandler = logging.FileHandler(os.path.join(log_dir, name + ".log"))
        fhandler.setFormatter(
            logging.Formatter("[%(asctime)s %(levelname)s] %(message)s")
        )
        fhandler.setLevel(logging.DEBUG)
        logger.addHandler(fhandler)
    return logger


def write_table(rows: List[Dict[str, Any]], fields: List[str], path: str):
    """Write rows as CSV plus a parquet copy next to it."""
    with open(path, "w", encoding="utf-8", newline="") as csv_file:
        writer = DictWriter(csv_file, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({key: row.get(key) for key in fields})
    if rows:
        dataframe = pd.read_csv(path)
        dataframe.to_parquet(path[:-4] + ".parquet", engine="fastparquet")


class Scan:
    """Exhaustive enumeration split into chunks processed concurrently.

    Chunks are inspected in worker threads bounded by a semaphore. Rows are
    always returned in canonical order so that the output does not depend on
    the scheduling.
    """

    SCAN_SUBJECT: Optional[str] = None
    NB_SEMAPHORE: int = 16

    RESULT_CSV = "results.csv"
    RESULT_CSV_FIELDS: List[str] = []

    def __init__(
        self,
        chunks: Sequence[Any],
        threads: int = 1,
        output_dir: Optional[str] = None,
        quiet: bool = False,
    ):
        assert self.SCAN_SUBJECT is not None
        self.chunks = list(chunks)
        self.threads = max(1, threads)
        self.quiet = quiet

        self.result_dir = None
        if output_dir is not None:
            self.result_dir = os.path.join(
                output_dir,
                self.SCAN_SUBJECT + "_" + datetime.now().strftime("%Y%m%d-%H%M%S"),
            )
            os.makedirs(self.result_dir, exist_ok=True)
            with open(
                os.path.join(self.result_dir, "version.txt"), "w", encoding="utf-8"
            ) as version_file:
                version_file.write(wittkit.__version__)

        self.logger = get_logger(
            "wittkit_" + self.SCAN_SUBJECT,
            self.result_dir,
            logging.WARNING if quiet else logging.INFO,
        )

    @abstractmethod
    def inspect_chunk(self, chunk: Any) -> List[Dict[str, Any]]:
        """Compute the result rows of one chunk.

        Args:
            chunk (Any): one unit of the scan

        Returns:
            List[Dict[str, Any]]: result rows, one per enumerated object
        """
        raise NotImplementedError

    def sort_key(self, row: Dict[str, Any]):
        return row.get("key", 0)

    def data_postprocessing(self, rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        return rows

    async def __inspect_chunk_with_logging(self, sem, index, chunk):
        async with sem:
            self.logger.debug("Start inspecting chunk %s", index)
            rows = await asyncio.to_thread(self.inspect_chunk, chunk)
            self.logger.debug("Finished inspecting chunk %s (%s rows)", index, len(rows))
            return rows

    async def launch(self) -> List[Dict[str, Any]]:
        """Launch the scan"""
        if not self.chunks:
            raise UsageError("Nothing to scan")

        self.logger.info("Scan %s begins...", self.SCAN_SUBJECT)
        sem = asyncio.Semaphore(min(self.threads, self.NB_SEMAPHORE))
        tasks = [
            self.__inspect_chunk_with_logging(sem, index, chunk)
            for index, chunk in enumerate(self.chunks)
        ]
        rows: List[Dict[str, Any]] = []
        try:
            for task in tqdm.as_completed(
                tasks, desc=f"Scanning {self.SCAN_SUBJECT}", disable=self.quiet
            ):
                rows.extend(await task)
        except Exception as err:
            self.logger.error("Scan failed: %s", str(err))
            raise err

        rows.sort(key=self.sort_key)
        rows = self.data_postprocessing(rows)
        self.logger.info("Scan completed: %s rows", len(rows))

        if self.result_dir is not None:
            write_table(
                rows,
                self.RESULT_CSV_FIELDS,
                os.path.join(self.result_dir, self.RESULT_CSV),
            )
            self.logger.info("Results written to %s", self.result_dir)
        return rows

    def run(self) -> List[Dict[str, Any]]:
        return asyncio.run(self.launch())
