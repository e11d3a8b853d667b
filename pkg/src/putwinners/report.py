"""Search outcome records shared by the STV and RP solvers."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Discovery:
    alternative: int
    time: float   # seconds since the solve started
    node: int     # nodes expanded when found; 0 for the sampling phase


@dataclass
class WinnerReport:
    """Winners found by one solve, with discovery order and search counters."""

    winners: frozenset = frozenset()
    discoveries: list[Discovery] = field(default_factory=list)
    nodes_expanded: int = 0
    nodes_pruned: int = 0
    cache_hits: int = 0
    cache_clears: int = 0
    samples: int = 0
    total_time: float = 0.0
    complete: bool = True
    multi_source: bool = False

    def log(self) -> "DiscoveryLog":
        return DiscoveryLog(list(self.discoveries), self.total_time)

    def to_dict(self) -> dict:
        return {
            "winners": sorted(self.winners),
            "discoveries": [
                {"alternative": d.alternative, "time": d.time, "node": d.node}
                for d in self.discoveries
            ],
            "nodes_expanded": self.nodes_expanded,
            "nodes_pruned": self.nodes_pruned,
            "cache_hits": self.cache_hits,
            "cache_clears": self.cache_clears,
            "samples": self.samples,
            "total_time": self.total_time,
            "complete": self.complete,
            "multi_source": self.multi_source,
        }


class _Recorder:
    """Mutable winner set plus discovery bookkeeping used inside a solve."""

    def __init__(self):
        self.start = time.perf_counter()
        self.mask = 0
        self.report = WinnerReport()
        self._winners: set[int] = set()

    def add(self, alt: int, node: int) -> bool:
        if alt in self._winners:
            return False
        self._winners.add(alt)
        self.mask |= 1 << alt
        self.report.discoveries.append(
            Discovery(alt, time.perf_counter() - self.start, node))
        return True

    def finish(self) -> WinnerReport:
        self.report.winners = frozenset(self._winners)
        self.report.total_time = time.perf_counter() - self.start
        return self.report


@dataclass
class DiscoveryLog:
    """Ordered discoveries of one completed solve."""

    entries: list[Discovery]
    total_time: float = 0.0

    @property
    def total(self) -> int:
        return len(self.entries)


def alpha_discovery(log: DiscoveryLog, alpha: float, by: str = "time"):
    """Cost at which a fraction ``alpha`` of all winners had been found.

    Returns the time (or node index with ``by="node"``) of the
    ``ceil(alpha * total)``-th discovery. With two winners found at t1 < t2,
    any alpha up to 0.5 gives t1 and anything above gives t2.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not log.entries:
        raise ValueError("empty discovery log")
    # round() guards against float noise such as 0.3 * 10 = 3.0000000000000004
    k = max(1, math.ceil(round(alpha * log.total, 9)))
    entry = log.entries[k - 1]
    if by == "time":
        return entry.time
    if by == "node":
        return entry.node
    raise ValueError(f"unknown measure {by!r}")
