"""Minimal process-oriented discrete-event simulation core.

Time advances in whole semesters (non-negative integers). Entities are
generator functions that receive a :class:`Process` handle and ``yield``
integer timeout durations; everything else (seizing and releasing named
resources, entity attributes, exiting) happens synchronously through the
handle. Event ties are broken by a monotone per-engine sequence number so
a run is fully determined by (seed, resources, spawn schedule, processes).

Randomness is exposed only through :meth:`Engine.substream`, which derives
an independent generator from the engine seed and a caller-chosen key via
SHA-256. Entity outcomes therefore do not depend on event interleaving.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional

SEIZE = "seize"
RELEASE = "release"


class KernelError(Exception):
    """Base class for engine usage errors."""


class DuplicateResource(KernelError):
    pass


class UnknownResource(KernelError):
    pass


class ArrivalInPast(KernelError):
    pass


class CapacityExceeded(KernelError):
    """Seize attempted on a finite resource that is already full."""


class NotSeized(KernelError):
    """Release attempted on a resource the entity does not hold."""


class UnknownAttribute(KernelError):
    """Attribute read before any write; the store has no defaults."""


@dataclass
class Resource:
    """A named, capacity-limited resource. ``capacity=None`` means unbounded."""

    name: str
    capacity: Optional[int] = None
    in_use: int = 0

    def __post_init__(self) -> None:
        if self.capacity is not None and self.capacity < 1:
            raise ValueError(f"capacity must be positive or None, got {self.capacity}")

    @property
    def remaining(self) -> Optional[int]:
        if self.capacity is None:
            return None
        return self.capacity - self.in_use


class MonitorEntry(NamedTuple):
    # NamedTuple rather than a dataclass: tens of thousands of these are
    # materialized per run and tuple construction is an order of magnitude
    # cheaper.
    time: int
    seq: int
    resource_id: str
    entity_id: str
    kind: str  # SEIZE or RELEASE
    in_use_after: int

    def as_row(self) -> list:
        return list(self)


@dataclass(frozen=True)
class MonitorLog:
    """Immutable, time-ordered record of every seize and release."""

    entries: tuple[MonitorEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def seize_counts(self) -> dict[tuple[str, int], int]:
        """Number of seize events per (resource, time) cell."""
        counts: dict[tuple[str, int], int] = {}
        for e in self.entries:
            if e.kind == SEIZE:
                key = (e.resource_id, e.time)
                counts[key] = counts.get(key, 0) + 1
        return counts

    def to_json(self) -> str:
        return json.dumps([e.as_row() for e in self.entries], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "MonitorLog":
        rows = json.loads(text)
        return cls(tuple(MonitorEntry._make(row) for row in rows))


class _ExitSignal(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class Process:
    """Handle passed to an entity's generator; the entity's only way to act."""

    def __init__(self, engine: "Engine", entity_id: str):
        self.engine = engine
        self.entity_id = entity_id
        self.attributes: dict[str, float] = {}
        self._held: dict[str, int] = {}
        self.rng = engine.substream("entity", entity_id)
        self.exit_reason: Optional[str] = None

    @property
    def now(self) -> int:
        return self.engine.clock

    def seize(self, resource: str) -> None:
        res = self.engine._resource(resource)
        if res.capacity is not None and res.in_use >= res.capacity:
            raise CapacityExceeded(f"resource {resource!r} is full ({res.capacity})")
        res.in_use += 1
        self._held[resource] = self._held.get(resource, 0) + 1
        self.engine._record(resource, self.entity_id, SEIZE, res.in_use)

    def release(self, resource: str) -> None:
        if self._held.get(resource, 0) <= 0:
            raise NotSeized(f"entity {self.entity_id!r} does not hold {resource!r}")
        res = self.engine._resource(resource)
        res.in_use -= 1
        self._held[resource] -= 1
        if self._held[resource] == 0:
            del self._held[resource]
        self.engine._record(resource, self.entity_id, RELEASE, res.in_use)

    def release_all(self) -> None:
        for resource in sorted(self._held):
            while self._held.get(resource, 0) > 0:
                self.release(resource)

    def set_attribute(self, name: str, value: float) -> None:
        self.attributes[name] = value

    def get_attribute(self, name: str) -> float:
        try:
            return self.attributes[name]
        except KeyError:
            raise UnknownAttribute(f"attribute {name!r} was never written") from None

    def exit(self, reason: str) -> None:
        """Terminate the entity; held resources are released by the engine."""
        raise _ExitSignal(reason)


ProcessFn = Callable[[Process], Iterator[int]]


@dataclass
class _Entity:
    process: Process
    generator: Iterator[int]
    done: bool = False


class Engine:
    """A single simulation run: clock, event calendar, resources, monitor."""

    def __init__(self, seed: int):
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.clock = 0
        self._seq = 0
        self._heap: list[tuple[int, int, str]] = []
        self._resources: dict[str, Resource] = {}
        self._entities: dict[str, _Entity] = {}
        # Raw event tuples; MonitorEntry objects are built lazily because
        # constructing millions of them mid-run dominates the profile.
        self._log: list[tuple] = []
        self._log_view: Optional[MonitorLog] = None
        self._spawned = 0

    # -- resources ---------------------------------------------------------

    def add_resource(self, name: str, capacity: Optional[int] = None) -> Resource:
        if name in self._resources:
            raise DuplicateResource(f"resource {name!r} already registered")
        res = Resource(name, capacity)
        self._resources[name] = res
        return res

    def _resource(self, name: str) -> Resource:
        try:
            return self._resources[name]
        except KeyError:
            raise UnknownResource(f"no resource named {name!r}") from None

    @property
    def resources(self) -> dict[str, Resource]:
        return dict(self._resources)

    # -- randomness --------------------------------------------------------

    def substream(self, *key) -> random.Random:
        """Independent RNG derived from (engine seed, key); stable everywhere."""
        material = ":".join([str(self.seed), *[str(part) for part in key]])
        digest = hashlib.sha256(material.encode("utf-8")).digest()
        return random.Random(int.from_bytes(digest[:16], "big"))

    # -- scheduling --------------------------------------------------------

    def next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def spawn_at(self, process_fn: ProcessFn, arrival: int, entity_id: Optional[str] = None) -> str:
        if arrival < self.clock:
            raise ArrivalInPast(f"arrival {arrival} precedes clock {self.clock}")
        if entity_id is None:
            entity_id = f"e{self._spawned:06d}"
        if entity_id in self._entities:
            raise KernelError(f"entity id {entity_id!r} already spawned")
        self._spawned += 1
        proc = Process(self, entity_id)
        self._entities[entity_id] = _Entity(proc, process_fn(proc))
        heapq.heappush(self._heap, (arrival, self.next_seq(), entity_id))
        return entity_id

    def run_until(self, t_end: int) -> MonitorLog:
        """Process every event strictly before ``t_end``; clock ends at ``t_end``.

        The returned log is cumulative, so running to ``t1`` and then ``t2``
        yields the same log as a single run to ``t2``.
        """
        if t_end < self.clock:
            raise ValueError(f"t_end {t_end} precedes clock {self.clock}")
        while self._heap and self._heap[0][0] < t_end:
            time, _, entity_id = heapq.heappop(self._heap)
            self.clock = time
            self._resume(entity_id)
        self.clock = t_end
        return self.monitor_log

    @property
    def monitor_log(self) -> MonitorLog:
        if self._log_view is None or len(self._log_view) != len(self._log):
            self._log_view = MonitorLog(tuple(map(MonitorEntry._make, self._log)))
        return self._log_view

    def entity(self, entity_id: str) -> Process:
        return self._entities[entity_id].process

    # -- internals ---------------------------------------------------------

    def _record(self, resource_id: str, entity_id: str, kind: str, in_use_after: int) -> None:
        self._seq += 1
        self._log.append((self.clock, self._seq, resource_id, entity_id, kind, in_use_after))

    def _resume(self, entity_id: str) -> None:
        entity = self._entities[entity_id]
        if entity.done:
            return
        try:
            duration = next(entity.generator)
        except StopIteration:
            self._finish(entity)
            return
        except _ExitSignal as sig:
            entity.process.exit_reason = sig.reason
            self._finish(entity)
            return
        if not isinstance(duration, int) or duration < 0:
            raise KernelError(f"process yielded invalid timeout {duration!r}")
        heapq.heappush(self._heap, (self.clock + duration, self.next_seq(), entity_id))

    def _finish(self, entity: _Entity) -> None:
        entity.process.release_all()
        entity.done = True


def create_engine(seed: int) -> Engine:
    return Engine(seed)
