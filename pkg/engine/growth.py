# engine/growth.py
"""Dinámica del modelo de Richardson de dos tipos sobre Z^d.

La agenda guarda, para cada arista elegible (x, y) con x infectado e y libre,
el primer instante de su proceso (adelgazado si x es de tipo 2) posterior al
momento en que la arista se volvió elegible. Como el siguiente evento es el
mínimo global, una arista que sigue elegible nunca se salta una ocurrencia.
Hay un montículo por tipo; las entradas cuyo destino ya está infectado se
descartan al salir.
"""
import hashlib
import heapq
import json
import logging
from dataclasses import dataclass, field

from forest.graph import InfectionForest
from lattice.exceptions import (
    DimensionMismatch, EmptySiteSet, InvalidRate, InvalidStopCondition,
    NoEligibleEdge, OverlappingSets,
)
from lattice.geometry import (
    MIN_DIMENSION, Site, SiteSet, dimension_of, linf_norm, neighbors,
)
from randomness.streams import NEVER, SHARED, Realization, check_rate
from topology.fertility import holes as enclosed_holes

logger = logging.getLogger(__name__)

TYPES = (1, 2)

COEXIST = 'coexist-proxy'
TYPE1_DEAD = 'type-1-dead'
TYPE2_DEAD = 'type-2-dead'
EVENT_CAP = 'event-cap'
RADIUS_REACHED = 'radius-reached'
OUTCOMES = (COEXIST, TYPE1_DEAD, TYPE2_DEAD, EVENT_CAP, RADIUS_REACHED)


def dead_label(infection_type: int) -> str:
    return TYPE1_DEAD if infection_type == 1 else TYPE2_DEAD


@dataclass(frozen=True)
class ModelConfig:
    d: int
    lam: float
    xi1: SiteSet
    xi2: SiteSet

    def __post_init__(self):
        object.__setattr__(self, 'xi1', frozenset(tuple(x) for x in self.xi1))
        object.__setattr__(self, 'xi2', frozenset(tuple(x) for x in self.xi2))
        object.__setattr__(self, 'lam', check_rate(self.lam))
        if self.d < MIN_DIMENSION:
            raise DimensionMismatch(f"La dimensión debe ser al menos {MIN_DIMENSION}: {self.d}")
        found = dimension_of(self.xi1 | self.xi2)
        if found is None:
            raise EmptySiteSet("ξ_1 ∪ ξ_2 no puede ser vacío")
        if found != self.d:
            raise DimensionMismatch(f"Los sitios tienen dimensión {found}, no {self.d}")
        common = self.xi1 & self.xi2
        if common:
            raise OverlappingSets(f"ξ_1 y ξ_2 se solapan en {sorted(common)}")

    def initial(self, infection_type: int) -> SiteSet:
        return self.xi1 if infection_type == 1 else self.xi2

    @property
    def union(self) -> SiteSet:
        return self.xi1 | self.xi2

    def to_dict(self) -> dict:
        return {
            'dimension': self.d,
            'lambda': self.lam,
            'xi1': [list(x) for x in sorted(self.xi1)],
            'xi2': [list(x) for x in sorted(self.xi2)],
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RateReduction:
    """Reducción de tasas (λ_1, λ_2) a (1, λ) por cambio de escala y simetría."""
    lambda1: float
    lambda2: float
    lam: float
    scale: float
    relabel: bool

    def to_dict(self) -> dict:
        return {
            'lambda1': self.lambda1,
            'lambda2': self.lambda2,
            'reduced_lambda': self.lam,
            'time_scale': self.scale,
            'relabel': self.relabel,
        }


def reduce_rates(lambda1: float, lambda2: float) -> RateReduction:
    lambda1, lambda2 = float(lambda1), float(lambda2)
    if lambda1 < 0 or lambda2 < 0:
        raise InvalidRate("Las tasas deben ser no negativas")
    scale = max(lambda1, lambda2)
    if scale == 0:
        raise InvalidRate("Al menos una de las tasas debe ser positiva")
    relabel = lambda2 > lambda1
    slow = lambda1 if relabel else lambda2
    return RateReduction(lambda1, lambda2, slow / scale, scale, relabel)


@dataclass(frozen=True)
class EventRecord:
    n: int
    time: float
    site: Site
    infection_type: int
    parent: Site

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            't': self.time,
            'site': list(self.site),
            'type': self.infection_type,
            'parent': list(self.parent),
        }


@dataclass(frozen=True)
class StopCondition:
    radius: int | None = None
    max_events: int | None = None
    stop_on_type_death: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'stop_on_type_death', frozenset(self.stop_on_type_death))
        if self.radius is None and self.max_events is None:
            raise InvalidStopCondition("Hace falta un radio o un máximo de eventos")
        if self.radius is not None and self.radius < 1:
            raise InvalidStopCondition("El radio debe ser al menos 1")
        if self.max_events is not None and self.max_events < 0:
            raise InvalidStopCondition("El máximo de eventos no puede ser negativo")
        if not self.stop_on_type_death <= set(TYPES):
            raise InvalidStopCondition(f"Tipos desconocidos: {sorted(self.stop_on_type_death)}")


@dataclass(frozen=True)
class CandidateTimes:
    t1: float
    t2: float
    edge1: tuple[Site, Site] | None
    edge2: tuple[Site, Site] | None

    @property
    def next_time(self) -> float:
        return min(self.t1, self.t2)


class GrowthState:
    """(Γ_n^1, Γ_n^2, T_n) más la agenda de aristas elegibles y el bosque de infección."""

    def __init__(self, config: ModelConfig, realization: Realization):
        self.config = config
        self.realization = realization
        self.gamma = {1: set(config.xi1), 2: set(config.xi2)}
        self.owner: dict[Site, int] = {x: 1 for x in config.xi1}
        self.owner.update((x, 2) for x in config.xi2)
        self.clock = 0.0
        self.n = 0
        self.agenda: dict[tuple[Site, Site], float] = {}
        self._queues: dict[int, list] = {1: [], 2: []}
        self._live = {1: 0, 2: 0}
        self._reach = {i: max((linf_norm(x) for x in self.gamma[i]), default=0) for i in TYPES}
        self.forest = InfectionForest(self.owner)
        realization.attach()
        for x in sorted(self.owner):
            self._open_edges(x)
        logger.debug("Estado inicial: %d+%d sitios, %d aristas elegibles",
                      len(config.xi1), len(config.xi2), len(self.agenda))

    @property
    def gamma1(self) -> set[Site]:
        return self.gamma[1]

    @property
    def gamma2(self) -> set[Site]:
        return self.gamma[2]

    @property
    def infected(self) -> int:
        return len(self.owner)

    def _schedule(self, x: Site, y: Site, after: float) -> None:
        infection_type = self.owner[x]
        when = self.realization.candidate(x, y, infection_type, self.config.lam, after)
        self.agenda[(x, y)] = when
        if when < NEVER:
            self._live[infection_type] += 1
            heapq.heappush(self._queues[infection_type], (when, x, y))

    def _open_edges(self, x: Site) -> None:
        for y in neighbors(x):
            if y not in self.owner:
                self._schedule(x, y, self.clock)

    def _close_edges(self, y: Site) -> None:
        for x in neighbors(y):
            when = self.agenda.pop((x, y), None)
            if when is not None and when < NEVER:
                self._live[self.owner[x]] -= 1

    def _peek(self, infection_type: int):
        queue = self._queues[infection_type]
        while queue and queue[0][2] in self.owner:
            heapq.heappop(queue)
        return queue[0] if queue else None

    def candidate_times(self) -> CandidateTimes:
        top1, top2 = self._peek(1), self._peek(2)
        return CandidateTimes(
            top1[0] if top1 else NEVER,
            top2[0] if top2 else NEVER,
            (top1[1], top1[2]) if top1 else None,
            (top2[1], top2[2]) if top2 else None,
        )

    def next_time(self) -> float:
        top1, top2 = self._peek(1), self._peek(2)
        return min(top1[0] if top1 else NEVER, top2[0] if top2 else NEVER)

    def step(self) -> EventRecord:
        top1, top2 = self._peek(1), self._peek(2)
        if top1 is None and top2 is None:
            raise NoEligibleEdge("Ningún tipo puede seguir creciendo")
        # empate: gana el tipo de menor índice
        if top2 is None or (top1 is not None and top1[0] <= top2[0]):
            infection_type = 1
        else:
            infection_type = 2
        when, x, y = heapq.heappop(self._queues[infection_type])
        return self._infect(y, infection_type, x, when)

    def _infect(self, y: Site, infection_type: int, parent: Site, when: float) -> EventRecord:
        self._close_edges(y)
        self.owner[y] = infection_type
        self.gamma[infection_type].add(y)
        self.clock = when
        self.n += 1
        self._reach[infection_type] = max(self._reach[infection_type], linf_norm(y))
        event = EventRecord(self.n, when, y, infection_type, parent)
        self.forest.record(event)
        self._open_edges(y)
        self.realization.retire(y)
        return event

    def rebind(self, realization: Realization, at: float) -> None:
        """Cambia de realización en el instante ``at`` y reprograma toda la agenda."""
        self.realization.detach()
        self.realization = realization
        realization.attach()
        pending = sorted(self.agenda)
        self.agenda.clear()
        self._queues = {1: [], 2: []}
        self._live = {1: 0, 2: 0}
        for x, y in pending:
            self._schedule(x, y, max(self.clock, at))

    def type_active(self, infection_type: int) -> bool:
        return self._live[infection_type] > 0

    def reach(self, infection_type: int) -> int:
        return self._reach[infection_type]

    def holes(self) -> SiteSet:
        return enclosed_holes(self.owner)

    def sites_of(self, infection_type: int) -> SiteSet:
        return frozenset(self.gamma[infection_type])

    def close(self) -> None:
        """Suelta la realización; sus flujos pueden liberarse sin esperar a este estado."""
        self.realization.detach()


@dataclass
class Trace:
    config: ModelConfig
    seed: int
    events: list[EventRecord] = field(default_factory=list)
    final: GrowthState | None = None
    outcome: str | None = None
    horizon: float = 0.0

    def times_and_sites(self) -> list[tuple[float, Site]]:
        return [(e.time, e.site) for e in self.events]

    def same_events(self, other: 'Trace') -> bool:
        return self.events == other.events


def init(config: ModelConfig, real: Realization) -> GrowthState:
    return GrowthState(config, real)


def candidate_times(state: GrowthState) -> CandidateTimes:
    return state.candidate_times()


def step(state: GrowthState) -> EventRecord:
    return state.step()


def type_active(state: GrowthState, infection_type: int) -> bool:
    return state.type_active(infection_type)


def reach(state: GrowthState, infection_type: int) -> int:
    return state.reach(infection_type)


def holes(state: GrowthState) -> SiteSet:
    return state.holes()


def stop_outcome(state: GrowthState, stop: StopCondition) -> str | None:
    """Etiqueta de parada del estado actual, o None si hay que seguir."""
    for i in TYPES:
        if i in stop.stop_on_type_death and not state.type_active(i):
            return dead_label(i)
    if stop.radius is not None:
        present = [i for i in TYPES if state.config.initial(i)]
        # un tipo presente que ya no crece y no llegó al radio nunca llegará
        for i in present:
            if state.reach(i) < stop.radius and not state.type_active(i):
                return dead_label(i)
        if all(state.reach(i) >= stop.radius for i in present):
            return COEXIST if len(present) == 2 else RADIUS_REACHED
    if stop.max_events is not None and state.n >= stop.max_events:
        return EVENT_CAP
    if not state.type_active(1) and not state.type_active(2):
        present = [i for i in TYPES if state.config.initial(i)]
        return dead_label(present[0])
    return None


def trace_horizon(state: GrowthState) -> float:
    """Instante hasta el que la evolución del estado está determinada."""
    return NEVER if state.next_time() == NEVER else state.clock


def run(state: GrowthState, stop: StopCondition) -> Trace:
    trace = Trace(state.config, state.realization.master_seed, final=state)
    outcome = stop_outcome(state, stop)
    while outcome is None:
        trace.events.append(state.step())
        outcome = stop_outcome(state, stop)
    trace.outcome = outcome
    trace.horizon = trace_horizon(state)
    logger.debug("Corrida terminada: %s tras %d eventos (T=%.4f)", outcome, state.n, state.clock)
    return trace


def simulate(config: ModelConfig, seed: int, stop: StopCondition, construction: str = SHARED,
             block: int | None = None) -> Trace:
    kwargs = {'construction': construction}
    if block is not None:
        kwargs['block'] = block
    state = init(config, Realization(seed, **kwargs))
    try:
        return run(state, stop)
    finally:
        state.close()


def snapshot(trace: Trace, t: float) -> tuple[SiteSet, SiteSet]:
    """(Γ_1(t), Γ_2(t)) reconstruidos a partir de la traza."""
    gamma = {1: set(trace.config.xi1), 2: set(trace.config.xi2)}
    for event in trace.events:
        if event.time > t:
            break
        gamma[event.infection_type].add(event.site)
    return frozenset(gamma[1]), frozenset(gamma[2])

