# coupling/coupled.py
"""Varios procesos de crecimiento sobre una misma realización.

Todos los procesos avanzan en un único bucle ordenado por tiempo: en cada
paso fusionado se toma el menor instante candidato y avanzan todos los
procesos cuyo siguiente evento cae justo ahí (con flujos compartidos, una
misma ocurrencia puede infectar en varios procesos a la vez).

En el modo ``until-tau`` cada proceso usa su propia realización hasta τ, el
primer instante en que la caja B_ξ^{+2} queda cubierta en el primer proceso;
desde τ todos pasan a una tercera realización común.
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

from engine.growth import (
    EVENT_CAP, GrowthState, ModelConfig, StopCondition, Trace, stop_outcome,
    trace_horizon,
)
from lattice.exceptions import DimensionMismatch, InvalidConstruction, InvalidRate, OverlappingSets
from lattice.geometry import Box, SiteSet, bounding_box, box_contains, enlarge, inner_boundary
from randomness.seeds import derive_seed
from randomness.streams import NEVER, SHARED, Realization

logger = logging.getLogger(__name__)

SHARED_FROM_START = 'shared'
UNTIL_TAU = 'until-tau'
VARIANTS = (SHARED_FROM_START, UNTIL_TAU)


@dataclass(frozen=True)
class CouplingMode:
    variant: str = SHARED_FROM_START
    tau_box: Box | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"Modo de acoplamiento desconocido: {self.variant}")

    @classmethod
    def until_tau(cls, configs: Sequence[ModelConfig]) -> 'CouplingMode':
        xi = frozenset().union(*(c.union for c in configs))
        return cls(UNTIL_TAU, enlarge(bounding_box(xi), 2))


def lemma1_precondition(z1: SiteSet, z2: SiteSet, z1p: SiteSet, z2p: SiteSet) -> bool:
    z1, z2, z1p, z2p = map(frozenset, (z1, z2, z1p, z2p))
    if z1 & z2 or z1p & z2p:
        raise OverlappingSets("Cada par (ζ_1, ζ_2) debe ser disjunto")
    zeta = z1 | z2
    if zeta != z1p | z2p:
        return False
    boundary = inner_boundary(zeta)
    return (z2 & boundary) <= (z2p & boundary)


def _check_family(configs: Sequence[ModelConfig]) -> None:
    if not configs:
        raise ValueError("Hace falta al menos una configuración")
    if len({c.d for c in configs}) > 1:
        raise DimensionMismatch("Las configuraciones acopladas deben compartir dimensión")
    if len({c.lam for c in configs}) > 1:
        raise InvalidRate("Las configuraciones acopladas deben compartir λ")


class CoupledRun:
    """Procesos acoplados y el bucle de eventos fusionado que los mueve."""

    def __init__(self, configs: Sequence[ModelConfig], seed: int, mode: CouplingMode | None = None,
                 construction: str = SHARED):
        _check_family(configs)
        if construction != SHARED:
            # los dos tipos deben leer el mismo flujo de cada arista
            raise InvalidConstruction("El acoplamiento solo admite la construcción compartida")
        self.configs = list(configs)
        self.seed = seed
        self.mode = mode or CouplingMode()
        if self.mode.variant == UNTIL_TAU and self.mode.tau_box is None:
            self.mode = CouplingMode.until_tau(self.configs)
        self.construction = construction
        if self.mode.variant == SHARED_FROM_START:
            shared = Realization(seed, construction)
            self.realizations = [shared] * len(self.configs)
            self.shared = shared
        else:
            self.realizations = [Realization(derive_seed(seed, i + 1), construction)
                                 for i in range(len(self.configs))]
            self.shared = Realization(seed, construction)
        self.states = [GrowthState(c, r) for c, r in zip(self.configs, self.realizations)]
        self.traces = [Trace(c, r.master_seed, final=s)
                       for c, r, s in zip(self.configs, self.realizations, self.states)]
        self.merged_steps = 0
        self.tau: float | None = None
        self.state_at_tau: list[tuple[SiteSet, SiteSet]] | None = None
        self.holes_at_tau: list[SiteSet] | None = None
        self._covered = 0
        if self.mode.variant == UNTIL_TAU:
            box = self.mode.tau_box
            self._covered = sum(1 for x in self.states[0].owner if box_contains(box, x))
            self._maybe_switch(0.0)

    @property
    def coincide_at_tau(self) -> bool | None:
        if self.state_at_tau is None:
            return None
        return all(s == self.state_at_tau[0] for s in self.state_at_tau[1:])

    def _maybe_switch(self, now: float) -> None:
        if self.tau is not None or self._covered < len(self.mode.tau_box):
            return
        self.tau = now
        self.state_at_tau = [(s.sites_of(1), s.sites_of(2)) for s in self.states]
        self.holes_at_tau = [s.holes() for s in self.states]
        for state in self.states:
            state.rebind(self.shared, now)
        self.realizations = [self.shared] * len(self.states)
        logger.debug("τ alcanzado en %.4f; procesos en la realización común", now)

    @staticmethod
    def _outcome(state: GrowthState, stop: StopCondition) -> str | None:
        outcome = stop_outcome(state, stop)
        # el tope de eventos se cuenta en pasos fusionados, no por proceso
        return None if outcome == EVENT_CAP else outcome

    def run(self, stop: StopCondition) -> list[Trace]:
        outcomes: list[str | None] = [self._outcome(s, stop) for s in self.states]
        while True:
            if stop.max_events is not None and self.merged_steps >= stop.max_events:
                break
            pending = [i for i, o in enumerate(outcomes) if o is None]
            times = {i: self.states[i].next_time() for i in pending}
            now = min(times.values(), default=NEVER)
            if now == NEVER:
                break
            for i, when in times.items():
                if when != now:
                    continue
                event = self.states[i].step()
                self.traces[i].events.append(event)
                if i == 0 and self.mode.variant == UNTIL_TAU and box_contains(self.mode.tau_box, event.site):
                    self._covered += 1
                outcomes[i] = self._outcome(self.states[i], stop)
            self.merged_steps += 1
            if self.mode.variant == UNTIL_TAU:
                self._maybe_switch(now)
            if all(o is not None for o in outcomes):
                break
        clock = max(s.clock for s in self.states)
        for i, (state, trace) in enumerate(zip(self.states, self.traces)):
            trace.outcome = outcomes[i] or (EVENT_CAP if stop.max_events is not None else None)
            horizon = trace_horizon(state)
            # sin eventos propios pendientes antes de ``clock``, el estado está fijado hasta ahí
            trace.horizon = horizon if horizon == NEVER or outcomes[i] is not None else max(horizon, clock)
        for state in self.states:
            state.close()
        logger.debug("Corrida acoplada (%s): %d pasos fusionados", self.mode.variant, self.merged_steps)
        return self.traces


def run_coupled(configs: Sequence[ModelConfig], seed: int, mode: CouplingMode | None,
                stop: StopCondition) -> list[Trace]:
    return CoupledRun(configs, seed, mode).run(stop)


def tau_box_covered(trace: Trace, box: Box) -> float:
    """Primer instante de la traza en que ``box`` ⊆ Γ(t); NEVER si no llega a ocurrir."""
    missing = sum(1 for x in box if x not in trace.config.union)
    if missing == 0:
        return 0.0
    for event in trace.events:
        if event.time > trace.horizon:
            break
        if box_contains(box, event.site):
            missing -= 1
            if missing == 0:
                return event.time
    return NEVER


@dataclass
class CouplingSummary:
    mode: str
    seed: int
    tau: float | None
    tau_box: Box | None
    coincide_at_tau: bool | None
    holes_at_tau: list[int] | None
    processes: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'mode': self.mode,
            'seed': self.seed,
            'tau': 'never' if self.tau is None else self.tau,
            'tau_box': self.tau_box.to_dict() if self.tau_box else None,
            'coincide_at_tau': self.coincide_at_tau,
            'holes_at_tau': self.holes_at_tau,
            'processes': self.processes,
        }


def summarize(coupled: CoupledRun) -> CouplingSummary:
    return CouplingSummary(
        mode=coupled.mode.variant,
        seed=coupled.seed,
        tau=coupled.tau,
        tau_box=coupled.mode.tau_box,
        coincide_at_tau=coupled.coincide_at_tau,
        holes_at_tau=None if coupled.holes_at_tau is None else [len(h) for h in coupled.holes_at_tau],
        processes=[
            {
                'config': trace.config.to_dict(),
                'realization_seed': trace.seed,
                'events': len(trace.events),
                'outcome': trace.outcome,
                'horizon': 'never' if trace.horizon == NEVER else trace.horizon,
            }
            for trace in coupled.traces
        ],
    )
