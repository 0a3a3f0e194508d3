# coupling/inclusions.py
"""Verificación de las inclusiones entre dos procesos acoplados.

Con ζ = ζ_1 ∪ ζ_2 y ζ° su interior, en cada instante de la sucesión fusionada
de eventos se comprueba:

  (1)  Γ_1^A(t) ∖ ζ°  ⊇  Γ_1^B(t) ∖ ζ°
  (2)  Γ_2^A(t) ∖ ζ°  ⊆  Γ_2^B(t) ∖ ζ°
  (3)  Γ^A(t)         ⊇  Γ^B(t)

donde A arranca de (ζ_1, ζ_2) y B de (ζ_1', ζ_2'). Los estados son
constantes entre eventos, así que basta mirar los instantes de evento. Cada
inclusión se sigue con el conjunto de sus testigos de violación, que se
actualiza en O(1) por evento.
"""
import logging
from dataclasses import dataclass, field
from itertools import groupby

from engine.growth import Trace, snapshot
from lattice.exceptions import PreconditionFailed
from lattice.geometry import Site, SiteSet, inner_boundary, interior
from randomness.streams import NEVER

from .coupled import lemma1_precondition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InclusionCheck:
    time: float
    eq1: bool
    eq2: bool
    eq3: bool

    @property
    def ok(self) -> bool:
        return self.eq1 and self.eq2 and self.eq3


def _sorted_sites(sites) -> list[list[int]]:
    return [list(x) for x in sorted(sites)]


@dataclass
class InclusionReport:
    checks: list[InclusionCheck] = field(default_factory=list)
    first_violation: dict | None = None
    horizon: float = 0.0
    since: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'n_checks': len(self.checks),
            'since': self.since,
            'horizon': 'never' if self.horizon == NEVER else self.horizon,
            'checks': [[c.time, c.eq1, c.eq2, c.eq3] for c in self.checks],
            'first_violation': self.first_violation,
        }


class _Side:
    """Estado reconstruido de un proceso mientras se recorre su traza."""

    def __init__(self, gamma1: SiteSet, gamma2: SiteSet):
        self.gamma = {1: set(gamma1), 2: set(gamma2)}
        self.owner = {x: 1 for x in gamma1}
        self.owner.update((x, 2) for x in gamma2)

    def add(self, site: Site, infection_type: int) -> None:
        self.owner[site] = infection_type
        self.gamma[infection_type].add(site)


def _merged(trace_a: Trace, trace_b: Trace, since: float, horizon: float):
    tagged = [(e.time, 0, e) for e in trace_a.events if since < e.time <= horizon]
    tagged += [(e.time, 1, e) for e in trace_b.events if since < e.time <= horizon]
    tagged.sort(key=lambda item: (item[0], item[1]))
    return groupby(tagged, key=lambda item: item[0])


def check_inclusions(trace_a: Trace, trace_b: Trace, zeta: SiteSet | None = None,
                     since: float = 0.0) -> InclusionReport:
    """Evalúa (1), (2) y (3) en cada instante fusionado posterior a ``since``.

    Con ``since`` > 0 los conjuntos iniciales son los estados de ambas trazas en
    ese instante (el uso tras τ en el modo ``until-tau``).
    """
    a1, a2 = snapshot(trace_a, since)
    b1, b2 = snapshot(trace_b, since)
    zeta = frozenset(zeta) if zeta is not None else a1 | a2
    if zeta != a1 | a2 or not lemma1_precondition(a1, a2, b1, b2):
        raise PreconditionFailed("Los pares de partida no cumplen la hipótesis de inclusión")
    if trace_a.config.lam != trace_b.config.lam:
        raise PreconditionFailed("Las trazas deben compartir λ")

    core = interior(zeta)
    side_a, side_b = _Side(a1, a2), _Side(b1, b2)
    bad1 = {x for x in b1 - core if x not in a1}
    bad2 = {x for x in a2 - core if x not in b2}
    bad3 = {x for x in b1 | b2 if x not in side_a.owner}
    horizon = min(trace_a.horizon, trace_b.horizon)
    report = InclusionReport(horizon=horizon, since=since)

    def record(now: float) -> None:
        check = InclusionCheck(now, not bad1, not bad2, not bad3)
        report.checks.append(check)
        if not check.ok and report.first_violation is None:
            report.first_violation = {
                'time': now,
                'eq1': check.eq1, 'eq2': check.eq2, 'eq3': check.eq3,
                'witnesses': {
                    'eq1': _sorted_sites(bad1), 'eq2': _sorted_sites(bad2), 'eq3': _sorted_sites(bad3),
                },
                'a': {'gamma1': _sorted_sites(side_a.gamma[1]), 'gamma2': _sorted_sites(side_a.gamma[2])},
                'b': {'gamma1': _sorted_sites(side_b.gamma[1]), 'gamma2': _sorted_sites(side_b.gamma[2])},
            }

    record(since)
    for now, group in _merged(trace_a, trace_b, since, horizon):
        for _, which, event in group:
            y, kind = event.site, event.infection_type
            if which == 0:
                side_a.add(y, kind)
                bad3.discard(y)
                if kind == 1:
                    bad1.discard(y)
                elif y not in core and y not in side_b.gamma[2]:
                    bad2.add(y)
            else:
                side_b.add(y, kind)
                if y not in side_a.owner:
                    bad3.add(y)
                if kind == 2:
                    bad2.discard(y)
                elif y not in core and y not in side_a.gamma[1]:
                    bad1.add(y)
        record(now)
    if not report.passed:
        logger.info("Inclusión violada en t=%.6f", report.first_violation['time'])
    return report


@dataclass
class PathTransferReport:
    starts: list[Site] = field(default_factory=list)
    edges_checked: int = 0
    missing: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.missing

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'starts': _sorted_sites(self.starts),
            'edges_checked': self.edges_checked,
            'missing': self.missing,
        }


def qualifying_starts(z1: SiteSet, z2: SiteSet, z1p: SiteSet) -> SiteSet:
    """∂ζ ∩ ζ_1 ∩ ζ_1': los sitios desde los que se transfieren los caminos de tipo 1."""
    return inner_boundary(frozenset(z1) | frozenset(z2)) & frozenset(z1) & frozenset(z1p)


def check_path_transfer(trace_a: Trace, trace_b: Trace) -> PathTransferReport:
    """Cada arista de Ψ_1^A que cuelga de un sitio de arranque válido debe estar en Ψ_1^B
    a más tardar en el mismo instante."""
    cfg_a, cfg_b = trace_a.config, trace_b.config
    if not lemma1_precondition(cfg_a.xi1, cfg_a.xi2, cfg_b.xi1, cfg_b.xi2):
        raise PreconditionFailed("Los pares de partida no cumplen la hipótesis de inclusión")
    starts = qualifying_starts(cfg_a.xi1, cfg_a.xi2, cfg_b.xi1)
    report = PathTransferReport(starts=sorted(starts))
    horizon = min(trace_a.horizon, trace_b.horizon)
    in_b = {e.site: e for e in trace_b.events if e.time <= horizon}
    root = {x: x for x in cfg_a.xi1}
    for event in trace_a.events:
        if event.time > horizon:
            break
        if event.infection_type != 1:
            continue
        root[event.site] = root[event.parent]
        if root[event.site] not in starts:
            continue
        report.edges_checked += 1
        match = in_b.get(event.site)
        if (match is None or match.infection_type != 1 or match.parent != event.parent
                or match.time > event.time):
            report.missing.append({
                'parent': list(event.parent), 'site': list(event.site), 'time': event.time,
            })
    return report
