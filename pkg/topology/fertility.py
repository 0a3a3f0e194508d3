# topology/fertility.py
"""Estrangulamiento y fertilidad de pares iniciales.

``strangles(b, s)`` explora Z^d ∖ b en anchura desde ``s``. Basta salir de la
caja mínima de ``b``: desde un sitio con una coordenada fuera de la caja se
puede marchar en línea recta hasta el infinito sin tocar ``b``. Como la
exploración nunca sale de la caja sin terminar, siempre acaba.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from lattice.exceptions import EmptySiteSet, OverlappingSets
from lattice.geometry import (
    Box, Site, SiteSet, bounding_box, box_contains, dimension_of, enlarge,
    neighbors,
)

logger = logging.getLogger(__name__)

FERTILE = 'fertile'
XI1_STRANGLES_XI2 = 'xi1-strangles-xi2'
XI2_STRANGLES_XI1 = 'xi2-strangles-xi1'
MUTUAL = 'mutual'


@dataclass(frozen=True)
class Reachability:
    """Certificado de la exploración: sitios visitados en orden y, si hubo, el de escape."""
    escaped: bool
    visited: tuple[Site, ...]
    exit_site: Site | None

    @property
    def strangled(self) -> bool:
        return not self.escaped


def _check_pair(blocker: SiteSet, seeds: SiteSet) -> None:
    if not blocker or not seeds:
        raise EmptySiteSet("Ambos conjuntos deben ser no vacíos")
    dimension_of(set(blocker) | set(seeds))
    common = blocker & seeds
    if common:
        raise OverlappingSets(f"Los conjuntos se solapan en {sorted(common)}")


def explore(blocker: Iterable[Site], seeds: Iterable[Site], box: Box | None = None) -> Reachability:
    """Recorre Z^d ∖ blocker desde ``seeds`` hasta salir de ``box``.

    Por defecto ``box`` es la caja mínima del bloqueador, que es el criterio
    exacto; una caja mayor da la misma respuesta con más trabajo.
    """
    blocker = frozenset(blocker)
    seeds = frozenset(seeds)
    _check_pair(blocker, seeds)
    box = box or bounding_box(blocker)

    visited = []
    seen = set()
    queue = deque()
    for x in sorted(seeds):
        seen.add(x)
        visited.append(x)
        if not box_contains(box, x):
            return Reachability(True, tuple(visited), x)
        queue.append(x)

    while queue:
        x = queue.popleft()
        for y in neighbors(x):
            if y in blocker or y in seen:
                continue
            seen.add(y)
            visited.append(y)
            if not box_contains(box, y):
                return Reachability(True, tuple(visited), y)
            queue.append(y)
    return Reachability(False, tuple(visited), None)


def strangles(blocker: Iterable[Site], seeds: Iterable[Site]) -> bool:
    return explore(blocker, seeds).strangled


def is_fertile(xi1: Iterable[Site], xi2: Iterable[Site]) -> bool:
    xi1, xi2 = frozenset(xi1), frozenset(xi2)
    return not strangles(xi1, xi2) and not strangles(xi2, xi1)


def fertility_verdict(xi1: Iterable[Site], xi2: Iterable[Site]) -> str:
    xi1, xi2 = frozenset(xi1), frozenset(xi2)
    one_wins = strangles(xi1, xi2)
    two_wins = strangles(xi2, xi1)
    logger.debug("Veredicto de fertilidad: %s/%s", one_wins, two_wins)
    if one_wins and two_wins:
        return MUTUAL
    if one_wins:
        return XI1_STRANGLES_XI2
    if two_wins:
        return XI2_STRANGLES_XI1
    return FERTILE


def enclosure(blocker: Iterable[Site], seeds: Iterable[Site]) -> SiteSet:
    """Región alcanzable desde ``seeds`` cuando el bloqueador la encierra."""
    reach = explore(blocker, seeds)
    if reach.escaped:
        raise ValueError("Los sitios semilla no están encerrados por el bloqueador")
    return frozenset(reach.visited)


def holes(occupied: Iterable[Site]) -> SiteSet:
    """Sitios libres rodeados por completo por ``occupied``.

    Un único recorrido desde el marco de la caja ampliada en 1 marca todo lo
    que puede escapar; lo libre de la caja que no se alcanzó son los huecos.
    """
    occupied = frozenset(occupied)
    if not occupied:
        return frozenset()
    box = bounding_box(occupied)
    frame = enlarge(box, 1)
    start = next(iter(x for x in frame if not box_contains(box, x)))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in neighbors(x):
            if y in seen or y in occupied or not box_contains(frame, y):
                continue
            seen.add(y)
            queue.append(y)
    return frozenset(x for x in box if x not in occupied and x not in seen)
