# forest/graph.py
"""Grafos de infección Ψ_1 y Ψ_2 guardados como punteros al padre.

Cada sitio infectado apunta al sitio que lo contagió; las raíces son los
sitios infectados al inicio. Todas las consultas caminan hacia la raíz.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx

from lattice.exceptions import ForestError
from lattice.geometry import Site, l1_distance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Link:
    parent: Site | None
    time: float
    infection_type: int


class InfectionForest:

    def __init__(self, roots: dict[Site, int] | None = None):
        self.links: dict[Site, Link] = {}
        for site, infection_type in (roots or {}).items():
            self.links[site] = Link(None, 0.0, infection_type)
        self.roots = frozenset(self.links)

    def __contains__(self, site: Site) -> bool:
        return site in self.links

    def __len__(self) -> int:
        return len(self.links)

    def record(self, event) -> None:
        if event.site in self.links:
            raise ForestError(f"{event.site} ya estaba infectado")
        parent = self.links.get(event.parent)
        if parent is None:
            raise ForestError(f"El padre {event.parent} de {event.site} no está infectado")
        if parent.infection_type != event.infection_type:
            raise ForestError(
                f"{event.site} (tipo {event.infection_type}) no puede colgar de "
                f"{event.parent} (tipo {parent.infection_type})"
            )
        self.links[event.site] = Link(event.parent, event.time, event.infection_type)

    def type_of(self, site: Site) -> int:
        return self.links[site].infection_type

    def vertices(self, infection_type: int | None = None) -> set[Site]:
        return {x for x, link in self.links.items()
                if infection_type is None or link.infection_type == infection_type}

    def edges(self, infection_type: int | None = None) -> Iterator[tuple[Site, Site]]:
        for site, link in self.links.items():
            if link.parent is None:
                continue
            if infection_type is None or link.infection_type == infection_type:
                yield link.parent, site

    def path_to_seed(self, x: Site) -> list[Site]:
        if x not in self.links:
            raise ForestError(f"{x} no está infectado")
        path = [x]
        # el límite evita bucles infinitos si alguien corrompe los enlaces
        for _ in range(len(self.links)):
            parent = self.links[path[-1]].parent
            if parent is None:
                return path
            path.append(parent)
        raise ForestError(f"El camino desde {x} no llega a ninguna raíz")

    def root_of(self, x: Site) -> Site:
        return self.path_to_seed(x)[-1]

    def to_graph(self, infection_type: int | None = None) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices(infection_type))
        graph.add_edges_from(self.edges(infection_type))
        return graph


@dataclass
class ForestReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def record(forest: InfectionForest, event) -> None:
    forest.record(event)


def path_to_seed(forest: InfectionForest, x: Site) -> list[Site]:
    return forest.path_to_seed(x)


def validate_forest(forest: InfectionForest, state) -> ForestReport:
    """Comprueba el bosque contra (Γ_1, Γ_2) de ``state``, un GrowthState o algo con ``gamma1`` y ``gamma2``."""
    return check_forest(forest, state.gamma1, state.gamma2)


def check_forest(forest: InfectionForest, gamma1, gamma2) -> ForestReport:
    report = ForestReport()
    for infection_type, gamma in ((1, gamma1), (2, gamma2)):
        graph = forest.to_graph(infection_type)
        if set(graph.nodes) != set(gamma):
            report.problems.append(f"Los vértices de Ψ_{infection_type} no coinciden con Γ_{infection_type}")
        if graph.number_of_nodes() and not nx.is_forest(graph):
            report.problems.append(f"Ψ_{infection_type} contiene un ciclo")
            continue
        for component in nx.connected_components(graph):
            roots = len(component & forest.roots)
            edges = graph.subgraph(component).number_of_edges()
            if edges != len(component) - roots:
                report.problems.append(
                    f"Componente de Ψ_{infection_type} con {edges} aristas, "
                    f"{len(component)} vértices y {roots} raíces"
                )
    for parent, child in forest.edges():
        if parent not in forest.links:
            report.problems.append(f"{child} cuelga de {parent}, que no está infectado")
            continue
        if l1_distance(parent, child) != 1:
            report.problems.append(f"({parent}, {child}) no son vecinos más cercanos")
        if forest.links[parent].time >= forest.links[child].time:
            report.problems.append(f"{parent} no se infectó antes que {child}")
    if report.problems:
        logger.debug("Bosque inválido: %s", report.problems)
    return report
