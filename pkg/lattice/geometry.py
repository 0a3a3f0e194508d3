# lattice/geometry.py
"""Geometría de Z^d: distancias, vecinos, fronteras interiores y cajas.

Los sitios son tuplas de enteros y los conjuntos de sitios son ``frozenset``;
todo en este módulo es puro y no guarda estado.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from .exceptions import DimensionMismatch, EmptySiteSet

Site = tuple[int, ...]
SiteSet = frozenset

MIN_DIMENSION = 2


def dimension_of(sites: Iterable[Site]) -> int | None:
    """Dimensión común de los sitios, o None si no hay ninguno."""
    dims = {len(x) for x in sites}
    if len(dims) > 1:
        raise DimensionMismatch(f"Sitios de dimensiones distintas: {sorted(dims)}")
    return dims.pop() if dims else None


def site_set(sites: Iterable[Iterable[int]], d: int | None = None) -> SiteSet:
    """Construye un SiteSet validando que todos los sitios tengan dimensión ``d``."""
    members = frozenset(tuple(int(c) for c in x) for x in sites)
    found = dimension_of(members)
    if d is not None and found is not None and found != d:
        raise DimensionMismatch(f"Se esperaba dimensión {d}, se recibió {found}")
    return members


def l1_distance(x: Site, y: Site) -> int:
    if len(x) != len(y):
        raise DimensionMismatch(f"{x} y {y} no tienen la misma dimensión")
    return sum(abs(a - b) for a, b in zip(x, y))


def linf_norm(x: Site) -> int:
    return max((abs(c) for c in x), default=0)


@lru_cache(maxsize=None)
def unit_offsets(d: int) -> tuple[Site, ...]:
    """Los 2d desplazamientos unitarios en orden lexicográfico.

    El índice de un desplazamiento en esta tupla es el índice de dirección
    que usa la codificación de aristas del módulo de aleatoriedad.
    """
    offsets = []
    for i in range(d):
        for sign in (-1, 1):
            step = [0] * d
            step[i] = sign
            offsets.append(tuple(step))
    return tuple(sorted(offsets))


def neighbors(x: Site) -> list[Site]:
    return [tuple(a + b for a, b in zip(x, step)) for step in unit_offsets(len(x))]


def direction_index(x: Site, y: Site) -> int:
    step = tuple(b - a for a, b in zip(x, y))
    try:
        return unit_offsets(len(x)).index(step)
    except ValueError:
        raise DimensionMismatch(f"{x} y {y} no son vecinos más cercanos") from None


def inner_boundary(eta: Iterable[Site]) -> SiteSet:
    members = eta if isinstance(eta, (set, frozenset)) else frozenset(eta)
    return frozenset(
        x for x in members if any(y not in members for y in neighbors(x))
    )


def interior(eta: Iterable[Site]) -> SiteSet:
    members = frozenset(eta)
    return members - inner_boundary(members)


@dataclass(frozen=True)
class Box:
    lo: Site
    hi: Site

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("Las esquinas de la caja tienen dimensiones distintas")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"Caja vacía: lo={self.lo} hi={self.hi}")

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    def __len__(self) -> int:
        size = 1
        for side in self.shape:
            size *= side
        return size

    def __contains__(self, x: Site) -> bool:
        return box_contains(self, x)

    def __iter__(self) -> Iterator[Site]:
        return product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


def bounding_box(eta: Iterable[Site]) -> Box:
    members = list(eta)
    if not members:
        raise EmptySiteSet("La caja mínima de un conjunto vacío no está definida")
    dimension_of(members)
    lo = tuple(min(col) for col in zip(*members))
    hi = tuple(max(col) for col in zip(*members))
    return Box(lo, hi)


def enlarge(box: Box, k: int) -> Box:
    if k < 0:
        raise ValueError("k debe ser no negativo")
    return Box(tuple(a - k for a in box.lo), tuple(b + k for b in box.hi))


def box_sites(box: Box) -> SiteSet:
    return frozenset(iter(box))


def box_contains(box: Box, x: Site) -> bool:
    if len(x) != box.dimension:
        raise DimensionMismatch(f"{x} no tiene dimensión {box.dimension}")
    return all(a <= c <= b for a, c, b in zip(box.lo, x, box.hi))
