# randomness/streams.py
"""Procesos de Poisson por arista dirigida, materializados de forma perezosa.

Cada arista dirigida (x, y) tiene su propio generador Philox cuya clave es un
resumen BLAKE2b-128 de la codificación canónica de la arista, con la semilla
maestra como clave del resumen. La secuencia de ocurrencias de una arista es
por tanto una función pura de (semilla, arista) y no depende del orden de las
consultas: dos procesos que comparten una Realization ven exactamente los
mismos tiempos y marcas.

Codificación canónica: enteros de 64 bits con signo, little endian, en el
orden (etiqueta de flujo, d, x_1, ..., x_d, índice de dirección). La etiqueta
0 es el flujo compartido; la 1 es el segundo flujo que usa el tipo 2 en la
construcción independiente.
"""
import hashlib
import math
import struct
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass

import numpy as np

from lattice.exceptions import InvalidConstruction, InvalidRate
from lattice.geometry import Site, direction_index, l1_distance, neighbors

from .seeds import validate_seed

NEVER = math.inf
SHARED = 'shared'
INDEPENDENT = 'independent'
CONSTRUCTIONS = (SHARED, INDEPENDENT)
DEFAULT_BLOCK = 32

SHARED_TAG = 0
TYPE2_TAG = 1

_UNIT = 2.0 ** -53
_SHIFT = np.uint64(11)
_MASK64 = 2 ** 64 - 1
_EMPTY_BUFFER = [0, 0, 0, 0]


def check_rate(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidRate(f"La tasa debe estar en [0, 1]: {lam}")
    return lam


@dataclass(frozen=True)
class DirectedEdge:
    source: Site
    target: Site

    def __post_init__(self):
        if l1_distance(self.source, self.target) != 1:
            raise ValueError(f"({self.source}, {self.target}) no es una arista de vecinos")

    @property
    def direction(self) -> int:
        return direction_index(self.source, self.target)

    def encode(self, tag: int = SHARED_TAG) -> bytes:
        return encode_edge(self.source, self.target, tag)

    def reversed(self) -> 'DirectedEdge':
        return DirectedEdge(self.target, self.source)


def encode_edge(source: Site, target: Site, tag: int = SHARED_TAG) -> bytes:
    d = len(source)
    return struct.pack(f'<{d + 3}q', tag, d, *source, direction_index(source, target))


@dataclass(frozen=True)
class Occurrence:
    time: float
    mark: float


class EdgeStream:
    """Prefijo materializado del proceso de Poisson de una arista.

    Los tiempos entre ocurrencias son Exp(1) y cada ocurrencia lleva una marca
    uniforme en [0, 1): la ocurrencia sobrevive al adelgazamiento de tasa λ
    si su marca es menor que λ. La ocurrencia k sale de las salidas 2k y 2k + 1
    de Philox con la clave de la arista, así que ni el tamaño del bloque ni el
    orden de las consultas cambian lo generado.

    El generador se comparte entre todos los flujos de una Realization: cada
    bloque fija contador y clave antes de extraer, sin construir un generador
    por arista.
    """
    __slots__ = ('key', 'times', 'marks', '_words', '_bitgen', '_block')

    def __init__(self, key: int, block: int = DEFAULT_BLOCK, bitgen: np.random.Philox | None = None):
        self.key = key
        self.times: list[float] = []
        self.marks: list[float] = []
        self._words = [key & _MASK64, key >> 64]
        self._bitgen = bitgen if bitgen is not None else np.random.Philox()
        # cuatro salidas por contador: el bloque se redondea a par
        self._block = block + block % 2

    def __len__(self) -> int:
        return len(self.times)

    def _extend(self) -> None:
        self._bitgen.state = {
            'bit_generator': 'Philox',
            'state': {'counter': [len(self.times) // 2, 0, 0, 0], 'key': self._words},
            'buffer': _EMPTY_BUFFER,
            'buffer_pos': 4,
            'has_uint32': 0,
            'uinteger': 0,
        }
        raw = self._bitgen.random_raw(2 * self._block)
        # (k + 1/2) 2^-53 queda en (0, 1): los saltos son estrictamente positivos
        uniforms = ((raw >> _SHIFT) + 0.5) * _UNIT
        # suma secuencial desde el último tiempo, como en un solo bloque largo
        steps = np.empty(self._block + 1)
        steps[0] = self.times[-1] if self.times else 0.0
        steps[1:] = -np.log(uniforms[0::2])
        self.times.extend(np.cumsum(steps)[1:].tolist())
        self.marks.extend(uniforms[1::2].tolist())

    def occurrence(self, index: int) -> Occurrence:
        while index >= len(self.times):
            self._extend()
        return Occurrence(self.times[index], self.marks[index])

    def first_after(self, after: float) -> int:
        if after < 0:
            raise ValueError(f"El instante debe ser no negativo: {after}")
        while not self.times or self.times[-1] <= after:
            self._extend()
        return bisect_right(self.times, after)

    def next_occurrence(self, after: float) -> Occurrence:
        return self.occurrence(self.first_after(after))

    def next_accepted(self, after: float, lam: float) -> float:
        if lam <= 0.0:
            return NEVER
        index = self.first_after(after)
        while True:
            if index >= len(self.times):
                self._extend()
            if self.marks[index] < lam:
                return self.times[index]
            index += 1


class Realization:
    """Una realización completa de los procesos P^(x,y), compartible entre procesos.

    La caché de flujos se libera por sitio: cuando todos los procesos
    enganchados han infectado ``y``, las aristas que entran en ``y`` ya no
    pueden causar infecciones y se descartan. Volver a consultarlas las
    regenera idénticas.
    """

    def __init__(self, master_seed: int, construction: str = SHARED, block: int = DEFAULT_BLOCK):
        if construction not in CONSTRUCTIONS:
            raise InvalidConstruction(f"Construcción desconocida: {construction}")
        if block < 1:
            raise ValueError("El bloque de materialización debe ser positivo")
        self.master_seed = validate_seed(master_seed)
        self.construction = construction
        self.block = block
        self._hash_key = self.master_seed.to_bytes(8, 'little')
        self._bitgen = np.random.Philox()
        self._streams: dict[tuple[Site, Site, int], EdgeStream] = {}
        self._attached = 0
        self._retired: Counter = Counter()

    def __repr__(self):
        return f"Realization(seed={self.master_seed}, construction={self.construction!r})"

    def __len__(self) -> int:
        return len(self._streams)

    def key_for(self, source: Site, target: Site, tag: int = SHARED_TAG) -> int:
        digest = hashlib.blake2b(encode_edge(source, target, tag), digest_size=16, key=self._hash_key)
        return int.from_bytes(digest.digest(), 'little')

    def stream(self, source: Site, target: Site, tag: int = SHARED_TAG) -> EdgeStream:
        cache_key = (source, target, tag)
        stream = self._streams.get(cache_key)
        if stream is None:
            stream = EdgeStream(self.key_for(source, target, tag), self.block, self._bitgen)
            self._streams[cache_key] = stream
        return stream

    def type2_tag(self) -> int:
        return TYPE2_TAG if self.construction == INDEPENDENT else SHARED_TAG

    def candidate(self, source: Site, target: Site, infection_type: int, lam: float, after: float) -> float:
        """Primer instante > ``after`` en que ``source`` puede contagiar su tipo a ``target``."""
        if infection_type == 1:
            return self.stream(source, target).next_occurrence(after).time
        return self.stream(source, target, self.type2_tag()).next_accepted(after, lam)

    @property
    def attached(self) -> int:
        return self._attached

    def attach(self) -> None:
        self._attached += 1

    def detach(self) -> None:
        self._attached = max(0, self._attached - 1)

    def retire(self, site: Site) -> None:
        count = self._retired[site] + 1
        if count < self._attached:
            self._retired[site] = count
            return
        self._retired.pop(site, None)
        for x in neighbors(site):
            self._streams.pop((x, site, SHARED_TAG), None)
            self._streams.pop((x, site, TYPE2_TAG), None)


def edge_stream(real: Realization, e: DirectedEdge) -> EdgeStream:
    return real.stream(e.source, e.target)


def next_occurrence(real: Realization, e: DirectedEdge, after: float) -> Occurrence:
    return edge_stream(real, e).next_occurrence(after)


def next_accepted(real: Realization, e: DirectedEdge, after: float, lam: float) -> float:
    return edge_stream(real, e).next_accepted(after, check_rate(lam))
