# cli/parsing.py
"""Lectura de los formatos de texto que aceptan los comandos.

Conjuntos de sitios: tuplas separadas por ``;``, por ejemplo ``(0,0);(2,1)``.
Rejillas de λ: ``lo:hi:step``. Calendarios de radios: ``10,20,30``.
"""
import json
import math
import re
from pathlib import Path

from lattice.geometry import SiteSet, site_set

_TUPLE = re.compile(r'^\(\s*-?\d+(\s*,\s*-?\d+)*\s*\)$')


def parse_site_set(text: str, d: int | None = None) -> SiteSet:
    text = (text or '').strip()
    if not text:
        return frozenset()
    sites = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not _TUPLE.match(chunk):
            raise ValueError(f"Sitio mal formado: {chunk!r}")
        sites.append(tuple(int(c) for c in chunk[1:-1].split(',')))
    return site_set(sites, d)


def format_site_set(sites) -> str:
    return ';'.join('(' + ','.join(str(c) for c in x) + ')' for x in sorted(sites))


def parse_lambda_grid(text: str) -> list[float]:
    parts = text.split(':')
    if len(parts) != 3:
        raise ValueError(f"La rejilla debe tener la forma lo:hi:step, no {text!r}")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise ValueError("La rejilla necesita step > 0 y hi >= lo")
    count = math.floor((hi - lo) / step + 1e-9) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def parse_radius_schedule(text: str) -> list[int]:
    radii = []
    for chunk in text.split(','):
        chunk = chunk.strip()
        if not chunk.isdigit():
            raise ValueError(f"Radio inválido: {chunk!r}")
        radii.append(int(chunk))
    if not radii:
        raise ValueError("El calendario de radios está vacío")
    return radii


def _catalog_sites(value, d: int | None) -> SiteSet:
    if isinstance(value, str):
        return parse_site_set(value, d)
    return site_set(value, d)


def load_pairs(path: str | Path, d: int | None = None) -> list[tuple[str, SiteSet, SiteSet]]:
    """Lee un catálogo JSON ``[{"label", "init1", "init2"}, ...]``.

    Los conjuntos pueden venir como texto (``"(0,0);(1,0)"``) o como listas de
    coordenadas. Los errores de lectura del archivo se propagan como OSError.
    """
    with open(path, encoding='utf-8') as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not raw:
        raise ValueError("El catálogo de pares debe ser una lista no vacía")
    pairs = []
    for k, entry in enumerate(raw):
        try:
            label = str(entry.get('label', f'pair-{k}'))
            pairs.append((label, _catalog_sites(entry['init1'], d), _catalog_sites(entry['init2'], d)))
        except (AttributeError, KeyError, TypeError) as exc:
            raise ValueError(f"Entrada {k} del catálogo mal formada") from exc
    return pairs
