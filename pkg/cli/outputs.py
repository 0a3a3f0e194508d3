# cli/outputs.py
"""Formatos de salida: trazas y reportes en JSON, rejillas de texto y CSV.

Todo se serializa de forma determinista (orden de claves fijo, flotantes con
``repr``), así que dos invocaciones iguales producen los mismos bytes.
"""
import io
import json
from itertools import product
from pathlib import Path

from engine.growth import Trace
from lattice.geometry import bounding_box
from randomness.streams import NEVER

EMPTY, TYPE1, TYPE2 = '.', '1', '2'


def finite_or_never(value: float):
    return 'never' if value == NEVER else value


def to_json(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + '\n'


def trace_document(trace: Trace, inputs: dict, reduction: dict, version: str) -> dict:
    return {
        'header': {
            'artifact': 'richardson-trace',
            'version': version,
            'inputs': inputs,
            'reduction': reduction,
            'config': trace.config.to_dict(),
            'config_digest': trace.config.digest(),
            'outcome': trace.outcome,
            'horizon': finite_or_never(trace.horizon),
            'n_events': len(trace.events),
        },
        'events': [e.to_dict() for e in trace.events],
    }


def _grid_2d(owner: dict, lo, hi, tail=()) -> list[str]:
    rows = []
    for y in range(hi[1], lo[1] - 1, -1):
        rows.append(''.join(
            {1: TYPE1, 2: TYPE2}.get(owner.get((x, y) + tail), EMPTY)
            for x in range(lo[0], hi[0] + 1)
        ))
    return rows


def snapshot_grid(gamma1, gamma2) -> str:
    """Rejilla sobre la caja mínima de Γ_1 ∪ Γ_2.

    Filas de arriba abajo según la segunda coordenada decreciente, columnas
    según la primera. En d ≥ 3 se escribe un corte por cada valor de las
    coordenadas restantes, precedido de una línea ``# (x_3, ..., x_d)``.
    """
    owner = {x: 1 for x in gamma1}
    owner.update((x, 2) for x in gamma2)
    if not owner:
        return ''
    box = bounding_box(owner)
    if box.dimension == 2:
        return '\n'.join(_grid_2d(owner, box.lo, box.hi)) + '\n'
    lines = []
    ranges = [range(a, b + 1) for a, b in zip(box.lo[2:], box.hi[2:])]
    for tail in product(*ranges):
        lines.append('# (' + ','.join(str(c) for c in tail) + ')')
        lines.extend(_grid_2d(owner, box.lo, box.hi, tail))
    return '\n'.join(lines) + '\n'


def frame_to_csv(frame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator='\r\n')
    return buffer.getvalue()


def write_text(path: str | Path, text: str) -> None:
    # newline='' conserva los \r\n del CSV
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(text)
