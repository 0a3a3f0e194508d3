from collections import deque
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from lattice.exceptions import DimensionMismatch, EmptySiteSet, OverlappingSets
from lattice.geometry import neighbors
from topology.fertility import (
    FERTILE, XI1_STRANGLES_XI2, XI2_STRANGLES_XI1, enclosure, explore,
    fertility_verdict, holes, is_fertile, strangles,
)

VENTANA = [(x, y) for x in range(3) for y in range(3)]


def escapa_por_fuerza_bruta(bloqueador, semillas, radio=6):
    """Recorrido ingenuo dentro de [-radio, radio + 2]^2: escapa si toca el borde."""
    vistos = set(semillas)
    cola = deque(semillas)
    while cola:
        x = cola.popleft()
        if any(c <= -radio or c >= radio + 2 for c in x):
            return True
        for y in neighbors(x):
            if y not in bloqueador and y not in vistos:
                vistos.add(y)
                cola.append(y)
    return False


class TestEstrangulamiento:
    def test_par_canonico_fertil(self, par_canonico):
        xi1, xi2 = par_canonico
        assert is_fertile(xi1, xi2)
        assert fertility_verdict(xi1, xi2) == FERTILE

    def test_anillo_encierra_al_origen(self, anillo):
        assert strangles(anillo, {(0, 0)})
        assert not strangles({(0, 0)}, anillo)
        assert fertility_verdict(anillo, {(0, 0)}) == XI1_STRANGLES_XI2
        assert fertility_verdict({(0, 0)}, anillo) == XI2_STRANGLES_XI1

    def test_certificado_de_escape(self):
        # Prueba que el sitio de escape queda fuera de la caja del bloqueador
        reach = explore({(0, 0)}, {(1, 0)})
        assert reach.escaped
        assert reach.exit_site == (1, 0)

    def test_encierro(self, anillo):
        assert enclosure(anillo, {(0, 0)}) == {(0, 0)}
        with pytest.raises(ValueError):
            enclosure({(5, 5)}, {(0, 0)})

    def test_anillo_grande_con_hueco(self):
        marco = {(x, y) for x in range(-2, 3) for y in range(-2, 3) if max(abs(x), abs(y)) == 2}
        assert strangles(marco, {(0, 0)})
        assert enclosure(marco, {(0, 0)}) == {(x, y) for x in range(-1, 2) for y in range(-1, 2)}

    def test_estrangulamiento_en_dimension_3(self):
        origen = (0, 0, 0)
        cascara = frozenset(neighbors(origen))
        assert strangles(cascara, {origen})
        assert is_fertile({origen}, {(1, 0, 0)})

    def test_errores(self, anillo):
        with pytest.raises(EmptySiteSet):
            strangles(set(), {(0, 0)})
        with pytest.raises(OverlappingSets):
            strangles({(0, 0)}, {(0, 0), (1, 0)})
        with pytest.raises(DimensionMismatch):
            strangles({(0, 0)}, {(1, 0, 0)})

    def test_ventana_exhaustiva(self):
        # Prueba todos los pares disjuntos no vacíos de la ventana 3x3 contra la fuerza bruta
        revisados = 0
        for etiquetas in product((0, 1, 2), repeat=len(VENTANA)):
            xi1 = frozenset(x for x, t in zip(VENTANA, etiquetas) if t == 1)
            xi2 = frozenset(x for x, t in zip(VENTANA, etiquetas) if t == 2)
            if not xi1 or not xi2:
                continue
            assert strangles(xi1, xi2) == (not escapa_por_fuerza_bruta(xi1, xi2))
            assert strangles(xi2, xi1) == (not escapa_por_fuerza_bruta(xi2, xi1))
            revisados += 1
        assert revisados == 3 ** 9 - 2 * 2 ** 9 + 1

    @given(
        st.frozensets(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=20),
        st.frozensets(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=10),
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    )
    def test_monotonia(self, bloqueador, extra, semilla):
        # Prueba que agrandar el bloqueador nunca libera a las semillas
        assume(semilla not in bloqueador and semilla not in extra)
        if strangles(bloqueador, {semilla}):
            assert strangles(bloqueador | extra, {semilla})


class TestHuecos:
    def test_hueco_del_anillo(self, anillo):
        assert holes(anillo) == {(0, 0)}

    def test_sin_huecos(self):
        assert holes({(0, 0), (1, 0), (2, 0)}) == frozenset()
        assert holes(set()) == frozenset()

    def test_bloque_lleno(self):
        bloque = {(x, y) for x in range(3) for y in range(3)}
        assert holes(bloque) == frozenset()
        assert holes(bloque - {(1, 1)}) == {(1, 1)}
