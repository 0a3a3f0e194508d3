import math

import numpy as np
import pytest
from scipy import stats

from engine.growth import (
    COEXIST, EVENT_CAP, RADIUS_REACHED, TYPE2_DEAD, ModelConfig, StopCondition,
    candidate_times, init, reduce_rates, run, simulate, snapshot, step,
    type_active,
)
from lattice.exceptions import (
    DimensionMismatch, EmptySiteSet, InvalidRate, InvalidStopCondition,
    NoEligibleEdge, OverlappingSets,
)
from lattice.geometry import l1_distance, neighbors
from randomness.seeds import replica_seed
from randomness.streams import INDEPENDENT, NEVER, SHARED, Realization

CANONICO = ({(0, 0)}, {(1, 0)})
MARCO = frozenset((x, y) for x in range(-2, 3) for y in range(-2, 3) if max(abs(x), abs(y)) == 2)
ENCIERRO = frozenset((x, y) for x in range(-1, 2) for y in range(-1, 2))


def oraculo_gillespie(config, n_eventos, rng):
    """Simulación sin memoria: en cada paso una carrera exponencial nueva entre aristas."""
    dueño = {x: 1 for x in config.xi1}
    dueño.update((x, 2) for x in config.xi2)
    reloj = 0.0
    for _ in range(n_eventos):
        aristas = [(x, y) for x in sorted(dueño) for y in neighbors(x) if y not in dueño]
        tasas = np.array([1.0 if dueño[x] == 1 else config.lam for x, _ in aristas])
        total = tasas.sum()
        reloj += rng.exponential(1.0 / total)
        x, y = aristas[rng.choice(len(aristas), p=tasas / total)]
        dueño[y] = dueño[x]
    return reloj


class TestConfiguracion:
    def test_configuracion_valida(self):
        config = ModelConfig(2, 0.5, *CANONICO)
        assert config.union == {(0, 0), (1, 0)}
        assert config.digest() == ModelConfig(2, 0.5, *CANONICO).digest()
        assert config.digest() != ModelConfig(2, 0.6, *CANONICO).digest()

    def test_errores(self):
        with pytest.raises(OverlappingSets):
            ModelConfig(2, 0.5, {(0, 0)}, {(0, 0)})
        with pytest.raises(EmptySiteSet):
            ModelConfig(2, 0.5, set(), set())
        with pytest.raises(DimensionMismatch):
            ModelConfig(3, 0.5, *CANONICO)
        with pytest.raises(DimensionMismatch):
            ModelConfig(1, 0.5, {(0,)}, set())
        with pytest.raises(InvalidRate):
            ModelConfig(2, 1.2, *CANONICO)

    def test_condicion_de_parada(self):
        with pytest.raises(InvalidStopCondition):
            StopCondition()
        with pytest.raises(InvalidStopCondition):
            StopCondition(radius=0)
        with pytest.raises(InvalidStopCondition):
            StopCondition(max_events=10, stop_on_type_death={3})


class TestReduccionDeTasas:
    def test_tipo_uno_mas_rapido(self):
        r = reduce_rates(2, 1)
        assert (r.lam, r.scale, r.relabel) == (0.5, 2.0, False)

    def test_intercambio_de_etiquetas(self):
        r = reduce_rates(1, 3)
        assert r.lam == pytest.approx(1 / 3)
        assert r.scale == 3.0
        assert r.relabel

    def test_tasas_nulas(self):
        with pytest.raises(InvalidRate):
            reduce_rates(0, 0)


class TestDinamica:
    @pytest.fixture
    def estado(self):
        return init(ModelConfig(2, 0.6, *CANONICO), Realization(1234))

    def test_agenda_inicial(self, estado):
        assert set(estado.agenda) == {
            (x, y) for x in [(0, 0), (1, 0)] for y in neighbors(x) if y not in {(0, 0), (1, 0)}
        }
        assert type_active(estado, 1) and type_active(estado, 2)

    def test_paso_toma_el_minimo(self, estado):
        tiempos = candidate_times(estado)
        evento = step(estado)
        assert evento.time == tiempos.next_time
        assert evento.infection_type == (1 if tiempos.t1 <= tiempos.t2 else 2)

    def test_agenda_exacta(self, estado):
        # Prueba que cada arista pendiente guarda la primera ocurrencia posterior a su apertura
        for _ in range(300):
            step(estado)
        infectados = set(estado.owner)
        esperadas = {(x, y) for x in infectados for y in neighbors(x) if y not in infectados}
        assert set(estado.agenda) == esperadas
        for (x, y), cuando in estado.agenda.items():
            apertura = estado.forest.links[x].time
            tipo = estado.owner[x]
            assert cuando == estado.realization.candidate(x, y, tipo, 0.6, apertura)
            assert cuando > estado.clock or cuando == NEVER

    def test_ninguna_ocurrencia_saltada(self, estado):
        # Prueba que cada evento usa la primera ocurrencia de su arista tras infectarse el padre
        trace = run(estado, StopCondition(max_events=300))
        anterior = 0.0
        for evento in trace.events:
            padre = estado.forest.links[evento.parent]
            assert l1_distance(evento.parent, evento.site) == 1
            assert padre.infection_type == evento.infection_type
            esperado = estado.realization.candidate(
                evento.parent, evento.site, evento.infection_type, 0.6, padre.time)
            assert evento.time == esperado
            assert evento.time >= anterior
            anterior = evento.time

    def test_cierre_suelta_la_realizacion(self):
        real = Realization(1234)
        estado = init(ModelConfig(2, 0.6, *CANONICO), real)
        assert real.attached == 1
        estado.close()
        assert real.attached == 0

    def test_simular_cierra_el_estado(self):
        trace = simulate(ModelConfig(2, 0.6, *CANONICO), 5, StopCondition(max_events=20))
        assert trace.final.realization.attached == 0

    def test_sin_aristas(self):
        estado = init(ModelConfig(2, 0.0, set(), {(0, 0)}), Realization(1))
        assert not type_active(estado, 2)
        with pytest.raises(NoEligibleEdge):
            step(estado)


class TestParada:
    def test_tope_de_eventos(self):
        trace = simulate(ModelConfig(2, 0.5, *CANONICO), 9, StopCondition(max_events=50))
        assert trace.outcome == EVENT_CAP
        assert len(trace.events) == 50
        assert [e.n for e in trace.events] == list(range(1, 51))

    def test_radio_con_un_tipo(self):
        trace = simulate(ModelConfig(2, 1.0, {(0, 0)}, set()), 9, StopCondition(radius=4))
        assert trace.outcome == RADIUS_REACHED
        assert max(max(abs(c) for c in e.site) for e in trace.events) == 4

    def test_coexistencia(self):
        config = ModelConfig(2, 1.0, *CANONICO)
        stop = StopCondition(radius=3, stop_on_type_death={1, 2})
        resultados = {simulate(config, replica_seed(5, i), stop).outcome for i in range(40)}
        assert COEXIST in resultados

    def test_tipo_estrangulado_muere(self, anillo):
        trace = simulate(ModelConfig(2, 1.0, anillo, {(0, 0)}), 3,
                         StopCondition(radius=5, stop_on_type_death={1, 2}))
        assert trace.outcome == TYPE2_DEAD
        assert trace.events == []

    def test_radio_solo_con_tipo_muerto(self, anillo):
        # Prueba que el radio basta para parar aunque uno de los tipos no pueda crecer
        trace = simulate(ModelConfig(2, 1.0, anillo, {(0, 0)}), 3, StopCondition(radius=5))
        assert trace.outcome == TYPE2_DEAD
        assert trace.events == []

    def test_radio_solo_con_muerte_a_mitad_de_corrida(self):
        config = ModelConfig(2, 1.0, MARCO, {(0, 0)})
        for i in range(20):
            trace = simulate(config, replica_seed(41, i), StopCondition(radius=6))
            assert trace.outcome == TYPE2_DEAD
            assert trace.final.gamma2 <= ENCIERRO
            assert not type_active(trace.final, 2)

    def test_radio_con_lambda_cero(self):
        trace = simulate(ModelConfig(2, 0.0, *CANONICO), 3, StopCondition(radius=4))
        assert trace.outcome == TYPE2_DEAD

    def test_lambda_cero(self):
        trace = simulate(ModelConfig(2, 0.0, *CANONICO), 3, StopCondition(max_events=100))
        assert all(e.infection_type == 1 for e in trace.events)


class TestReproducibilidad:
    def test_misma_semilla(self):
        config = ModelConfig(2, 0.7, *CANONICO)
        stop = StopCondition(max_events=500)
        assert simulate(config, 17, stop).same_events(simulate(config, 17, stop))
        assert not simulate(config, 17, stop).same_events(simulate(config, 18, stop))

    def test_bloque_no_cambia_la_traza(self):
        config = ModelConfig(2, 0.7, *CANONICO)
        stop = StopCondition(max_events=500)
        assert simulate(config, 17, stop, block=1).same_events(simulate(config, 17, stop, block=64))

    def test_instantanea(self):
        trace = simulate(ModelConfig(2, 0.7, *CANONICO), 17, StopCondition(max_events=100))
        assert snapshot(trace, 0.0) == (frozenset({(0, 0)}), frozenset({(1, 0)}))
        medio = trace.events[49]
        gamma1, gamma2 = snapshot(trace, medio.time)
        assert len(gamma1) + len(gamma2) == 2 + 50
        final1, final2 = snapshot(trace, NEVER)
        assert final1 == trace.final.gamma1 and final2 == trace.final.gamma2

    def test_ciego_al_tipo_con_lambda_uno(self):
        # Prueba que a λ = 1 la corrida de dos tipos y la de un tipo recorren los mismos sitios
        stop = StopCondition(max_events=10_000)
        dos = simulate(ModelConfig(2, 1.0, {(0, 0)}, {(1, 0)}), 2003, stop)
        uno = simulate(ModelConfig(2, 1.0, {(0, 0), (1, 0)}, set()), 2003, stop)
        assert dos.times_and_sites() == uno.times_and_sites()


@pytest.mark.slow
class TestDistribuciones:
    N = 100_000

    def _primer_tipo(self, lam, construction):
        config = ModelConfig(2, lam, *CANONICO)
        primeros = 0
        for i in range(self.N):
            tiempos = candidate_times(init(config, Realization(replica_seed(61, i), construction)))
            primeros += tiempos.t1 <= tiempos.t2
        return primeros / self.N

    def test_carrera_compartida(self):
        # Prueba que el primer evento es de tipo 1 con probabilidad 1/(1+λ)
        p = 1 / 1.5
        assert abs(self._primer_tipo(0.5, SHARED) - p) <= 3 * math.sqrt(p * (1 - p) / self.N)

    def test_carrera_independiente(self):
        p = 1 / 1.5
        assert abs(self._primer_tipo(0.5, INDEPENDENT) - p) <= 3 * math.sqrt(p * (1 - p) / self.N)

    def test_primer_instante(self):
        # Prueba que desde un sitio en d = 2 el primer evento es Exp(4)
        config = ModelConfig(2, 1.0, {(0, 0)}, set())
        tiempos = [candidate_times(init(config, Realization(replica_seed(62, i)))).next_time
                   for i in range(self.N)]
        assert abs(np.mean(tiempos) - 0.25) <= 3 * 0.25 / math.sqrt(self.N)

    def test_oraculo_gillespie(self):
        # Prueba que T_5 del motor y del oráculo sin memoria tienen la misma ley
        config = ModelConfig(2, 0.7, *CANONICO)
        stop = StopCondition(max_events=5)
        n = 10_000
        motor = [simulate(config, replica_seed(63, i), stop).events[-1].time for i in range(n)]
        rng = np.random.default_rng(64)
        oraculo = [oraculo_gillespie(config, 5, rng) for _ in range(n)]
        assert stats.ks_2samp(motor, oraculo).pvalue > 0.001
