import io

import pytest

from engine.growth import COEXIST, TYPE2_DEAD, ModelConfig, StopCondition, simulate
from experiments.models import EstimateRecord
from experiments.montecarlo import (
    CSV_COLUMNS, FERTILE_PAIRS, RING_STRANGLED_PAIR, coexistence_schedule,
    coexistence_trial, estimate, estimate_schedule, results_frame, sweep,
    wilson_interval, write_csv,
)
from lattice.exceptions import EmptySiteSet, InfertilePair
from randomness.seeds import replica_seed
from topology.fertility import is_fertile, strangles

CANONICO = ModelConfig(2, 1.0, {(0, 0)}, {(1, 0)})
MARCO = frozenset((x, y) for x in range(-2, 3) for y in range(-2, 3) if max(abs(x), abs(y)) == 2)
ENCIERRO = frozenset((x, y) for x in range(-1, 2) for y in range(-1, 2))


class TestWilson:
    def test_valor_conocido(self):
        lo, hi = wilson_interval(5, 10)
        assert lo == pytest.approx(0.2366, abs=1e-3)
        assert hi == pytest.approx(0.7634, abs=1e-3)

    def test_extremos(self):
        assert wilson_interval(0, 20)[0] == 0.0
        assert wilson_interval(20, 20)[1] == 1.0
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_contiene_la_proporcion(self):
        for k in range(0, 31):
            lo, hi = wilson_interval(k, 30)
            assert 0.0 <= lo <= k / 30 <= hi <= 1.0


class TestEnsayos:
    def test_calendario_coincide_con_ensayos(self):
        # Prueba que el calendario de radios reproduce los ensayos por separado
        for i in range(15):
            seed = replica_seed(81, i)
            calendario = coexistence_schedule(CANONICO, [2, 4, 6], seed)
            sueltos = tuple(coexistence_trial(CANONICO, r, seed) for r in (2, 4, 6))
            assert calendario == sueltos

    def test_pares_vacios(self):
        with pytest.raises(EmptySiteSet):
            coexistence_trial(ModelConfig(2, 1.0, {(0, 0)}, set()), 3, 1)

    def test_monotonia_en_el_radio(self):
        resultados = estimate_schedule(CANONICO, [3, 6, 9], 60, master_seed=82)
        estimaciones = [r.p_hat for r in resultados]
        assert estimaciones == sorted(estimaciones, reverse=True)
        assert all(sum(r.counts.values()) == 60 for r in resultados)


class TestEstimacion:
    def test_par_infertil(self):
        _, xi1, xi2 = RING_STRANGLED_PAIR
        config = ModelConfig(2, 1.0, xi1, xi2)
        with pytest.raises(InfertilePair):
            estimate(config, 5, 10, 1)
        resultado = estimate(config, 5, 10, 1, allow_infertile=True)
        assert resultado.p_hat == 0.0
        assert resultado.counts[TYPE2_DEAD] == 10
        assert not resultado.fertile

    def test_independiente_del_paralelismo(self):
        uno = estimate(CANONICO, 4, 24, 83, parallelism=1)
        dos = estimate(CANONICO, 4, 24, 83, parallelism=2)
        assert uno == dos

    def test_catalogo_fertil(self):
        assert len(FERTILE_PAIRS) == 5
        assert all(is_fertile(xi1, xi2) for _, xi1, xi2 in FERTILE_PAIRS)
        _, xi1, xi2 = RING_STRANGLED_PAIR
        assert strangles(xi1, xi2)

    def test_coexistencia_en_todos_los_pares(self):
        # Prueba que cada par fértil del catálogo coexiste en alguna réplica
        for label, xi1, xi2 in FERTILE_PAIRS:
            resultado = estimate(ModelConfig(2, 1.0, xi1, xi2), 5, 100, 84, label=label)
            assert resultado.p_hat > 0, label

    def test_barrido(self):
        resultados = sweep(CANONICO, [2, 3], 10, 85, lambdas=[0.5, 1.0],
                           pairs=FERTILE_PAIRS[:2])
        assert len(resultados) == 2 * 2 * 2
        assert [r.label for r in resultados[:4]] == ['canonical'] * 4
        assert [r.lam for r in resultados[:4]] == [0.5, 0.5, 1.0, 1.0]

    def test_barrido_rechaza_pares_infertiles(self):
        with pytest.raises(InfertilePair):
            sweep(CANONICO, [2], 5, 85, pairs=[RING_STRANGLED_PAIR])


class TestCSV:
    def test_cabecera_y_filas(self):
        resultados = estimate_schedule(CANONICO, [2, 3], 8, 86)
        buffer = io.StringIO()
        write_csv(resultados, buffer)
        texto = buffer.getvalue()
        lineas = texto.split('\r\n')
        assert lineas[0] == ','.join(CSV_COLUMNS)
        assert len([l for l in lineas if l]) == 3
        assert list(results_frame(resultados).columns) == CSV_COLUMNS

    def test_determinismo(self):
        primero, segundo = io.StringIO(), io.StringIO()
        write_csv(estimate_schedule(CANONICO, [3], 8, 87), primero)
        write_csv(estimate_schedule(CANONICO, [3], 8, 87), segundo)
        assert primero.getvalue() == segundo.getvalue()


@pytest.mark.django_db
class TestEstimateRecord:
    @pytest.fixture
    def resultado(self):
        return estimate(CANONICO, 3, 12, 2 ** 63 + 5, label='canonical')

    def test_guardar_y_reexportar(self, resultado):
        registro = EstimateRecord.from_result(resultado)
        registro.save()
        guardado = EstimateRecord.objects.get(pk=registro.pk)
        assert guardado.as_row() == resultado.as_row()
        assert guardado.label == 'canonical'

    def test_str_representation(self, resultado):
        registro = EstimateRecord.from_result(resultado)
        assert str(registro).startswith('canonical λ=1.0 R=3')

    def test_coexistencias_contadas(self, resultado):
        registro = EstimateRecord.objects.create(**{
            f.name: getattr(EstimateRecord.from_result(resultado), f.name)
            for f in EstimateRecord._meta.fields if f.name not in ('id', 'created_at')
        })
        assert registro.n_coexist == resultado.counts[COEXIST]


@pytest.mark.slow
class TestTamanoCompleto:
    def test_catalogo_a_radio_quince(self):
        # Prueba que cada par fértil coexiste en alguna de 2000 réplicas a R = 15
        for label, xi1, xi2 in FERTILE_PAIRS:
            resultado = estimate(ModelConfig(2, 1.0, xi1, xi2), 15, 2000, 88, parallelism=4, label=label)
            assert resultado.p_hat > 0, label

    def test_anillo_nunca_coexiste(self):
        label, xi1, xi2 = RING_STRANGLED_PAIR
        resultado = estimate(ModelConfig(2, 1.0, xi1, xi2), 15, 2000, 88, parallelism=4,
                             allow_infertile=True, label=label)
        assert resultado.p_hat == 0.0
        assert resultado.counts[TYPE2_DEAD] == 2000

    @pytest.mark.parametrize('xi1, encierro', [
        (RING_STRANGLED_PAIR[1], frozenset({(0, 0)})),
        (MARCO, ENCIERRO),
    ])
    def test_el_tipo_estrangulado_no_sale(self, xi1, encierro):
        config = ModelConfig(2, 1.0, xi1, {(0, 0)})
        for i in range(2000):
            trace = simulate(config, replica_seed(89, i), StopCondition(radius=15))
            assert trace.outcome == TYPE2_DEAD
            assert trace.final.gamma2 <= encierro

    def test_monotonia_con_radios_grandes(self):
        resultados = estimate_schedule(CANONICO, [10, 20, 30], 200, master_seed=90)
        estimaciones = [r.p_hat for r in resultados]
        assert estimaciones == sorted(estimaciones, reverse=True)
        assert [r.radius for r in resultados] == [10, 20, 30]
