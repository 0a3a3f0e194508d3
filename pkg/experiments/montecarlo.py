# experiments/montecarlo.py
"""Estimación Monte Carlo de la coexistencia truncada y barridos de parámetros.

Las semillas de cada réplica se derivan de (semilla maestra, índice), de modo
que el resultado no depende del número de procesos en paralelo. Los
calendarios de radios reutilizan la misma réplica para todos los radios: una
réplica que coexiste hasta R también coexiste hasta cualquier R' < R.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import pandas as pd
from joblib import Parallel, delayed
from scipy import stats

from coupling.coupled import CouplingMode, lemma1_precondition, run_coupled
from coupling.inclusions import check_inclusions, check_path_transfer, qualifying_starts
from engine.growth import (
    COEXIST, TYPE1_DEAD, TYPE2_DEAD, ModelConfig, StopCondition, dead_label,
    init, run, simulate,
)
from lattice.exceptions import EmptySiteSet, InfertilePair
from lattice.geometry import Box, Site, SiteSet
from randomness.seeds import derive_seed, replica_rng, replica_seed
from randomness.streams import SHARED, Realization
from topology.fertility import is_fertile

logger = logging.getLogger(__name__)

TRIAL_OUTCOMES = (COEXIST, TYPE1_DEAD, TYPE2_DEAD)

CSV_COLUMNS = [
    'dimension', 'lambda', 'R', 'n_reps', 'n_coexist', 'n_type1_dead',
    'n_type2_dead', 'p_hat', 'ci_lo', 'ci_hi', 'master_seed', 'config_digest',
]

# Pares para la comparación entre configuraciones iniciales (d = 2)
FERTILE_PAIRS = [
    ('canonical', frozenset({(0, 0)}), frozenset({(1, 0)})),
    ('domino-vs-site', frozenset({(0, 0), (0, 1)}), frozenset({(1, 0)})),
    ('disconnected-xi1', frozenset({(-2, 0), (2, 0)}), frozenset({(0, 0)})),
    ('separated', frozenset({(0, 0)}), frozenset({(2, 1), (3, 1)})),
    ('checkerboard', frozenset({(0, 0), (1, 1)}), frozenset({(1, 0), (0, 1)})),
]
RING_STRANGLED_PAIR = (
    'ring-strangled', frozenset({(1, 0), (-1, 0), (0, 1), (0, -1)}), frozenset({(0, 0)}),
)


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    z = stats.norm.ppf(0.5 + confidence / 2)
    p = successes / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if successes == 0 else min(p, max(0.0, center - half))
    hi = 1.0 if successes == n else max(p, min(1.0, center + half))
    return lo, hi


@dataclass(frozen=True)
class EstimateResult:
    dimension: int
    lam: float
    radius: int
    n_reps: int
    counts: dict
    p_hat: float
    ci_lo: float
    ci_hi: float
    master_seed: int
    config_digest: str
    fertile: bool = True
    label: str = ''

    def as_row(self) -> dict:
        return {
            'dimension': self.dimension,
            'lambda': self.lam,
            'R': self.radius,
            'n_reps': self.n_reps,
            'n_coexist': self.counts.get(COEXIST, 0),
            'n_type1_dead': self.counts.get(TYPE1_DEAD, 0),
            'n_type2_dead': self.counts.get(TYPE2_DEAD, 0),
            'p_hat': self.p_hat,
            'ci_lo': self.ci_lo,
            'ci_hi': self.ci_hi,
            'master_seed': self.master_seed,
            'config_digest': self.config_digest,
        }


def _require_both(config: ModelConfig) -> None:
    if not config.xi1 or not config.xi2:
        raise EmptySiteSet("Un ensayo de coexistencia necesita ξ_1 y ξ_2 no vacíos")


def coexistence_trial(config: ModelConfig, radius: int, seed: int, construction: str = SHARED) -> str:
    _require_both(config)
    stop = StopCondition(radius=radius, stop_on_type_death={1, 2})
    return run(init(config, Realization(seed, construction)), stop).outcome


def coexistence_schedule(config: ModelConfig, radii: Sequence[int], seed: int,
                         construction: str = SHARED) -> tuple[str, ...]:
    """El resultado de ``coexistence_trial`` para cada radio, con una sola corrida."""
    _require_both(config)
    radii = list(radii)
    for radius in radii:
        StopCondition(radius=radius)
    state = init(config, Realization(seed, construction))
    decided: dict[int, str] = {}
    while True:
        dead = next((i for i in (1, 2) if not state.type_active(i)), None)
        for radius in radii:
            if radius in decided:
                continue
            if dead is not None:
                decided[radius] = dead_label(dead)
            elif state.reach(1) >= radius and state.reach(2) >= radius:
                decided[radius] = COEXIST
        if len(decided) == len(set(radii)):
            return tuple(decided[r] for r in radii)
        state.step()


def estimate_schedule(config: ModelConfig, radii: Sequence[int], n_reps: int, master_seed: int,
                      parallelism: int = 1, allow_infertile: bool = False, label: str = '',
                      construction: str = SHARED) -> list[EstimateResult]:
    _require_both(config)
    fertile = is_fertile(config.xi1, config.xi2)
    if not fertile and not allow_infertile:
        raise InfertilePair(f"El par {label or config.digest()} no es fértil")
    radii = list(radii)
    outcomes = Parallel(n_jobs=parallelism)(
        delayed(coexistence_schedule)(config, radii, replica_seed(master_seed, i), construction)
        for i in range(n_reps)
    )
    results = []
    for k, radius in enumerate(radii):
        counts = Counter(row[k] for row in outcomes)
        wins = counts.get(COEXIST, 0)
        lo, hi = wilson_interval(wins, n_reps)
        results.append(EstimateResult(
            dimension=config.d,
            lam=config.lam,
            radius=radius,
            n_reps=n_reps,
            counts={o: counts.get(o, 0) for o in TRIAL_OUTCOMES},
            p_hat=wins / n_reps if n_reps else 0.0,
            ci_lo=lo,
            ci_hi=hi,
            master_seed=master_seed,
            config_digest=config.digest(),
            fertile=fertile,
            label=label,
        ))
        logger.info("Estimación %s λ=%s R=%d: p̂=%.4f [%.4f, %.4f] (%d réplicas)",
                    label or config.digest(), config.lam, radius, results[-1].p_hat, lo, hi, n_reps)
    return results


def estimate(config: ModelConfig, radius: int, n_reps: int, master_seed: int, parallelism: int = 1,
             allow_infertile: bool = False, label: str = '') -> EstimateResult:
    return estimate_schedule(config, [radius], n_reps, master_seed, parallelism, allow_infertile, label)[0]


def sweep(base: ModelConfig, radii: Sequence[int], n_reps: int, master_seed: int,
          lambdas: Iterable[float] | None = None,
          pairs: Sequence[tuple[str, SiteSet, SiteSet]] | None = None,
          parallelism: int = 1, allow_infertile: bool = False) -> list[EstimateResult]:
    lambdas = list(lambdas) if lambdas is not None else [base.lam]
    pairs = list(pairs) if pairs is not None else [('', base.xi1, base.xi2)]
    if not allow_infertile:
        for label, xi1, xi2 in pairs:
            if not is_fertile(xi1, xi2):
                raise InfertilePair(f"El par {label or sorted(xi1)} no es fértil")
    results = []
    for label, xi1, xi2 in pairs:
        for lam in lambdas:
            config = ModelConfig(base.d, lam, xi1, xi2)
            results.extend(estimate_schedule(config, radii, n_reps, master_seed, parallelism,
                                             allow_infertile, label))
    return results


def results_frame(results: Iterable[EstimateResult]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in results], columns=CSV_COLUMNS)


def write_csv(results: Iterable[EstimateResult] | pd.DataFrame, target) -> None:
    frame = results if isinstance(results, pd.DataFrame) else results_frame(results)
    frame.to_csv(target, index=False, lineterminator='\r\n')


# --- Comprobación en masa de las inclusiones ---------------------------------

def sample_lemma1_pair(rng, window: Box, max_tries: int = 10_000, with_starts: bool = False):
    """Muestreo por rechazo de dos pares que cumplen la hipótesis de inclusión.

    Con ``with_starts`` se rechazan además los pares sin sitios de arranque
    para la transferencia de caminos.
    """
    sites = sorted(window)
    for _ in range(max_tries):
        chosen = [x for x, keep in zip(sites, rng.random(len(sites)) < 0.5) if keep]
        if not chosen:
            continue
        labels = rng.integers(1, 3, size=(2, len(chosen)))
        z1 = frozenset(x for x, t in zip(chosen, labels[0]) if t == 1)
        z2 = frozenset(x for x, t in zip(chosen, labels[0]) if t == 2)
        z1p = frozenset(x for x, t in zip(chosen, labels[1]) if t == 1)
        z2p = frozenset(x for x, t in zip(chosen, labels[1]) if t == 2)
        if not lemma1_precondition(z1, z2, z1p, z2p):
            continue
        if not with_starts or qualifying_starts(z1, z2, z1p):
            return z1, z2, z1p, z2p
    raise RuntimeError("No se encontró un par válido en la ventana")


@dataclass
class Lemma1Summary:
    n_runs: int = 0
    n_passed: int = 0
    n_path_passed: int = 0
    path_runs: int = 0
    path_edges: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.n_passed == self.n_runs and self.n_path_passed == self.path_runs

    def to_dict(self) -> dict:
        return {
            'n_runs': self.n_runs,
            'n_passed': self.n_passed,
            'path_runs': self.path_runs,
            'n_path_passed': self.n_path_passed,
            'path_edges': self.path_edges,
            'all_passed': self.all_passed,
            'failures': self.failures,
        }


def _sites(sites: Iterable[Site]) -> list[list[int]]:
    return [list(x) for x in sorted(sites)]


def lemma1_suite(n_runs: int, d: int, lam: float, window: Box, horizon: int, master_seed: int,
                 mismatched: bool = False, with_starts: bool = False) -> Lemma1Summary:
    """Corre ``n_runs`` pares acoplados y comprueba inclusiones y transferencia de caminos.

    Con ``mismatched`` cada proceso usa su propia semilla: es el control
    negativo, donde las inclusiones deben fallar en algunas corridas. Con
    ``with_starts`` todas las corridas tienen algún camino que transferir.
    """
    if window.dimension != d:
        raise ValueError("La ventana debe tener la dimensión del modelo")
    summary = Lemma1Summary(n_runs=n_runs)
    stop = StopCondition(max_events=horizon)
    for k in range(n_runs):
        z1, z2, z1p, z2p = sample_lemma1_pair(replica_rng(master_seed, k), window, with_starts=with_starts)
        config_a, config_b = ModelConfig(d, lam, z1, z2), ModelConfig(d, lam, z1p, z2p)
        seed = replica_seed(master_seed, k)
        if mismatched:
            trace_a = simulate(config_a, seed, stop)
            trace_b = simulate(config_b, derive_seed(seed, 1), stop)
        else:
            trace_a, trace_b = run_coupled([config_a, config_b], seed, CouplingMode(), stop)
        inclusions = check_inclusions(trace_a, trace_b)
        paths = check_path_transfer(trace_a, trace_b)
        summary.n_passed += inclusions.passed
        if paths.starts:
            summary.path_runs += 1
            summary.n_path_passed += paths.passed
            summary.path_edges += paths.edges_checked
        if not inclusions.passed or not paths.passed:
            summary.failures.append({
                'run': k,
                'seed': seed,
                'a': {'xi1': _sites(z1), 'xi2': _sites(z2)},
                'b': {'xi1': _sites(z1p), 'xi2': _sites(z2p)},
                'first_violation': inclusions.first_violation,
                'missing_path_edges': paths.missing[:10],
            })
    logger.info("Inclusiones: %d/%d corridas correctas (%d con caminos transferidos)",
                summary.n_passed, summary.n_runs, summary.n_path_passed)
    return summary
