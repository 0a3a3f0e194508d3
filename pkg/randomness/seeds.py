# randomness/seeds.py
"""Derivación de semillas por réplica.

La semilla de la réplica ``i`` es ``SeedSequence(entropy=master_seed,
spawn_key=(i,))`` reducida a un entero de 64 bits: depende solo de la semilla
maestra y del índice, nunca del orden en que se ejecuten las réplicas.
"""
import numpy as np

SEED_BITS = 64
MAX_SEED = 2 ** SEED_BITS - 1


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"La semilla debe estar en [0, 2^64): {seed}")
    return seed


def derive_seed(master_seed: int, *path: int) -> int:
    sequence = np.random.SeedSequence(entropy=validate_seed(master_seed), spawn_key=tuple(path))
    return int(sequence.generate_state(1, np.uint64)[0])


def replica_seed(master_seed: int, replica_index: int) -> int:
    return derive_seed(master_seed, replica_index)


def replica_rng(master_seed: int, replica_index: int) -> np.random.Generator:
    """Generador auxiliar (muestreo de configuraciones), independiente de las aristas."""
    return np.random.default_rng(np.random.SeedSequence(
        entropy=validate_seed(master_seed), spawn_key=(replica_index, 1)))
