"""Seeded test states."""

from .generators import (
    Fixture,
    gen_depolarized,
    gen_gibbs,
    gen_low_rank,
    gen_power_law,
    gen_pure,
    generate,
    generate_pair,
    gibbs_hamiltonian,
    haar_unitary,
    load_fixture,
    power_law_spectrum,
    save_fixture,
)

__all__ = [
    "Fixture",
    "gen_depolarized",
    "gen_gibbs",
    "gen_low_rank",
    "gen_power_law",
    "gen_pure",
    "generate",
    "generate_pair",
    "gibbs_hamiltonian",
    "haar_unitary",
    "load_fixture",
    "power_law_spectrum",
    "save_fixture",
]
