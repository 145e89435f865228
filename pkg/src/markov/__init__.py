"""Continuous-time Markov chains on the number of known proxy identities."""
from .generator import Generator, build_birth_death_generator, build_selective_generator
from .solver import birth_death_closed_form, stationary_distribution

__all__ = [
    'Generator', 'build_selective_generator', 'build_birth_death_generator',
    'stationary_distribution', 'birth_death_closed_form',
]
