"""Particle transport: physics kernels, pipelines and power iteration."""

from .bank import ParticleBank, Particle, allocate_bank, particle_view
from .physics import (
    elastic_scatter,
    sample_collision_nuclide,
    sample_flight,
    sample_reaction,
    sample_watt,
    watt_moments,
)
from .pipeline import Engine
from .power import SubcriticalCollapse, TransportError, power_iteration, transport_batch

__all__ = [
    "Engine",
    "Particle",
    "ParticleBank",
    "SubcriticalCollapse",
    "TransportError",
    "allocate_bank",
    "elastic_scatter",
    "particle_view",
    "power_iteration",
    "sample_collision_nuclide",
    "sample_flight",
    "sample_reaction",
    "sample_watt",
    "transport_batch",
    "watt_moments",
]
