from .orbit import (
    Orbit,
    Stability,
    canonical,
    classify_stability,
    cycle_jacobian,
    mirror,
    monodromy,
    multipliers,
    orbit_from_points,
    orbit_residual,
    primitive_period,
)
from .search import CensusEntry, FixtureSeed, SearchBox, brute_force_seeds, cyclic_distance, find_orbit, fixture_seeds, orbit_census

__all__ = [
    "Orbit",
    "Stability",
    "canonical",
    "classify_stability",
    "cycle_jacobian",
    "mirror",
    "monodromy",
    "multipliers",
    "orbit_from_points",
    "orbit_residual",
    "primitive_period",
    "CensusEntry",
    "FixtureSeed",
    "SearchBox",
    "brute_force_seeds",
    "cyclic_distance",
    "find_orbit",
    "fixture_seeds",
    "orbit_census",
]
