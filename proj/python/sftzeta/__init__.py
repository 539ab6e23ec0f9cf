"""Zeta functions and periodic-orbit statistics for subshifts of finite type."""

from ._sftzeta import (
    Potential,
    SftzError,
    Subshift,
    build_catalog,
    compute_zn,
    enumerate_words,
    eta_g,
    full_shift,
    golden_mean_shift,
    lattice_test,
    li,
    load_config,
    pressure,
    residue_check,
    rpf,
    solve_pf,
    zeta_partial,
)

__version__ = "0.3.0"

__all__ = [
    "Potential",
    "SftzError",
    "Subshift",
    "build_catalog",
    "compute_zn",
    "enumerate_words",
    "eta_g",
    "full_shift",
    "golden_mean_shift",
    "lattice_test",
    "li",
    "load_config",
    "pressure",
    "residue_check",
    "rpf",
    "solve_pf",
    "zeta_partial",
]
