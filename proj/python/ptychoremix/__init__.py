"""Ptychographic phase retrieval: scan simulation, ePIE, and the
oversample-and-splice remix pipeline.

All heavy lifting happens in the `_core` extension; arrays cross the
boundary as numpy `float64` / `complex128`.
"""

from ._core import (
    __version__,
    add_poisson_noise,
    aligned_field_mse,
    aligned_mse,
    diffract,
    exit_wave,
    l1_misfit,
    make_phantom,
    make_probe,
    overlap_percent,
    poisson_nll,
    raster_positions,
    read_pta,
    read_ptd,
    remix_pipeline,
    run_epie,
    simulate_scan,
    total_variation,
    write_pta,
    write_ptd,
)

__all__ = [
    "__version__",
    "add_poisson_noise",
    "aligned_field_mse",
    "aligned_mse",
    "diffract",
    "exit_wave",
    "l1_misfit",
    "make_phantom",
    "make_probe",
    "overlap_percent",
    "poisson_nll",
    "raster_positions",
    "read_pta",
    "read_ptd",
    "remix_pipeline",
    "run_epie",
    "simulate_scan",
    "total_variation",
    "write_pta",
    "write_ptd",
]
