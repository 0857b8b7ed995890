"""Desk-scale numerics for the stability of Gabor phase retrieval.

The package computes Gabor transforms and spectrograms of multivariate
signals, lifts transforms to entire functions and checks their growth and
log-derivative bounds, estimates Cheeger constants of weighted phase-space
domains, and assembles both sides of spectrogram-distance stability
inequalities on constructed signal pairs, including the canonical
two-bump instabilities.

Submodules are imported lazily so the command line interface can pin BLAS
thread counts before any numerical module loads:

    grids      grid geometry, GGR1 file format, domain partitions
    signals    analytic signal families and their closed-form transforms
    fdiff      mask-aware finite differences and Wirtinger derivatives
    gabor      Gabor transform (direct and FFT paths), spectrograms, lift
    entire     growth classes, log-derivative ball norms, zero counts
    cheeger    weight grids, Fiedler vectors, sweep-cut Cheeger bounds
    stability  phase alignment, norm terms, reports, instability sweeps
    cli        JSON-configured batch runner
    errors     shared exception types
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = ("cheeger", "cli", "entire", "errors", "fdiff", "gabor",
               "grids", "signals", "stability")

__all__ = list(_SUBMODULES)


def __getattr__(name: str):
    if name in _SUBMODULES:
        module = import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
