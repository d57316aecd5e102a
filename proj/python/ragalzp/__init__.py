"""Symbolic melody toolkit.

Parses Carnatic-style notation into note events, expands them into integer
symbol streams, measures compression complexity, decides pairwise causal
direction from asymmetric compression penalties, fits Markov models, and
generates surrogate compositions. The heavy lifting lives in the compiled
`_core` extension; this package just re-exports its functional surface.
"""

from ragalzp._core import (
    REST_PITCH,
    REST_SYMBOL,
    direction,
    expand_events,
    fit_stationary,
    lz76,
    parse_composition,
    penalty,
    run_experiment,
    surrogate_events,
)

__all__ = [
    "REST_PITCH",
    "REST_SYMBOL",
    "direction",
    "expand_events",
    "fit_stationary",
    "lz76",
    "parse_composition",
    "penalty",
    "run_experiment",
    "surrogate_events",
]
