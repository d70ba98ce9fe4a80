"""Spatial individual-level epidemic models with behavioural-change alarms.

Thin wrapper over the compiled ``_bcilm`` extension. Parameters are passed as
plain dicts keyed by name (``alpha``, ``beta``, ``delta1``, ...).
"""

from ._bcilm import (  # noqa: F401
    ConfigError,
    CurveBand,
    DomainError,
    EpidemicHistory,
    InitializationError,
    IoError,
    ModelSpec,
    ParseError,
    Population,
    PosteriorSample,
    Prior,
    RangeError,
    UnsupportedError,
    ValidationError,
    WaicEntry,
    __version__,
    default_priors,
    fit,
    generate_population,
    geweke,
    grid_scenario,
    grid_spec,
    hpdi,
    infection_probability,
    load_events,
    load_population,
    log_likelihood,
    ppd_curve,
    run_command,
    screen,
    simulate,
    waic,
)
