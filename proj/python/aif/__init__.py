"""Discrete-state active inference agents."""

from ._core import (
    Agent,
    EpistemicChamberEnv,
    Environment,
    Error,
    IndexError,
    Listing2Env,
    Model,
    NumericalError,
    ParseError,
    ShapeError,
    StateError,
    TabularEnv,
    ValidationError,
    __version__,
    construct_policies,
    entropy,
    infer_states,
    load_model,
    log_stable,
    make_environment,
    run,
    sample_action,
    save_model,
    softmax,
    update_A,
    update_B,
    update_D,
    update_posterior_policies,
    vfe,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
