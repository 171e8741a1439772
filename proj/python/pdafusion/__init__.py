"""Multi-radar PDA fusion tracking and Bayesian Cramer-Rao bounds."""

from ._core import (  # noqa: F401
    AssociationWeights,
    DegenerateWeightsError,
    Error,
    FusedMeasurement,
    FusionMode,
    InnovationContext,
    IoError,
    MonteCarloSummary,
    NoisePowerModel,
    NumericalError,
    ParseError,
    RadarNode,
    RunRecord,
    Scenario,
    SingularGeometryError,
    TrackEstimate,
    ValidationError,
    association_probabilities,
    bound,
    emit,
    fuse,
    gate_volume,
    in_gate,
    innovation_cov,
    jacobian,
    kalman_gain,
    likelihood,
    load_scenario,
    make_innovation_context,
    measure,
    measurement_information,
    monte_carlo,
    nees,
    noise_cov,
    parse_scenario,
    predict,
    prior_information,
    process_noise_cov,
    recurse,
    run_once,
    transition_matrix,
    update,
    wrap_angle,
)

__version__ = "0.1.0"
