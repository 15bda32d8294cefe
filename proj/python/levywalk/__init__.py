"""Monte Carlo solver for PIDEs driven by Levy noise."""

from ._levywalk import (
    BallTestProblem,
    BiasProfile,
    ConfigError,
    CutoffQuantities,
    ExponentialTails,
    InfiniteIntensityError,
    LevyMeasure,
    McEstimate,
    PideProblem,
    SingularTempered,
    TemperedStable,
    bias_profile,
    cost,
    cutoff_quantities,
    drift_compensator,
    estimate,
    example_nonsingular,
    example_singular,
    fx,
    intensity,
    optimal_h,
    run_experiment,
    sample_jump,
    steps_bound,
    third_moment_tail,
)

__version__ = "0.1.0"
