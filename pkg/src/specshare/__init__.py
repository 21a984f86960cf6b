"""specshare: spectrum co-existence of primary and secondary networks.

Simulation and closed-form analysis of two collocated point-to-multipoint
networks sharing a band: unit-mean fading gain models, order-statistic
concentration tools, threshold-based uplink scheduling, finite-size
sum-rate evaluation, asymptotic throughput factors, and reproducible
Monte Carlo sweeps.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticConfig,
    FactorResult,
    Interval,
    RateScale,
    crossover_ranges,
    factor_curve,
    td_exponents,
    throughput_factor,
)
from .errors import BudgetError, RefusalError
from .fading import (
    FadingModel,
    LowGainParams,
    NakagamiM,
    Rayleigh,
    Rician,
    TailParams,
    parse_model_spec,
)
from .network import (
    DD,
    DU,
    UD,
    UU,
    CoexistenceLevel,
    Mode,
    NetworkInstance,
    Scenario,
    Strategy,
    SystemParams,
    allowed_levels,
    generate,
    load_instance,
    save_instance,
)
from .order_stats import (
    ConcentrationSequence,
    empirical_lower_sum,
    exact_exponential_lower_sum,
    inverse_low_gain_expansion,
    lower_sum_concentration,
    max_concentration,
)
from .rates import (
    RatePair,
    downlink_alone,
    intermediate_rate,
    sim_rates,
    td_rates,
    ub_rates,
    uplink_alone,
)
from .rng import StreamKey
from .scheduling import (
    ActivationExponents,
    ScheduleDecision,
    joint_opt_bruteforce,
    least_interference_set,
    optimal_exponents,
    schedule,
    threshold_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
