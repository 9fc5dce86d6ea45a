from .beampattern import beampattern
from .flops import FlopEstimate, FlopParams, flop_model
from .metrics import MetricsRecord, match_estimates, rmse
from .montecarlo import MonteCarloRun, monte_carlo
