"""Kinetic wealth-exchange models: simulation, closed-form equilibria, and
numerical verification of their stationary equations."""

from .criterion import g_prime_at_one, g_value, g_value_by_quadrature, q_value
from .equilibria import (DiracUnit, EquilibriumFamily, ExponentialUnit,
                         GammaShape, InverseGammaShape, SlaninaRescaled,
                         equilibrium_cdf, equilibrium_laplace,
                         equilibrium_moment, equilibrium_pdf,
                         equilibrium_sample)
from .fraction_laws import (DiracHalf, FractionLaw, InverseBetaQuarter,
                            SeededRng, SlaninaPQ, SymmetricBeta, Uniform01,
                            beta_variates, is_conservative_in_mean,
                            sample_fraction_pair, sample_fraction_pairs,
                            standard_gamma)
from .kinetics import (MeanConservative, Population, PureGambling,
                       SimulationResult, SlaninaMix, TimeSeries, TradeRule,
                       apply_trade_mean, apply_trade_pure,
                       apply_trade_slanina, initial_wealth, merged_wealth,
                       run_replicas, simulate, write_series_csv,
                       write_wealth_csv)
from .special import (beta_pdf, digamma, log_beta, log_gamma,
                      reg_lower_gamma, reg_upper_gamma)
from .stats import (FitReport, MomentRow, build_fit_report, family_quantiles,
                    gini, hill_tail_index, ks_distance, moment_table,
                    wasserstein1)
from .transform import (PicardResult, TransformGrid,
                        derivative_at_zero_estimate, geometric_grid,
                        grid_from_function, picard_solve,
                        slanina_ode_residual, stationary_residual,
                        tree_sample, write_grid_csv)

__version__ = "0.1.0"
