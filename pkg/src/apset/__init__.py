"""Almost periodic point sets on finite windows.

Construction of (possibly signed) multiple discrete sets as perturbations of
full-rank lattices, certified almost-period search through exponential
polynomial bounds and Kronecker systems, windowed bottleneck-matching
almost-periodicity tests, mollifier-smoothed measure tests, one-dimensional
slope/remainder decomposition, and the dyadic signed counterexample
families.
"""
__version__ = "0.1.0"

from .ap_functions import (AlmostPeriodQuery, ExpPolynomial, Grid1D, GridND,
                           default_grid, grid_sup_diff, shift_bound)
from .core_model import (Ball, Box, PointMultiSet, RegionExceedsWindow,
                         SignedSetUnsupported, card_in, inner_window,
                         split_signs, translate)
from .generators import (IndexBox, LatticeMatrix, covering_radius_window,
                         min_separation, perturbed_lattice, sine_example)
from .kronecker import (KroneckerSystem, common_integer_almost_periods,
                        max_gap, solve_system)
from .matching import (MarginTooSmall, MatchPolicy, MatchReport,
                       bottleneck_eps, card_bound, density, is_eps_period,
                       scan_periods)
from .measures import (ConvolutionTrace, Mollifier, convolution_trace,
                       convolve, mollifier_deriv_sup, signed_density,
                       unit_ball_volume, variation_in_ball, weak_ap_sup_diff)
from .one_dim import (DecomposeResult, IndexedSamples, SortedLine, counting,
                      decompose, discrepancy, f_shift_quality, sort_line)
from .signed_examples import (OddOrZeroInput, VerificationError,
                              dyadic_positive_set, dyadic_signed_set,
                              dyadic_unit_signed_set, even_offset_residual,
                              positive_part_defect_scan, two_adic,
                              verify_distributional_ap,
                              verify_unbounded_variation)

__all__ = [name for name in dir() if not name.startswith("_")]
