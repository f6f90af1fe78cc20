"""Magnetic Bloch bands at rational flux.

Numerical library for a 2-D lattice electron in a uniform magnetic field:
clock-and-shift quantization of periodic band functions, truncated
Landau-level symbol calculus with its recursive block-diagonalization,
closed-form effective models, and a brute-force oracle that measures the
predicted error orders.
"""

from .errors import (CommensurabilityError, ConfigError, GapClosedError,
                     GaugeError, GeometryError, MagblochError, NumericError,
                     ResourceCapError, TruncationError)
from .lattice import (FourierSeries2D, Lattice2D, PeriodicVectorPotential,
                      directional_derivative_Dz, directional_derivative_Dzbar,
                      eval_series, harper_potential, laplacian_DzDzbar,
                      make_lattice)
from .fock import (FockTruncation, I_generator, M_generator, displacement_exp,
                   ladder, xi_matrix)
from .symbols import (EvaluatedSymbol, OperatorSymbol, V_term, W_term,
                      assemble_truncated, eval_exact, remainder_norm)
from .moyal import (MoyalSeries, build_intertwiner, build_projection,
                    effective_symbol, moyal_term)
from .quantize import (MagneticBlochFamily, RationalFlux, SpectrumReport,
                       almost_mathieu_spectrum, butterfly, band_measure,
                       clock_shift, hausdorff_distance, quantize_series,
                       spectrum)
from .effective import (EffectiveModel, single_band_model, spectrum_via_GGdag,
                        two_band_model)
from .oracle import (LinearCanonicalMap, OracleBasis, band_cluster,
                     build_full_matrix, ccr_table, landau_variable_map,
                     order_fit, fast_slow_variable_map, quantize_on_grid)

__version__ = "0.1.0"
