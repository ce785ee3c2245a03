"""Heat-kernel transforms, weighted Bergman norms and fractional Sobolev
identities on the torus, SU(2) class functions, and the Hermite operator."""

from .extension import boundary_limit, extension_mode, mode_profile, ode_residual
from .frac_sobolev import (NormBundle, SobolevParams, cts_transform,
                           frac_laplacian_c, frac_powers, holo_sobolev_norm,
                           hs_norm, norm_t_gamma, r_t_gamma, remark25_ratio,
                           sobolev_ts_norm, verify_thm14)
from .group_spectra import (GridFunction, IrrepSpectrum, SpectralCoefficients,
                            analyze, enumerate_spectrum, heat_kernel,
                            l2_norm_sq, su2_grid, synthesize, torus_grid)
from .hermite import (HermiteExpansion, HermiteWeight, gram_matrix, gutzmer,
                      hermite_isometry_report, hermite_sobolev_norms,
                      hermite_weight, p_t, synthesize_hermite, tt_transform,
                      tts_transform, u_t, u_t_gamma, verify_eq31, verify_eq32)
from .reports import VerificationReport, reports_to_json, reports_to_table
from .segal_bargmann import (BergmanNorm, WeightDensity, bergman_norm,
                             ct_transform, nu_t, nu_weight, verify_thm22,
                             w_t_gamma, w_weight)
from .specfun import (QuadratureError, QuadratureSpec, RangeError, hermite_fn,
                      integrate, laguerre_poly, riemann_liouville,
                      truncated_gamma)
from .suites import SUITES, RunConfig, run_suites

__version__ = "0.1.0"
