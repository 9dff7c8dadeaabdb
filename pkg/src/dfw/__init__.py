"""Distance-function wavelet kernels, transforms, series fits and boundary
solvers, with a compiled special-function core and a pure-Python fallback."""

from . import approx, kernels, pdesolve, specfun, transform
from ._backend import available as available_backends, current as current_backend, set_backend
from .approx import (BasisSpec, SeriesModel, build_design_matrix, eval_series, fit_series,
                     lstsq_minnorm, predict, threshold_coefficients)
from .errors import (ConvergenceError, DFWError, DomainError, NumericalError,
                     NumericalOverflowError, RankError, ShapeError, SingularityError)
from .kernels import (ComplexValue, DistanceMetric, Drift, Family, KernelSpec, eval_convdiff_gen,
                      eval_E_decay, eval_E_osc, eval_phi_J, eval_plate_kernel, kernel_matrix)
from .pdesolve import (BoundaryProblem, PdeSpec, pde_residual, solve_convdiff,
                       solve_modified_helmholtz, solve_winkler_plate)
from .specfun import BesselKind, KelvinKind, bessel, kelvin, switchover_radius
from .transform import (CoefficientGrid, SampleSet, analyze, calibrate_ng, frac_deriv_1d,
                        synthesize)

__version__ = "0.1.0"
