"""Numerical toolkit for Volterra-type operators between weighted Dirichlet spaces.

Analytic functions on the unit disk are represented symbolically
(:mod:`diskvolt.analytic`), integrated with a boundary-graded quadrature
(:mod:`diskvolt.quadrature`), measured in weighted Bergman and Dirichlet
norms (:mod:`diskvolt.spaces`), probed with Carleson squares
(:mod:`diskvolt.carleson`) and classified by the verdict engines in
:mod:`diskvolt.operators`.
"""

from .analytic import (AnalyticFn, LogKernel, PowerKernel, Product, Series, Sum,
                       antidifferentiate, constant, differentiate, evaluate, log_kernel,
                       monomial, multiply, power_kernel, series, truncate)
from .carleson import (CarlesonMode, CarlesonProfile, Gauge, MeasureSpec, carleson_profile,
                       classify_carleson, square_measure, total_mass)
from .errors import (DiskvoltError, DivergenceDetected, HypothesisViolation,
                     InconclusiveNearThreshold, PoleOnPath, SlowDecayWarning, SymbolParseError,
                     ToleranceNotMet, TruncationOverflow)
from .operators import (CriterionVerdict, GrowthProfile, Mode, OperatorKind, apply,
                        check_bounded, check_compact, check_order_bounded, classify_growth,
                        equivalence_audit, make_test_function, opnorm_lower_bound)
from .quadrature import (ArcInterval, CarlesonSquareRegion, PseudoDisk, QuadratureConfig,
                         QuadResult, integrate_disk, integrate_pseudo_disk, integrate_square)
from .spaces import (EvalKind, NormResult, Regime, SpaceParams, bergman_norm, dirichlet_norm,
                     point_eval_norm, predicted_rate, weighted_integral)
from .verdict import Truth, Verdict

__version__ = "0.1.0"
