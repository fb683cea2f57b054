"""Tropical central-path laboratory.

Exact side: Puiseux series arithmetic, max-plus polyhedra, tropical
barycenters and piecewise-linear path tracing.  Numeric side: entropic
and logarithmic central-path points of instantiated LPs and log-limit
convergence experiments.
"""

from .puiseux import PuiseuxSeries, ps_add, ps_cmp, ps_eval, ps_mul, ps_val, logt_map
from .tropical import BOTTOM, TropValue, TropVector, t_add, t_comb, t_dot, t_mul
from .troppoly import (
    AssumptionReport,
    Empty,
    PuiseuxLP,
    SignUnsafe,
    TropAffineForm,
    TropPolyhedron,
    Unbounded,
    UpperConstraint,
    assumption_check,
    barycenter,
    decompose,
    greatest,
    member,
    naive_tropicalize,
    sublevel,
)
from .pathtrace import (
    LWInstance,
    NondegenerateFailure,
    PiecewisePath,
    bary_volume,
    count_pieces,
    lw_instance,
    lw_recursive,
    lw_table,
    trace,
)
from .numlab import (
    ConvergenceReport,
    NewtonConfig,
    NumericLP,
    SamplerConfig,
    box_oracle,
    converge,
    entropic_point,
    instantiate,
    interior_seed,
    log_point,
)

__all__ = [name for name in dir() if not name.startswith("_")]
