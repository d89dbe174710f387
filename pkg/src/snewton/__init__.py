"""Solvers for the gravitationally self-interacting Schrodinger equation."""

from ._accel import backend_name
from .dynamics import (
    Propagator,
    PropagatorConfig,
    Trajectory,
    boost,
    cross_coupling,
    evolve,
    galilean_image,
    lobe_acceleration,
    two_soliton_prepare,
)
from .fields import (
    ComplexField,
    EnergyBreakdown,
    RealField,
    UniformGrid,
    centroid,
    energy_breakdown,
    gaussian,
    momentum_expectation,
    norm_squared,
    normalize,
    read_field,
    rms_width,
    write_field,
)
from .gravity import Kernel, RadialProfile, radial_potential, solve_potential, sphere_kernel_value
from .ground_state import (
    ConvergenceError,
    GroundStateResult,
    NoGroundStateError,
    eigenvalue,
    gaussian_variational,
    minimize,
    radial_shooting_oracle,
)
from .units import (
    PhysicalParams,
    ScalingMap,
    critical_size,
    energy_estimates,
    make_scaling,
    point_width_estimate,
    sphere_width_estimate,
)

__version__ = "0.1.0"
