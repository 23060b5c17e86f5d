"""recipop: population models that become linear in reciprocal coordinates.

Closed forms and orbit classification for the explosive predator-prey
model, full outcome analysis for the explosive competing-species model,
periodic solutions of the periodically forced predator-prey model via
multiplier theory, and periodic-solution counting for scalar cubic-type
periodic equations.
"""

from .errors import (
    BlowUpPassedError,
    ConfigError,
    DegenerateClassificationError,
    DomainError,
    NearResonanceError,
    NoDataError,
    NumericalFailure,
    ResonanceError,
    SingularSystemError,
    ToolkitError,
)
from .model_core import (
    GeneralModel,
    LinearSystem2D,
    PeriodicFunction,
    PopulationState,
    ReciprocalState,
    linearize,
    to_reciprocal,
    vector_field,
)
from .ode_engine import EventSpec, IntegratorConfig, Trajectory, dense_eval, integrate

__version__ = "0.1.0"
