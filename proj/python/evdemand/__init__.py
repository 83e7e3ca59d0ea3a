"""EV charging demand pipeline.

Thin Python face of the C++ core: geometry helpers, the charging-demand
equations, from-scratch KNN/CART/random-forest models, and the end-to-end
pipeline runner. See ``default_config()`` for every knob.
"""

from evdemand._core import (
    KNN,
    ConfigError,
    DataError,
    DecisionTree,
    ModelError,
    Pipeline,
    RandomForest,
    ZoneGrid,
    accuracy,
    charging_demand,
    charging_duration,
    default_config,
    haversine_km,
    rmse,
    stages,
)

__version__ = "0.1.0"

__all__ = [
    "KNN",
    "ConfigError",
    "DataError",
    "DecisionTree",
    "ModelError",
    "Pipeline",
    "RandomForest",
    "ZoneGrid",
    "accuracy",
    "charging_demand",
    "charging_duration",
    "default_config",
    "haversine_km",
    "rmse",
    "stages",
    "__version__",
]
