"""Exact incremental discretized rotation on Gaussian integers.

Hinge angles (the angles at which ``z -> round(z e^{ia})`` changes on a disk)
are enumerated and sorted with integer arithmetic only, then swept to update
a rotation map and a two-layer image a few pixels at a time.
"""
from .exact_arith import SurdValue, isqrt, surd_compare, surd_sign
from .hinge import (
    GeneratingTriple,
    HingeAngle,
    angle_as_float,
    canonicalize,
    compare,
    exact_functions,
    quadrant,
    validate,
)
from .rotengine import (
    Phase,
    RotationMap,
    Side,
    full_map_exact,
    identity_map,
    rotate_point_exact,
    step,
    sweep,
)
from .table import AnglePosition, HingeTable, build, load, locate, save

__version__ = "0.1.0"
