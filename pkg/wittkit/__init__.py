from importlib.metadata import PackageNotFoundError, version

from .common import (
    CheckResult,
    InsufficientPrecision,
    MathDomainError,
    PrecisionError,
    SizeCap,
    UsageError,
    WittkitException,
)
from .display_group import CocharacterVector, DisplayGroupElement
from .displays import Display
from .el import ELDatum
from .frame import FrameElement
from .isodisplays import Isodisplay
from .modules import GradedModule, GradedMorphism
from .padic import PAdicMatrix, PAdicNumber
from .rings import CoefficientRing, ring_from_name
from .rz import FramingDatum, RZPoint
from .witt import WittVector
from .zink import ZinkDisplay

try:
    __version__ = version("wittkit")
except PackageNotFoundError:
    __version__ = "0.0.0"
__license__ = "GPLv3"
