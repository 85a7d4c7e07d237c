"""Growth rates of small cancellation groups: word problem, Cayley balls,
normal-form automata, certified spectral bounds and forbidden-factor growth."""

from .presentation import Presentation, parse_presentation, check_small_cancellation
from .wordproblem import DehnOracle
from .cayley import GroupBall, enumerate_ball, distance, is_geodesic
from .spectra import SpectralEnclosure, spectral_radius

__all__ = [
    "Presentation",
    "parse_presentation",
    "check_small_cancellation",
    "DehnOracle",
    "GroupBall",
    "enumerate_ball",
    "distance",
    "is_geodesic",
    "SpectralEnclosure",
    "spectral_radius",
]
