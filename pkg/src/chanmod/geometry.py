"""Path lengths and phases of the two collinear, movable antennas.

The transmit antenna sits at the origin, the receive antenna at
(baseline, 0). A position bit of 1 moves an antenna away from the other one
by the displacement, so the path grows by one displacement per set bit.
"""

import math
from dataclasses import dataclass

from .exceptions import (
    InvalidBitException,
    InvalidGeometryException,
    NonFinitePhaseException,
)

SPEED_OF_LIGHT = 299792458.0
TWO_PI = 2.0 * math.pi

DEFAULT_FREQUENCY_HZ = 2.45e9
DEFAULT_BASELINE_M = 1.0


def checkBit(value: int) -> int:
    if value not in (0, 1) or isinstance(value, float):
        raise InvalidBitException(value)
    return int(value)


@dataclass(frozen=True)
class Wavelength:
    carrierFrequencyHz: float
    lambdaM: float

    @classmethod
    def fromFrequency(cls, carrierFrequencyHz: float) -> "Wavelength":
        if not math.isfinite(carrierFrequencyHz) or carrierFrequencyHz <= 0:
            raise InvalidGeometryException(
                f"carrier frequency {carrierFrequencyHz} Hz"
            )
        return cls(carrierFrequencyHz, SPEED_OF_LIGHT / carrierFrequencyHz)


@dataclass(frozen=True)
class LinkGeometry:
    wavelength: Wavelength
    baselineM: float
    displacementM: float

    def __post_init__(self):
        if not (math.isfinite(self.baselineM) and self.baselineM > 0):
            raise InvalidGeometryException(f"baseline {self.baselineM} m")
        if not (math.isfinite(self.displacementM) and self.displacementM > 0):
            raise InvalidGeometryException(f"displacement {self.displacementM} m")

    @classmethod
    def create(
        cls,
        carrierFrequencyHz: float = DEFAULT_FREQUENCY_HZ,
        baselineM: float = DEFAULT_BASELINE_M,
        displacementM: float | None = None,
    ) -> "LinkGeometry":
        """Build a geometry, displacement defaults to half a wavelength."""
        wavelength = Wavelength.fromFrequency(carrierFrequencyHz)
        if displacementM is None:
            displacementM = wavelength.lambdaM / 2
        return cls(wavelength, baselineM, displacementM)

    def txOffsetX(self, pTx: int) -> float:
        return -self.displacementM * pTx

    def rxOffsetX(self, pRx: int) -> float:
        return self.baselineM + self.displacementM * pRx


def pathLength(geom: LinkGeometry, pTx: int, pRx: int) -> float:
    return geom.baselineM + geom.displacementM * (checkBit(pTx) + checkBit(pRx))


def wrapPhase(phi: float) -> float:
    if not math.isfinite(phi):
        raise NonFinitePhaseException(phi)
    wrapped = math.fmod(phi, TWO_PI)
    if wrapped < 0:
        wrapped += TWO_PI
    # -1e-17 + 2π rounds to 2π
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def phaseOfDistance(distanceM: float, lambdaM: float) -> float:
    """Phase delay of a free-space path, wrapped to [0, 2π)."""
    return wrapPhase(-TWO_PI * distanceM / lambdaM)


def propagationPhase(geom: LinkGeometry, pTx: int, pRx: int) -> float:
    return phaseOfDistance(pathLength(geom, pTx, pRx), geom.wavelength.lambdaM)


def channelBit(pTx: int, pRx: int) -> int:
    """0 for the same-position class, 1 for the alternating one."""
    return checkBit(pTx) ^ checkBit(pRx)


def circularDistance(a: float, b: float) -> float:
    d = math.fmod(abs(a - b), TWO_PI)
    return min(d, TWO_PI - d)
