"""Channel sounding between the two antennas and from an outside observer.

A ChannelModel owns a seeded noise stream. Every sounding consumes exactly
three draws in this order: tx jitter, rx jitter, phase noise. Draws are taken
even when the corresponding magnitude is zero and never depend on the
sounding direction, so runs with equal seeds and call sequences are
bit-identical. One instance must not be shared between threads.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import InvalidChannelModelException, ObserverCoincidentException
from .geometry import TWO_PI, LinkGeometry, checkBit, pathLength, wrapPhase

DEFAULT_PHASE_NOISE_SIGMA_RAD = 0.0
DEFAULT_POSITION_JITTER_M = 0.02e-3
DEFAULT_NOISE_SEED = 1

MIN_OBSERVER_DISTANCE_M = 1e-6
MAX_SEED = 2**64 - 1

logger = logging.getLogger(__name__)


class SoundingDirection(Enum):
    FORWARD = "forward"  # transmitter emits the pilot, S21
    REVERSE = "reverse"  # receiver emits the pilot, S12


class Emitter(Enum):
    TX_ANTENNA = "tx"
    RX_ANTENNA = "rx"


@dataclass(frozen=True)
class Measurement:
    phaseRad: float
    amplitude: float


@dataclass(frozen=True)
class ObserverPoint:
    xM: float
    yM: float


class ChannelModel:
    def __init__(
        self,
        geometry: LinkGeometry,
        phaseNoiseSigmaRad: float = DEFAULT_PHASE_NOISE_SIGMA_RAD,
        positionJitterM: float = DEFAULT_POSITION_JITTER_M,
        noiseSeed: int = DEFAULT_NOISE_SEED,
    ):
        if not (math.isfinite(phaseNoiseSigmaRad) and phaseNoiseSigmaRad >= 0):
            raise InvalidChannelModelException(f"phase noise {phaseNoiseSigmaRad}")
        if not (math.isfinite(positionJitterM) and positionJitterM >= 0):
            raise InvalidChannelModelException(f"position jitter {positionJitterM}")
        if not (0 <= noiseSeed <= MAX_SEED):
            raise InvalidChannelModelException(f"noise seed {noiseSeed}")
        # Jitter of both antennas must not close the gap between them.
        if geometry.baselineM <= 2 * positionJitterM:
            raise InvalidChannelModelException(
                f"baseline {geometry.baselineM} m within twice the position jitter"
                f" {positionJitterM} m"
            )

        self.geometry = geometry
        self.phaseNoiseSigmaRad = float(phaseNoiseSigmaRad)
        self.positionJitterM = float(positionJitterM)
        self.noiseSeed = int(noiseSeed)
        self.rng = np.random.default_rng(self.noiseSeed)

    def spawn(
        self, seedOffset: int = 0, phaseNoiseSigmaRad: float | None = None
    ) -> "ChannelModel":
        """A fresh instance over the same geometry, seeded base + offset."""
        return ChannelModel(
            self.geometry,
            (
                self.phaseNoiseSigmaRad
                if phaseNoiseSigmaRad is None
                else phaseNoiseSigmaRad
            ),
            self.positionJitterM,
            (self.noiseSeed + seedOffset) & MAX_SEED,
        )

    def _draw(self) -> tuple[float, float, float]:
        j = self.positionJitterM
        jitterTx = float(self.rng.uniform(-j, j))
        jitterRx = float(self.rng.uniform(-j, j))
        noise = float(self.rng.normal(0.0, self.phaseNoiseSigmaRad))
        return jitterTx, jitterRx, noise

    def _measure(self, distanceM: float, noise: float) -> Measurement:
        lambdaM = self.geometry.wavelength.lambdaM
        phase = wrapPhase(-TWO_PI * distanceM / lambdaM + noise)
        return Measurement(phase, self.geometry.baselineM / distanceM)

    def sound(
        self, pTx: int, pRx: int, direction: SoundingDirection
    ) -> Measurement:
        """Measure the joint channel. The direction does not alter the result."""
        checkBit(pTx)
        checkBit(pRx)
        jitterTx, jitterRx, noise = self._draw()
        # Positive jitter moves an antenna away from the other one.
        distance = pathLength(self.geometry, pTx, pRx) + jitterTx + jitterRx
        measurement = self._measure(distance, noise)
        logger.debug(
            f"sound {direction.value} p=({pTx},{pRx}) phase={measurement.phaseRad:.9f}"
        )
        return measurement

    def observe(
        self, obs: ObserverPoint, emitter: Emitter, pTx: int, pRx: int
    ) -> Measurement:
        """Measure the emitting antenna from an outside point."""
        checkBit(pTx)
        checkBit(pRx)
        if emitter is Emitter.TX_ANTENNA:
            nominalX = self.geometry.txOffsetX(pTx)
        else:
            nominalX = self.geometry.rxOffsetX(pRx)
        if math.hypot(obs.xM - nominalX, obs.yM) <= MIN_OBSERVER_DISTANCE_M:
            raise ObserverCoincidentException(obs)

        jitterTx, jitterRx, noise = self._draw()
        if emitter is Emitter.TX_ANTENNA:
            emitterX = nominalX - jitterTx
        else:
            emitterX = nominalX + jitterRx
        distance = math.hypot(obs.xM - emitterX, obs.yM)
        return self._measure(distance, noise)
