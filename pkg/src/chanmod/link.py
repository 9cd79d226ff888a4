"""Calibration, per-bit transmission, detection, eavesdropping and BER sweeps."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.stats import circmean

from .channel import ChannelModel, Emitter, ObserverPoint, SoundingDirection
from .cipher import KeyStream, recoverFromPositions, rxPositionFor, txPositionFor
from .codec import bitToChannel, channelToBit, decodeAscii, encodeAscii
from .exceptions import (
    BitstreamLengthException,
    CalibrationFailedException,
    InvalidBitsPerPointException,
    InvalidSigmaException,
    NonAsciiByteException,
)
from .geometry import TWO_PI, channelBit, circularDistance, propagationPhase, wrapPhase

DEFAULT_CONSISTENCY_TOLERANCE = 0.1
MIN_BITS_PER_POINT = 1000

NO_FEEDBACK = "NO_FEEDBACK"
INDETERMINATE = "INDETERMINATE"
UNDECODABLE = "UNDECODABLE"

TX_ONLY_DIAGNOSTIC = (
    "transmit positions alone fit every message: for any message bit m the map"
    " k -> m XOR k is a bijection on {0,1}, so some key explains each message"
)
RX_ONLY_DIAGNOSTIC = (
    "receive positions are the key itself and carry no information about the"
    " message"
)
NO_POSITIONS_DIAGNOSTIC = "no antenna positions known, every message is equally likely"

PRINTABLE_ASCII = range(0x20, 0x7F)

logger = logging.getLogger(__name__)


class PilotMode(Enum):
    FORWARD_PILOT = "forward"
    REVERSED_PILOT = "reversed"


@dataclass(frozen=True)
class CalibrationTable:
    phiSame: float
    phiAlt: float
    classSeparation: float
    consistencyTolerance: float = DEFAULT_CONSISTENCY_TOLERANCE
    spreadSame: float = 0.0
    spreadAlt: float = 0.0


@dataclass
class SessionConfig:
    channel: ChannelModel
    keySeed: int
    mode: PilotMode = PilotMode.FORWARD_PILOT
    # Only meaningful for the reversed pilot.
    feedbackAvailable: bool = True

    @property
    def direction(self) -> SoundingDirection:
        if self.mode is PilotMode.REVERSED_PILOT:
            return SoundingDirection.REVERSE
        return SoundingDirection.FORWARD

    @property
    def delivered(self) -> bool:
        """Whether measured phases reach the receiver's decoder."""
        return self.mode is PilotMode.FORWARD_PILOT or self.feedbackAvailable

    def summary(self) -> dict[str, str]:
        geometry = self.channel.geometry
        return {
            "mode": self.mode.value,
            "feedback": str(self.feedbackAvailable).lower(),
            "key_seed": str(self.keySeed),
            "noise_seed": str(self.channel.noiseSeed),
            "freq_hz": repr(geometry.wavelength.carrierFrequencyHz),
            "baseline_m": repr(geometry.baselineM),
            "displacement_m": repr(geometry.displacementM),
            "noise_sigma_rad": repr(self.channel.phaseNoiseSigmaRad),
            "pos_jitter_m": repr(self.channel.positionJitterM),
        }


@dataclass(frozen=True)
class TraceRecord:
    index: int
    messageBit: int
    keyBit: int
    txPos: int
    rxPos: int
    trueChannelBit: int
    truePhaseRad: float
    measuredPhaseRad: float
    decidedChannelBit: int | None
    decodedBit: int | None


@dataclass
class SessionTrace:
    configSummary: dict[str, str]
    calibration: CalibrationTable
    records: list[TraceRecord] = field(default_factory=list)
    decodedText: str = ""
    bitErrors: int = 0


@dataclass(frozen=True)
class EavesdropResult:
    text: str
    diagnostic: str = ""

    @property
    def decoded(self) -> bool:
        return self.text != INDETERMINATE


@dataclass(frozen=True)
class TrialCandidate:
    inverted: bool
    msbFirst: bool
    text: str


@dataclass(frozen=True)
class InterceptResult:
    emitter: Emitter
    phases: list[float]
    inferredPositions: list[int]


def _classMean(a: float, b: float) -> float:
    return wrapPhase(float(circmean([a, b], high=TWO_PI, low=0.0)))


def calibrate(
    channel: ChannelModel, tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE
) -> CalibrationTable:
    """Sound all four position pairs and derive the two class references.

    (1,1) is a full wavelength longer than (0,0), so after wrapping both must
    land on the same phase; the same holds for (0,1) and (1,0).
    """
    forward = SoundingDirection.FORWARD
    same = [channel.sound(p, p, forward).phaseRad for p in (0, 1)]
    alt = [channel.sound(p, 1 - p, forward).phaseRad for p in (0, 1)]

    spreadSame = circularDistance(*same)
    if spreadSame > tolerance:
        raise CalibrationFailedException("intra-class spread", "same", spreadSame)
    spreadAlt = circularDistance(*alt)
    if spreadAlt > tolerance:
        raise CalibrationFailedException("intra-class spread", "alternating", spreadAlt)

    phiSame = _classMean(*same)
    phiAlt = _classMean(*alt)
    separation = circularDistance(phiSame, phiAlt)
    if separation <= 2 * tolerance:
        raise CalibrationFailedException("separation", "same/alternating", separation)

    logger.info(
        f"Calibrated: phi_same={phiSame:.6f} phi_alt={phiAlt:.6f}"
        f" separation={separation:.6f}"
    )
    return CalibrationTable(
        phiSame, phiAlt, separation, tolerance, spreadSame, spreadAlt
    )


def decide(phase: float, table: CalibrationTable) -> int:
    """Nearest reference on the circle; a tie goes to the same-position class."""
    if circularDistance(phase, table.phiSame) <= circularDistance(phase, table.phiAlt):
        return 0
    return 1


def _runBits(
    config: SessionConfig,
    channel: ChannelModel,
    table: CalibrationTable,
    keyStream: KeyStream,
    messageBits: list[int],
) -> list[TraceRecord]:
    direction = config.direction
    delivered = config.delivered
    records = []
    for index, messageBit in enumerate(messageBits):
        keyBit = keyStream.nextKeyBit()
        rxPos = rxPositionFor(keyBit)
        txPos = txPositionFor(bitToChannel(messageBit), keyBit)
        measurement = channel.sound(txPos, rxPos, direction)
        if delivered:
            decided = decide(measurement.phaseRad, table)
            decoded = channelToBit(decided)
        else:
            decided = decoded = None
        records.append(
            TraceRecord(
                index=index,
                messageBit=messageBit,
                keyBit=keyBit,
                txPos=txPos,
                rxPos=rxPos,
                trueChannelBit=channelBit(txPos, rxPos),
                truePhaseRad=propagationPhase(channel.geometry, txPos, rxPos),
                measuredPhaseRad=measurement.phaseRad,
                decidedChannelBit=decided,
                decodedBit=decoded,
            )
        )
    return records


def countBitErrors(records: list[TraceRecord]) -> int:
    return sum(1 for r in records if r.decodedBit != r.messageBit)


def transmit(
    config: SessionConfig,
    text: str,
    tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE,
) -> SessionTrace:
    messageBits = encodeAscii(text)
    table = calibrate(config.channel, tolerance)
    records = _runBits(
        config, config.channel, table, KeyStream(config.keySeed), messageBits
    )
    for r in records:
        logger.debug(
            f"bit {r.index}: m={r.messageBit} k={r.keyBit} p=({r.txPos},{r.rxPos})"
            f" phase={r.measuredPhaseRad:.6f} decided={r.decidedChannelBit}"
        )

    if not config.delivered:
        logger.warning(
            "Reversed pilot without feedback: the channel is known at the"
            " transmitter's side only."
        )
        decodedText = NO_FEEDBACK
    else:
        try:
            decodedText = decodeAscii([r.decodedBit for r in records])
        except (NonAsciiByteException, BitstreamLengthException) as e:
            logger.warning(f"Received bits do not decode: {e}")
            decodedText = UNDECODABLE

    return SessionTrace(
        config.summary(), table, records, decodedText, countBitErrors(records)
    )


def eavesdrop(
    trace: SessionTrace, knowsTxPositions: bool, knowsRxPositions: bool
) -> EavesdropResult:
    if knowsTxPositions and knowsRxPositions:
        bits = [recoverFromPositions(r.txPos, r.rxPos) for r in trace.records]
        return EavesdropResult(decodeAscii(bits))
    if knowsTxPositions:
        return EavesdropResult(INDETERMINATE, TX_ONLY_DIAGNOSTIC)
    if knowsRxPositions:
        return EavesdropResult(INDETERMINATE, RX_ONLY_DIAGNOSTIC)
    return EavesdropResult(INDETERMINATE, NO_POSITIONS_DIAGNOSTIC)


def eavesdropByTrial(trace: SessionTrace) -> list[TrialCandidate]:
    """Guess the channel polarity and bit order from visible positions.

    Keeps every mapping under which all characters are printable.
    """
    channelBits = [recoverFromPositions(r.txPos, r.rxPos) for r in trace.records]
    candidates = []
    for inverted in (False, True):
        for msbFirst in (True, False):
            bits = [c ^ int(inverted) for c in channelBits]
            try:
                text = decodeAscii(bits, msbFirst=msbFirst)
            except (NonAsciiByteException, BitstreamLengthException):
                continue
            if all(ord(c) in PRINTABLE_ASCII for c in text):
                candidates.append(TrialCandidate(inverted, msbFirst, text))
            else:
                logger.debug(
                    f"Mapping inverted={inverted} msbFirst={msbFirst} is not printable"
                )
    return candidates


def classifyObserverPhases(phases: list[float]) -> list[int]:
    """Split phases into two classes, 0 being the class of the first phase."""
    if not phases:
        return []
    reference = phases[0]
    table = CalibrationTable(reference, wrapPhase(reference + math.pi), math.pi)
    return [decide(p, table) for p in phases]


def interceptEmissions(
    config: SessionConfig,
    trace: SessionTrace,
    observer: ObserverPoint,
    observerSeed: int,
) -> InterceptResult:
    """What an outside receiver learns from the antenna that radiates.

    With the forward pilot the transmitter radiates, with the reversed pilot
    only the receiver does and the transmitter stays passive.
    """
    emitter = (
        Emitter.RX_ANTENNA
        if config.mode is PilotMode.REVERSED_PILOT
        else Emitter.TX_ANTENNA
    )
    observerChannel = ChannelModel(
        config.channel.geometry,
        config.channel.phaseNoiseSigmaRad,
        config.channel.positionJitterM,
        observerSeed,
    )
    phases = [
        observerChannel.observe(observer, emitter, r.txPos, r.rxPos).phaseRad
        for r in trace.records
    ]
    return InterceptResult(emitter, phases, classifyObserverPhases(phases))


def _sweepPoint(
    baseConfig: SessionConfig,
    index: int,
    sigma: float,
    bitsPerPoint: int,
    tolerance: float,
) -> float:
    channel = baseConfig.channel.spawn(index, sigma)
    # References come from the noiseless initializing phase.
    table = calibrate(baseConfig.channel.spawn(index, 0.0), tolerance)
    messageRng = np.random.default_rng([baseConfig.keySeed, index])
    messageBits = [int(b) for b in messageRng.integers(0, 2, size=bitsPerPoint)]
    config = SessionConfig(channel, baseConfig.keySeed, baseConfig.mode, True)
    keyStream = KeyStream((baseConfig.keySeed + index) & (2**64 - 1))
    records = _runBits(config, channel, table, keyStream, messageBits)
    ber = countBitErrors(records) / bitsPerPoint
    logger.info(f"Sweep point {index}: sigma={sigma} ber={ber}")
    return ber


def berSweep(
    baseConfig: SessionConfig,
    sigmas: list[float],
    bitsPerPoint: int,
    workers: int = 1,
    tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE,
) -> list[tuple[float, float]]:
    if bitsPerPoint < MIN_BITS_PER_POINT:
        raise InvalidBitsPerPointException(bitsPerPoint)
    for sigma in sigmas:
        if not (math.isfinite(sigma) and sigma >= 0):
            raise InvalidSigmaException(sigma)

    def point(indexedSigma: tuple[int, float]) -> float:
        index, sigma = indexedSigma
        return _sweepPoint(baseConfig, index, sigma, bitsPerPoint, tolerance)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            bers = list(executor.map(point, enumerate(sigmas)))
    else:
        bers = [point(indexedSigma) for indexedSigma in enumerate(sigmas)]
    return list(zip(sigmas, bers))
