import math
import random
import time

import pytest

from chanmod.channel import ChannelModel, Emitter, ObserverPoint, SoundingDirection
from chanmod.codec import encodeAscii
from chanmod.exceptions import (
    CalibrationFailedException,
    InvalidBitsPerPointException,
    InvalidSigmaException,
)
from chanmod.geometry import circularDistance
from chanmod.link import (
    INDETERMINATE,
    NO_FEEDBACK,
    CalibrationTable,
    PilotMode,
    SessionConfig,
    berSweep,
    calibrate,
    classifyObserverPhases,
    decide,
    eavesdrop,
    eavesdropByTrial,
    interceptEmissions,
    transmit,
)

from .mocks.mock_channel import scriptedClasses


def randomText(rng: random.Random, maxLength: int = 8) -> str:
    return "".join(chr(rng.randrange(128)) for _ in range(rng.randrange(1, maxLength)))


def assertConsistent(records):
    for r in records:
        assert r.trueChannelBit == r.txPos ^ r.rxPos
        assert r.decodedBit == r.decidedChannelBit


def testNoiselessCalibration(noiselessChannel, geometry):
    table = calibrate(noiselessChannel)
    assert table.classSeparation == pytest.approx(math.pi, abs=1e-9)
    assert table.spreadSame == pytest.approx(0.0, abs=1e-9)
    assert table.spreadAlt == pytest.approx(0.0, abs=1e-9)
    home = ChannelModel(geometry, 0.0, 0.0).sound(0, 0, SoundingDirection.FORWARD)
    assert circularDistance(table.phiSame, home.phaseRad) < 1e-9


def testCalibrationSoundsAllFourPairsForward(geometry):
    channel = scriptedClasses(geometry, (0.0, 0.0), (math.pi, math.pi))
    calibrate(channel)
    assert sorted(p[:2] for p in channel.soundings) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert {p[2] for p in channel.soundings} == {SoundingDirection.FORWARD}


def testCalibrationWrapsAcrossZero(geometry):
    channel = scriptedClasses(geometry, (0.01, 2 * math.pi - 0.01), (math.pi, math.pi))
    table = calibrate(channel)
    assert circularDistance(table.phiSame, 0.0) < 1e-9
    assert table.spreadSame == pytest.approx(0.02, abs=1e-9)


def testCalibrationFailsOnSpread(geometry):
    channel = scriptedClasses(geometry, (0.0, 0.5), (math.pi, math.pi))
    with pytest.raises(CalibrationFailedException) as excInfo:
        calibrate(channel)
    assert excInfo.value.className == "same"
    assert excInfo.value.value == pytest.approx(0.5)


def testCalibrationFailsOnAlternatingSpread(geometry):
    channel = scriptedClasses(geometry, (1.0, 1.0), (4.0, 4.3))
    with pytest.raises(CalibrationFailedException) as excInfo:
        calibrate(channel)
    assert excInfo.value.className == "alternating"


def testCalibrationFailsOnSeparation(geometry):
    channel = scriptedClasses(geometry, (1.0, 1.0), (1.15, 1.15))
    with pytest.raises(CalibrationFailedException) as excInfo:
        calibrate(channel)
    assert excInfo.value.reason == "separation"


def testCalibrationFailsUnderHeavyNoise(geometry):
    failures = 0
    for seed in range(100):
        try:
            calibrate(ChannelModel(geometry, 5.0, 0.02e-3, noiseSeed=seed))
        except CalibrationFailedException:
            failures += 1
    assert failures >= 95


def testDecide():
    table = CalibrationTable(0.0, math.pi, math.pi)
    assert decide(0.0, table) == 0
    assert decide(math.pi, table) == 1
    # Exactly on the boundary.
    assert decide(math.pi / 2, table) == 0
    assert decide(2 * math.pi - 0.1, table) == 0
    assert decide(math.pi + 0.1, table) == 1


def testDecisionBoundariesAreTwoMidpoints(noiselessChannel):
    table = calibrate(noiselessChannel)
    count = 10000
    decisions = [decide(2 * math.pi * i / count, table) for i in range(count)]
    transitions = sum(
        1 for i in range(count) if decisions[i] != decisions[(i + 1) % count]
    )
    assert transitions == 2


def testTransmitCallsign(noiselessSession):
    trace = transmit(noiselessSession, "OE1GAQ")
    assert len(trace.records) == 48
    assert trace.bitErrors == 0
    assert trace.decodedText == "OE1GAQ"
    assertConsistent(trace.records)


def testCallsignTransmitsWithinASecond(jitteredChannel):
    start = time.perf_counter()
    trace = transmit(SessionConfig(jitteredChannel, 1), "OE1GAQ")
    assert time.perf_counter() - start < 1.0
    assert trace.bitErrors == 0


@pytest.mark.parametrize("keySeed", range(10))
def testCallsignWithoutErrorsForAnyKey(jitteredChannel, keySeed):
    trace = transmit(SessionConfig(jitteredChannel, keySeed), "OE1GAQ")
    assert trace.bitErrors == 0
    assert trace.decodedText == "OE1GAQ"


def testTransmitEmptyText(noiselessSession):
    trace = transmit(noiselessSession, "")
    assert trace.records == []
    assert trace.decodedText == ""
    assert trace.bitErrors == 0


def testEndToEndIdentity(geometry):
    rng = random.Random(1950)
    for _ in range(50):
        text = randomText(rng, 12)
        channel = ChannelModel(geometry, 0.0, 0.0, noiseSeed=rng.randrange(2**64))
        trace = transmit(SessionConfig(channel, rng.randrange(2**64)), text)
        assert trace.decodedText == text
        assert trace.bitErrors == 0
        assertConsistent(trace.records)


def testChannelSequenceIsMessageForEveryKey(geometry):
    bits = encodeAscii("OE1GAQ")
    for keySeed in range(20):
        channel = ChannelModel(geometry, 0.0, 0.02e-3, noiseSeed=keySeed)
        trace = transmit(SessionConfig(channel, keySeed), "OE1GAQ")
        assert [r.trueChannelBit for r in trace.records] == bits
        assert [r.rxPos for r in trace.records] == [r.keyBit for r in trace.records]


def testReversedPilotEquivalentToForward(geometry):
    rng = random.Random(1812)
    for _ in range(100):
        text = randomText(rng)
        noiseSeed = rng.randrange(2**64)
        keySeed = rng.randrange(2**64)

        def run(mode: PilotMode):
            channel = ChannelModel(geometry, 0.01, 0.02e-3, noiseSeed)
            return transmit(SessionConfig(channel, keySeed, mode, True), text)

        forward = run(PilotMode.FORWARD_PILOT)
        reversed_ = run(PilotMode.REVERSED_PILOT)
        assert forward.records == reversed_.records
        assert forward.calibration == reversed_.calibration
        assert forward.decodedText == reversed_.decodedText
        assert forward.bitErrors == reversed_.bitErrors


def testReversedPilotWithoutFeedback(noiselessChannel):
    session = SessionConfig(noiselessChannel, 1, PilotMode.REVERSED_PILOT, False)
    trace = transmit(session, "OE1GAQ")
    assert trace.decodedText == NO_FEEDBACK
    assert [r.trueChannelBit for r in trace.records] == encodeAscii("OE1GAQ")
    assert all(r.decidedChannelBit is None for r in trace.records)
    assert trace.bitErrors == 48


def testCalibrationFailurePropagates(geometry):
    channel = scriptedClasses(geometry, (0.0, 0.0), (0.1, 0.1))
    with pytest.raises(CalibrationFailedException):
        transmit(SessionConfig(channel, 1), "OE1GAQ")
    assert len(channel.soundings) == 4


def testEavesdrop(callsignTrace):
    assert eavesdrop(callsignTrace, True, True).text == "OE1GAQ"
    txOnly = eavesdrop(callsignTrace, True, False)
    assert txOnly.text == INDETERMINATE
    assert "bijection" in txOnly.diagnostic
    assert eavesdrop(callsignTrace, False, True).text == INDETERMINATE
    assert eavesdrop(callsignTrace, False, False).text == INDETERMINATE
    assert not eavesdrop(callsignTrace, False, False).decoded


def testEavesdropByTrialFindsMapping(callsignTrace):
    candidates = eavesdropByTrial(callsignTrace)
    assert candidates
    first = candidates[0]
    assert (first.inverted, first.msbFirst, first.text) == (False, True, "OE1GAQ")


def testClassifyObserverPhases():
    phases = [0.2, 0.2 + math.pi, 0.25, math.pi - 0.1, 0.1]
    assert classifyObserverPhases(phases) == [0, 1, 0, 1, 0]
    assert classifyObserverPhases([]) == []


@pytest.mark.parametrize(
    "mode, emitter, exposed",
    [
        (PilotMode.FORWARD_PILOT, Emitter.TX_ANTENNA, "txPos"),
        (PilotMode.REVERSED_PILOT, Emitter.RX_ANTENNA, "rxPos"),
    ],
)
def testInterceptExposesOnlyTheRadiatingAntenna(geometry, mode, emitter, exposed):
    channel = ChannelModel(geometry, 0.0, 0.02e-3, noiseSeed=4)
    session = SessionConfig(channel, 77, mode, True)
    trace = transmit(session, "OE1GAQ")
    result = interceptEmissions(session, trace, ObserverPoint(-5.0, 0.0), 99)
    assert result.emitter is emitter
    positions = [getattr(r, exposed) for r in trace.records]
    complement = [1 - p for p in positions]
    assert result.inferredPositions in (positions, complement)
    # One side alone does not reveal the message.
    assert result.inferredPositions != encodeAscii("OE1GAQ")


def testBerSweepNoiseless(noiselessSession):
    assert berSweep(noiselessSession, [0.0], 1000) == [(0.0, 0.0)]


def testBerSweepWithJitterIsErrorFree(jitteredChannel):
    assert berSweep(SessionConfig(jitteredChannel, 5), [0.0], 2000) == [(0.0, 0.0)]


def testBerSweepHeavyNoiseIsCoinFlip(jitteredChannel):
    [(sigma, ber)] = berSweep(SessionConfig(jitteredChannel, 5), [10.0], 10000)
    assert sigma == 10.0
    assert 0.45 <= ber <= 0.55


def testBerSweepIsMonotonic(jitteredChannel):
    results = berSweep(SessionConfig(jitteredChannel, 5), [0.0, 0.3, 0.6, 1.0], 10000)
    bers = [ber for _, ber in results]
    assert bers[0] == 0.0
    assert bers == sorted(bers)
    [(_, low)] = berSweep(SessionConfig(jitteredChannel, 5), [0.1], 10000)
    [(_, high)] = berSweep(SessionConfig(jitteredChannel, 5), [1.0], 10000)
    assert low <= high


def testBerSweepParallelMatchesSerial(jitteredChannel):
    sigmas = [0.0, 0.5, 1.0, 2.0, 10.0]
    session = SessionConfig(jitteredChannel, 11)
    serial = berSweep(session, sigmas, 2000, workers=1)
    parallel = berSweep(session, sigmas, 2000, workers=4)
    assert serial == parallel


def testBerSweepRejectsInvalidInput(noiselessSession):
    with pytest.raises(InvalidSigmaException):
        berSweep(noiselessSession, [0.1, -0.5], 1000)
    with pytest.raises(InvalidBitsPerPointException):
        berSweep(noiselessSession, [0.1], 999)
