from chanmod.channel import Measurement, SoundingDirection
from chanmod.geometry import LinkGeometry


class MockChannelModel:
    """Returns scripted phases per position pair instead of sounding."""

    def __init__(self, geometry: LinkGeometry, phases: dict[tuple[int, int], float]):
        self.geometry = geometry
        self.phases = phases
        self.soundings: list[tuple[int, int, SoundingDirection]] = []

    def sound(self, pTx: int, pRx: int, direction: SoundingDirection) -> Measurement:
        self.soundings.append((pTx, pRx, direction))
        return Measurement(self.phases[(pTx, pRx)], 1.0)


def scriptedClasses(
    geometry: LinkGeometry, same: tuple[float, float], alt: tuple[float, float]
) -> MockChannelModel:
    return MockChannelModel(
        geometry,
        {(0, 0): same[0], (1, 1): same[1], (0, 1): alt[0], (1, 0): alt[1]},
    )
