"""The receiver's planned positions are the key.

KeyStream is a 64-bit linear congruential generator emitting the top bit of
each new state. It is reproducible, not cryptographically secure.
"""

from .exceptions import InvalidRunConfigException
from .geometry import checkBit

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
STATE_MASK = 2**64 - 1

DEFAULT_KEY_SEED = 1


class KeyStream:
    def __init__(self, seed: int = DEFAULT_KEY_SEED):
        if not (0 <= seed <= STATE_MASK):
            raise InvalidRunConfigException(f"key seed {seed} outside 64 bits")
        self.seed = seed
        self.state = seed
        self.emitted = 0

    def nextKeyBit(self) -> int:
        self.state = (self.state * LCG_MULTIPLIER + LCG_INCREMENT) & STATE_MASK
        self.emitted += 1
        return self.state >> 63

    def take(self, count: int) -> list[int]:
        return [self.nextKeyBit() for _ in range(count)]


def parseSeed(text: str) -> int:
    """Decimal or 0x-prefixed hex, 64 bits unsigned."""
    text = text.strip()
    try:
        value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    except ValueError:
        raise InvalidRunConfigException(f"seed {text!r} is not a number")
    if not (0 <= value <= STATE_MASK):
        raise InvalidRunConfigException(f"seed {text!r} outside 64 bits")
    return value


def txPositionFor(m: int, k: int) -> int:
    return checkBit(m) ^ checkBit(k)


def rxPositionFor(k: int) -> int:
    return checkBit(k)


def recoverFromPositions(pTx: int, pRx: int) -> int:
    return checkBit(pTx) ^ checkBit(pRx)
