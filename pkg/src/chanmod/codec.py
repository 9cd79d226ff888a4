from .exceptions import (
    BitstreamLengthException,
    NonAsciiByteException,
    NonAsciiCharacterException,
)
from .geometry import checkBit

BITS_PER_CHAR = 8
MAX_ASCII = 127


def encodeAscii(text: str, msbFirst: bool = True) -> list[int]:
    """8 bits per character, most significant bit first by default."""
    bits: list[int] = []
    for index, char in enumerate(text):
        code = ord(char)
        if code > MAX_ASCII:
            raise NonAsciiCharacterException(index, char)
        charBits = [(code >> shift) & 1 for shift in range(BITS_PER_CHAR - 1, -1, -1)]
        bits.extend(charBits if msbFirst else charBits[::-1])
    return bits


def decodeAscii(bits: list[int], msbFirst: bool = True) -> str:
    if len(bits) % BITS_PER_CHAR != 0:
        raise BitstreamLengthException(len(bits))
    chars = []
    for byteIndex in range(len(bits) // BITS_PER_CHAR):
        frame = bits[byteIndex * BITS_PER_CHAR : (byteIndex + 1) * BITS_PER_CHAR]
        if not msbFirst:
            frame = frame[::-1]
        value = 0
        for bit in frame:
            value = (value << 1) | checkBit(bit)
        if value > MAX_ASCII:
            raise NonAsciiByteException(byteIndex, value)
        chars.append(chr(value))
    return "".join(chars)


def bitToChannel(m: int) -> int:
    """Message bit to channel class: 0 -> same positions, 1 -> alternating."""
    return checkBit(m)


def channelToBit(c: int) -> int:
    return checkBit(c)
