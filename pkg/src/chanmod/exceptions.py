class InvalidGeometryException(Exception):
    def __str__(self):
        return repr(f"Invalid link geometry: {self.args[0] if self.args else ''}")


class NonFinitePhaseException(Exception):
    def __str__(self):
        return repr("Phase must be finite.")


class InvalidChannelModelException(Exception):
    def __str__(self):
        return repr(f"Invalid channel model: {self.args[0] if self.args else ''}")


class ObserverCoincidentException(Exception):
    def __str__(self):
        return repr("Observer coincides with the emitting antenna.")


class InvalidBitException(Exception):
    def __str__(self):
        return repr(f"Not a binary value: {self.args[0] if self.args else ''}")


class NonAsciiCharacterException(Exception):
    def __init__(self, index: int, char: str):
        super().__init__(index, char)
        self.index = index
        self.char = char

    def __str__(self):
        return repr(f"Non-ASCII character {self.char!r} at index {self.index}.")


class BitstreamLengthException(Exception):
    def __init__(self, length: int):
        super().__init__(length)
        self.length = length

    def __str__(self):
        return repr(f"Bitstream length {self.length} is not a multiple of 8.")


class NonAsciiByteException(Exception):
    def __init__(self, byteIndex: int, value: int):
        super().__init__(byteIndex, value)
        self.byteIndex = byteIndex
        self.value = value

    def __str__(self):
        return repr(f"Byte {self.value} at index {self.byteIndex} is not ASCII.")


class CalibrationFailedException(Exception):
    def __init__(self, reason: str, className: str, value: float):
        super().__init__(reason, className, value)
        self.reason = reason
        self.className = className
        self.value = value

    def __str__(self):
        return repr(
            f"Calibration failed: {self.reason} of the {self.className} class"
            f" is {self.value:.6f} rad."
        )


class InvalidSigmaException(Exception):
    def __str__(self):
        return repr(f"Invalid noise sigma: {self.args[0] if self.args else ''}")


class InvalidBitsPerPointException(Exception):
    def __str__(self):
        return repr("At least 1000 bits per sweep point are required.")


class MalformedTraceException(Exception):
    def __init__(self, lineNumber: int, reason: str):
        super().__init__(lineNumber, reason)
        self.lineNumber = lineNumber
        self.reason = reason

    def __str__(self):
        return repr(f"Malformed trace at line {self.lineNumber}: {self.reason}")


class InvalidRunConfigException(Exception):
    def __str__(self):
        return repr(f"Invalid run configuration: {self.args[0] if self.args else ''}")
