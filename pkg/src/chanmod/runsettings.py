import json
import math
import os
from dataclasses import dataclass, field, replace

from PySide6.QtCore import QSettings

from .channel import DEFAULT_NOISE_SEED, DEFAULT_POSITION_JITTER_M, ChannelModel
from .cipher import DEFAULT_KEY_SEED, parseSeed
from .codec import encodeAscii
from .exceptions import (
    InvalidChannelModelException,
    InvalidGeometryException,
    InvalidRunConfigException,
    NonAsciiCharacterException,
)
from .geometry import DEFAULT_BASELINE_M, DEFAULT_FREQUENCY_HZ, LinkGeometry
from .link import DEFAULT_CONSISTENCY_TOLERANCE, PilotMode, SessionConfig

RUN_SETTINGS_GROUP = "RunSettings"

DEFAULT_NOISE_SIGMA_RAD = 0.0
DEFAULT_MESSAGE = "OE1GAQ"
DEFAULT_SIGMAS = [0.0, 0.3, 0.6, 1.0]
DEFAULT_BITS_PER_POINT = 10000
DEFAULT_WORKERS = 1


@dataclass(frozen=True)
class RunConfig:
    frequencyHz: float = DEFAULT_FREQUENCY_HZ
    baselineM: float = DEFAULT_BASELINE_M
    # None means half a wavelength.
    displacementM: float | None = None
    noiseSigmaRad: float = DEFAULT_NOISE_SIGMA_RAD
    positionJitterM: float = DEFAULT_POSITION_JITTER_M
    keySeed: int = DEFAULT_KEY_SEED
    noiseSeed: int = DEFAULT_NOISE_SEED
    mode: PilotMode = PilotMode.FORWARD_PILOT
    feedback: bool = True
    message: str = DEFAULT_MESSAGE
    outPath: str | None = None
    sigmas: list[float] = field(default_factory=lambda: list(DEFAULT_SIGMAS))
    bitsPerPoint: int = DEFAULT_BITS_PER_POINT
    knowsTx: bool = False
    knowsRx: bool = False
    trialAndError: bool = False
    consistencyTolerance: float = DEFAULT_CONSISTENCY_TOLERANCE
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        for name in ("frequencyHz", "baselineM"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidRunConfigException(f"{name}={value} must be positive")
        if self.displacementM is not None and not (
            math.isfinite(self.displacementM) and self.displacementM > 0
        ):
            raise InvalidRunConfigException(
                f"displacementM={self.displacementM} must be positive"
            )
        for name in ("noiseSigmaRad", "positionJitterM"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidRunConfigException(f"{name}={value} must be non-negative")
        if not (
            math.isfinite(self.consistencyTolerance) and self.consistencyTolerance > 0
        ):
            raise InvalidRunConfigException(
                f"consistencyTolerance={self.consistencyTolerance} must be positive"
            )
        if self.workers < 1:
            raise InvalidRunConfigException(f"workers={self.workers} must be >= 1")
        try:
            self.buildChannel()
        except (InvalidGeometryException, InvalidChannelModelException) as e:
            raise InvalidRunConfigException(str(e))
        try:
            encodeAscii(self.message)
        except NonAsciiCharacterException as e:
            raise InvalidRunConfigException(
                f"message has a non-ASCII character at index {e.index}"
            )

    def buildGeometry(self) -> LinkGeometry:
        return LinkGeometry.create(self.frequencyHz, self.baselineM, self.displacementM)

    def buildChannel(self) -> ChannelModel:
        return ChannelModel(
            self.buildGeometry(),
            self.noiseSigmaRad,
            self.positionJitterM,
            self.noiseSeed,
        )

    def buildSession(self) -> SessionConfig:
        return SessionConfig(
            self.buildChannel(), self.keySeed, self.mode, self.feedback
        )

    def toHeader(self) -> list[tuple[str, str]]:
        """Every field as key=value, enough to reproduce the run."""
        geometry = self.buildGeometry()
        return [
            ("freq_hz", repr(self.frequencyHz)),
            ("baseline_m", repr(self.baselineM)),
            ("displacement_m", repr(geometry.displacementM)),
            ("noise_sigma_rad", repr(self.noiseSigmaRad)),
            ("pos_jitter_m", repr(self.positionJitterM)),
            ("key_seed", str(self.keySeed)),
            ("noise_seed", str(self.noiseSeed)),
            ("mode", self.mode.value),
            ("feedback", str(self.feedback).lower()),
            ("message", json.dumps(self.message)),
            ("consistency_tolerance", repr(self.consistencyTolerance)),
            ("bit_order", "msb_first"),
        ]


def parseBool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidRunConfigException(f"{text!r} is not a boolean")


def parseFloat(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InvalidRunConfigException(f"{name}={text!r} is not a number")


def parseInt(name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidRunConfigException(f"{name}={text!r} is not an integer")


def parseMode(text: str) -> PilotMode:
    try:
        return PilotMode(text.strip().lower())
    except ValueError:
        raise InvalidRunConfigException(f"mode {text!r}, expected forward|reversed")


def parseSigmas(text: str) -> list[float]:
    items = [item for item in text.split(",") if item.strip() != ""]
    if not items:
        raise InvalidRunConfigException("empty sigma list")
    sigmas = [parseFloat("sigmas", item) for item in items]
    for sigma in sigmas:
        if not (math.isfinite(sigma) and sigma >= 0):
            raise InvalidRunConfigException(f"sigma {sigma} must be non-negative")
    return sigmas


# Option name -> (RunConfig field, parser). Shared by ini keys and flags.
VALUE_PARSERS = {
    "freq-hz": ("frequencyHz", lambda t: parseFloat("freq-hz", t)),
    "baseline-m": ("baselineM", lambda t: parseFloat("baseline-m", t)),
    "displacement-m": ("displacementM", lambda t: parseFloat("displacement-m", t)),
    "noise-sigma": ("noiseSigmaRad", lambda t: parseFloat("noise-sigma", t)),
    "pos-jitter-m": ("positionJitterM", lambda t: parseFloat("pos-jitter-m", t)),
    "key-seed": ("keySeed", parseSeed),
    "noise-seed": ("noiseSeed", parseSeed),
    "mode": ("mode", parseMode),
    "feedback": ("feedback", parseBool),
    "message": ("message", str),
    "out": ("outPath", str),
    "sigmas": ("sigmas", parseSigmas),
    "bits": ("bitsPerPoint", lambda t: parseInt("bits", t)),
    "tolerance": ("consistencyTolerance", lambda t: parseFloat("tolerance", t)),
    "workers": ("workers", lambda t: parseInt("workers", t)),
}


def loadSettingsFile(path: str) -> dict[str, str]:
    """Read the [RunSettings] group of an ini file, keys named like the flags."""
    if not os.path.isfile(path):
        raise InvalidRunConfigException(f"settings file {path} does not exist")
    settings = QSettings(path, QSettings.Format.IniFormat)
    if settings.status() != QSettings.Status.NoError:
        raise InvalidRunConfigException(f"cannot read settings file {path}")
    settings.beginGroup(RUN_SETTINGS_GROUP)
    values = {}
    for key in settings.childKeys():
        if key not in VALUE_PARSERS:
            raise InvalidRunConfigException(f"unknown setting {key!r} in {path}")
        value = settings.value(key)
        # QSettings splits unquoted comma lists.
        if isinstance(value, list):
            value = ",".join(value)
        values[key] = str(value)
    settings.endGroup()
    return values


def loadRunConfig(
    options: dict[str, str],
    switches: dict[str, bool] | None = None,
    settingsPath: str | None = None,
) -> RunConfig:
    """Defaults, then the settings file, then explicit options."""
    merged: dict[str, str] = {}
    if settingsPath is not None:
        merged.update(loadSettingsFile(settingsPath))
    merged.update(options)

    overrides = {}
    for name, text in merged.items():
        fieldName, parse = VALUE_PARSERS[name]
        overrides[fieldName] = parse(text)
    overrides.update(switches or {})
    return replace(RunConfig(), **overrides)
