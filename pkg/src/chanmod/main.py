import csv
import logging
import sys

from PySide6.QtCore import QCommandLineOption, QCommandLineParser, QCoreApplication

from .exceptionhook import UncaughtHook
from .exceptions import (
    BitstreamLengthException,
    CalibrationFailedException,
    InvalidBitsPerPointException,
    InvalidRunConfigException,
    InvalidSigmaException,
    MalformedTraceException,
    NonAsciiByteException,
)
from .link import (
    INDETERMINATE,
    berSweep,
    calibrate,
    eavesdrop,
    eavesdropByTrial,
    transmit,
)
from .runsettings import VALUE_PARSERS, RunConfig, loadRunConfig
from .tracefile import formatPhase, readTrace, writeTrace

APP_NAME = "chanmod"
ORGANIZATION_NAME = "ChanModOrg"
DEFAULT_TRACE_PATH = "trace.csv"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CALIBRATION = 2
EXIT_CONFIG = 3
EXIT_IO = 4

COMMANDS = ("transmit", "calibrate", "sweep", "eavesdrop")

VALUE_DESCRIPTIONS = {
    "message": ("ASCII message to send.", "text"),
    "freq-hz": ("Carrier frequency.", "hz"),
    "baseline-m": ("Antenna separation at the home positions.", "m"),
    "displacement-m": ("Antenna movement for a position bit of 1.", "m"),
    "noise-sigma": ("Phase noise standard deviation.", "rad"),
    "pos-jitter-m": ("Positioning precision of the movement units.", "m"),
    "key-seed": ("Keystream seed, decimal or 0x hex.", "seed"),
    "noise-seed": ("Channel noise seed, decimal or 0x hex.", "seed"),
    "mode": ("Pilot direction: forward or reversed.", "mode"),
    "out": ("Output file (trace for transmit, CSV for sweep).", "path"),
    "sigmas": ("Comma separated noise sigmas for the sweep.", "list"),
    "bits": ("Random bits per sweep point.", "n"),
    "tolerance": ("Calibration consistency tolerance.", "rad"),
    "workers": ("Parallel sweep points.", "n"),
}

SWITCHES = {
    "feedback": "Reversed pilot: measured channel is fed back to the receiver.",
    "no-feedback": "Reversed pilot: no feedback of the measured channel.",
    "knows-tx": "Eavesdropper sees the transmit antenna positions.",
    "knows-rx": "Eavesdropper sees the receive antenna positions.",
    "trial-and-error": "Eavesdropper guesses the bit mapping and order.",
    "verbose": "Log every bit.",
}

logger = logging.getLogger(__name__)


def setUpLogging(verbose: bool):
    stream_handler = logging.StreamHandler()
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)-15s %(levelname)-8s [%(module)s] %(message)s",
        handlers=[stream_handler],
    )
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.INFO)


def buildParser() -> tuple[QCommandLineParser, dict[str, QCommandLineOption]]:
    parser = QCommandLineParser()
    parser.setApplicationDescription(
        "Channel modulation link simulator with physical-layer encryption."
    )
    parser.addPositionalArgument("command", " | ".join(COMMANDS))
    parser.addPositionalArgument("trace", "Trace file (eavesdrop only).", "[trace]")

    options: dict[str, QCommandLineOption] = {}
    for name, (description, valueName) in VALUE_DESCRIPTIONS.items():
        options[name] = QCommandLineOption([name], description, valueName)
    options["config"] = QCommandLineOption(
        ["config"], "Ini file with a [RunSettings] group.", "path"
    )
    for name, description in SWITCHES.items():
        options[name] = QCommandLineOption([name], description)
    options["help"] = QCommandLineOption(["h", "help"], "Show this help.")

    for option in options.values():
        parser.addOption(option)
    return parser, options


def parseArguments(
    parser: QCommandLineParser, options: dict[str, QCommandLineOption]
) -> RunConfig:
    values = {
        name: parser.value(options[name])
        for name in VALUE_PARSERS
        if name in options and parser.isSet(options[name])
    }
    switches = {}
    if parser.isSet(options["feedback"]) and parser.isSet(options["no-feedback"]):
        raise InvalidRunConfigException("--feedback and --no-feedback together")
    if parser.isSet(options["feedback"]):
        switches["feedback"] = True
    if parser.isSet(options["no-feedback"]):
        switches["feedback"] = False
    if parser.isSet(options["knows-tx"]):
        switches["knowsTx"] = True
    if parser.isSet(options["knows-rx"]):
        switches["knowsRx"] = True
    if parser.isSet(options["trial-and-error"]):
        switches["trialAndError"] = True

    settingsPath = (
        parser.value(options["config"]) if parser.isSet(options["config"]) else None
    )
    return loadRunConfig(values, switches, settingsPath)


def cmdTransmit(config: RunConfig) -> int:
    session = config.buildSession()
    try:
        trace = transmit(session, config.message, config.consistencyTolerance)
    except CalibrationFailedException as e:
        logger.error(e)
        print(f"calibration failed: {e}")
        return EXIT_CALIBRATION

    path = config.outPath or DEFAULT_TRACE_PATH
    try:
        writeTrace(path, trace, config.toHeader())
    except OSError as e:
        logger.error(f"Cannot write trace {path}: {e}")
        return EXIT_IO

    print(f"decoded_text={trace.decodedText}")
    print(f"bit_errors={trace.bitErrors}")
    print(f"class_separation={formatPhase(trace.calibration.classSeparation)}")
    print(f"trace={path}")
    if session.delivered and trace.decodedText == config.message:
        return EXIT_OK
    return EXIT_MISMATCH


def cmdCalibrate(config: RunConfig) -> int:
    try:
        table = calibrate(config.buildChannel(), config.consistencyTolerance)
    except CalibrationFailedException as e:
        logger.error(e)
        print(f"calibration failed: {e}")
        return EXIT_CALIBRATION
    print(f"phi_same={formatPhase(table.phiSame)}")
    print(f"phi_alt={formatPhase(table.phiAlt)}")
    print(f"class_separation={formatPhase(table.classSeparation)}")
    print(f"spread_same={formatPhase(table.spreadSame)}")
    print(f"spread_alt={formatPhase(table.spreadAlt)}")
    return EXIT_OK


def cmdSweep(config: RunConfig) -> int:
    try:
        results = berSweep(
            config.buildSession(),
            config.sigmas,
            config.bitsPerPoint,
            config.workers,
            config.consistencyTolerance,
        )
    except (InvalidSigmaException, InvalidBitsPerPointException) as e:
        logger.error(e)
        return EXIT_CONFIG
    except CalibrationFailedException as e:
        logger.error(e)
        return EXIT_CALIBRATION

    rows = [["sigma_rad", "ber"]] + [
        [repr(float(sigma)), f"{ber:.6f}"] for sigma, ber in results
    ]
    try:
        if config.outPath is None:
            csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
        else:
            with open(config.outPath, "w", newline="", encoding="ascii") as f:
                csv.writer(f, lineterminator="\n").writerows(rows)
    except OSError as e:
        logger.error(f"Cannot write sweep {config.outPath}: {e}")
        return EXIT_IO
    return EXIT_OK


def cmdEavesdrop(tracePath: str, config: RunConfig) -> int:
    try:
        trace = readTrace(tracePath)
    except OSError as e:
        logger.error(f"Cannot read trace {tracePath}: {e}")
        return EXIT_IO
    except MalformedTraceException as e:
        logger.error(e)
        return EXIT_IO

    try:
        if config.trialAndError and config.knowsTx and config.knowsRx:
            candidates = eavesdropByTrial(trace)
            if not candidates:
                print("no printable mapping found")
            for c in candidates:
                print(
                    f"inverted={str(c.inverted).lower()}"
                    f" msb_first={str(c.msbFirst).lower()} text={c.text}"
                )
            return EXIT_OK
        result = eavesdrop(trace, config.knowsTx, config.knowsRx)
    except (NonAsciiByteException, BitstreamLengthException) as e:
        logger.error(f"Trace positions do not decode: {e}")
        return EXIT_IO

    if result.decoded:
        print(result.text)
    else:
        print(f"{INDETERMINATE}: {result.diagnostic}")
    return EXIT_OK


def run(argv: list[str]) -> int:
    """Parse the arguments and dispatch one command, returning the exit status."""
    if QCoreApplication.instance() is None:
        QCoreApplication.setOrganizationName(ORGANIZATION_NAME)
        QCoreApplication.setApplicationName(APP_NAME)

    parser, options = buildParser()
    if not parser.parse([APP_NAME, *argv]):
        print(f"{APP_NAME}: {parser.errorText()}", file=sys.stderr)
        return EXIT_CONFIG
    if parser.isSet(options["help"]):
        print(parser.helpText())
        return EXIT_OK

    setUpLogging(parser.isSet(options["verbose"]))

    positional = parser.positionalArguments()
    if not positional or positional[0] not in COMMANDS:
        print(f"{APP_NAME}: expected one of {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_CONFIG
    command = positional[0]
    if command == "eavesdrop" and len(positional) != 2:
        print(f"{APP_NAME}: eavesdrop needs a trace file", file=sys.stderr)
        return EXIT_CONFIG
    if command != "eavesdrop" and len(positional) != 1:
        print(f"{APP_NAME}: unexpected argument {positional[1]!r}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        config = parseArguments(parser, options)
    except InvalidRunConfigException as e:
        logger.error(e)
        print(f"{APP_NAME}: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if command == "transmit":
        return cmdTransmit(config)
    if command == "calibrate":
        return cmdCalibrate(config)
    if command == "sweep":
        return cmdSweep(config)
    return cmdEavesdrop(positional[1], config)


def main() -> None:
    app = QCoreApplication(sys.argv)
    app.setOrganizationName(ORGANIZATION_NAME)
    app.setApplicationName(APP_NAME)

    uncaughtHook = UncaughtHook()
    uncaughtHook.install()

    sys.exit(run(sys.argv[1:]))
