"""Trace CSV: a `# key=value` header block, then one row per bit.

Phases carry 9 decimals, lines end with LF, undecided bits are empty cells.
"""

import csv
import json
import logging

from .codec import BITS_PER_CHAR
from .exceptions import MalformedTraceException
from .link import CalibrationTable, SessionTrace, TraceRecord

COLUMNS = [
    "index",
    "message_bit",
    "key_bit",
    "tx_pos",
    "rx_pos",
    "true_channel_bit",
    "true_phase_rad",
    "measured_phase_rad",
    "decided_channel_bit",
    "decoded_bit",
]
BIT_COLUMNS = ["message_bit", "key_bit", "tx_pos", "rx_pos", "true_channel_bit"]

logger = logging.getLogger(__name__)


def formatPhase(phase: float) -> str:
    return f"{phase:.9f}"


def _optionalBit(bit: int | None) -> str:
    return "" if bit is None else str(bit)


def traceHeader(trace: SessionTrace) -> list[tuple[str, str]]:
    calibration = trace.calibration
    return [
        ("phi_same", formatPhase(calibration.phiSame)),
        ("phi_alt", formatPhase(calibration.phiAlt)),
        ("class_separation", formatPhase(calibration.classSeparation)),
        ("decoded_text", json.dumps(trace.decodedText)),
        ("bit_errors", str(trace.bitErrors)),
    ]


def writeTrace(
    path: str, trace: SessionTrace, runHeader: list[tuple[str, str]]
) -> None:
    with open(path, "w", newline="", encoding="ascii") as f:
        for key, value in runHeader + traceHeader(trace):
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in trace.records:
            writer.writerow(
                [
                    r.index,
                    r.messageBit,
                    r.keyBit,
                    r.txPos,
                    r.rxPos,
                    r.trueChannelBit,
                    formatPhase(r.truePhaseRad),
                    formatPhase(r.measuredPhaseRad),
                    _optionalBit(r.decidedChannelBit),
                    _optionalBit(r.decodedBit),
                ]
            )
    logger.info(f"Wrote {len(trace.records)} records to {path}")


def _parseBit(lineNumber: int, column: str, text: str, optional=False) -> int | None:
    if optional and text == "":
        return None
    if text not in ("0", "1"):
        raise MalformedTraceException(lineNumber, f"{column}={text!r} is not a bit")
    return int(text)


def _parsePhase(lineNumber: int, column: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise MalformedTraceException(lineNumber, f"{column}={text!r} is not a phase")


def readTrace(path: str) -> SessionTrace:
    """Load a trace written by writeTrace. Raises OSError if unreadable."""
    header: dict[str, str] = {}
    records: list[TraceRecord] = []
    try:
        with open(path, newline="", encoding="ascii") as f:
            lines = f.read().split("\n")
    except UnicodeDecodeError:
        raise MalformedTraceException(0, "not an ASCII file")

    lineNumber = 0
    while lineNumber < len(lines) and lines[lineNumber].startswith("#"):
        key, sep, value = lines[lineNumber][1:].strip().partition("=")
        if not sep:
            raise MalformedTraceException(lineNumber + 1, "header line without '='")
        header[key] = value
        lineNumber += 1

    body = [line for line in lines[lineNumber:] if line != ""]
    if not body:
        raise MalformedTraceException(lineNumber + 1, "missing column header")
    rows = list(csv.reader(body))
    if rows[0] != COLUMNS:
        raise MalformedTraceException(lineNumber + 1, "unexpected column header")

    for offset, row in enumerate(rows[1:]):
        rowLineNumber = lineNumber + 2 + offset
        if len(row) != len(COLUMNS):
            raise MalformedTraceException(rowLineNumber, f"{len(row)} columns")
        values = dict(zip(COLUMNS, row))
        try:
            index = int(values["index"])
        except ValueError:
            raise MalformedTraceException(rowLineNumber, "index is not an integer")
        if index != offset:
            raise MalformedTraceException(rowLineNumber, f"index {index} out of order")
        bits = {c: _parseBit(rowLineNumber, c, values[c]) for c in BIT_COLUMNS}
        if bits["true_channel_bit"] != bits["tx_pos"] ^ bits["rx_pos"]:
            raise MalformedTraceException(
                rowLineNumber, "true_channel_bit is not tx_pos XOR rx_pos"
            )
        records.append(
            TraceRecord(
                index=index,
                messageBit=bits["message_bit"],
                keyBit=bits["key_bit"],
                txPos=bits["tx_pos"],
                rxPos=bits["rx_pos"],
                trueChannelBit=bits["true_channel_bit"],
                truePhaseRad=_parsePhase(
                    rowLineNumber, "true_phase_rad", values["true_phase_rad"]
                ),
                measuredPhaseRad=_parsePhase(
                    rowLineNumber, "measured_phase_rad", values["measured_phase_rad"]
                ),
                decidedChannelBit=_parseBit(
                    rowLineNumber,
                    "decided_channel_bit",
                    values["decided_channel_bit"],
                    optional=True,
                ),
                decodedBit=_parseBit(
                    rowLineNumber, "decoded_bit", values["decoded_bit"], optional=True
                ),
            )
        )

    if len(records) % BITS_PER_CHAR != 0:
        raise MalformedTraceException(
            lineNumber + 1 + len(records),
            f"{len(records)} records do not form whole characters",
        )

    try:
        calibration = CalibrationTable(
            float(header.get("phi_same", "nan")),
            float(header.get("phi_alt", "nan")),
            float(header.get("class_separation", "nan")),
        )
        decodedText = json.loads(header.get("decoded_text", '""'))
        bitErrors = int(header.get("bit_errors", "0"))
    except ValueError as e:
        raise MalformedTraceException(1, f"bad header value: {e}")

    return SessionTrace(header, calibration, records, decodedText, bitErrors)
