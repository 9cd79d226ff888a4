# Adapted from Tim Lehr: Python exception hooks with Qt message box
# https://timlehr.com/2018/01/python-exception-hooks-with-qt-message-box/
import logging
import sys
import traceback

from PySide6 import QtCore

log = logging.getLogger(__name__)


def showExceptionSummary(logMsg: str):
    """Last line of the traceback for the console user, the rest is in the log."""
    lastLine = logMsg.strip().splitlines()[-1] if logMsg.strip() else logMsg
    print(f"chanmod: unexpected error: {lastLine}", file=sys.stderr)


class UncaughtHook(QtCore.QObject):
    _exception_caught = QtCore.Signal(object)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._exception_caught.connect(showExceptionSummary)

    def install(self):
        sys.excepthook = self.exception_hook

    def exception_hook(self, exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            # ignore keyboard interrupt to support console applications
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
        else:
            exc_info = (exc_type, exc_value, exc_traceback)
            log_msg = "\n".join(
                [
                    "".join(traceback.format_tb(exc_traceback)),
                    f"{exc_type.__name__}: {exc_value}",
                ]
            )
            log.critical(f"Uncaught exception:\n {log_msg}", exc_info=exc_info)
            self._exception_caught.emit(log_msg)
