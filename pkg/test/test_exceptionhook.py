import logging
import sys

from chanmod.exceptionhook import UncaughtHook


def testInstall(monkeypatch):
    monkeypatch.setattr(sys, "excepthook", sys.__excepthook__)
    hook = UncaughtHook()
    hook.install()
    assert sys.excepthook == hook.exception_hook


def testUncaughtExceptionIsLoggedAndSummarized(capsys, caplog):
    hook = UncaughtHook()
    try:
        raise ValueError("phase out of range")
    except ValueError:
        hook.exception_hook(*sys.exc_info())
    assert any(r.levelno == logging.CRITICAL for r in caplog.records)
    err = capsys.readouterr().err
    assert "ValueError: phase out of range" in err
