from .fixtures.fixture_channel import (  # noqa: F401
    geometry,
    jitteredChannel,
    noiselessChannel,
    noiselessSession,
)
from .fixtures.fixture_settings import setAppName, settingsFile  # noqa: F401
from .fixtures.fixture_trace import callsignTrace, callsignTraceFile  # noqa: F401
