"""Injectable clocks.

Everything time-dependent (rate limiting, polling, window math) takes one
of these instead of reading the wall clock, so the whole pipeline can run
under simulated time in tests and in replay mode.
"""

import time


class SystemClock:
    """Real wall-clock time."""

    def now(self) -> float:
        return time.time()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class VirtualClock:
    """Simulated time: sleeping advances the clock instantly."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            self._now += seconds

    def advance_to(self, instant: float) -> None:
        """Move time forward to `instant`; never goes backwards."""
        if instant > self._now:
            self._now = instant
