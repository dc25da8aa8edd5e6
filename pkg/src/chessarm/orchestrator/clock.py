"""The session's virtual clock: simulated phases advance it explicitly."""

from __future__ import annotations

import time


class VirtualClock:
    """Monotonic simulated time.  With a throttle factor above zero, each
    advance also sleeps that fraction of the simulated interval, which lets
    demos run at watchable speed while tests stay instant."""

    def __init__(self, throttle: float = 0.0):
        self._t = 0.0
        self.throttle = throttle

    def now(self) -> float:
        return self._t

    def advance(self, dt: float) -> None:
        if dt < 0:
            raise ValueError("cannot advance backwards")
        self._t += dt
        if self.throttle > 0:
            time.sleep(dt * self.throttle)
