"""Container for time-resolved Loschmidt-echo data.

Echoes of long chains underflow double precision (the chain echo is a
product over hundreds of per-mode echoes), so the series stores the
*logarithm* of the echo and downstream averages work in log space.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class EchoSeries:
    """Log-echo ln L(t_k) on a uniform time grid.

    Attributes
    ----------
    t : numpy.ndarray
        Uniform, strictly increasing time grid (units of 1/J).
    log_echo : numpy.ndarray
        ln L(t_k) <= 0, with ln L(0) = 0 when the grid starts at zero.
    n_sites : int
        Chain length used by intensive quantities (rate function,
        echo averages).
    params : object
        Model parameters of the quench (pre-quench field inside).
    h0, h1 : float
        Pre- and post-quench fields.
    """

    t: np.ndarray
    log_echo: np.ndarray
    n_sites: int
    params: object = None
    h0: float = None
    h1: float = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        log_echo = np.asarray(self.log_echo, dtype=float)
        if t.ndim != 1 or len(t) < 1:
            raise ParameterError("time grid must be a non-empty 1-D array")
        if log_echo.shape != t.shape:
            raise ParameterError(
                f"log_echo shape {log_echo.shape} does not match time grid {t.shape}"
            )
        if len(t) > 1:
            steps = np.diff(t)
            if np.any(steps <= 0):
                raise ParameterError("time grid must be strictly increasing")
            if not np.allclose(steps, steps[0], rtol=1e-8, atol=1e-12):
                raise ParameterError("time grid must be uniform")
        if self.n_sites < 1:
            raise ParameterError(f"n_sites must be positive, got {self.n_sites}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "log_echo", log_echo)

    @property
    def dt(self):
        """Grid spacing (0 for a single-point grid)."""
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0

    @property
    def echo(self):
        """L(t_k) = exp(ln L); underflows to 0 for strongly decayed echoes."""
        return np.exp(self.log_echo)

    def rate(self):
        """Rate function lambda(t_k) = -ln L(t_k) / N."""
        # + 0.0 turns -0.0 into 0.0 at the L = 1 points
        return -self.log_echo / self.n_sites + 0.0
