"""Detection quantities and field sweeps.

Turns echo series into the intensive averages eta_T (transient window
[0, tau0]) and eta_S (steady window [tau1, tau]), runs them over a grid
of post-quench fields, and estimates the exceptional point from the
non-analyticity of eta(h1): the kink shows up as a localised extremum
of the second difference, and the accompanying concave-to-convex
crossover as its sign flip.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.ndimage

from .echo import EchoSeries
from .errors import ParameterError
from .exact import loschmidt_echo, prepare_quench
from .linalg import eig_complex
from .models import Model, analytic_ep, build_hamiltonian
from .momentum import rate_function

#: kink-to-background ratio above which a detection counts as conclusive
CONFIDENCE_THRESHOLD = 3.0


@dataclass(frozen=True)
class AveragingWindow:
    """Transient/steady averaging windows on the time grid.

    tau0 ends the transient average [0, tau0]; [tau1, tau] is the
    steady-state average, with tau doubling as the evolution horizon.
    """

    tau0: float
    tau1: float
    tau: float

    def __post_init__(self):
        if not (0.0 < self.tau0 <= self.tau1 < self.tau):
            raise ParameterError(
                f"window must satisfy 0 < tau0 <= tau1 < tau, got "
                f"({self.tau0}, {self.tau1}, {self.tau})"
            )


@dataclass(frozen=True)
class EPEstimate:
    """Detector output: kink location, curvature-flip location, confidence."""

    kink: float
    curvature_flip: float
    confidence: float
    conclusive: bool
    analytic: float = None
    h_interior: np.ndarray = field(default=None, repr=False)
    second_difference: np.ndarray = field(default=None, repr=False)


@dataclass
class SweepResult:
    """Per-field detection quantities over a post-quench field grid.

    ``detection_quantity`` names the series the detector inspects
    ("eta_s" for the momentum-solved models, "eta_t" for the
    exact-diagonalized ones); ``deta_dh`` holds its central difference
    on the interior points (grid length minus 2).  Failed points carry
    NaN in the value arrays and an entry in ``failures``.
    """

    h1_grid: np.ndarray
    eta_t: np.ndarray
    eta_s: np.ndarray
    rate_sat: np.ndarray
    detection_quantity: str
    deta_dh: np.ndarray
    detected: EPEstimate
    analytic_ep: float
    window: AveragingWindow
    params: object
    h0: float
    failures: list

    @property
    def detection_values(self):
        return self.eta_s if self.detection_quantity == "eta_s" else self.eta_t


def rate_from_echo(series):
    """Rate function lambda(t_k) = -ln L(t_k) / N on the series grid.

    Works on the stored log-echo directly; no exponentiation round trip,
    so fully-decayed echoes keep their rate information.
    """
    return series.rate()


def _grid_index(series, t_value, name):
    """Index of t_value on the series grid; errors if off-grid."""
    t = series.t
    dt = series.dt
    if dt == 0.0:
        raise ParameterError(f"{name}: single-point series has no averaging window")
    idx = int(round((t_value - t[0]) / dt))
    if idx < 0 or idx >= len(t) or abs(t[idx] - t_value) > 1e-6 * dt:
        raise ParameterError(
            f"{name}={t_value} is outside or off the series time grid "
            f"[{t[0]}, {t[-1]}] (dt={dt})"
        )
    return idx


def _log_time_average(series, i_lo, i_hi):
    """ln of the trapezoidal time-average of L over t[i_lo..i_hi].

    Accumulated in log space (log-sum-exp over trapezoid weights) so the
    average survives echoes as small as exp(-1e5).
    """
    y = series.log_echo[i_lo:i_hi + 1]
    t = series.t[i_lo:i_hi + 1]
    steps = np.diff(t)
    w = np.zeros_like(t)
    w[:-1] += 0.5 * steps
    w[1:] += 0.5 * steps
    m = np.max(y)
    integral_ln = m + np.log(np.sum(w * np.exp(y - m)))
    return integral_ln - np.log(t[-1] - t[0])


def eta_transient(series, window):
    """Transient average eta_T = -(1/N) ln( (1/tau0) int_0^tau0 L dt )."""
    if series.t[0] != 0.0:
        raise ParameterError("transient average needs a time grid starting at 0")
    i_hi = _grid_index(series, window.tau0, "tau0")
    if i_hi < 1:
        raise ParameterError(f"tau0={window.tau0} leaves no transient interval")
    # + 0.0 turns -0.0 into 0.0 for trivial quenches
    return -_log_time_average(series, 0, i_hi) / series.n_sites + 0.0


def eta_steady(series, window):
    """Steady average eta_S = -(1/N) ln( (1/(tau-tau1)) int_tau1^tau L dt ).

    Finite-horizon surrogate for the infinite-time average; tau is the
    series horizon in practice.
    """
    i_lo = _grid_index(series, window.tau1, "tau1")
    i_hi = _grid_index(series, window.tau, "tau")
    if i_hi <= i_lo:
        raise ParameterError(
            f"steady window [{window.tau1}, {window.tau}] has no interior"
        )
    return -_log_time_average(series, i_lo, i_hi) / series.n_sites + 0.0


def _steady_rate(series, window):
    """Mean rate function over the steady window (saturation value)."""
    i_lo = _grid_index(series, window.tau1, "tau1")
    i_hi = _grid_index(series, window.tau, "tau")
    return float(np.mean(series.rate()[i_lo:i_hi + 1]))


def detect_ep(h1_grid, values, analytic=None, median_filter=False):
    """Estimate the exceptional point from an eta(h1) series.

    Returns the h1 maximising the absolute second difference of eta
    (kink detector) plus, as a secondary signal, the location where the
    second difference flips sign (curvature change from concave to
    convex).  Confidence is the ratio of the peak |second difference|
    to its median over the sweep; below CONFIDENCE_THRESHOLD the
    result is marked inconclusive rather than an error.

    Parameters
    ----------
    h1_grid, values : array_like
        Post-quench field grid and the averaged rate on it.  NaN marks
        failed points; detection runs on the longest finite stretch.
    analytic : float, optional
        Closed-form reference carried into the estimate for reporting.
    median_filter : bool
        Pre-smooth with a 3-point running median before differencing
        (off by default; useful for noisy data at the cost of slightly
        blunting the kink itself).
    """
    h, y = _finite_run(np.asarray(h1_grid, dtype=float),
                       np.asarray(values, dtype=float))
    if len(h) < 5:
        raise ParameterError(
            f"detector needs at least 5 usable grid points, got {len(h)}"
        )
    if median_filter:
        y = scipy.ndimage.median_filter(y, size=3, mode="nearest")
    d2 = y[:-2] - 2.0 * y[1:-1] + y[2:]
    h_int = h[1:-1]
    abs_d2 = np.abs(d2)
    peak = int(np.argmax(abs_d2))
    kink = float(h_int[peak])

    flip = None
    sign_change = d2[:-1] * d2[1:] < 0.0
    if np.any(sign_change):
        jumps = np.where(sign_change, np.abs(np.diff(d2)), -np.inf)
        j = int(np.argmax(jumps))
        flip = float(0.5 * (h_int[j] + h_int[j + 1]))

    med = float(np.median(abs_d2))
    confidence = float("inf") if med == 0.0 else float(abs_d2[peak] / med)
    return EPEstimate(kink=kink, curvature_flip=flip, confidence=confidence,
                      conclusive=bool(confidence >= CONFIDENCE_THRESHOLD),
                      analytic=analytic, h_interior=h_int,
                      second_difference=d2)


def _finite_run(h, y):
    """Longest contiguous stretch of finite values (NaN = failed point)."""
    finite = np.isfinite(y)
    if np.all(finite):
        return h, y
    best = (0, 0)
    start = None
    for i, ok in enumerate(list(finite) + [False]):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if i - start > best[1] - best[0]:
                best = (start, i)
            start = None
    return h[best[0]:best[1]], y[best[0]:best[1]]


def sweep(params, h0, h1_grid, window, solver=None, dt=0.05, n_modes=None,
          evolution="auto", detection=None, threads=1):
    """Quench-and-average pipeline over a grid of post-quench fields.

    Parameters
    ----------
    params : ModelParams
    h0 : float
        Pre-quench field (must exceed the analytic exceptional point).
    h1_grid : array_like
        Strictly increasing post-quench fields.
    window : AveragingWindow
        Also fixes the evolution horizon (t_max = window.tau).
    solver : {"momentum", "exact"}, optional
        Defaults to the natural solver of the model (momentum-space for
        the analytically reducible chains, exact diagonalization for
        the zz/long-range ones).
    dt : float
        Time step of the evolution grid.
    n_modes : int, optional
        Momentum-solver mode count (defaults to n_sites/2).
    evolution : str
        Evolution mode for the exact solver (see prepare_quench).
    detection : {"eta_s", "eta_t"}, optional
        Which average the detector inspects; defaults to eta_s for the
        momentum models and eta_t for the exact-diagonalized ones.
    threads : int
        Worker threads across sweep points (results are assembled in
        grid order, so the output is identical for any thread count).

    Per-point numerical failures do not abort the sweep: the point gets
    NaN values and an entry in ``failures``.
    """
    h1_grid = np.asarray(h1_grid, dtype=float)
    if h1_grid.ndim != 1 or len(h1_grid) < 1:
        raise ParameterError("h1_grid must be a non-empty 1-D array")
    if len(h1_grid) > 1 and np.any(np.diff(h1_grid) <= 0):
        raise ParameterError("h1_grid must be strictly increasing")
    steps = round(window.tau / dt)
    if abs(steps * dt - window.tau) > 1e-9 * max(window.tau, 1.0):
        raise ParameterError(f"window.tau={window.tau} is not a multiple of dt={dt}")
    t_grid = np.linspace(0.0, window.tau, steps + 1)

    if solver is None:
        solver = "momentum" if params.model in (Model.IXY, Model.IATXY) else "exact"
    if solver not in ("momentum", "exact"):
        raise ParameterError(f"unknown solver {solver!r}")
    if detection is None:
        detection = "eta_s" if solver == "momentum" else "eta_t"
    if detection not in ("eta_s", "eta_t"):
        raise ParameterError(f"unknown detection quantity {detection!r}")

    spec0 = None
    if solver == "exact":
        # the pre-quench spectrum is shared by every point of the sweep
        spec0 = eig_complex(build_hamiltonian(params.with_h(h0)))

    def run_point(h1):
        if solver == "momentum":
            series = rate_function(params, h0, h1, t_grid, n_modes=n_modes)
        else:
            setup = prepare_quench(params, h0, h1, t_grid,
                                   evolution=evolution, spec0=spec0)
            series = loschmidt_echo(setup)
        return (eta_transient(series, window), eta_steady(series, window),
                _steady_rate(series, window))

    n = len(h1_grid)
    eta_t = np.full(n, np.nan)
    eta_s = np.full(n, np.nan)
    rate_sat = np.full(n, np.nan)
    failures = []

    def guarded(i):
        try:
            return i, run_point(h1_grid[i]), None
        except (RuntimeError, OverflowError) as exc:
            return i, None, f"{type(exc).__name__}: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(guarded, range(n)))
    else:
        outcomes = [guarded(i) for i in range(n)]
    for i, values, err in outcomes:
        if err is None:
            eta_t[i], eta_s[i], rate_sat[i] = values
        else:
            failures.append((float(h1_grid[i]), err))

    result = SweepResult(
        h1_grid=h1_grid, eta_t=eta_t, eta_s=eta_s, rate_sat=rate_sat,
        detection_quantity=detection,
        deta_dh=_central_difference(h1_grid, eta_s if detection == "eta_s" else eta_t),
        detected=None, analytic_ep=analytic_ep(params), window=window,
        params=params, h0=float(h0), failures=failures,
    )
    finite = np.isfinite(result.detection_values)
    if len(h1_grid) >= 5 and finite.sum() >= 5:
        result.detected = detect_ep(h1_grid, result.detection_values,
                                    analytic=result.analytic_ep)
    return result


def _central_difference(h, y):
    if len(h) < 3:
        return np.zeros(0)
    return (y[2:] - y[:-2]) / (h[2:] - h[:-2])
