"""End-to-end acceptance suite.

One test per release criterion.  Each prints a single
``CRITERION <k> (<label>): PASS/FAIL — <detail>`` line (shown under -s,
or in the captured output on failure); the pytest -v status line per
test carries the same pass/fail verdict.

Runtime note: criteria 3 and 4 drive the exact engine at the full
4096-dimensional chain and together take ~25-30 minutes on one core.
"""

import time
from contextlib import contextmanager

import numpy as np

from rtquench.analysis import (
    AveragingWindow,
    detect_ep,
    eta_transient,
    sweep,
)
from rtquench.exact import loschmidt_echo, prepare_quench
from rtquench.linalg import biortho_metric, eig_complex, evolve, matexp_reference
from rtquench.models import Model, ModelParams, analytic_ep, build_hamiltonian, rt_symmetry_residual
from rtquench.momentum import ixy_mode_echo, mode_quench, rate_function

GRID_STEP = 0.05


@contextmanager
def criterion(k, label):
    info = {}
    try:
        yield info
    except AssertionError as exc:
        print(f"CRITERION {k} ({label}): FAIL — {exc}", flush=True)
        raise
    print(f"CRITERION {k} ({label}): PASS — {info.get('detail', 'ok')}",
          flush=True)


def test_criterion_1_ixy_ep_from_dynamics():
    with criterion(1, "iXY exceptional point from quench dynamics") as info:
        h1_grid = np.round(np.arange(0.2, 2.5001, GRID_STEP), 10)
        window = AveragingWindow(10.0, 20.0, 200.0)
        parts = []
        for gamma in (0.5, 1.0, 1.5):
            t0 = time.monotonic()
            params = ModelParams(model=Model.IXY, n_sites=1200, gamma=gamma,
                                 h=0.0)
            res = sweep(params, 2.0, h1_grid, window, dt=0.05)
            elapsed = time.monotonic() - t0
            ep = np.sqrt(1.0 + gamma ** 2)
            dist = abs(res.detected.kink - ep)
            parts.append(f"g={gamma}: kink={res.detected.kink:.3f} "
                         f"(|d|={dist:.3f}, conf={res.detected.confidence:.0f},"
                         f" {elapsed:.0f}s)")
            assert res.failures == [], f"sweep failures at gamma={gamma}"
            assert dist <= GRID_STEP + 1e-9, \
                f"gamma={gamma}: kink {res.detected.kink} vs analytic {ep}"
            assert res.detected.conclusive
            assert elapsed < 60.0, f"gamma={gamma} took {elapsed:.0f}s"
        info["detail"] = "; ".join(parts)


def test_criterion_2_iatxy_ep_and_steady_drop():
    with criterion(2, "iATXY exceptional point and steady-average drop") as info:
        h1_grid = np.round(np.arange(0.5, 2.3001, GRID_STEP), 10)
        window = AveragingWindow(10.0, 100.0, 500.0)
        t0 = time.monotonic()
        parts = []
        for gamma in (0.5, 1.0):
            params = ModelParams(model=Model.IATXY, n_sites=100, gamma=gamma,
                                 h_a=0.5, h=0.0)
            res = sweep(params, 3.0, h1_grid, window, dt=0.05)
            ep = np.sqrt(1.0 + 0.25 + gamma ** 2)
            dist = abs(res.detected.kink - ep)
            below = np.median(res.eta_s[h1_grid <= ep - 0.1])
            above = np.median(res.eta_s[h1_grid >= ep + 0.1])
            ratio = below / above
            parts.append(f"g={gamma}: kink={res.detected.kink:.3f} "
                         f"(|d|={dist:.3f}), drop x{ratio:.0f}")
            assert res.failures == []
            assert dist <= GRID_STEP + 1e-9, \
                f"gamma={gamma}: kink {res.detected.kink} vs analytic {ep}"
            assert ratio > 20.0, f"eta_s drop ratio {ratio:.1f} is not sharp"
        elapsed = time.monotonic() - t0
        assert elapsed < 120.0, f"took {elapsed:.0f}s"
        info["detail"] = "; ".join(parts) + f"; total {elapsed:.0f}s"


def test_criterion_3_ixyz_sr_transient_kink():
    with criterion(3, "iXYZ short-range transient-average kink") as info:
        window = AveragingWindow(30.0, 30.0, 40.0)
        t0 = time.monotonic()
        parts = []
        for gamma, delta in ((0.25, 0.1), (0.5, 0.1)):
            params = ModelParams(model=Model.IXYZ_SR, n_sites=12, gamma=gamma,
                                 delta=delta, h=0.0)
            ep = analytic_ep(params)
            h1_grid = np.round(ep + np.arange(-0.10, 0.30001, GRID_STEP), 12)
            res = sweep(params, 3.0, h1_grid, window, dt=0.05,
                        evolution="stepper")
            dist = abs(res.detected.kink - ep)
            parts.append(f"(g,D)=({gamma},{delta}): kink={res.detected.kink:.4f}"
                         f" (|d|={dist:.3f}, conf={res.detected.confidence:.1f})")
            assert res.failures == []
            assert dist <= GRID_STEP + 1e-9, \
                f"(gamma,delta)=({gamma},{delta}): kink {res.detected.kink} " \
                f"vs analytic {ep}"
        elapsed = time.monotonic() - t0
        assert elapsed < 600.0, f"took {elapsed:.0f}s"
        info["detail"] = "; ".join(parts) + f"; total {elapsed:.0f}s"


def test_criterion_4_ixyz_lr_transient_response_trend():
    with criterion(4, "iXYZ long-range response-edge displacement") as info:
        gamma, alpha, h0, n = 0.25, 1.0, 5.0, 12
        t_grid = np.linspace(0.0, 810.0, 8101)
        window = AveragingWindow(800.0, 800.0, 810.0)
        offsets = np.round(np.arange(-0.4, 0.2001, 0.1), 12)
        threshold = 0.01

        def lr_params(delta):
            return ModelParams(model=Model.IXYZ_LR, n_sites=n, gamma=gamma,
                               delta=delta, alpha=alpha, h=0.0)

        def run(params, spec0, h1):
            setup = prepare_quench(params, h0, h1, t_grid,
                                   evolution="stepper", spec0=spec0)
            return loschmidt_echo(setup)

        displacements = []
        contrast = None
        for delta in (0.05, 0.125, 0.2):
            params = lr_params(delta)
            spec0 = eig_complex(build_hamiltonian(params.with_h(h0)))
            ep = analytic_ep(params)
            grid = np.round(ep + offsets, 12)
            etas = np.array([eta_transient(run(params, spec0, h1), window)
                             for h1 in grid])
            strong = grid[etas > threshold]
            assert strong.size, f"delta={delta}: no strong transient response"
            displacements.append(float(ep - strong.max()))
            if delta == 0.2:
                # steep cross-phase transient decay vs same-phase persistence
                cross = run(params, spec0, 2.2).echo.min()
                same = run(params, spec0, 4.2).echo.min()
                contrast = (cross, same)
                assert cross < 1e-6, f"cross-phase echo floor {cross:.2e}"
                assert same > 0.9, f"same-phase echo floor {same:.4f}"

        d1, d2, d3 = displacements
        assert d1 < d2 < d3, \
            f"response-edge displacement not increasing with delta: " \
            f"{displacements}"
        info["detail"] = (
            f"displacement(D)={d1:.1f}/{d2:.1f}/{d3:.1f} for D=0.05/0.125/0.2; "
            f"min L cross={contrast[0]:.1e} vs same={contrast[1]:.3f}")


def test_criterion_5_rate_function_convergence():
    with criterion(5, "rate-function convergence in chain length") as info:
        t = np.linspace(0.0, 50.0, 1001)

        def diff(model, sizes, h0, h1, **kw):
            lams = []
            for n_sites in sizes:
                p = ModelParams(model=model, n_sites=n_sites, h=0.0, **kw)
                lams.append(rate_function(p, h0, h1, t).rate())
            return float(np.max(np.abs(lams[0] - lams[1])))

        d_ixy = diff(Model.IXY, (1000, 2000), 2.0, 1.0, gamma=1.0)
        d_iatxy = diff(Model.IATXY, (80, 160), 3.0, 2.0, gamma=1.0, h_a=0.5)
        # cross-phase quenches at 80 sites resolve the broken-mode edge
        # only to the momentum spacing; reported for context, not asserted
        d_iatxy_cross = diff(Model.IATXY, (80, 160), 3.0, 1.0, gamma=1.0,
                             h_a=0.5)
        assert d_ixy < 1e-3, f"iXY 1000 vs 2000: {d_ixy:.2e}"
        assert d_iatxy < 1e-3, f"iATXY 80 vs 160: {d_iatxy:.2e}"
        info["detail"] = (f"iXY(2.0->1.0)={d_ixy:.2e}; "
                          f"iATXY(3.0->2.0)={d_iatxy:.2e}; "
                          f"iATXY cross-phase context={d_iatxy_cross:.2e}")


def _property_metric_and_symmetry():
    cases = [
        ModelParams(model=Model.IXY, n_sites=8, gamma=1.0, h=2.0),
        ModelParams(model=Model.IATXY, n_sites=8, gamma=1.0, h_a=0.5, h=3.0),
        ModelParams(model=Model.IXYZ_SR, n_sites=8, gamma=0.25, delta=0.1,
                    h=3.0),
        ModelParams(model=Model.IXYZ_LR, n_sites=8, gamma=0.25, delta=0.2,
                    alpha=1.0, h=5.0),
    ]
    worst_intertwine = 0.0
    worst_rt = 0.0
    for params in cases:
        ham = build_hamiltonian(params)
        theta = biortho_metric(eig_complex(ham)).matrix
        assert np.max(np.abs(theta - theta.conj().T)) == 0.0
        assert np.linalg.eigvalsh(theta).min() > 0.0
        worst_intertwine = max(worst_intertwine, float(
            np.linalg.norm(ham.conj().T @ theta - theta @ ham)))
        worst_rt = max(worst_rt, rt_symmetry_residual(ham))
    assert worst_intertwine < 1e-8
    assert worst_rt < 1e-12
    return worst_intertwine, worst_rt


def _property_echo_bounds():
    t = np.linspace(0.0, 50.0, 1001)
    p = ModelParams(model=Model.IXY, n_sites=1200, gamma=1.0, h=0.0)
    series = rate_function(p, 2.0, 1.0, t)
    assert series.log_echo[0] == 0.0
    assert np.all(series.log_echo <= 0.0)
    p = ModelParams(model=Model.IXYZ_SR, n_sites=8, gamma=0.25, delta=0.1,
                    h=0.0)
    series = loschmidt_echo(prepare_quench(p, 3.0, 0.9, np.linspace(0, 30, 301)))
    assert series.echo[0] == 1.0
    assert np.all(series.echo <= 1.0 + 1e-10)


def _property_evolve_oracle():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(5):
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        spec = eig_complex(m)
        psi = rng.normal(size=6) + 1j * rng.normal(size=6)
        for t in (0.3, 1.1, 2.7):
            ref = matexp_reference(m, t) @ psi
            worst = max(worst, float(np.max(np.abs(evolve(spec, psi, t) - ref))))
    assert worst < 1e-8
    return worst


def _property_broken_mode_limit():
    worst = 0.0
    for h0, h1, g, phi in [(2.0, 0.3, 1.0, 2.0), (2.0, 0.5, 1.0, 1.2),
                           (3.0, 0.3, 0.7, 1.8)]:
        mq = mode_quench(h0, h1, g, phi)
        assert mq.eps1.imag > 1e-3
        worst = max(worst, abs(float(ixy_mode_echo(mq, 1e4)) - abs(mq.c1) ** 2))
    assert worst < 1e-3
    return worst


def _property_hermitian_limit():
    params = ModelParams(model=Model.IXY, n_sites=8, gamma=0.0, h=0.0)
    t = np.linspace(0.0, 25.0, 251)
    ham1 = build_hamiltonian(params.with_h(1.0))
    w, v = np.linalg.eigh(ham1)
    ham0 = build_hamiltonian(params.with_h(2.0))
    w0, v0 = np.linalg.eigh(ham0)
    psi0 = v0[:, 0]
    amp = np.exp(-1j * np.outer(t, w)) @ (np.abs(v.conj().T @ psi0) ** 2)
    reference = np.abs(amp) ** 2
    series = loschmidt_echo(prepare_quench(params, 2.0, 1.0, t))
    dev = float(np.max(np.abs(series.echo - reference)))
    assert dev < 1e-9
    return dev


def _property_detector_calibration():
    rng = np.random.default_rng(42)
    h = np.arange(0.2, 2.5001, GRID_STEP)
    inner = h[5:-5]
    trials, hits = 1000, 0
    for _ in range(trials):
        kink_at = float(rng.choice(inner))
        slope = rng.uniform(-0.5, -0.1)
        jump = rng.uniform(0.3, 0.8)
        y = np.where(h < kink_at, 1.0 + slope * h,
                     1.0 + slope * kink_at + (slope + jump) * (h - kink_at))
        y = y + rng.normal(0.0, 0.002, size=h.shape)
        if abs(detect_ep(h, y).kink - kink_at) <= GRID_STEP + 1e-9:
            hits += 1
    assert hits >= 950, f"detector recovered {hits}/{trials} planted kinks"
    return hits, trials


def test_criterion_6_property_suite():
    with criterion(6, "structural property suite") as info:
        intertwine, rt_res = _property_metric_and_symmetry()
        _property_echo_bounds()
        evolve_dev = _property_evolve_oracle()
        broken_dev = _property_broken_mode_limit()
        hermitian_dev = _property_hermitian_limit()
        hits, trials = _property_detector_calibration()
        info["detail"] = (
            f"metric intertwine<{intertwine:.1e}, RT residual<{rt_res:.1e}, "
            f"evolve vs matexp {evolve_dev:.1e}, broken-mode limit "
            f"{broken_dev:.1e}, Hermitian limit {hermitian_dev:.1e}, "
            f"detector {hits}/{trials}")
