"""Where the spectrum turns complex, model by model.

Scans the transverse field across the analytic exceptional point for an
8-site chain of every model and prints the largest imaginary eigenvalue
part.  Above h_ep all eigenvalues are real (unbroken RT symmetry);
below it complex-conjugate pairs appear and the magnitude grows.

The power-law chain is the odd one out: its closed form extrapolates an
infinite-chain coupling average, so at 8 sites the spectrum deviates --
weakly broken pockets appear even above the formula's value.  That
finite-size rounding is exactly what makes its EP hard to detect from
dynamics (see lr_response_contrast.py).
"""

import numpy as np

from rtquench import Model, ModelParams, analytic_ep, build_hamiltonian


def scan(params, fields):
    print(f"\n{params.model.value}  (analytic h_ep = {analytic_ep(params):.4f})")
    print(f"{'h':>6}  {'max |Im w|':>12}  phase")
    for h in fields:
        w = np.linalg.eigvals(build_hamiltonian(params.with_h(h)))
        max_im = np.abs(w.imag).max()
        label = "unbroken" if max_im < 1e-8 else "broken"
        print(f"{h:6.2f}  {max_im:12.3e}  {label}")


def main():
    n = 8
    cases = [
        ModelParams(model=Model.IXY, n_sites=n, gamma=1.0, h=0.0),
        ModelParams(model=Model.IATXY, n_sites=n, gamma=1.0, h_a=0.5, h=0.0),
        ModelParams(model=Model.IXYZ_SR, n_sites=n, gamma=0.25, delta=0.1,
                    h=0.0),
        ModelParams(model=Model.IXYZ_LR, n_sites=n, gamma=0.25, delta=0.2,
                    alpha=1.0, h=0.0),
    ]
    for params in cases:
        h_ep = analytic_ep(params)
        fields = np.round(h_ep + np.array([-0.6, -0.3, -0.1, 0.1, 0.3, 0.6]), 3)
        scan(params, fields)


if __name__ == "__main__":
    main()
