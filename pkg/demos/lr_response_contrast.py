"""Power-law couplings: cross-phase collapse of the echo.

With 1/d couplings every site talks to every other, the exceptional
point scales with the interaction sum, and finite chains round the
transition off.  What survives at small N is the contrast this demo
shows: quenching deep across the EP sends the echo crashing within a
few time units, while a same-phase quench keeps it pinned near 1.
"""

import numpy as np

from rtquench import Model, ModelParams, analytic_ep, loschmidt_echo, prepare_quench


def main():
    params = ModelParams(model=Model.IXYZ_LR, n_sites=8, gamma=0.25,
                         delta=0.2, alpha=1.0, h=0.0)
    ep = analytic_ep(params)
    h0 = 4.0
    t = np.linspace(0.0, 100.0, 1001)

    cross, same = ep - 1.0, ep + 1.0
    runs = {label: loschmidt_echo(prepare_quench(params, h0, h1, t))
            for label, h1 in (("cross-phase", cross), ("same-phase", same))}

    print(f"analytic EP = {ep:.4f}; quenching from h0 = {h0}")
    print(f"cross-phase target h1 = {cross:.4f}, same-phase h1 = {same:.4f}\n")
    print(f"{'t':>6}  {'L cross-phase':>14}  {'L same-phase':>14}")
    for k in range(0, len(t), 100):
        print(f"{t[k]:6.1f}  {runs['cross-phase'].echo[k]:14.6e}  "
              f"{runs['same-phase'].echo[k]:14.6f}")

    print(f"\nminimum echo, cross-phase: {runs['cross-phase'].echo.min():.3e}")
    print(f"minimum echo, same-phase:  {runs['same-phase'].echo.min():.6f}")


if __name__ == "__main__":
    main()
