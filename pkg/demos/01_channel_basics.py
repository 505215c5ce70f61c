"""Build an impedance-parameter RIS channel and poke at its ingredients.

Walks through the three objects everything else is built from: the mutual
coupling matrix Z_R of a closely spaced isotropic ULA, the steering vectors
of the line-of-sight links, and the end-to-end channel Z(x) obtained by
terminating the array in reactive loads j x_n.
"""

import numpy as np

from riscoupling import (
    RisState,
    Scenario,
    build_coupling_matrix,
    build_los_scenario,
    channel_gain,
    evaluate_channel,
    steering_vector,
)

np.set_printoptions(precision=3, suppress=True)

# An N-element RIS with quarter-wavelength spacing, transmitter and receiver
# both in the array plane (end-fire on both sides).
scenario = Scenario(n=4, spacing=0.25, alpha_tx=0.0, alpha_rx=np.pi)

print("=== mutual coupling matrix ===")
z_r = build_coupling_matrix(scenario.n, scenario.spacing, scenario.R)
print("Re(Z_R) (self-resistance R on the diagonal, sinc off-diagonal):")
print(z_r.real)
print("condition number of Re(Z_R):", f"{np.linalg.cond(z_r.real):.1f}")
print("at half-wavelength spacing Re(Z_R) is diagonal:")
print(build_coupling_matrix(scenario.n, 0.5, scenario.R).real)

print()
print("=== steering vectors ===")
print("end-fire (alpha = 0):   ", steering_vector(scenario.n, scenario.spacing, 0.0))
print("front-fire (alpha = 90):", steering_vector(scenario.n, scenario.spacing, np.pi / 2))

print()
print("=== end-to-end channel ===")
ch = build_los_scenario(scenario)

# With all loads shorted (x = 0) the RIS reflects, but with arbitrary phases.
shorted = RisState.zeros(scenario.n)
z0 = evaluate_channel(ch, shorted)
print("channel with x = 0:      z =", complex(z0[0, 0]))
print("gain |z|^2:             ", channel_gain(z0))

# Retuning the loads changes the channel; a random loading is usually worse
# than short-circuit and far from the coherent optimum.
rng = np.random.default_rng(7)
random_state = RisState(rng.uniform(-200.0, 200.0, scenario.n))
z1 = evaluate_channel(ch, random_state)
print("channel with random x:   z =", complex(z1[0, 0]))
print("gain |z|^2:             ", channel_gain(z1))

# The per-element normalization used throughout: channel gain of a single
# isolated element is gamma_dr * gamma_rs * R^2.
single = Scenario(n=1, spacing=0.5, alpha_tx=0.0, alpha_rx=np.pi)
z_single = evaluate_channel(build_los_scenario(single), RisState.zeros(1))
print()
print("single-element reference gain:", channel_gain(z_single),
      "(= gamma_dr * gamma_rs * R^2 =", single.gamma_dr * single.gamma_rs * single.R**2, ")")
