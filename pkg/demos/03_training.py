"""Recover the mixing coefficients by gradient descent from w = (0, 0).

Takes about a minute: both gradient variants are trained on the same data.

Run: python demos/03_training.py
"""
import numpy as np

from atm_bss import (
    MixingParams, SeparatorCoeffs, TrainConfig, evaluate_separation, fixed_point_solve,
    generate_sources, mix, train,
)

s = generate_sources(2000, seed=7)
x = mix(s, MixingParams(0.1, 0.2, 2.0))
print("observations SIR (dB):", evaluate_separation(x, s)["sir_db"])

for variant in ("corrected", "naive"):
    traj = train(x, TrainConfig(step_size=0.05, max_epochs=500, k=2.0, variant=variant))
    w = traj.final_w
    y = fixed_point_solve(x, SeparatorCoeffs(w[0], w[1], 2.0))
    print(f"{variant:9s}: w = {np.round(w, 4)} after {traj.records[-1].epoch} epochs "
          f"({traj.stop_reason}), C = {traj.records[-1].criterion:.4f}, "
          f"SIR = {np.round(evaluate_separation(y, s)['sir_db'], 2)} dB")
