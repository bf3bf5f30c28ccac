"""Compare the total-derivative Jacobian term with the partial-only one.

The finite difference of mean ln|J| through the solver is the reference.
For k = 2 only the total form agrees with it; for k = 1 both coincide.

Run: python demos/02_gradient_check.py
"""
from atm_bss import (
    MixingParams, SeparatorCoeffs, generate_sources, fd_oracle_jacobian_term, gradient, mix,
)

s = generate_sources(2000, seed=7)
for k in (2.0, 1.0):
    x = mix(s, MixingParams(0.1, 0.2, k))
    w = SeparatorCoeffs(0.05, 0.1, k)
    report = gradient(x, w)
    print(f"k = {k}")
    for name in ("w12", "w21"):
        g = report[name]
        fd = fd_oracle_jacobian_term(x, w, name)
        print(f"  {name}: finite diff {fd:+.10f}  total {g.jacobian_term:+.10f}  "
              f"partial only {g.naive_jacobian_term:+.10f}")
