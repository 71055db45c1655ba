"""Random contractive colligation on the annulus: gain bound, defect identity, difference system."""

import numpy as np

from multidisk.agler import random_class_member
from multidisk.domain import annulus
from multidisk.realize import defect_identity_residual, gain_bound_check, random_colligation, sigma_state_check
from multidisk.series import LaurentPoly

rng = np.random.default_rng(1)
spec = annulus(1.0, 0.5)
c = random_colligation(2, 2, 1, 1, rng)
for dim in (1, 2, 4):
    T = random_class_member(spec, dim, seed=dim, mode="rejection")
    g = gain_bound_check(c, spec, T)
    print(f"dim {dim}: ||F(T)|| = {g.lhs:.6f} <= gain {g.rhs:.6f}, "
          f"defect residual {defect_identity_residual(c, spec, T):.2e}")

u = LaurentPoly.from_dict({-1: 0.5, 0: 1.0, 2: -0.25j})
rep = sigma_state_check(c, 1.0, 0.5, u, (-4, 4))
print(f"state recursion residual {rep.state_residual:.2e}, output residual {rep.output_residual:.2e}")
for k in range(-4, 5):
    print(f"  y_{k:+d} = {rep.y.coeff(k):.6f}")
