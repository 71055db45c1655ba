"""The matrix witness for z^k + z^-l on A(1, r) and the matching upper bound."""

import numpy as np

from multidisk.agler import agler_lower_bound, quotient_upper_bound, witness_kl
from multidisk.domain import annulus
from multidisk.linalg import spectral_norm
from multidisk.series import LaurentPoly

for k, l, r in ((1, 1, 0.5), (2, 3, 0.3), (3, 1, 0.7)):
    W = witness_kl(k, l, r)
    FM = np.linalg.matrix_power(W.M, k) + np.linalg.matrix_power(np.linalg.inv(W.M), l)
    f = LaurentPoly.from_dict({k: 1.0, -l: 1.0})
    spec = annulus(1.0, r)
    lo = agler_lower_bound(f, spec, samples=5).bound
    hi = quotient_upper_bound(f, spec).bound
    print(f"k={k} l={l} r={r}: ||F(M)|| = {spectral_norm(FM):.12f}, 1 + r^-l = {1 + r ** -l:.12f}, "
          f"lower {lo:.12f}, upper {hi:.12f}")
    print("  row entries:", np.round([FM[i, c] for i, c in enumerate(W.shift(k))], 10))
