"""Pushing boundary members of three domain shapes into the strict class."""

import numpy as np

from multidisk.agler import in_class, perturb_interior, witness_kl
from multidisk.domain import DomainSpec, annulus, disk, halfplane, hole
from multidisk.linalg import spectral_norm

rng = np.random.default_rng(0)


def normal(eigs):
    Q, _ = np.linalg.qr(rng.standard_normal((len(eigs), len(eigs))) + 1j * rng.standard_normal((len(eigs), len(eigs))))
    return (Q * np.asarray(eigs)) @ Q.conj().T


cases = [
    ("convex", DomainSpec((disk(0, 1.0), halfplane(0.0, 0.5))), normal([0.5 + 0.3j, -1.0, 0.2]), dict(p=0)),
    ("multihole", DomainSpec((disk(0, 1.0), hole(0.5, 0.2), hole(-0.5, 0.2), hole(0.5j, 0.2))),
     normal([0.7, 1j, -0.8 + 0.1j]), dict(mode="multihole")),
    ("decentered", annulus(1.0, 0.5), witness_kl(1, 1, 0.5).M, dict(mode="decentered")),
]
for name, spec, T, kw in cases:
    print(f"{name}: member {in_class(spec, T).member}, margin {in_class(spec, T).pencil_margin:+.2e}")
    for eps in (1e-2, 1e-3, 1e-4):
        Te = perturb_interior(spec, T, eps, **kw)
        rep = in_class(spec, Te)
        print(f"  eps {eps:.0e}: ||T_eps - T|| = {spectral_norm(Te - T):.3e}, margin {rep.pencil_margin:+.3e}, "
              f"strict {rep.strict_member}")
