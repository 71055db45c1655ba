"""Polydisk lifts of z + 1/z + 1 on A(1, 1/2): the default lift and a corrected one."""

from multidisk.agler import annulus_product_correction, quotient_upper_bound
from multidisk.domain import annulus
from multidisk.ratfun import RatFun1, lift_to_polydisk
from multidisk.series import Torus, sup_norm_boundary

spec = annulus(1.0, 0.5)
F = RatFun1([1, 1, 1], [0, 1])
G = lift_to_polydisk(F, spec)


def fmt(pt):
    return "(" + ", ".join(f"{complex(z):.4f}" for z in pt) + ")"


est = sup_norm_boundary(G, Torus(2))
print(f"default lift: torus sup {est.value} at {fmt(est.argmax)}")

G1 = G.with_corrections(annulus_product_correction(spec, -0.5))
est1 = sup_norm_boundary(G1, Torus(2))
print(f"corrected lift: torus sup {est1.value:.9f} at {fmt(est1.argmax)}")
print(f"boundary sup of F: {sup_norm_boundary(F, spec).value:.9f}")
print(f"quotient upper bound with the corrected lift: {quotient_upper_bound(F, spec, lift=G1).bound:.9f}")
