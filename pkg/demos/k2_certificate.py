"""Exact Bohr-sum certificate for the bidisk at rho = 3177/10000."""

from fractions import Fraction

from multidisk.bohr import format_rational, k2_certificate, k2_improve, reference_D

rho = Fraction(3177, 10000)
D = reference_D()
for deg in (0, 4, 8, 12):
    cert = k2_certificate(D, rho, deg)
    print(f"deg {deg:2d}: S - 1 = {float(cert.S - 1):+.6e}  certified: {cert.certified}")

cert = k2_certificate(D, rho, 12)
print(f"exact S has a {len(str(cert.S.denominator))}-digit denominator; took {cert.seconds:.3f} s")

# a short local search, certified exactly on the grid k/10000
res = k2_improve(D, budget=100)
print(f"best certified rho after search: {format_rational(res.rho)} (seed {format_rational(res.seed_certificate.rho)})")
