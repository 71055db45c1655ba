"""Bounded intersections of closed disks on the Riemann sphere.

A domain is an ordered chain of components: disks ``|z - a| <= r``, holes
``|z - a| >= r`` and half-planes ``Re(e^{i theta} z) <= r``.  Each component
``j`` carries a Moebius coordinate ``gamma_j`` mapping it onto the closed unit
disk, realised as the ratio of the diagonal pencil entries ``P-(z)/P+(z)``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "DISK",
    "HOLE",
    "HALFPLANE",
    "DomainComponent",
    "DomainSpec",
    "MobiusMap",
    "PencilPair",
    "disk",
    "hole",
    "halfplane",
    "annulus",
    "validate_domain",
    "mobius_gamma",
    "eval_pencil",
    "contains",
    "gamma_values",
    "check_domain",
    "boundary_samples",
    "empty_probe",
    "interior_grid",
]

DISK = "disk"
HOLE = "hole"
HALFPLANE = "halfplane"
_KIND_ORDER = {DISK: 0, HOLE: 1, HALFPLANE: 2}


@dataclass(frozen=True)
class DomainComponent:
    """One disk, hole or half-plane.

    For half-planes ``radius`` is unused and ``offset`` plays the role of
    ``r_j`` in ``Re(e^{i theta} z) <= offset``.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    theta: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise DomainError(f"unknown component kind {self.kind!r}")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def rotation(self):
        return complex(math.cos(self.theta), math.sin(self.theta))


def disk(center, radius):
    return DomainComponent(DISK, center=center, radius=radius)


def hole(center, radius):
    return DomainComponent(HOLE, center=center, radius=radius)


def halfplane(theta, offset):
    return DomainComponent(HALFPLANE, theta=theta, offset=offset)


@dataclass(frozen=True)
class DomainSpec:
    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, j):
        return self.components[j]

    @property
    def k(self):
        return len(self.components)

    @property
    def k1(self):
        return sum(c.kind == DISK for c in self.components)

    @property
    def k2(self):
        return self.k1 + sum(c.kind == HOLE for c in self.components)

    def kinds(self):
        return [c.kind for c in self.components]


def annulus(R, r, center=0j):
    """The annulus ``r <= |z - center| <= R`` as a two-component domain."""
    return DomainSpec((disk(center, R), hole(center, r)))


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (a z + b) / (c z + d)``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.a * self.d - self.b * self.c) == 0.0:
            raise DomainError("degenerate Moebius map (ad - bc = 0)")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (self.a * z + self.b) / (self.c * z + self.d)
        return out if out.ndim else complex(out)

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other):
        """``self o other``."""
        m = np.array([[self.a, self.b], [self.c, self.d]]) @ np.array(
            [[other.a, other.b], [other.c, other.d]])
        return MobiusMap(*m.ravel())


@dataclass(frozen=True, eq=False)
class PencilPair:
    pplus: np.ndarray
    pminus: np.ndarray


def validate_domain(spec, raise_on_error=True):
    """Check the structural invariants of a domain.

    Returns the list of violations as ``(index, message)`` pairs (index
    ``None`` for global problems).  With ``raise_on_error`` a non-empty list
    raises :class:`DomainError` carrying the list instead.
    """
    violations = []
    last = -1
    for j, c in enumerate(spec.components):
        rank = _KIND_ORDER[c.kind]
        if rank < last:
            violations.append((j, f"{c.kind} after a later kind; order must be disks, holes, half-planes"))
        last = max(last, rank)
        if c.kind in (DISK, HOLE):
            if not (c.radius > 0 and math.isfinite(c.radius)):
                violations.append((j, f"{c.kind} requires radius > 0, got {c.radius}"))
        else:
            if not (c.offset >= 0 and math.isfinite(c.offset)):
                violations.append((j, f"half-plane requires offset >= 0, got {c.offset}"))
    if spec.k1 == 0:
        violations.append((None, "no disk component: domain is unbounded"))
    if violations and raise_on_error:
        msg = "; ".join(f"component {j}: {m}" if j is not None else m for j, m in violations)
        raise DomainError(msg, violations)
    return violations


def _check_index(spec, j):
    if not 0 <= j < spec.k:
        raise IndexError(f"component index {j} out of range for k={spec.k}")


def mobius_gamma(spec, j):
    """Moebius coordinate of component ``j`` (0-based)."""
    _check_index(spec, j)
    c = spec.components[j]
    if c.kind == DISK:
        return MobiusMap(1.0, -c.center, 0.0, c.radius)
    if c.kind == HOLE:
        return MobiusMap(0.0, c.radius, 1.0, -c.center)
    e = c.rotation
    return MobiusMap(e, 1.0 - c.offset, e, -c.offset - 1.0)


def _pencil_entries(c, z):
    """Diagonal entries ``(p+, p-)`` of one component at (array) ``z``."""
    z = np.asarray(z, dtype=complex)
    if c.kind == DISK:
        return np.full_like(z, c.radius), z - c.center
    if c.kind == HOLE:
        return z - c.center, np.full_like(z, c.radius)
    w = c.rotation * z - c.offset
    return w - 1.0, w + 1.0


def eval_pencil(spec, z):
    """Diagonal pencils ``P+(z), P-(z)`` as ``k x k`` matrices."""
    pp, pm = zip(*(_pencil_entries(c, complex(z)) for c in spec.components))
    return PencilPair(np.diag(np.array(pp, dtype=complex)), np.diag(np.array(pm, dtype=complex)))


def gamma_values(spec, z):
    """``(gamma_1(z), ..., gamma_k(z))`` stacked along the last axis.

    Poles (``z`` at a hole center, say) give ``inf``.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (spec.k,), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for j, c in enumerate(spec.components):
            pp, pm = _pencil_entries(c, z)
            g = pm / pp
            out[..., j] = np.where(pp == 0, np.inf, g)
    return out


def _component_contains(c, z, strict):
    z = np.asarray(z, dtype=complex)
    if c.kind == DISK:
        d = np.abs(z - c.center)
        return d < c.radius if strict else d <= c.radius
    if c.kind == HOLE:
        d = np.abs(z - c.center)
        return d > c.radius if strict else d >= c.radius
    x = np.real(c.rotation * z)
    return x < c.offset if strict else x <= c.offset


def contains(spec, z, strict=False):
    """Geometric membership test; vectorized over ``z``."""
    z = np.asarray(z, dtype=complex)
    ok = np.ones(z.shape, dtype=bool)
    for c in spec.components:
        ok &= _component_contains(c, z, strict)
    return bool(ok) if ok.ndim == 0 else ok


def check_domain(spec):
    """Components of the scaled domain obtained from ``sqrt(k-1) * gamma``.

    Disks shrink by ``1/sqrt(k-1)``, holes grow by ``sqrt(k-1)``.  For
    ``k >= 3`` a half-plane becomes the disk ``|gamma_j| <= (k-1)^{-1/2}``; those
    disks are placed after the original disks so the result stays ordered.
    """
    validate_domain(spec)
    k = spec.k
    if k < 2:
        raise DomainError("the scaled domain needs at least two components (k >= 2)")
    s = math.sqrt(k - 1)
    disks, holes, halfplanes = [], [], []
    for c in spec.components:
        if c.kind == DISK:
            disks.append(disk(c.center, c.radius / s))
        elif c.kind == HOLE:
            holes.append(hole(c.center, c.radius * s))
        elif k == 2:
            halfplanes.append(c)
        else:
            q = 1.0 / s
            w_center = -(1 + q * q) / (1 - q * q)
            w_radius = 2 * q / (1 - q * q)
            center = np.conj(c.rotation) * (w_center + c.offset)
            disks.append(disk(center, w_radius))
    return DomainSpec(tuple(disks + holes + halfplanes))


def _bounding_disk(spec):
    """Center and radius of the smallest disk component (it bounds the domain)."""
    d = min((c for c in spec.components if c.kind == DISK), key=lambda c: c.radius)
    return d.center, d.radius


def boundary_samples(spec, n_per_component=64):
    """Points on each component's boundary curve that lie in the domain.

    Circles are sampled at ``n`` equally spaced angles starting from angle 0;
    a half-plane's boundary line is sampled along its chord through the
    bounding disk.  A point is kept when it belongs to every *other*
    component (closed sense).

    Returns
    -------
    list of (int, complex)
    """
    validate_domain(spec)
    if n_per_component < 4:
        raise ValueError("n_per_component must be at least 4")
    n = int(n_per_component)
    out = []
    for j, c in enumerate(spec.components):
        if c.kind in (DISK, HOLE):
            t = 2 * np.pi * np.arange(n) / n
            pts = c.center + c.radius * np.exp(1j * t)
            # snap the quarter points so that e.g. the unit circle gives exactly 1, i, -1, -i
            pts = np.where(np.abs(pts.real) < 1e-15 * max(c.radius, 1.0), 1j * pts.imag, pts)
            pts = np.where(np.abs(pts.imag) < 1e-15 * max(c.radius, 1.0), pts.real + 0j, pts)
        else:
            bc, br = _bounding_disk(spec)
            e = c.rotation
            # line: Re(e z) = offset  <=>  z = conj(e) (offset + i s)
            foot = np.conj(e) * c.offset
            dist = abs(np.real(e * bc) - c.offset)
            if dist > br:
                continue
            half = math.sqrt(br * br - dist * dist)
            mid_s = np.imag(e * bc)
            s = mid_s + np.linspace(-half, half, n)
            pts = foot + np.conj(e) * 1j * s
        pts = _snap_into(c, pts)
        keep = np.ones(pts.shape, dtype=bool)
        for i, other in enumerate(spec.components):
            if i != j:
                keep &= _component_contains(other, pts, strict=False)
        out.extend((j, complex(p)) for p in pts[keep])
    return out


def _snap_into(c, pts):
    """Move samples that rounding left just outside their own component back onto its closed side."""
    pts = np.array(pts, dtype=complex)
    for _ in range(8):
        bad = ~_component_contains(c, pts, strict=False)
        if not bad.any():
            break
        if c.kind == DISK:
            pts[bad] = c.center + (pts[bad] - c.center) * (1 - 4e-16)
        elif c.kind == HOLE:
            pts[bad] = c.center + (pts[bad] - c.center) * (1 + 4e-16)
        else:
            pts[bad] -= np.conj(c.rotation) * 4e-16 * max(abs(c.offset), 1.0)
    return pts


def interior_grid(spec, density=64, margin=0.0):
    """Grid points over the bounding disk that lie strictly inside the domain.

    ``margin`` demands ``max_j |gamma_j(z)| <= 1 - margin``.
    """
    bc, br = _bounding_disk(spec)
    t = np.linspace(-br, br, int(density))
    X, Y = np.meshgrid(t, t)
    pts = (bc + X + 1j * Y).ravel()
    pts = pts[contains(spec, pts, strict=True)]
    if margin > 0 and pts.size:
        g = np.max(np.abs(gamma_values(spec, pts)), axis=-1)
        pts = pts[g <= 1 - margin]
    return pts


def empty_probe(spec, grid=64):
    """First strictly interior grid point, or ``None`` when none is found.

    ``None`` means "unknown": the probe never certifies emptiness.
    """
    validate_domain(spec)
    pts = interior_grid(spec, grid)
    return complex(pts[0]) if pts.size else None
