"""JSON readers and writers for domains, matrices, functions, colligations and certificates.

Complex numbers are stored as ``[re, im]`` pairs; rationals as ``"p/q"`` strings.
"""

import json

import numpy as np

from .domain import DISK, HALFPLANE, HOLE, DomainComponent, DomainSpec
from .ratfun import MatRatFun1, RatFun1
from .realize import Colligation
from .series import LaurentPoly

__all__ = [
    "domain_to_json",
    "domain_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "ratfun_to_json",
    "ratfun_from_json",
    "laurent_to_json",
    "laurent_from_json",
    "colligation_to_json",
    "colligation_from_json",
    "load_json",
    "dump_json",
]


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _unpair(p):
    if isinstance(p, (int, float)):
        return complex(p)
    if len(p) != 2:
        raise ValueError(f"expected [re, im], got {p!r}")
    return complex(float(p[0]), float(p[1]))


def domain_to_json(spec):
    comps = []
    for c in spec.components:
        if c.kind == HALFPLANE:
            comps.append({"kind": c.kind, "theta": c.theta, "offset": c.offset})
        else:
            comps.append({"kind": c.kind, "center": _pair(c.center), "radius": c.radius})
    return {"components": comps}


def domain_from_json(obj):
    try:
        items = obj["components"]
    except (KeyError, TypeError):
        raise ValueError("domain file needs a 'components' list") from None
    comps = []
    for item in items:
        kind = item.get("kind")
        if kind in (DISK, HOLE):
            comps.append(DomainComponent(kind, center=_unpair(item.get("center", [0, 0])),
                                         radius=float(item["radius"])))
        elif kind == HALFPLANE:
            comps.append(DomainComponent(kind, theta=float(item.get("theta", 0.0)),
                                         offset=float(item["offset"])))
        else:
            raise ValueError(f"unknown component kind {kind!r}")
    return DomainSpec(tuple(comps))


def matrix_to_json(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        A = A.reshape(1, -1) if A.ndim < 2 else A
    return [[_pair(x) for x in row] for row in A]


def matrix_from_json(obj):
    rows = [[_unpair(x) for x in row] for row in obj]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return np.array(rows, dtype=complex).reshape(len(rows), -1)


def _poly_to_json(c):
    return [_pair(x) for x in c]


def _poly_from_json(obj):
    return np.array([_unpair(x) for x in obj], dtype=complex)


def ratfun_to_json(F):
    if isinstance(F, RatFun1) or F.shape == (1, 1):
        return {"num": _poly_to_json(F.num[0, 0]), "den": _poly_to_json(F.den)}
    num = [[_poly_to_json(F.num[i, j]) for j in range(F.shape[1])] for i in range(F.shape[0])]
    return {"num": num, "den": _poly_to_json(F.den)}


def _depth(x):
    d = 0
    while isinstance(x, list) and x:
        x, d = x[0], d + 1
    return d


def ratfun_from_json(obj):
    den = _poly_from_json(obj.get("den", [[1, 0]]))
    num = obj["num"]
    if _depth(num) <= 2:
        return RatFun1(_poly_from_json(num), den)
    polys = [[_poly_from_json(p) for p in row] for row in num]
    deg = max(p.size for row in polys for p in row)
    arr = np.zeros((len(polys), len(polys[0]), deg), dtype=complex)
    for i, row in enumerate(polys):
        for j, p in enumerate(row):
            arr[i, j, :p.size] = p
    return MatRatFun1(arr, den)


def laurent_to_json(f):
    return {"kmin": int(f.kmin), "coeffs": _poly_to_json(f.coeffs)}


def laurent_from_json(obj):
    return LaurentPoly(int(obj["kmin"]), _poly_from_json(obj["coeffs"]))


def colligation_to_json(c):
    return {"k": c.k, "m": c.m, "n_in": c.n_in, "n_out": c.n_out,
            **{name: matrix_to_json(getattr(c, name)) for name in "ABCD"}}


def colligation_from_json(obj):
    c = Colligation(int(obj["k"]), int(obj["m"]), *(matrix_from_json(obj[name]) for name in "ABCD"))
    for key, val in (("n_in", c.n_in), ("n_out", c.n_out)):
        if key in obj and int(obj[key]) != val:
            raise ValueError(f"{key}={obj[key]} does not match the block shapes ({val})")
    return c


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None):
    text = json.dumps(obj, indent=2)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return text
