"""Boundary-arc figures of a domain as SVG polylines or CSV rows."""

import csv
import io as _io

import numpy as np

from .domain import HOLE, boundary_samples, validate_domain

__all__ = ["boundary_arcs", "emit_figure"]

_STROKE = {"disk": "#1f4e79", "hole": "#b03a2e", "halfplane": "#1e8449"}


def boundary_arcs(spec, n_per_component=256):
    """Kept boundary samples split into connected runs, one list per arc.

    Returns
    -------
    list of (int, ndarray)
        Component index and the complex points of one arc.
    """
    samples = boundary_samples(spec, n_per_component)
    arcs = []
    for j, c in enumerate(spec.components):
        pts = np.array([z for jj, z in samples if jj == j])
        if pts.size == 0:
            continue
        # consecutive kept samples are closer than a few grid steps; split where they are not
        gaps = np.abs(np.diff(pts))
        step = np.median(gaps) if gaps.size else 0.0
        cuts = np.flatnonzero(gaps > 3 * step) + 1 if step > 0 else []
        runs = np.split(pts, cuts)
        closed = c.kind != "halfplane" and len(runs) > 1 and abs(pts[-1] - pts[0]) <= 3 * step
        if closed:
            runs[0] = np.concatenate([runs[-1], runs[0]])
            runs.pop()
        elif c.kind != "halfplane" and len(runs) == 1 and pts.size == n_per_component:
            runs[0] = np.append(runs[0], runs[0][0])
        arcs.extend((j, r) for r in runs)
    return arcs, samples


def _svg(spec, arcs, size=400, pad=10):
    allpts = np.concatenate([a for _, a in arcs]) if arcs else np.zeros(1, dtype=complex)
    lo = complex(allpts.real.min(), allpts.imag.min())
    span = max(np.ptp(allpts.real), np.ptp(allpts.imag), 1e-12)
    scale = (size - 2 * pad) / span

    def xy(z):
        return pad + (z.real - lo.real) * scale, size - pad - (z.imag - lo.imag) * scale

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">']
    for j, arc in arcs:
        kind = spec.components[j].kind
        dash = ' stroke-dasharray="6,3"' if kind == HOLE else ""
        pts = " ".join("%.3f,%.3f" % xy(z) for z in arc)
        lines.append(f'  <polyline data-component="{j}" fill="none" stroke="{_STROKE[kind]}" '
                     f'stroke-width="1.5"{dash} points="{pts}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_figure(spec, path=None, fmt="svg", n_per_component=256):
    """Write the boundary of ``spec`` to ``path`` (or return the text when ``path`` is ``None``).

    SVG has one polyline per arc (holes dashed).  CSV has one row
    ``component_index,x,y`` per kept boundary sample.
    """
    validate_domain(spec)
    if fmt not in ("svg", "csv"):
        raise ValueError(f"unknown figure format {fmt!r}")
    arcs, samples = boundary_arcs(spec, n_per_component)
    if fmt == "svg":
        text = _svg(spec, arcs)
    else:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component_index", "x", "y"])
        for j, z in samples:
            w.writerow([j, repr(z.real), repr(z.imag)])
        text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
