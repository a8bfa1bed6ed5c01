"""Direct SVG emission for the stability-region and space-time figures.

No plotting dependency: both emitters write deterministic SVG bytes, so a
rerun with identical inputs produces byte-identical files (coordinates are
formatted with fixed precision and nothing time- or id-dependent is
embedded).  The heatmap uses a fixed 256-bin color table (a viridis-like
perceptually ordered ramp) embedded below as hex constants.
"""

from __future__ import annotations

import numpy as np

__all__ = ["emit_region_figure", "emit_spacetime_figure", "PALETTE"]

# 256 RGB bins, dark-violet to yellow, hex-packed 6 chars per bin
_PALETTE_HEX = (
    "44015444025645045745055946075a46085c460a5d460b5e470d60470e61471063471164471365481467481668481769"
    "48186a481a6c481b6d481c6e481d6f481f70482071482173482374482475482576482677482878482979472a7a472c7a"
    "472d7b472e7c472f7d46307e46327e46337f463480453581453781453882443983443a83443b84433d84433e85423f85"
    "4240864241864142874144874045884046883f47883f48893e49893e4a893e4c8a3d4d8a3d4e8a3c4f8a3c508b3b518b"
    "3b528b3a538b3a548c39558c39568c38588c38598c375a8c375b8d365c8d365d8d355e8d355f8d34608d34618d33628d"
    "33638d32648e32658e31668e31678e31688e30698e306a8e2f6b8e2f6c8e2e6d8e2e6e8e2e6f8e2d708e2d718e2c718e"
    "2c728e2c738e2b748e2b758e2a768e2a778e2a788e29798e297a8e297b8e287c8e287d8e277e8e277f8e27808e26818e"
    "26828e26828e25838e25848e25858e24868e24878e23888e23898e238a8d228b8d228c8d228d8d218e8d218f8d21908d"
    "21918c20928c20928c20938c1f948c1f958b1f968b1f978b1f988b1f998a1f9a8a1e9b8a1e9c891e9d891f9e891f9f88"
    "1fa0881fa1881fa1871fa28720a38620a48621a58521a68522a78522a88423a98324aa8325ab8225ac8226ad8127ad81"
    "28ae8029af7f2ab07f2cb17e2db27d2eb37c2fb47c31b57b32b67a34b67935b77937b87838b9773aba763bbb753dbc74"
    "3fbc7340bd7242be7144bf7046c06f48c16e4ac16d4cc26c4ec36b50c46a52c56954c56856c66758c7655ac8645cc863"
    "5ec96260ca6063cb5f65cb5e67cc5c69cd5b6ccd5a6ece5870cf5773d05675d05477d1537ad1517cd2507fd34e81d34d"
    "84d44b86d54989d5488bd6468ed64590d74393d74195d84098d83e9bd93c9dd93ba0da39a2da37a5db36a8db34aadc32"
    "addc30b0dd2fb2dd2db5de2bb8de29bade28bddf26c0df25c2df23c5e021c8e020cae11fcde11dd0e11cd2e21bd5e21a"
    "d8e219dae319dde318dfe318e2e418e5e419e7e419eae51aece51befe51cf1e51df4e61ef6e620f8e621fbe723fde725"
)

PALETTE = tuple("#" + _PALETTE_HEX[6 * i:6 * i + 6] for i in range(256))

_REGION_FILL = "#c9d8ea"
_CURVE_COLORS = ("#1b6ca8", "#b0372c", "#3c8a3f", "#7d4bb0", "#a07b1e")


def _f(x: float) -> str:
    return f"{x:.3f}"


def _ticks(lo: float, hi: float, count: int = 5):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def emit_region_figure(scan, markers, path) -> None:
    """Stability-region figure over the scanned (d21, tau) rectangle.

    Shades the set where the equilibrium is stable (below the first-crossing
    envelope), draws one labeled path per delay curve tau_{n,0}, and marks
    each point in ``markers`` (pairs (d21, tau), typically double-Hopf
    intersections).  Output bytes depend only on the inputs.
    """
    width, height = 640, 480
    ml, mr, mt, mb = 70.0, 22.0, 42.0, 56.0
    d = np.asarray(scan.d21, dtype=float)
    taus = np.asarray(scan.tau, dtype=float)
    d0, d1 = float(d[0]), float(d[-1])
    t0, t1 = float(taus[0]), float(taus[-1])

    def sx(val):
        return ml + (val - d0) / (d1 - d0) * (width - ml - mr)

    def sy(val):
        return height - mb - (val - t0) / (t1 - t0) * (height - mt - mb)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]

    # stable set: below the first-crossing envelope, clipped to the window
    env = np.minimum(np.asarray(scan.tau_star, dtype=float), t1)
    env = np.maximum(env, t0)
    pts = [f"{_f(sx(dv))},{_f(sy(ev))}" for dv, ev in zip(d, env)]
    pts.append(f"{_f(sx(d1))},{_f(sy(t0))}")
    pts.append(f"{_f(sx(d0))},{_f(sy(t0))}")
    parts.append(f'<polygon class="region" points="{" ".join(pts)}" '
                 f'fill="{_REGION_FILL}" stroke="none"/>')

    # frame and ticks
    fx0, fx1 = _f(ml), _f(width - mr)
    fy0, fy1 = _f(height - mb), _f(mt)
    parts.append(f'<rect x="{fx0}" y="{fy1}" width="{_f(width - ml - mr)}" '
                 f'height="{_f(height - mt - mb)}" fill="none" stroke="#000000" stroke-width="1"/>')
    for tv in _ticks(d0, d1):
        parts.append(f'<line x1="{_f(sx(tv))}" y1="{fy0}" x2="{_f(sx(tv))}" '
                     f'y2="{_f(height - mb + 5)}" stroke="#000000" stroke-width="1"/>')
        parts.append(f'<text x="{_f(sx(tv))}" y="{_f(height - mb + 18)}" font-size="11" '
                     f'text-anchor="middle" font-family="sans-serif">{tv:.3g}</text>')
    for tv in _ticks(t0, t1):
        parts.append(f'<line x1="{_f(ml - 5)}" y1="{_f(sy(tv))}" x2="{fx0}" '
                     f'y2="{_f(sy(tv))}" stroke="#000000" stroke-width="1"/>')
        parts.append(f'<text x="{_f(ml - 9)}" y="{_f(sy(tv) + 4)}" font-size="11" '
                     f'text-anchor="end" font-family="sans-serif">{tv:.3g}</text>')
    parts.append(f'<text x="{_f((ml + width - mr) / 2)}" y="{_f(height - 14)}" font-size="13" '
                 f'text-anchor="middle" font-family="sans-serif">d21</text>')
    parts.append(f'<text x="{_f(16.0)}" y="{_f((mt + height - mb) / 2)}" font-size="13" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'transform="rotate(-90 {_f(16.0)} {_f((mt + height - mb) / 2)})">tau</text>')
    parts.append(f'<text x="{_f((ml + width - mr) / 2)}" y="{_f(24.0)}" font-size="14" '
                 f'text-anchor="middle" font-family="sans-serif">'
                 f'Delay-induced instability region</text>')

    # one path per delay curve
    for ci, n in enumerate(sorted(scan.curves)):
        vals = np.asarray(scan.curves[n], dtype=float)
        inside = np.isfinite(vals) & (vals >= t0) & (vals <= t1)
        if not inside.any():
            continue
        coords = [(sx(dv), sy(tv)) for dv, tv in zip(d[inside], vals[inside])]
        pieces = [f"{'M' if i == 0 else 'L'} {_f(px)} {_f(py)}"
                  for i, (px, py) in enumerate(coords)]
        color = _CURVE_COLORS[ci % len(_CURVE_COLORS)]
        parts.append(f'<path class="curve" id="curve-n{n}" d="{" ".join(pieces)}" '
                     f'fill="none" stroke="{color}" stroke-width="1.6"/>')
        lx, ly = coords[-1]
        parts.append(f'<text x="{_f(min(lx - 4, width - mr - 40))}" y="{_f(max(ly - 6, mt + 12))}" '
                     f'font-size="11" font-family="sans-serif" fill="{color}">'
                     f'tau_{{{n},0}}</text>')

    for (md, mtau) in markers:
        parts.append(f'<circle class="marker" cx="{_f(sx(float(md)))}" cy="{_f(sy(float(mtau)))}" '
                     f'r="4" fill="#111111" stroke="#ffffff" stroke-width="1"/>')
        parts.append(f'<text x="{_f(sx(float(md)) + 7)}" y="{_f(sy(float(mtau)) - 7)}" '
                     f'font-size="11" font-family="sans-serif">'
                     f'({float(md):.4g}, {float(mtau):.4g})</text>')

    parts.append("</svg>")
    with open(path, "wb") as fh:
        fh.write("\n".join(parts).encode())


def emit_spacetime_figure(traj, component, path, *, max_cols: int = 240,
                          max_rows: int = 120) -> None:
    """Space-time heatmap of one component of a trajectory.

    Time runs left to right, space bottom to top; values are binned into the
    fixed 256-color table between the sampled minimum and maximum (a
    constant field therefore occupies a single color bin).  Runs of equal
    bins within a time column are merged, keeping the files small.
    """
    if component not in ("u", "v"):
        raise ValueError(f"component must be 'u' or 'v', got {component!r}")
    data = traj.u if component == "u" else traj.v
    nt, nx = data.shape
    ti = np.unique(np.round(np.linspace(0, nt - 1, min(nt, max_cols))).astype(int))
    xi = np.unique(np.round(np.linspace(0, nx - 1, min(nx, max_rows))).astype(int))
    sub = data[np.ix_(ti, xi)]
    vmin = float(np.min(sub))
    vmax = float(np.max(sub))
    if vmax - vmin > 0:
        bins = np.clip(((sub - vmin) / (vmax - vmin) * 255.0).astype(int), 0, 255)
    else:
        bins = np.zeros(sub.shape, dtype=int)

    width, height = 640, 420
    ml, mr, mt, mb = 70.0, 22.0, 42.0, 56.0
    pw = width - ml - mr
    ph = height - mt - mb
    ncol = ti.size
    nrow = xi.size
    cw = pw / ncol
    ch = ph / nrow

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for j in range(ncol):
        px = ml + j * cw
        col = bins[j]
        r = 0
        while r < nrow:
            r2 = r
            while r2 + 1 < nrow and col[r2 + 1] == col[r]:
                r2 += 1
            # row r is the cell at the bottom of the panel
            y_top = mt + ph - (r2 + 1) * ch
            parts.append(f'<rect x="{_f(px)}" y="{_f(y_top)}" width="{_f(cw + 0.35)}" '
                         f'height="{_f((r2 - r + 1) * ch + 0.35)}" '
                         f'fill="{PALETTE[col[r]]}"/>')
            r = r2 + 1

    t_lo, t_hi = float(traj.t[ti[0]]), float(traj.t[ti[-1]])
    x_lo, x_hi = float(traj.x[xi[0]]), float(traj.x[xi[-1]])
    parts.append(f'<rect x="{_f(ml)}" y="{_f(mt)}" width="{_f(pw)}" height="{_f(ph)}" '
                 f'fill="none" stroke="#000000" stroke-width="1"/>')
    for frac in (0.0, 0.5, 1.0):
        tv = t_lo + frac * (t_hi - t_lo)
        parts.append(f'<text x="{_f(ml + frac * pw)}" y="{_f(height - mb + 18)}" font-size="11" '
                     f'text-anchor="middle" font-family="sans-serif">{tv:.4g}</text>')
        xv = x_lo + frac * (x_hi - x_lo)
        parts.append(f'<text x="{_f(ml - 9)}" y="{_f(mt + (1 - frac) * ph + 4)}" font-size="11" '
                     f'text-anchor="end" font-family="sans-serif">{xv:.4g}</text>')
    parts.append(f'<text x="{_f((ml + width - mr) / 2)}" y="{_f(height - 14)}" font-size="13" '
                 f'text-anchor="middle" font-family="sans-serif">t</text>')
    parts.append(f'<text x="{_f(16.0)}" y="{_f((mt + height - mb) / 2)}" font-size="13" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'transform="rotate(-90 {_f(16.0)} {_f((mt + height - mb) / 2)})">x</text>')
    parts.append(f'<text x="{_f((ml + width - mr) / 2)}" y="{_f(24.0)}" font-size="14" '
                 f'text-anchor="middle" font-family="sans-serif">{component}(x, t), '
                 f'range [{vmin:.4g}, {vmax:.4g}]</text>')
    parts.append("</svg>")
    with open(path, "wb") as fh:
        fh.write("\n".join(parts).encode())
