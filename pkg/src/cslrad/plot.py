"""Minimal self-contained SVG line plots on log-log axes."""
from __future__ import annotations

import math

WIDTH, HEIGHT = 800, 600
_LEFT, _RIGHT, _TOP, _BOTTOM = 90, 30, 30, 70


def _decades(lo, hi):
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def render_loglog(xs, ys, xlabel="E [keV]", ylabel="dGamma/dp [s^-1 cm]", title=""):
    """Return an SVG document plotting the positive (x, y) pairs as a polyline."""
    pts = [(math.log10(x), math.log10(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    x0, x1 = _LEFT, WIDTH - _RIGHT
    y0, y1 = HEIGHT - _BOTTOM, _TOP
    out.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
               'fill="none" stroke="black"/>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
                   f'font-size="14">{title}</text>')
    if not pts:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT / 2:.1f}" text-anchor="middle" '
                   'font-size="14">no positive values to plot</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    lx = [p[0] for p in pts]
    ly = [p[1] for p in pts]
    xlo, xhi = math.floor(min(lx)), math.ceil(max(lx))
    ylo, yhi = math.floor(min(ly)), math.ceil(max(ly))
    xhi = xhi if xhi > xlo else xlo + 1
    yhi = yhi if yhi > ylo else ylo + 1

    def sx(v):
        return x0 + (v - xlo) / (xhi - xlo) * (x1 - x0)

    def sy(v):
        return y0 - (v - ylo) / (yhi - ylo) * (y0 - y1)

    for d in _decades(xlo, xhi):
        out.append(f'<line x1="{sx(d):.2f}" y1="{y0}" x2="{sx(d):.2f}" y2="{y0 + 6}" '
                   'stroke="black"/>')
        out.append(f'<text x="{sx(d):.2f}" y="{y0 + 22}" text-anchor="middle" '
                   f'font-size="12">1e{d}</text>')
    for d in _decades(ylo, yhi):
        out.append(f'<line x1="{x0 - 6}" y1="{sy(d):.2f}" x2="{x0}" y2="{sy(d):.2f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{x0 - 10}" y="{sy(d) + 4:.2f}" text-anchor="end" '
                   f'font-size="12">1e{d}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
               f'font-size="13">{xlabel}</text>')
    out.append(f'<text x="20" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 20 {(y0 + y1) / 2:.1f})">{ylabel}</text>')
    poly = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
    out.append(f'<polyline points="{poly}" fill="none" stroke="#1f4e99" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
