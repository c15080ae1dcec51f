"""Minimal self-contained SVG line chart (no plotting dependency)."""
from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 500
MARGIN = dict(left=90, right=200, top=40, bottom=60)
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def line_chart(x: list[float], series: dict[str, list[float | None]], title: str, xlabel: str, ylabel: str) -> str:
    """Render ``series`` against ``x``; ``None`` values leave gaps."""
    values = [v for ys in series.values() for v in ys if v is not None]
    x_lo, x_hi = min(x), max(x)
    y_lo, y_hi = 0.0, max(values) if values else 1.0
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return MARGIN["top"] + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<line x1="{sx(x_lo):.2f}" y1="{sy(y_lo):.2f}" x2="{sx(x_hi):.2f}" y2="{sy(y_lo):.2f}" stroke="black"/>',
        f'<line x1="{sx(x_lo):.2f}" y1="{sy(y_lo):.2f}" x2="{sx(x_lo):.2f}" y2="{sy(y_hi):.2f}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{sx(t):.2f}" y1="{sy(y_lo):.2f}" x2="{sx(t):.2f}" y2="{sy(y_lo) + 5:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{sx(t):.2f}" y="{sy(y_lo) + 20:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{t:.4g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{sx(x_lo) - 5:.2f}" y1="{sy(t):.2f}" x2="{sx(x_lo):.2f}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(
            f'<text x="{sx(x_lo) - 8:.2f}" y="{sy(t) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{t:.3g}</text>'
        )
    out.append(
        f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14" transform="rotate(-90 20 {MARGIN["top"] + ph / 2:.1f})">{escape(ylabel)}</text>'
    )

    for k, (name, ys) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        segment: list[str] = []
        segments = []
        for xv, yv in zip(x, ys):
            if yv is None:
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            out.append(f'<circle cx="{sx(xv):.2f}" cy="{sy(yv):.2f}" r="3" fill="{color}"/>')
        if segment:
            segments.append(segment)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{" ".join(seg)}"/>')
        ly = MARGIN["top"] + 20 * k + 10
        lx = WIDTH - MARGIN["right"] + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}" font-family="sans-serif" font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
