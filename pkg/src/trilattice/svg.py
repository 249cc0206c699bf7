"""Tiny SVG line-plot writer (axes, polylines, reference lines)."""

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v):
    return f"{v:.2f}"


class LinePlot:
    """Collects series and renders them to a deterministic SVG string."""

    def __init__(self, title="", xlabel="", ylabel="", logx=False, logy=False):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.logx = logx
        self.logy = logy
        self.series = []
        self.hlines = []

    def add_series(self, xs, ys, label="", markers=True):
        pts = [(float(x), float(y)) for x, y in zip(xs, ys)]
        if self.logx or self.logy:
            pts = [
                (x, y) for x, y in pts if (not self.logx or x > 0) and (not self.logy or y > 0)
            ]
        self.series.append((pts, label, markers))
        return self

    def add_hline(self, y, label=""):
        self.hlines.append((float(y), label))
        return self

    def _tx(self, v):
        return math.log10(v) if self.logx else v

    def _ty(self, v):
        return math.log10(v) if self.logy else v

    def _bounds(self):
        xs = [self._tx(x) for pts, _, _ in self.series for x, _ in pts]
        ys = [self._ty(y) for pts, _, _ in self.series for _, y in pts]
        ys += [self._ty(y) for y, _ in self.hlines if not self.logy or y > 0]
        if not xs:
            xs = [0.0, 1.0]
        if not ys:
            ys = [0.0, 1.0]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pad = 0.05 * (y1 - y0)
        return x0, x1, y0 - pad, y1 + pad

    def render(self):
        x0, x1, y0, y1 = self._bounds()
        pw = WIDTH - 2 * MARGIN
        ph = HEIGHT - 2 * MARGIN

        def px(v):
            return MARGIN + (self._tx(v) - x0) / (x1 - x0) * pw

        def py(v):
            return HEIGHT - MARGIN - (self._ty(v) - y0) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
            f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
            f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        ]
        # tick labels at the axis ends
        for v, pos in ((x0, MARGIN), (x1, WIDTH - MARGIN)):
            lab = f"1e{v:.2g}" if self.logx else f"{v:.4g}"
            out.append(
                f'<text x="{_fmt(pos)}" y="{HEIGHT - MARGIN + 16}" font-size="11" '
                f'text-anchor="middle">{escape(lab)}</text>'
            )
        for v, pos in ((y0, HEIGHT - MARGIN), (y1, MARGIN)):
            lab = f"1e{v:.2g}" if self.logy else f"{v:.4g}"
            out.append(
                f'<text x="{MARGIN - 6}" y="{_fmt(pos + 4)}" font-size="11" '
                f'text-anchor="end">{escape(lab)}</text>'
            )
        if self.title:
            out.append(
                f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" font-size="14" '
                f'text-anchor="middle">{escape(self.title)}</text>'
            )
        if self.xlabel:
            out.append(
                f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" font-size="12" '
                f'text-anchor="middle">{escape(self.xlabel)}</text>'
            )
        if self.ylabel:
            out.append(
                f'<text x="15" y="{HEIGHT / 2}" font-size="12" text-anchor="middle" '
                f'transform="rotate(-90 15 {HEIGHT / 2})">{escape(self.ylabel)}</text>'
            )
        for y, label in self.hlines:
            if self.logy and y <= 0:
                continue
            yy = _fmt(py(y))
            out.append(
                f'<line x1="{MARGIN}" y1="{yy}" x2="{WIDTH - MARGIN}" y2="{yy}" '
                f'stroke="gray" stroke-dasharray="6,4"/>'
            )
            if label:
                out.append(
                    f'<text x="{WIDTH - MARGIN}" y="{_fmt(py(y) - 4)}" font-size="11" '
                    f'text-anchor="end" fill="gray">{escape(label)}</text>'
                )
        for k, (pts, label, markers) in enumerate(self.series):
            color = COLORS[k % len(COLORS)]
            coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            if markers:
                for x, y in pts:
                    out.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" fill="{color}"/>')
            if label:
                out.append(
                    f'<text x="{WIDTH - MARGIN + 4}" y="{MARGIN + 14 * (k + 1)}" font-size="11" '
                    f'fill="{color}">{escape(label)}</text>'
                )
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())
        return path
