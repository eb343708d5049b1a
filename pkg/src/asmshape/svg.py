"""Tiny SVG writer: path elements only, deterministic output."""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = ["SvgCanvas"]

PALETTE = {"q1": "#1b6ca8", "q2": "#c0392b", "q3": "#27ae60"}


def _fmt(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


class SvgCanvas:
    """Unit square drawn with y pointing down, matching matrix row order."""

    def __init__(self, size: int = 400, margin: int = 20, title: Optional[str] = None):
        self.size = size
        self.margin = margin
        self.items: List[str] = []
        if title:
            self.items.append(f"<title>{_escape(title)}</title>")

    def _pt(self, x: float, y: float) -> Tuple[str, str]:
        return _fmt(self.margin + x * self.size), _fmt(self.margin + y * self.size)

    def polyline(self, pts: Iterable[Sequence[float]], colour: str = "#000",
                 width: float = 1.5, label: Optional[str] = None) -> None:
        coords = [self._pt(float(p[0]), float(p[1])) for p in pts]
        if not coords:
            return
        d = "M" + " L".join(f"{x} {y}" for x, y in coords)
        attr = f' data-label="{_escape(label)}"' if label else ""
        self.items.append(f'<path d="{d}" fill="none" stroke="{colour}" stroke-width="{_fmt(width)}"{attr}/>')

    def frame(self) -> None:
        self.polyline([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)], colour="#444", width=1)

    def heatmap(self, values: np.ndarray, vmax: Optional[float] = None) -> None:
        """Grey cells, darker for larger values; row i occupies y in [i/n, (i+1)/n]."""
        n_rows, n_cols = values.shape
        top = float(vmax if vmax is not None else max(values.max(), 1e-300))
        cw, ch = self.size / n_cols, self.size / n_rows
        for i in range(n_rows):
            for j in range(n_cols):
                level = int(round(255 * (1 - min(values[i, j] / top, 1.0))))
                if level == 255:
                    continue
                x, y = self.margin + j * cw, self.margin + i * ch
                self.items.append(
                    f'<path d="M{_fmt(x)} {_fmt(y)} h{_fmt(cw)} v{_fmt(ch)} h{_fmt(-cw)} z" '
                    f'fill="rgb({level},{level},{level})"/>')

    def render(self) -> str:
        full = self.size + 2 * self.margin
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" '
                f'viewBox="0 0 {full} {full}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
