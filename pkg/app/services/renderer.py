"""
SVG rendering of a space with one highlighted complex
"""

import logging
import xml.etree.ElementTree as etree
from fractions import Fraction
from typing import Optional, Tuple

from app.models.schemas import RenderStyle
from app.services.complex_kernel import ComplexKernel, ComplexRef, CWSpace, complex_kernel
from app.utils.config import settings

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"


def default_style() -> RenderStyle:
    return RenderStyle(
        width=settings.render_width,
        height=settings.render_height,
        margin=settings.render_margin,
        interior_fill=settings.interior_fill,
        contour_stroke=settings.contour_stroke,
        boundary_fill=settings.boundary_fill,
        stroke_width=settings.stroke_width,
    )


def _fmt(value: float) -> str:
    return f"{value:.3f}"


class SvgRenderer:
    """Draws closure cells in the interior color and boundary-region cells in the boundary color."""

    def __init__(self, kernel: ComplexKernel = complex_kernel):
        self.kernel = kernel

    def render_svg(self, space: CWSpace, highlight: ComplexRef, style: Optional[RenderStyle] = None) -> str:
        style = style or default_style()
        A = self.kernel.resolve(space, highlight)
        closed = self.kernel.closure(space, A).cells
        contour = self.kernel.contour(space, A).cells
        project = self._projection(space, style)

        root = etree.Element("svg", {
            "xmlns": SVG_NS,
            "version": "1.1",
            "width": str(style.width),
            "height": str(style.height),
            "viewBox": f"0 0 {style.width} {style.height}",
        })
        etree.SubElement(root, "title").text = f"{space.name}: {A.name}"
        layers = {dim: etree.SubElement(root, "g", {"id": f"dim{dim}"}) for dim in (2, 1, 0)}

        for cid, cell in space.cells.items():
            region = "closure" if cid in closed else "boundary"
            fill = style.interior_fill if region == "closure" else style.boundary_fill
            stroke = style.contour_stroke if cid in contour else fill
            points = [project(space.point(v)) for v in cell.vertices]
            attrs = {"class": region, "data-cell": str(cid)}

            if cell.dim == 2:
                attrs.update({
                    "points": " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points),
                    "fill": fill,
                    "stroke": "none",
                })
                etree.SubElement(layers[2], "polygon", attrs)
            elif cell.dim == 1:
                (x1, y1), (x2, y2) = points
                attrs.update({
                    "x1": _fmt(x1), "y1": _fmt(y1), "x2": _fmt(x2), "y2": _fmt(y2),
                    "stroke": stroke,
                    "stroke-width": _fmt(style.stroke_width * (2 if cid in contour else 1)),
                })
                etree.SubElement(layers[1], "line", attrs)
            else:
                (cx, cy), = points
                attrs.update({
                    "cx": _fmt(cx), "cy": _fmt(cy), "r": _fmt(style.stroke_width * 1.5),
                    "fill": stroke,
                })
                etree.SubElement(layers[0], "circle", attrs)

        logger.debug(f"Rendered '{A.name}' on '{space.name}': {len(closed)} closure cells")
        return '<?xml version="1.0" encoding="UTF-8"?>\n' + etree.tostring(root, encoding="unicode") + "\n"

    def _projection(self, space: CWSpace, style: RenderStyle):
        points = [p.as_tuple() for p in space.vertices.values()] or [(Fraction(0), Fraction(0))]
        min_x = min(p[0] for p in points)
        max_x = max(p[0] for p in points)
        min_y = min(p[1] for p in points)
        max_y = max(p[1] for p in points)
        span = max(max_x - min_x, max_y - min_y, Fraction(1))
        usable = min(style.width, style.height) - 2 * style.margin
        scale = Fraction(max(usable, 1)) / span

        def project(point: Tuple[Fraction, Fraction]) -> Tuple[float, float]:
            x = style.margin + (point[0] - min_x) * scale
            y = style.height - style.margin - (point[1] - min_y) * scale
            return float(x), float(y)

        return project


# Global renderer instance
svg_renderer = SvgRenderer()
