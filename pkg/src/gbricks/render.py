"""SVG pictures of fans as triangulations of the cross-section triangle.

Rays project barycentrically onto the triangle spanned by the three axis
points (first axis on top); cone edges become line segments and every ray
gets one labeled dot.
"""

from xml.sax.saxutils import escape

from .cones import _cyclic_ray_order

WIDTH, HEIGHT = 640, 560
CORNERS = ((320.0, 40.0), (600.0, 500.0), (40.0, 500.0))  # axes 1, 2, 3


def _project(ray):
    s = ray[0] + ray[1] + ray[2]
    lam = [ray[i] / s for i in range(3)]
    x = sum(lam[i] * CORNERS[i][0] for i in range(3))
    y = sum(lam[i] * CORNERS[i][1] for i in range(3))
    return x, y


def _ray_label(G, ray):
    if sum(1 for n in ray if n) == 1:
        axis = next(i for i, n in enumerate(ray) if n)
        return "e%d" % (axis + 1)
    return "(%d,%d,%d)/%d" % (*ray, G.r)


def _cone_edges(cone):
    rays = cone.rays
    if len(rays) == 3:
        return [(rays[0], rays[1]), (rays[0], rays[2]), (rays[1], rays[2])]
    ordered = _cyclic_ray_order(cone)
    return [tuple(sorted((ordered[i], ordered[(i + 1) % 4]))) for i in range(4)]


def render_fan_svg(fan):
    """SVG 1.1 drawing of a fan's cross-section triangulation."""
    G = fan.group
    edges = set()
    for cone in fan.cones():
        for a, b in _cone_edges(cone):
            edges.add(tuple(sorted((a, b))))
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%d" height="%d" viewBox="0 0 %d %d">' % (WIDTH, HEIGHT, WIDTH, HEIGHT),
        '<rect width="%d" height="%d" fill="white"/>' % (WIDTH, HEIGHT),
    ]
    for a, b in sorted(edges):
        (x1, y1), (x2, y2) = _project(a), _project(b)
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" '
            'stroke="black" stroke-width="1"/>' % (x1, y1, x2, y2)
        )
    for ray in fan.rays:
        x, y = _project(ray)
        parts.append('<circle cx="%.2f" cy="%.2f" r="3.5" fill="black"/>' % (x, y))
        parts.append(
            '<text x="%.2f" y="%.2f" font-size="13" font-family="sans-serif">%s</text>'
            % (x + 6, y - 6, escape(_ray_label(G, ray)))
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
