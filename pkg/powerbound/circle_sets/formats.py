"""
Plain-text set descriptions.

One component per line::

    point <theta>
    cluster <limit_theta> <ratio> <scale> <sign> <start_index>

Angles are radians; ``#`` starts a comment.
"""

from pydantic import ValidationError

from ..errors import SetFormatError
from .schemas import GeometricCluster, SymbolicCircleSet


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_set_text(text: str) -> SymbolicCircleSet:
    """
    Parse a set description.

    Raises:
        SetFormatError: On unknown keywords, wrong field counts, bad numbers
            or a description that fails set validation.
    """
    points: list[float] = []
    clusters: list[GeometricCluster] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        keyword, *fields = line.split()
        try:
            if keyword == "point" and len(fields) == 1:
                points.append(float(fields[0]))
            elif keyword == "cluster" and len(fields) == 5:
                limit, ratio, scale, sign, start = fields
                clusters.append(GeometricCluster(
                    limit_theta=float(limit),
                    ratio=float(ratio),
                    scale=float(scale),
                    sign=int(sign),
                    start_index=int(start),
                ))
            else:
                raise SetFormatError(
                    f"line {lineno}: expected 'point <theta>' or "
                    "'cluster <limit> <ratio> <scale> <sign> <start_index>'",
                    details={"line": lineno, "text": raw},
                )
        except (ValueError, ValidationError) as exc:
            raise SetFormatError(f"line {lineno}: {exc}", details={"line": lineno, "text": raw}) from exc

    try:
        return SymbolicCircleSet(points=points, clusters=clusters)
    except ValidationError as exc:
        raise SetFormatError(f"invalid set: {exc}", details={"errors": exc.errors()}) from exc


def format_set_text(circle_set: SymbolicCircleSet) -> str:
    """Render a set so that :func:`parse_set_text` reproduces it exactly."""
    lines = [f"point {p.theta!r}" for p in circle_set.points]
    for c in circle_set.clusters:
        lines.append(
            f"cluster {c.limit_theta.theta!r} {c.ratio!r} {c.scale!r} {c.sign} {c.start_index}"
        )
    return "\n".join(lines) + "\n"


def load_set_file(path: str) -> SymbolicCircleSet:
    """Read and parse a set description file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SetFormatError(f"cannot read set file {path}: {exc}", details={"path": path}) from exc
    return parse_set_text(text)
