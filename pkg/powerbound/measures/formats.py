"""
Plain-text measure descriptions.

Either atom lines::

    atom <theta> <weight>

or a single Cantor line::

    cantor <ratio> <depth> <mass> <arc_start> <arc_length>

``#`` starts a comment.
"""

from pydantic import ValidationError

from ..errors import SetFormatError
from .schemas import Atom, AtomicMeasure, CantorApproxMeasure, CircleMeasure


def parse_measure_text(text: str) -> CircleMeasure:
    """
    Parse a measure description.

    Raises:
        SetFormatError: On unknown keywords, bad field counts, mixed atom and
            Cantor lines or values that fail validation.
    """
    atoms: list[Atom] = []
    cantor: list[CantorApproxMeasure] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *fields = line.split()
        try:
            if keyword == "atom" and len(fields) == 2:
                atoms.append(Atom(theta=float(fields[0]), weight=float(fields[1])))
            elif keyword == "cantor" and len(fields) == 5:
                ratio, depth, mass, start, length = fields
                cantor.append(CantorApproxMeasure(
                    ratio=float(ratio),
                    depth=int(depth),
                    mass=float(mass),
                    arc_start=float(start),
                    arc_length=float(length),
                ))
            else:
                raise SetFormatError(
                    f"line {lineno}: expected 'atom <theta> <weight>' or "
                    "'cantor <ratio> <depth> <mass> <arc_start> <arc_length>'",
                    details={"line": lineno, "text": raw},
                )
        except (ValueError, ValidationError) as exc:
            raise SetFormatError(f"line {lineno}: {exc}", details={"line": lineno, "text": raw}) from exc

    if cantor and (atoms or len(cantor) > 1):
        raise SetFormatError("a Cantor measure must be the only line of its description")
    if cantor:
        return cantor[0]
    try:
        return AtomicMeasure(atoms=atoms)
    except ValidationError as exc:
        raise SetFormatError(f"invalid measure: {exc}", details={"errors": exc.errors()}) from exc


def format_measure_text(mu: CircleMeasure) -> str:
    """Render a measure so that :func:`parse_measure_text` reproduces it."""
    if isinstance(mu, CantorApproxMeasure):
        return f"cantor {mu.ratio!r} {mu.depth} {mu.mass!r} {mu.arc_start!r} {mu.arc_length!r}\n"
    return "".join(f"atom {atom.theta.theta!r} {atom.weight!r}\n" for atom in mu.atoms)


def load_measure_file(path: str) -> CircleMeasure:
    """Read and parse a measure description file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SetFormatError(f"cannot read measure file {path}: {exc}", details={"path": path}) from exc
    return parse_measure_text(text)
