"""Text file formats: curve files, polyline output, meshes, and reports.

All decimal output uses 17 significant digits so doubles round-trip
losslessly; saving a loaded canonical file reproduces it byte for byte.

Curve file grammar (blank lines and ``#`` comments are ignored)::

    bezier <format_version> <degree> <num_segments>
    pipe_radius <r>            # optional
    segment                    # repeated num_segments times
    <x> <y> <z>                # degree+1 vertex lines per segment

Polyline output::

    polyline <vertex_count>
    <x> <y> <z> ...
    pieces <num_pieces> <degree>
    segment
    <x> <y> <z> ...            # degree+1 lines per piece

Report files are an indented ``key: value`` tree (2-space indents); values
are ints, floats, booleans (``true``/``false``), ``null``, strings, or flat
``[a, b, c]`` lists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import CompositeBezier, CurveDiagnostics, SubdivisionResult, validate
from .errors import ParseError, ValidationError

FORMAT_VERSION = 1


def format_float(x: float) -> str:
    """17-significant-digit decimal; keeps a float marker for report parsing."""
    s = f"{float(x):.17g}"
    if not any(ch in s for ch in ".eE") and s.lstrip("+-").isdigit():
        s += ".0"
    return s


def _triple(x, y, z) -> str:
    return f"{format_float(x)} {format_float(y)} {format_float(z)}"


# ---------------------------------------------------------------------------
# curve files


@dataclass(frozen=True)
class LoadedCurve:
    curve: CompositeBezier
    pipe_radius: float | None
    diagnostics: CurveDiagnostics


class _Lines:
    """Significant lines of a file with their 1-based line numbers."""

    def __init__(self, text: str):
        self.items = []
        for num, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((num, line))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str):
        if self.pos >= len(self.items):
            raise ParseError(f"unexpected end of file, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item


def _parse_floats(line: str, count: int, num: int) -> list[float]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} numbers, got {len(parts)}", line=num)
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"bad number: {exc}", line=num)


def load_curve(path, strict: bool = True) -> LoadedCurve:
    """Parse and validate a curve file.

    With ``strict`` (default), C1-junction or regularity failures raise
    :class:`ValidationError` naming the violated assumption; the heuristic
    self-intersection spot check only ever flags diagnostics.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = _Lines(fh.read())

    num, header = lines.next("header")
    parts = header.split()
    if len(parts) != 4 or parts[0] != "bezier":
        raise ParseError("expected header 'bezier <version> <degree> <segments>'", line=num)
    try:
        version, degree, nseg = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError("header fields must be integers", line=num)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version}", line=num)
    if degree < 1 or nseg < 1:
        raise ParseError("degree and segment count must be >= 1", line=num)

    pipe_radius = None
    item = lines.peek()
    if item and item[1].split()[0] == "pipe_radius":
        num, line = lines.next("pipe_radius")
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("pipe_radius takes one value", line=num)
        pipe_radius = float(parts[1])
        if pipe_radius <= 0.0:
            raise ParseError("pipe_radius must be positive", line=num)

    segments = []
    for _ in range(nseg):
        num, line = lines.next("'segment'")
        if line != "segment":
            raise ParseError(f"expected 'segment', got {line!r}", line=num)
        verts = []
        for _ in range(degree + 1):
            num, line = lines.next("vertex line")
            verts.append(_parse_floats(line, 3, num))
        segments.append(np.array(verts))
    trailing = lines.peek()
    if trailing is not None:
        raise ParseError(f"unexpected trailing content {trailing[1]!r}", line=trailing[0])

    curve = CompositeBezier.from_segments(segments)
    diag = validate(curve)
    if strict:
        if not diag.c1_ok:
            raise ValidationError("c1_junction", "; ".join(diag.messages))
        if not diag.regular_ok:
            raise ValidationError("regularity", "; ".join(diag.messages))
    return LoadedCurve(curve, pipe_radius, diag)


def save_curve(path, curve: CompositeBezier, pipe_radius: float | None = None) -> None:
    """Write the canonical curve-file form (17 significant digits)."""
    out = [f"bezier {FORMAT_VERSION} {curve.degree} {curve.num_segments}"]
    if pipe_radius is not None:
        out.append(f"pipe_radius {format_float(pipe_radius)}")
    for seg in range(curve.num_segments):
        out.append("segment")
        for v in curve.points[seg]:
            out.append(_triple(*v))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# polyline output


def save_polyline(path, result: SubdivisionResult) -> None:
    """Write a subdivision's union polygon followed by its pieces."""
    union = result.union_polygon.vertices
    out = [f"polyline {len(union)}"]
    out.extend(_triple(*v) for v in union)
    out.append(f"pieces {result.num_pieces} {result.degree}")
    for k in range(result.num_pieces):
        out.append("segment")
        out.extend(_triple(*v) for v in result.piece_points[k])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def load_polyline(path):
    """Read a polyline file; returns (vertices, pieces-or-None)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = _Lines(fh.read())
    num, header = lines.next("'polyline <count>'")
    parts = header.split()
    if len(parts) != 2 or parts[0] != "polyline":
        raise ParseError("expected 'polyline <count>'", line=num)
    count = int(parts[1])
    verts = []
    for _ in range(count):
        num, line = lines.next("vertex line")
        verts.append(_parse_floats(line, 3, num))
    vertices = np.array(verts)

    pieces = None
    item = lines.peek()
    if item is not None:
        num, line = lines.next("'pieces'")
        parts = line.split()
        if len(parts) != 3 or parts[0] != "pieces":
            raise ParseError("expected 'pieces <count> <degree>'", line=num)
        npieces, degree = int(parts[1]), int(parts[2])
        all_pieces = []
        for _ in range(npieces):
            num, line = lines.next("'segment'")
            if line != "segment":
                raise ParseError(f"expected 'segment', got {line!r}", line=num)
            pverts = []
            for _ in range(degree + 1):
                num, line = lines.next("vertex line")
                pverts.append(_parse_floats(line, 3, num))
            all_pieces.append(pverts)
        pieces = np.array(all_pieces)
    return vertices, pieces


# ---------------------------------------------------------------------------
# meshes


def write_mesh(path, vertices, faces) -> None:
    """Indexed triangle list: ``v x y z`` lines then 1-based ``f i j k`` lines."""
    out = []
    for v in np.asarray(vertices, dtype=float):
        out.append("v " + _triple(*v))
    for f in np.asarray(faces, dtype=int):
        out.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# reports


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    return str(value)


def render_report(data: dict, indent: int = 0) -> str:
    """Indented key-value tree; nested dicts recurse, everything else is a leaf."""
    lines = []
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            if value:
                lines.append(render_report(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {_format_value(value)}")
    return "\n".join(lines)


def _parse_scalar(text: str):
    text = text.strip()
    if text == "true":
        return True
    if text == "false":
        return False
    if text == "null":
        return None
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        return [] if not inner else [_parse_scalar(p) for p in inner.split(",")]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_report(text: str) -> dict:
    """Inverse of :func:`render_report` for canonical report text."""
    root: dict = {}
    stack: list[tuple[int, dict]] = [(-1, root)]
    for num, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        indent = (len(raw) - len(raw.lstrip(" "))) // 2
        line = raw.strip()
        if ":" not in line:
            raise ParseError("expected 'key: value' or 'key:'", line=num)
        key, _, rest = line.partition(":")
        key = key.strip()
        while stack and stack[-1][0] >= indent:
            stack.pop()
        if not stack:
            raise ParseError("bad indentation", line=num)
        parent = stack[-1][1]
        if rest.strip():
            parent[key] = _parse_scalar(rest)
        else:
            child: dict = {}
            parent[key] = child
            stack.append((indent, child))
    return root
