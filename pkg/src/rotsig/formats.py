"""Readers and writers for stroke-trajectory datasets.

Three input formats are understood:

``stroke-json``
    One JSON object per line,
    ``{"id": str, "label": int|str|null, "strokes": [[[x, y], ...], ...]}``.
``stroke-csv``
    Header ``id,label,stroke_index,point_index,x,y`` followed by one row per
    point.
``unipen-like``
    Pen-stream text with ``.SEGMENT`` / ``.PEN_DOWN`` / ``.PEN_UP`` markers,
    as used by the original pendigits dynamic files.
"""

import csv
import io
import json
import logging

import numpy as np

from .strokes import Dataset, StrokeSample
from .tensor_algebra import ContractError

log = logging.getLogger(__name__)

FORMATS = ("stroke-json", "stroke-csv", "unipen-like")
CSV_HEADER = ["id", "label", "stroke_index", "point_index", "x", "y"]


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _text(stream):
    if isinstance(stream, bytes):
        return stream.decode("utf-8")
    if isinstance(stream, str):
        return stream
    data = stream.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _label(raw):
    if raw is None or raw == "":
        return None
    if isinstance(raw, bool):
        raise ValueError("boolean label")
    if isinstance(raw, (int, str)):
        if isinstance(raw, str):
            try:
                return int(raw)
            except ValueError:
                return raw
        return raw
    raise ValueError(f"label must be int, str or null, got {type(raw).__name__}")


def _sample(sid, strokes, label, line):
    try:
        return StrokeSample(str(sid), tuple(strokes), _label(label))
    except (ContractError, ValueError) as exc:
        raise ParseError(f"sample {sid!r}: {exc}", line) from None


def _finish(samples, split, what):
    if not samples:
        log.warning("%s input contains no samples", what)
    try:
        return Dataset(samples, split)
    except ContractError as exc:
        raise ParseError(str(exc)) from None


def parse_stroke_json(text, split="unlabeled"):
    samples = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(rec, dict) or "id" not in rec or "strokes" not in rec:
            raise ParseError("record needs 'id' and 'strokes'", lineno)
        strokes = rec["strokes"]
        if not isinstance(strokes, list):
            raise ParseError("'strokes' must be a list", lineno)
        arrays = []
        for k, s in enumerate(strokes):
            try:
                a = np.asarray(s, dtype=np.float64)
            except (TypeError, ValueError):
                raise ParseError(f"stroke {k} has non-numeric coordinates", lineno) from None
            if a.ndim != 2 or a.shape[1] != 2 or len(a) == 0:
                raise ParseError(f"stroke {k} must be a non-empty list of [x, y] pairs", lineno)
            arrays.append(a)
        samples.append(_sample(rec["id"], arrays, rec.get("label"), lineno))
    return _finish(samples, split, "stroke-json")


def parse_stroke_csv(text, split="unlabeled"):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(r for r in rows):
        return _finish([], split, "stroke-csv")
    header = [h.strip() for h in rows[0]]
    if header != CSV_HEADER:
        raise ParseError(f"expected header {','.join(CSV_HEADER)}", 1)
    groups = {}
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"row {lineno} has {len(row)} fields, expected {len(CSV_HEADER)}", lineno)
        sid, label, si, pi, x, y = (c.strip() for c in row)
        try:
            key = (int(si), int(pi))
            pt = (float(x), float(y))
        except ValueError:
            raise ParseError(f"row {lineno} has a non-numeric index or coordinate", lineno) from None
        g = groups.setdefault(sid, {"label": label, "points": [], "line": lineno})
        if g["label"] != label:
            raise ParseError(f"row {lineno}: sample {sid!r} has conflicting labels", lineno)
        g["points"].append((key, pt))
    samples = []
    for sid, g in groups.items():
        pts = sorted(g["points"], key=lambda kp: kp[0])
        strokes = {}
        for (si, _), pt in pts:
            strokes.setdefault(si, []).append(pt)
        samples.append(_sample(sid, [strokes[k] for k in sorted(strokes)], g["label"], g["line"]))
    return _finish(samples, split, "stroke-csv")


# directives whose content does not affect the trajectories
_UNIPEN_IGNORED = {
    ".COMMENT", ".VERSION", ".DATA_SOURCE", ".DATA_ID", ".DATA_CONTACT", ".DATA_INFO",
    ".SETUP", ".PAD", ".ALPHABET", ".HIERARCHY", ".COORD", ".X_DIM", ".Y_DIM",
    ".H_LINE", ".V_LINE", ".X_POINTS_PER_INCH", ".Y_POINTS_PER_INCH",
    ".POINTS_PER_SECOND", ".DT", ".INCLUDE", ".WRITER_ID", ".STYLE", ".START_BOX",
    ".START_SET", ".LEXICON", ".RESERVED", ".DATE", ".COUNTRY", ".AGE", ".SEX",
    ".HAND", ".SKILL", ".WRITER_INFO", ".RECORDING_STYLE",
}


def parse_unipen(text, split="unlabeled"):
    """Minimal UNIPEN reader: each ``.SEGMENT`` opens a sample.

    The label is the last double-quoted token on the ``.SEGMENT`` line (or its
    last field). Points outside ``.PEN_DOWN``/``.PEN_UP`` are pen-up motion and
    are skipped; unknown directives are skipped with a warning.
    """
    samples = []
    cur = None
    stroke = None
    warned = set()

    def close(lineno):
        nonlocal cur
        if cur is None:
            return
        if cur["strokes"]:
            samples.append(_sample(cur["id"], cur["strokes"], cur["label"], cur["line"]))
        else:
            log.warning("line %d: segment %s has no pen-down points; dropped", lineno, cur["id"])
        cur = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("."):
            directive, _, rest = line.partition(" ")
            directive = directive.upper()
            if directive == ".SEGMENT":
                if stroke is not None:
                    raise ParseError(".SEGMENT inside an open .PEN_DOWN block", lineno)
                close(lineno)
                quoted = rest.split('"')
                label = quoted[-2] if len(quoted) >= 3 else (rest.split()[-1] if rest.split() else None)
                cur = {"id": f"seg{len(samples) + 1}", "label": label, "strokes": [], "line": lineno}
            elif directive == ".PEN_DOWN":
                if stroke is not None:
                    raise ParseError(".PEN_DOWN without closing .PEN_UP", lineno)
                stroke = []
            elif directive == ".PEN_UP":
                if stroke is None:
                    raise ParseError(".PEN_UP without .PEN_DOWN", lineno)
                if stroke:
                    if cur is None:
                        cur = {"id": f"seg{len(samples) + 1}", "label": None, "strokes": [], "line": lineno}
                    cur["strokes"].append(stroke)
                stroke = None
            elif directive not in _UNIPEN_IGNORED and directive not in warned:
                warned.add(directive)
                log.warning("line %d: skipping unrecognized directive %s", lineno, directive)
            continue
        if stroke is None:
            continue
        fields = line.split()
        try:
            stroke.append((float(fields[0]), float(fields[1])))
        except (ValueError, IndexError):
            raise ParseError(f"expected 'x y' coordinates, got {line!r}", lineno) from None
    if stroke is not None:
        raise ParseError("input ends inside a .PEN_DOWN block", lineno)
    close(None)
    return _finish(samples, split, "unipen-like")


def parse_strokes(stream, format="stroke-json", split="unlabeled"):
    """Read a dataset from a byte/text stream, bytes, or a string."""
    text = _text(stream)
    if format == "stroke-json":
        return parse_stroke_json(text, split)
    if format == "stroke-csv":
        return parse_stroke_csv(text, split)
    if format == "unipen-like":
        return parse_unipen(text, split)
    raise ContractError(f"format must be one of {FORMATS}, got {format!r}")


def dump_stroke_json(dataset):
    lines = []
    for s in dataset:
        rec = {"id": s.id, "label": s.label, "strokes": [p.vertices.tolist() for p in s.strokes]}
        lines.append(json.dumps(rec))
    return "".join(line + "\n" for line in lines)


def dump_stroke_csv(dataset):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in dataset:
        for si, p in enumerate(s.strokes):
            for pi, (x, y) in enumerate(p.vertices):
                w.writerow([s.id, "" if s.label is None else s.label, si, pi, repr(float(x)), repr(float(y))])
    return buf.getvalue()
