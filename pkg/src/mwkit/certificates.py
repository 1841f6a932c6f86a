"""Text form of every certificate the CLI emits.

Vertex ids are 1-indexed and rationals are written ``num/den``.  Lines
starting with ``c `` are comments except the ``c bound``/``c colours``
header of a colouring, which carries data.
"""

from __future__ import annotations

from fractions import Fraction

from mwkit.coloring import Colouring
from mwkit.errors import ParseError
from mwkit.extraction import EhCertificate, MwRefutation, NcBound, NcWitness
from mwkit.flips import HideoutCertificate


def _ids(vs) -> str:
    return " ".join(str(v + 1) for v in vs)


def _line(tag: str, vs) -> str:
    body = _ids(vs)
    return f"{tag} {body}" if body else tag


def _rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def emit_certificate(cert) -> str:
    if isinstance(cert, EhCertificate):
        lines = [f"EH {cert.kind}", _line("A", cert.A), _line("B", cert.B), f"floor {_rational(cert.floor)}"]
    elif isinstance(cert, Colouring):
        lines = [f"c bound {cert.bound}", f"c colours {cert.count}"]
        lines += [f"v {v + 1} {c}" for v, c in enumerate(cert.colours)]
    elif isinstance(cert, HideoutCertificate):
        lines = [
            f"HIDEOUT r={cert.r} k={cert.k} d={cert.d} verified={int(cert.verified)}",
            _line("U", cert.U),
            f"fw-lower-bound {cert.fw_lower_bound}",
        ]
    elif isinstance(cert, NcWitness):
        lines = [f"NC-WITNESS alpha={cert.alpha}", _line("X", cert.X), _line("Y", cert.Y)]
    elif isinstance(cert, MwRefutation):
        w = cert.witness
        lines = [
            f"MW-LOWER-BOUND r={cert.radius} k={cert.k} alpha={w.alpha}",
            _line("X", w.X),
            _line("Y", w.Y),
            f"mw-lower-bound {cert.k}",
        ]
    elif isinstance(cert, NcBound):
        lines = [f"NC value={cert.value}", _line("X", cert.X)]
    else:
        raise TypeError(f"no text form for {type(cert).__name__}")
    return "\n".join(lines) + "\n"


def _parse_ids(parts: list[str], lineno: int) -> tuple[int, ...]:
    try:
        vals = [int(p) - 1 for p in parts]
    except ValueError:
        raise ParseError("non-integer vertex id", lineno) from None
    if any(v < 0 for v in vals):
        raise ParseError("vertex ids start at 1", lineno)
    return tuple(vals)


def _fields(header: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for item in header:
        key, sep, val = item.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {item!r}", lineno)
        out[key] = val
    return out


def _expect(lines, idx: int, tag: str) -> tuple[list[str], int]:
    if idx >= len(lines):
        raise ParseError(f"missing {tag!r} line")
    lineno, parts = lines[idx]
    if parts[0] != tag:
        raise ParseError(f"expected {tag!r} line", lineno)
    return parts[1:], lineno


def parse_certificate(text: str):
    """Inverse of :func:`emit_certificate`."""
    raw = [(i, line.split()) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if raw and raw[0][1][:2] == ["c", "bound"]:
        return _parse_colouring(raw)
    lines = [(i, p) for i, p in raw if p[0] != "c"]
    if not lines:
        raise ParseError("empty certificate")
    lineno, head = lines[0]
    try:
        if head[0] == "EH" and len(head) == 2 and head[1] in ("complete", "anticomplete"):
            a, la = _expect(lines, 1, "A")
            b, lb = _expect(lines, 2, "B")
            fl, lf = _expect(lines, 3, "floor")
            num, _, den = fl[0].partition("/") if len(fl) == 1 else ("", "", "")
            return EhCertificate(_parse_ids(a, la), _parse_ids(b, lb), head[1], Fraction(int(num), int(den)))
        if head[0] == "HIDEOUT":
            f = _fields(head[1:], lineno)
            u, lu = _expect(lines, 1, "U")
            bound, lbnd = _expect(lines, 2, "fw-lower-bound")
            cert = HideoutCertificate(_parse_ids(u, lu), int(f["r"]), int(f["k"]), int(f["d"]), f["verified"] == "1")
            if [str(cert.fw_lower_bound)] != bound:
                raise ParseError("fw-lower-bound does not match k", lbnd)
            return cert
        if head[0] == "NC-WITNESS":
            f = _fields(head[1:], lineno)
            x, lx = _expect(lines, 1, "X")
            y, ly = _expect(lines, 2, "Y")
            return NcWitness(_parse_ids(x, lx), _parse_ids(y, ly), int(f["alpha"]))
        if head[0] == "MW-LOWER-BOUND":
            f = _fields(head[1:], lineno)
            x, lx = _expect(lines, 1, "X")
            y, ly = _expect(lines, 2, "Y")
            bound, lbnd = _expect(lines, 3, "mw-lower-bound")
            if bound != [f["k"]] or f.get("r") != "2":
                raise ParseError("inconsistent merge-width bound", lbnd)
            return MwRefutation(int(f["k"]), NcWitness(_parse_ids(x, lx), _parse_ids(y, ly), int(f["alpha"])))
        if head[0] == "NC":
            f = _fields(head[1:], lineno)
            x, lx = _expect(lines, 1, "X")
            return NcBound(int(f["value"]), _parse_ids(x, lx))
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed certificate header: {exc}", lineno) from None
    raise ParseError(f"unknown certificate type {head[0]!r}", lineno)


def _parse_colouring(raw) -> Colouring:
    bound = None
    colours: dict[int, int] = {}
    declared = None
    for lineno, parts in raw:
        if parts[:2] == ["c", "bound"] and len(parts) == 3:
            bound = int(parts[2])
        elif parts[:2] == ["c", "colours"] and len(parts) == 3:
            declared = int(parts[2])
        elif parts[0] == "c":
            continue
        elif parts[0] == "v" and len(parts) == 3:
            (v,) = _parse_ids(parts[1:2], lineno)
            if v in colours:
                raise ParseError(f"vertex {v + 1} coloured twice", lineno)
            colours[v] = int(parts[2])
        else:
            raise ParseError("expected 'v <vertex> <colour>'", lineno)
    if sorted(colours) != list(range(len(colours))):
        raise ParseError("colouring does not cover vertices 1..n")
    col = Colouring(tuple(colours[v] for v in range(len(colours))), bound)
    if declared is not None and declared != col.count:
        raise ParseError(f"header declares {declared} colours, found {col.count}")
    return col
