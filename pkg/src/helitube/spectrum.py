"""Length-spectrum input and certificate reports.

Native spectrum format
----------------------
A UTF-8 JSON document whose top level is a list of manifold objects::

    [
      {"name": "m1", "genus": 2, "volume": 8.13375, "source": "...",
       "curves": [{"ell": 0.0155, "theta": 0.32441}]}
    ]

``name``, ``genus`` and ``curves[].ell`` / ``curves[].theta`` are required;
``volume`` and ``source`` are optional. Unknown keys are ignored. An empty
(or whitespace-only) document holds zero manifolds.

Reports
-------
JSON reports keep a fixed key order and write every real with 17
significant digits. CSV reports have one row per (manifold, curve).
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from . import __version__
from . import geometry as geo
from .certify import Certificate, ConditionId, ConditionResult, certify
from .errors import DomainError, ParseError, SchemaError, SpectrumFormatError
from .geometry import ComplexLength, ConstantsTable, TubeGeometry


@dataclass(frozen=True)
class SpectrumRecord:
    name: str
    genus: int
    curves: tuple[ComplexLength, ...]
    volume: float | None = None
    source: str = ""


# --------------------------------------------------------------------------
# Complex-length lines
# --------------------------------------------------------------------------

_NUM = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
_UNIT = r"(?:\*\s*)?(?:I|i|j|sqrt\(-1\)|\\sqrt\{-1\}|√-1)"
_LINE_RE = re.compile(
    rf"""^\s*
    (?:(?P<mult>[0-9]+)\s+)?
    (?P<rsign>[+-]?)\s*(?P<re>{_NUM})
    \s*(?P<isign>[+-])\s*(?P<im>{_NUM})
    \s*{_UNIT}
    (?:\s+.*)?$""",
    re.VERBOSE | re.DOTALL,
)
_MINUS_CHARS = str.maketrans({"−": "-", "–": "-"})


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return bytes(data).decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start]
        line = prefix.count(b"\n") + 1
        column = exc.start - (prefix.rfind(b"\n") + 1) + 1
        raise ParseError(f"invalid UTF-8 byte {data[exc.start]:#04x}", line, column) from None


def parse_complex_length_line(text: bytes | str) -> ComplexLength:
    """Parse ``"0.0155 + 0.32441*I"`` and friends into a :class:`ComplexLength`.

    Accepted units for the imaginary part are ``I``, ``i``, ``j``,
    ``sqrt(-1)`` and ``√-1`` (optionally preceded by ``*``). A leading
    integer multiplicity and anything after whitespace following the unit
    are ignored.
    """
    line = _decode(text).translate(_MINUS_CHARS).rstrip("\r\n")
    if "\n" in line:
        raise ParseError("expected a single line", 1, line.index("\n") + 1)
    m = _LINE_RE.match(line)
    if m is None:
        raise ParseError(f"not a complex length: {line[:60]!r}", 1, 1)
    re_part = float(m["re"])
    if m["rsign"] == "-":
        re_part = -re_part
    im_part = float(m["im"])
    if m["isign"] == "-":
        im_part = -im_part
    if not re_part > 0.0:
        raise DomainError(f"real length must be positive, got {re_part!r}")
    return ComplexLength(re_part, im_part)


# --------------------------------------------------------------------------
# Native format
# --------------------------------------------------------------------------

def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _load_json(data: bytes | str):
    text = _decode(data)
    if not text.strip():
        return []
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    except RecursionError:
        raise ParseError("document nested too deeply") from None


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"missing required field {key!r}", path)
    return obj[key]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {type(value).__name__}", path)
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError("number out of range", path)
    return value


def _record_from_obj(obj, path: str) -> SpectrumRecord:
    if not isinstance(obj, dict):
        raise SchemaError("manifold entry must be an object", path)
    name = _require(obj, "name", path)
    if not isinstance(name, str):
        raise SchemaError("name must be a string", f"{path}.name")
    genus = _require(obj, "genus", path)
    if isinstance(genus, bool) or not isinstance(genus, int):
        raise SchemaError("genus must be an integer", f"{path}.genus")
    genus = geo.check_genus(genus)

    volume = obj.get("volume")
    if volume is not None:
        volume = _real(volume, f"{path}.volume")
        if volume < 0.0:
            raise DomainError(f"{path}.volume: volume must be non-negative")
    source = obj.get("source", "")
    if not isinstance(source, str):
        raise SchemaError("source must be a string", f"{path}.source")

    curves = _require(obj, "curves", path)
    if not isinstance(curves, list):
        raise SchemaError("curves must be a list", f"{path}.curves")
    if not curves:
        raise SchemaError("curves must be non-empty", f"{path}.curves")
    parsed = []
    for i, c in enumerate(curves):
        cpath = f"{path}.curves[{i}]"
        if not isinstance(c, dict):
            raise SchemaError("curve must be an object", cpath)
        ell = _real(_require(c, "ell", cpath), f"{cpath}.ell")
        theta = _real(_require(c, "theta", cpath), f"{cpath}.theta")
        if ell <= 0.0:
            raise DomainError(f"{cpath}.ell: real length must be positive, got {ell!r}")
        parsed.append(ComplexLength(ell, theta))
    return SpectrumRecord(name=name, genus=genus, curves=tuple(parsed), volume=volume, source=source)


def parse_native(data: bytes | str) -> list[SpectrumRecord]:
    """Parse a native spectrum document into records, in file order."""
    doc = _load_json(data)
    if not isinstance(doc, list):
        raise SchemaError("top level must be a list of manifold objects", "$")
    return [_record_from_obj(obj, f"$[{i}]") for i, obj in enumerate(doc)]


def _record_to_obj(rec: SpectrumRecord) -> dict:
    obj = {"name": rec.name, "genus": rec.genus}
    if rec.volume is not None:
        obj["volume"] = rec.volume
    obj["source"] = rec.source
    obj["curves"] = [{"ell": c.ell, "theta": c.theta} for c in rec.curves]
    return obj


def emit_native(records: Iterable[SpectrumRecord]) -> bytes:
    """Serialize records in the native format (shortest round-trip reals)."""
    doc = [_record_to_obj(r) for r in records]
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def builtin_fixtures() -> list[SpectrumRecord]:
    """The six twisted mapping tori with their printed short curves."""
    data = resources.files("helitube").joinpath("data/worked_examples.json").read_bytes()
    return parse_native(data)


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Report:
    records: tuple[tuple[SpectrumRecord, tuple[Certificate, ...]], ...]
    constants_used: ConstantsTable
    tool_version: str = __version__

    @property
    def summary(self) -> dict[str, int]:
        certs = [c for _, cs in self.records for c in cs]
        return {
            "manifolds": len(self.records),
            "curves": len(certs),
            "theorem1_ok": sum(c.theorem1_ok for c in certs),
            "theorem2_ok": sum(c.theorem2_ok for c in certs),
        }


def build_report(records: Sequence[SpectrumRecord]) -> Report:
    """Certify every curve of every record at the record's own genus."""
    rows = tuple((rec, tuple(certify(cl, rec.genus) for cl in rec.curves)) for rec in records)
    return Report(records=rows, constants_used=geo.constants_table(2))


def _fmt_real(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dump_json(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dump_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _condition_to_obj(c: ConditionResult) -> dict:
    obj = {
        "condition_id": c.condition_id.value,
        "status": c.status,
        "holds": c.holds,
        "lhs": c.lhs,
        "rhs": c.rhs,
        "margin": c.margin,
        "applicable": c.applicable,
    }
    if c.parts:
        obj["parts"] = [_condition_to_obj(p) for p in c.parts]
    return obj


def _tube_to_obj(t: TubeGeometry | None):
    if t is None:
        return None
    return {
        "kappa": t.kappa,
        "radius_r0": t.radius_r0,
        "meridian_disk_area": t.meridian_disk_area,
        "boundary_area": t.boundary_area,
    }


def certificate_to_obj(c: Certificate) -> dict:
    return {
        "input": {"ell": c.input.ell, "theta": c.input.theta},
        "genus": c.genus,
        "ratio": c.input.ratio,
        "theorem1_ok": c.theorem1_ok,
        "theorem2_ok": c.theorem2_ok,
        "area_comparison_ok": c.area_comparison_ok,
        "separation_ok": c.separation_ok,
        "a_parameter": c.a_parameter,
        "unstable_helicoid": c.unstable_helicoid,
        "tube": _tube_to_obj(c.tube),
        "annulus_area": c.annulus_area,
        "conditions": [_condition_to_obj(x) for x in c.conditions],
        "assumptions": list(c.assumptions),
        "conclusions": c.conclusions,
    }


def _constants_to_obj(k: ConstantsTable) -> dict:
    return {
        "genus": k.genus,
        "eps_otal": k.eps_otal,
        "eps0": k.eps0,
        "eps1": k.eps1,
        "eps2": k.eps2,
        "ratio_threshold": k.ratio_threshold,
        "mori_threshold": k.mori_threshold,
        "b": k.b,
    }


def report_to_obj(report: Report) -> dict:
    return {
        "tool_version": report.tool_version,
        "constants_used": _constants_to_obj(report.constants_used),
        "summary": report.summary,
        "records": [
            {"record": _record_to_obj(rec), "certificates": [certificate_to_obj(c) for c in certs]}
            for rec, certs in report.records
        ],
    }


CSV_COLUMNS = (
    "name", "genus", "volume", "ell", "theta", "ratio", "r0",
    "boundary_area", "annulus_area", "theorem1_ok", "theorem2_ok", "min_margin",
)


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _fmt_real(x)
    return str(x)


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (dump_json(report_to_obj(report)) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec, certs in report.records:
            for c in certs:
                tube = c.tube
                writer.writerow([_csv_cell(v) for v in (
                    rec.name, rec.genus, rec.volume, c.input.ell, c.input.theta, c.input.ratio,
                    tube.radius_r0 if tube else None, tube.boundary_area if tube else None,
                    c.annulus_area, c.theorem1_ok, c.theorem2_ok, c.min_margin,
                )])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


# --------------------------------------------------------------------------
# Reading reports back
# --------------------------------------------------------------------------

def _condition_from_obj(obj: dict) -> ConditionResult:
    return ConditionResult(
        condition_id=ConditionId(obj["condition_id"]),
        holds=obj["holds"],
        lhs=float(obj["lhs"]),
        rhs=float(obj["rhs"]),
        margin=float(obj["margin"]),
        applicable=obj["applicable"],
        parts=tuple(_condition_from_obj(p) for p in obj.get("parts", ())),
    )


def _certificate_from_obj(obj: dict) -> Certificate:
    tube = obj["tube"]
    ann = obj["annulus_area"]
    return Certificate(
        input=ComplexLength(obj["input"]["ell"], obj["input"]["theta"]),
        genus=obj["genus"],
        tube=None if tube is None else TubeGeometry(**{k: float(v) for k, v in tube.items()}),
        conditions=tuple(_condition_from_obj(c) for c in obj["conditions"]),
        theorem1_ok=obj["theorem1_ok"],
        theorem2_ok=obj["theorem2_ok"],
        area_comparison_ok=obj["area_comparison_ok"],
        separation_ok=obj["separation_ok"],
        a_parameter=float(obj["a_parameter"]),
        unstable_helicoid=obj["unstable_helicoid"],
        annulus_area=None if ann is None else float(ann),
        assumptions=tuple(obj["assumptions"]),
    )


def parse_report(data: bytes | str) -> Report:
    """Inverse of ``emit_report(report, "json")``."""
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise SchemaError("report must be an object", "$")
    try:
        k = doc["constants_used"]
        constants = ConstantsTable(**{name: (v if name == "genus" else float(v)) for name, v in k.items()})
        records = tuple(
            (
                _record_from_obj(entry["record"], f"$.records[{i}]"),
                tuple(_certificate_from_obj(c) for c in entry["certificates"]),
            )
            for i, entry in enumerate(doc["records"])
        )
        return Report(records=records, constants_used=constants, tool_version=doc["tool_version"])
    except SpectrumFormatError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise SchemaError(f"malformed report: {exc!r}", "$") from None


_CSV_TYPES = {
    "genus": int,
    "theorem1_ok": lambda s: s == "true",
    "theorem2_ok": lambda s: s == "true",
    "name": str,
}


def parse_report_csv(data: bytes | str) -> list[dict]:
    """Read a CSV report into typed row dictionaries (empty cells become ``None``)."""
    reader = csv.DictReader(io.StringIO(_decode(data), newline=""), restkey="__extra__")
    rows = []
    try:
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise SchemaError(f"unexpected CSV header {reader.fieldnames!r}", "header")
        for row in reader:
            if "__extra__" in row or None in row.values():
                raise SchemaError("row has the wrong number of cells", f"line {reader.line_num}")
            try:
                rows.append({k: (None if v == "" else _CSV_TYPES.get(k, float)(v)) for k, v in row.items()})
            except ValueError as exc:
                raise ParseError(str(exc), reader.line_num) from None
    except csv.Error as exc:
        raise ParseError(str(exc), reader.line_num) from None
    return rows
