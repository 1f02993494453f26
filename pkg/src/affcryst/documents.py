"""JSON documents: one self-describing envelope per object, with canonical byte-stable output.

Every document carries ``"kind"`` (lie, rep, pcrep, ca, ext, verdict), an optional
``"version"`` (only 1 is recognized) and, where scalars occur, a ``"field"`` entry
``{"type": "Q"}`` or ``{"type": "Qsqrt", "d": 5}``. Basis and generator indices
are 1-based.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .affine import AffineLieElement, AffineMap
from .cryst import AffineRep
from .errors import DocumentError
from .linalg import Matrix
from .nillie import LieAlgebra
from .realization import Automorphism, ExtensionSpec
from .scalar import QuadNumber, scalar_from_json, scalar_to_json
from .shadow import PolycyclicRep
from .torus import CAProduct

VERSION = 1
KINDS = ("lie", "rep", "pcrep", "ca", "ext", "verdict")


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("a document must be a JSON object")
    return doc


def read(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads(text)


# -- small helpers ---------------------------------------------------------------------


def _get(obj: dict, key: str, typ=None):
    if not isinstance(obj, dict):
        raise DocumentError(f"expected an object holding {key!r}")
    if key not in obj:
        raise DocumentError(f"missing field {key!r}")
    val = obj[key]
    if typ is not None and (not isinstance(val, typ) or isinstance(val, bool) and typ is not bool):
        raise DocumentError(f"field {key!r} has the wrong type")
    return val


def _check_envelope(obj: dict, kind: str | None) -> None:
    if not isinstance(obj, dict):
        raise DocumentError("expected a JSON object")
    k = obj.get("kind", kind)
    if kind is not None and k != kind:
        raise DocumentError(f"expected a {kind!r} document, got {k!r}")
    v = obj.get("version", VERSION)
    if v != VERSION:
        raise DocumentError(f"unrecognized schema version {v!r}")


def field_to_json(d: int | None) -> dict:
    return {"type": "Q"} if d is None else {"type": "Qsqrt", "d": d}


def field_from_json(obj) -> int | None:
    if obj is None:
        return None
    if not isinstance(obj, dict) or "type" not in obj:
        raise DocumentError("field must look like {'type': 'Q'} or {'type': 'Qsqrt', 'd': int}")
    if obj["type"] == "Q":
        return None
    if obj["type"] == "Qsqrt":
        d = obj.get("d")
        if not isinstance(d, int) or isinstance(d, bool):
            raise DocumentError("Qsqrt field needs an integer 'd'")
        try:
            QuadNumber(0, 1, d)
        except (ValueError, TypeError) as exc:
            raise DocumentError(str(exc)) from exc
        return d
    raise DocumentError(f"unknown field type {obj['type']!r}")


def _doc_field(obj: dict, inherited: int | None = None) -> int | None:
    if "field" in obj:
        d = field_from_json(obj["field"])
        if inherited is not None and d != inherited:
            raise DocumentError("nested document uses a different field")
        return d
    return inherited


def _merge_field(*ds: int | None) -> int | None:
    seen = {d for d in ds if d is not None}
    if len(seen) > 1:
        raise DocumentError("document mixes different quadratic fields")
    return seen.pop() if seen else None


def scalar_in(obj, d: int | None):
    try:
        return scalar_from_json(obj, d)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DocumentError(f"bad scalar {obj!r}: {exc}") from exc


def vector_in(obj, d: int | None, length: int | None = None) -> tuple:
    if not isinstance(obj, list):
        raise DocumentError("expected a list of scalars")
    if length is not None and len(obj) != length:
        raise DocumentError(f"expected {length} scalars, got {len(obj)}")
    return tuple(scalar_in(x, d) for x in obj)


def matrix_in(obj, d: int | None, shape: tuple[int, int] | None = None) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise DocumentError("expected a non-empty list of rows")
    ncols = len(obj[0])
    if any(len(r) != ncols for r in obj):
        raise DocumentError("matrix rows have different lengths")
    if shape is not None and (len(obj), ncols) != shape:
        raise DocumentError(f"expected a {shape[0]}x{shape[1]} matrix")
    return Matrix([vector_in(r, d) for r in obj])


def vector_out(v) -> list:
    return [scalar_to_json(x) for x in v]


def matrix_out(m: Matrix) -> list:
    return [vector_out(r) for r in m.rows]


def _field_of_values(values) -> int | None:
    ds = {x.d for x in values if isinstance(x, QuadNumber) and x.b != 0}
    return _merge_field(*ds)


# -- per-kind conversion ---------------------------------------------------------------


def lie_to_json(L: LieAlgebra) -> dict:
    brackets = [[i + 1, j + 1, vector_out(vec)] for (i, j), vec in sorted(L.structure_constants.items())]
    return {"kind": "lie", "version": VERSION, "n": L.n, "field": field_to_json(L.d), "brackets": brackets}


def lie_from_json(obj: dict, inherited: int | None = None) -> LieAlgebra:
    _check_envelope(obj, "lie")
    d = _doc_field(obj, inherited)
    n = _get(obj, "n", int)
    if n < 0:
        raise DocumentError("n must be non-negative")
    raw = obj.get("brackets", [])
    if not isinstance(raw, list):
        raise DocumentError("brackets must be a list")
    table = {}
    for entry in raw:
        if not (isinstance(entry, list) and len(entry) == 3 and all(isinstance(x, int) for x in entry[:2])):
            raise DocumentError(f"bracket entry must be [i, j, [coefficients]], got {entry!r}")
        i, j, vec = entry
        if not (1 <= i <= n and 1 <= j <= n):
            raise DocumentError(f"bracket index out of range in {entry!r}")
        if (i - 1, j - 1) in table or (j - 1, i - 1) in table:
            raise DocumentError(f"bracket ({i}, {j}) given twice")
        table[(i - 1, j - 1)] = vector_in(vec, d, n)
    return LieAlgebra(n, table, d)


def rep_to_json(rho: AffineRep) -> dict:
    images = [{"M": matrix_out(y.linear_part), "w": vector_out(y.translation)} for y in rho.images]
    d = _merge_field(rho.algebra.d, _field_of_values(x for y in rho.images for x in y.flat()))
    algebra = lie_to_json(rho.algebra)
    algebra["field"] = field_to_json(d)
    return {"kind": "rep", "version": VERSION, "field": field_to_json(d), "algebra": algebra, "images": images}


def rep_from_json(obj: dict, inherited: int | None = None) -> AffineRep:
    _check_envelope(obj, "rep")
    d = _doc_field(obj, inherited)
    alg_obj = _get(obj, "algebra", dict)
    if "field" in alg_obj:
        d = _merge_field(d, field_from_json(alg_obj["field"]))
    L = lie_from_json(alg_obj, d)
    if L.d != d:
        L = LieAlgebra(L.n, L.structure_constants, d)
    raw = _get(obj, "images", list)
    if len(raw) != L.n:
        raise DocumentError(f"expected {L.n} images, got {len(raw)}")
    images = []
    for y in raw:
        M = matrix_in(_get(y, "M", list), d, (L.n, L.n)) if L.n else Matrix([])
        w = vector_in(_get(y, "w", list), d, L.n)
        images.append(AffineLieElement.from_parts(M, w))
    return AffineRep(L, tuple(images))


def pcrep_to_json(rho: PolycyclicRep) -> dict:
    d = _merge_field(rho.d, _field_of_values(x for g in rho.generators for x in g.flat()))
    return {
        "kind": "pcrep",
        "version": VERSION,
        "n": rho.n,
        "field": field_to_json(d),
        "generators": [matrix_out(g) for g in rho.generators],
        "supplement": rho.supplement,
    }


def pcrep_from_json(obj: dict, inherited: int | None = None) -> PolycyclicRep:
    _check_envelope(obj, "pcrep")
    d = _doc_field(obj, inherited)
    n = _get(obj, "n", int)
    gens = tuple(matrix_in(g, d, (n + 1, n + 1)) for g in _get(obj, "generators", list))
    s = _get(obj, "supplement", int)
    try:
        affine = tuple(AffineMap(g) for g in gens)
    except ValueError as exc:
        raise DocumentError(f"generator is not an affine matrix: {exc}") from exc
    return PolycyclicRep(n, affine, s, d)


def ca_to_json(C: CAProduct) -> dict:
    d = _field_of_values(x for row in C.d for v in row for x in v)
    return {
        "kind": "ca",
        "version": VERSION,
        "n": C.n,
        "field": field_to_json(d),
        "d": [[vector_out(v) for v in row] for row in C.d],
    }


def ca_from_json(obj: dict, inherited: int | None = None) -> CAProduct:
    _check_envelope(obj, "ca")
    d = _doc_field(obj, inherited)
    n = _get(obj, "n", int)
    raw = _get(obj, "d", list)
    if len(raw) != n or any(not isinstance(row, list) or len(row) != n for row in raw):
        raise DocumentError(f"'d' must be an {n}x{n} table of vectors")
    return CAProduct(n, tuple(tuple(vector_in(v, d, n) for v in row) for row in raw))


def ext_to_json(spec: ExtensionSpec) -> dict:
    rep = rep_to_json(spec.rep)
    out = {
        "kind": "ext",
        "version": VERSION,
        "field": rep["field"],
        "rep": rep,
        "autos": [{"phi": matrix_out(a.phi), "order": a.order} for a in spec.autos],
        "relations": [list(w) for w in spec.relations],
    }
    if spec.lifts is not None:
        out["lifts"] = [matrix_out(q) for q in spec.lifts]
    return out


def ext_from_json(obj: dict, inherited: int | None = None) -> ExtensionSpec:
    _check_envelope(obj, "ext")
    d = _doc_field(obj, inherited)
    rep_obj = _get(obj, "rep", dict)
    if "field" in rep_obj:
        d = _merge_field(d, field_from_json(rep_obj["field"]))
    rho = rep_from_json(rep_obj, d)
    n = rho.n
    autos = []
    for a in _get(obj, "autos", list):
        phi = matrix_in(_get(a, "phi", list), d, (n, n))
        order = _get(a, "order", int)
        autos.append(Automorphism(phi, order))
    relations = []
    for w in _get(obj, "relations", list):
        if not isinstance(w, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in w):
            raise DocumentError(f"relation must be a list of signed generator indices, got {w!r}")
        relations.append(tuple(w))
    lifts = None
    if "lifts" in obj:
        try:
            lifts = tuple(AffineMap(matrix_in(q, d, (n + 1, n + 1))) for q in _get(obj, "lifts", list))
        except ValueError as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(f"lift is not an affine matrix: {exc}") from exc
    return ExtensionSpec(rho, tuple(autos), tuple(relations), lifts)


_LOADERS = {
    "lie": lie_from_json,
    "rep": rep_from_json,
    "pcrep": pcrep_from_json,
    "ca": ca_from_json,
    "ext": ext_from_json,
}


def from_document(obj: dict) -> Any:
    """Parse a document into a library object (verdict documents come back as plain dicts)."""
    if not isinstance(obj, dict):
        raise DocumentError("a document must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    if kind == "verdict":
        _check_envelope(obj, "verdict")
        return obj
    return _LOADERS[kind](obj)


def to_document(value: Any) -> dict:
    if isinstance(value, LieAlgebra):
        return lie_to_json(value)
    if isinstance(value, AffineRep):
        return rep_to_json(value)
    if isinstance(value, PolycyclicRep):
        return pcrep_to_json(value)
    if isinstance(value, CAProduct):
        return ca_to_json(value)
    if isinstance(value, ExtensionSpec):
        return ext_to_json(value)
    if isinstance(value, dict) and value.get("kind") == "verdict":
        return value
    raise TypeError(f"no document form for {type(value).__name__}")


def load(path: str | Path) -> Any:
    return from_document(read(path))


def save(value: Any, path: str | Path) -> None:
    Path(path).write_text(dumps(to_document(value)))
