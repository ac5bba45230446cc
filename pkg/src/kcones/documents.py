"""Versioned JSON documents for objects and morphisms.

Concrete conventions: rationals are strings "num/den" (or "num" when the
denominator is 1, "inf" for infinity), matrices are row-major arrays,
supports are sorted 1-based index arrays.  Emission is canonical (sorted
keys, fixed indentation), so golden files are diffable and round trips are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .elliott import EMorphism, EObject, TraceConeX
from .errors import DocumentError, ParseError
from .groups import FinAbGroup, K1Hom, PositiveHom, Scale, ScaledOrderedGroup
from .linalg import Mat
from .rationals import INF, ExtRat
from .stevens import DeltaFamily, SMorphism, SObject

FORMAT_VERSION = "1"
KINDS = ("s-object", "e-object", "s-morphism", "e-morphism")


@dataclass(frozen=True)
class MorphismBundle:
    """A morphism together with the objects it runs between."""

    morphism: object
    src: object
    dst: object


@dataclass(frozen=True)
class Document:
    kind: str
    value: object
    version: str = FORMAT_VERSION


def rational_to_str(x) -> str:
    if isinstance(x, ExtRat):
        if not x.is_finite:
            return "inf"
        x = x.finite_value
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_str(text, field) -> Fraction:
    if not isinstance(text, str):
        raise DocumentError(f"expected a rational string at {field}", field=field)
    if text == "inf":
        raise DocumentError(f"infinity is not allowed at {field}", field=field)
    parts = text.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            num, den = int(parts[0]), int(parts[1])
            if den == 0:
                raise DocumentError(f"zero denominator at {field}", field=field)
            return Fraction(num, den)
    except ValueError:
        pass
    raise DocumentError(f"malformed rational {text!r} at {field}", field=field)


def extended_from_str(text, field) -> ExtRat:
    if text == "inf":
        return INF
    return ExtRat(rational_from_str(text, field))


def _expect(mapping, key, field):
    if not isinstance(mapping, dict) or key not in mapping:
        raise DocumentError(f"missing field {field}.{key}", field=f"{field}.{key}")
    return mapping[key]


def _int(value, field):
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(f"expected an integer at {field}", field=field)
    return value


def _support(value, field) -> frozenset:
    if not isinstance(value, list) or any(not isinstance(i, int) for i in value):
        raise DocumentError(f"expected an index array at {field}", field=field)
    if value != sorted(value) or len(set(value)) != len(value):
        raise DocumentError(f"support must be sorted and duplicate-free at {field}", field=field)
    return frozenset(value)


def _rational_matrix(value, field, rows, cols) -> Mat:
    if not isinstance(value, list) or len(value) != rows:
        raise DocumentError(f"expected {rows} matrix rows at {field}", field=field)
    data = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"expected {cols} entries at {field}[{i}]", field=f"{field}[{i}]")
        data.append([rational_from_str(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    return Mat.from_rows(data, cols=cols)


def _int_matrix(value, field) -> list:
    if not isinstance(value, list):
        raise DocumentError(f"expected a matrix at {field}", field=field)
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise DocumentError(f"expected a row at {field}[{i}]", field=f"{field}[{i}]")
        out.append([_int(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    return out


# ---------------------------------------------------------------------------
# payload -> typed values


def _group_from(payload, field) -> ScaledOrderedGroup:
    rank = _int(_expect(payload, "rank", field), f"{field}.rank")
    if rank < 0:
        raise DocumentError(f"negative rank at {field}.rank", field=f"{field}.rank")
    raw = _expect(payload, "scale", field)
    if raw == "all":
        scale = Scale.all()
    elif isinstance(raw, list):
        unit = [_int(x, f"{field}.scale") for x in raw]
        if len(unit) != rank or any(x < 0 for x in unit):
            raise DocumentError(f"scale unit must list {rank} nonnegative entries",
                                field=f"{field}.scale")
        scale = Scale.interval(unit)
    else:
        raise DocumentError(f"scale must be \"all\" or an index array at {field}.scale",
                            field=f"{field}.scale")
    return ScaledOrderedGroup(rank, scale)


def _k1_from(payload, field) -> FinAbGroup:
    free = _int(_expect(payload, "free_rank", field), f"{field}.free_rank")
    torsion = _expect(payload, "torsion", field)
    if not isinstance(torsion, list):
        raise DocumentError(f"torsion must be an array at {field}.torsion", field=f"{field}.torsion")
    try:
        return FinAbGroup(free, tuple(_int(d, f"{field}.torsion") for d in torsion))
    except Exception as exc:
        raise DocumentError(f"bad K1 presentation at {field}: {exc}", field=field) from exc


def _family_from(payload, rank, field) -> DeltaFamily:
    cones = _expect(payload, "cones", field)
    dims = {}
    for k, entry in enumerate(cones):
        s = _support(_expect(entry, "support", f"{field}.cones[{k}]"), f"{field}.cones[{k}].support")
        dims[s] = _int(_expect(entry, "dim", f"{field}.cones[{k}]"), f"{field}.cones[{k}].dim")
        if dims[s] < 0:
            raise DocumentError(f"negative cone dimension at {field}.cones[{k}]",
                                field=f"{field}.cones[{k}].dim")
        if any(i < 1 or i > rank for i in s):
            raise DocumentError(f"support index out of range at {field}.cones[{k}]",
                                field=f"{field}.cones[{k}].support")
    restrictions = {}
    for k, entry in enumerate(_expect(payload, "restrictions", field)):
        here = f"{field}.restrictions[{k}]"
        sup = _support(_expect(entry, "from", here), f"{here}.from")
        sub = _support(_expect(entry, "to", here), f"{here}.to")
        if sup not in dims or sub not in dims:
            raise DocumentError(f"restriction over unknown support at {here}", field=here)
        if not sub < sup:
            raise DocumentError(f"restriction endpoints are not nested at {here}", field=here)
        restrictions[(sup, sub)] = _rational_matrix(
            _expect(entry, "matrix", here), f"{here}.matrix", dims[sub], dims[sup])
        if not restrictions[(sup, sub)].is_nonnegative():
            raise DocumentError(f"negative restriction entry at {here}.matrix", field=f"{here}.matrix")
    pairings = {s: {} for s in dims}
    for k, entry in enumerate(_expect(payload, "pairings", field)):
        here = f"{field}.pairings[{k}]"
        s = _support(_expect(entry, "support", here), f"{here}.support")
        block = _int(_expect(entry, "block", here), f"{here}.block")
        if s not in dims or block not in s:
            raise DocumentError(f"pairing attached to a foreign support at {here}", field=here)
        row = _expect(entry, "functional", here)
        if not isinstance(row, list) or len(row) != dims[s]:
            raise DocumentError(f"pairing length must be {dims[s]} at {here}.functional",
                                field=f"{here}.functional")
        values = tuple(rational_from_str(x, f"{here}.functional[{j}]") for j, x in enumerate(row))
        if any(v < 0 for v in values):
            raise DocumentError(f"negative pairing entry at {here}.functional",
                                field=f"{here}.functional")
        pairings[s][block] = values
    return DeltaFamily(rank, dims, restrictions, pairings)


def _s_object_from(payload, field) -> SObject:
    group = _group_from(_expect(payload, "group", field), f"{field}.group")
    k1 = _k1_from(_expect(payload, "k1", field), f"{field}.k1")
    family = _family_from(_expect(payload, "family", field), group.rank, f"{field}.family")
    return SObject(group, k1, family)


def _e_object_from(payload, field) -> EObject:
    group = _group_from(_expect(payload, "group", field), f"{field}.group")
    k1 = _k1_from(_expect(payload, "k1", field), f"{field}.k1")
    family = _family_from(_expect(payload, "family", field), group.rank, f"{field}.family")
    phantom = _int(_expect(payload, "phantom_dim", field), f"{field}.phantom_dim")
    if phantom < 0:
        raise DocumentError(f"negative phantom dimension at {field}.phantom_dim",
                            field=f"{field}.phantom_dim")
    return EObject(group, k1, TraceConeX(family, phantom))


def _theta0_from(payload, field, src_rank, dst_rank) -> PositiveHom:
    matrix = _int_matrix(_expect(payload, "theta0", field), f"{field}.theta0")
    try:
        return PositiveHom.from_rows(matrix, source_rank=src_rank, target_rank=dst_rank)
    except Exception as exc:
        raise DocumentError(f"bad theta0 at {field}: {exc}", field=f"{field}.theta0") from exc


def _theta1_from(payload, field, src_k1, dst_k1) -> K1Hom:
    matrix = _int_matrix(_expect(payload, "theta1", field), f"{field}.theta1")
    try:
        return K1Hom.from_rows(matrix, src_k1, dst_k1)
    except Exception as exc:
        raise DocumentError(f"bad theta1 at {field}: {exc}", field=f"{field}.theta1") from exc


def _component_map_from(payload, key, field, theta0, src_family, dst_family) -> dict:
    out = {}
    for k, entry in enumerate(_expect(payload, key, field)):
        here = f"{field}.{key}[{k}]"
        s = _support(_expect(entry, "support", here), f"{here}.support")
        if s not in src_family.dims:
            raise DocumentError(f"component over unknown support at {here}", field=here)
        img = theta0.image_support(s)
        out[s] = _rational_matrix(_expect(entry, "matrix", here), f"{here}.matrix",
                                  src_family.dims[s], dst_family.dims[img])
    return out


def _s_morphism_from(payload, field) -> MorphismBundle:
    src = _s_object_from(_expect(payload, "src", field), f"{field}.src")
    dst = _s_object_from(_expect(payload, "dst", field), f"{field}.dst")
    theta0 = _theta0_from(payload, field, src.group.rank, dst.group.rank)
    theta1 = _theta1_from(payload, field, src.k1, dst.k1)
    xi = _component_map_from(payload, "xi", field, theta0, src.family, dst.family)
    return MorphismBundle(SMorphism(theta0, theta1, xi), src, dst)


def _e_morphism_from(payload, field) -> MorphismBundle:
    src = _e_object_from(_expect(payload, "src", field), f"{field}.src")
    dst = _e_object_from(_expect(payload, "dst", field), f"{field}.dst")
    theta0 = _theta0_from(payload, field, src.group.rank, dst.group.rank)
    theta1 = _theta1_from(payload, field, src.k1, dst.k1)
    zeta = _component_map_from(payload, "zeta", field, theta0, src.cone.family, dst.cone.family)
    phantom = _rational_matrix(_expect(payload, "phantom_map", field), f"{field}.phantom_map",
                               src.cone.phantom_dim, dst.cone.phantom_dim)
    return MorphismBundle(EMorphism(theta0, theta1, zeta, phantom), src, dst)


# ---------------------------------------------------------------------------
# typed values -> payload


def _group_payload(group: ScaledOrderedGroup) -> dict:
    scale = "all" if group.scale.kind == "all" else list(group.scale.unit)
    return {"rank": group.rank, "scale": scale}


def _k1_payload(k1: FinAbGroup) -> dict:
    return {"free_rank": k1.free_rank, "torsion": list(k1.torsion)}


def _family_payload(family: DeltaFamily) -> dict:
    from .groups import support_key
    cones = [{"support": sorted(s), "dim": family.dims[s]} for s in family.supports()]
    restrictions = []
    for (sup, sub) in sorted(family.restrictions, key=lambda p: (support_key(p[0]), support_key(p[1]))):
        mat = family.restrictions[(sup, sub)]
        restrictions.append({
            "from": sorted(sup), "to": sorted(sub),
            "matrix": [[rational_to_str(x) for x in row] for row in mat.data]})
    pairings = []
    for s in family.supports():
        for i in sorted(family.pairings[s]):
            pairings.append({"support": sorted(s), "block": i,
                             "functional": [rational_to_str(x) for x in family.pairings[s][i]]})
    return {"cones": cones, "restrictions": restrictions, "pairings": pairings}


def _object_payload(value) -> dict:
    if isinstance(value, SObject):
        return {"group": _group_payload(value.group), "k1": _k1_payload(value.k1),
                "family": _family_payload(value.family)}
    return {"group": _group_payload(value.group), "k1": _k1_payload(value.k1),
            "family": _family_payload(value.cone.family),
            "phantom_dim": value.cone.phantom_dim}


def _component_payload(components: dict) -> list:
    from .groups import support_key
    return [{"support": sorted(s),
             "matrix": [[rational_to_str(x) for x in row] for row in components[s].data]}
            for s in sorted(components, key=support_key)]


def payload_of(value) -> dict:
    if isinstance(value, (SObject, EObject)):
        return _object_payload(value)
    if isinstance(value, MorphismBundle):
        m = value.morphism
        payload = {"src": _object_payload(value.src), "dst": _object_payload(value.dst),
                   "theta0": [list(r) for r in m.theta0.matrix],
                   "theta1": [list(r) for r in m.theta1.matrix]}
        if isinstance(m, SMorphism):
            payload["xi"] = _component_payload(m.xi)
        else:
            payload["zeta"] = _component_payload(m.zeta)
            payload["phantom_map"] = [[rational_to_str(x) for x in row]
                                      for row in m.phantom_map.data]
        return payload
    raise DocumentError(f"cannot serialize a {type(value).__name__}")


def kind_of(value) -> str:
    if isinstance(value, SObject):
        return "s-object"
    if isinstance(value, EObject):
        return "e-object"
    if isinstance(value, MorphismBundle):
        return "s-morphism" if isinstance(value.morphism, SMorphism) else "e-morphism"
    raise DocumentError(f"no document kind for {type(value).__name__}")


def document_of(value) -> Document:
    return Document(kind_of(value), value)


def emit(document: Document) -> str:
    """Canonical text: sorted keys, one-space indent, trailing newline."""
    body = {"kind": document.kind, "version": document.version,
            "payload": payload_of(document.value)}
    return json.dumps(body, sort_keys=True, indent=1) + "\n"


_PARSERS = {
    "s-object": _s_object_from,
    "e-object": _e_object_from,
    "s-morphism": _s_morphism_from,
    "e-morphism": _e_morphism_from,
}


def parse(text: str) -> Document:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc.msg}", line=exc.lineno,
                         column=exc.colno) from exc
    if not isinstance(body, dict):
        raise ParseError("document root must be an object")
    kind = body.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown document kind {kind!r}")
    version = body.get("version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format version {version!r}", field="version")
    payload = body.get("payload")
    if not isinstance(payload, dict):
        raise DocumentError("payload must be an object", field="payload")
    value = _PARSERS[kind](payload, "payload")
    return Document(kind, value, version)
