"""The two invariant functors, morphism transport, and round-trip verifiers.

Going from the Stevens side to the Elliott side assembles the extended
trace cone over the same Delta family (no phantom rays); going back reads
the family off the trace cone and discards phantom rays.  Morphism
transport re-types the same matrix family and re-validates it against the
other category's laws; the round trip is the identity exactly on
presentations without phantom rays (the ideal property).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .elliott import (EMorphism, EObject, TraceConeX, identity_e_morphism,
                      validate_e_morphism, validate_e_object, zeta_apply)
from .errors import DomainError, TransportError
from .groups import Report, Scale, ScaledOrderedGroup, Violation
from .linalg import Mat
from .stevens import (DeltaFamily, SMorphism, SObject, identity_s_morphism,
                      validate_s_morphism, validate_s_object)


@dataclass(frozen=True)
class RoundTripReport:
    """Outcome of sending an object or morphism around both functors."""

    direction: str  # "GF" (Stevens side fixed) or "FG" (Elliott side fixed)
    verdict: str    # "identity" | "isomorphic-via-witness" | "mismatch"
    witness: tuple = None

    def __post_init__(self):
        if self.verdict == "mismatch" and self.witness is None:
            raise DomainError("a mismatch verdict requires a witness")


def has_ideal_property(e: EObject) -> bool:
    """Presentation-level ideal property: no trace directions hidden from K0."""
    return e.cone.phantom_dim == 0


def stevens_to_elliott(s: SObject, validate: bool = False) -> EObject:
    """The extended trace cone generated by a Stevens presentation."""
    if validate:
        report = validate_s_object(s)
        if not report.ok:
            raise DomainError(f"invalid Stevens object: {report.codes()}")
    return EObject(s.group, s.k1, TraceConeX(s.family, 0))


def elliott_to_stevens(e: EObject, validate: bool = False) -> SObject:
    """Finite-trace simplices of an Elliott presentation; phantom rays die here."""
    if validate:
        report = validate_e_object(e)
        if not report.ok:
            raise DomainError(f"invalid Elliott object: {report.codes()}")
    return SObject(e.group, e.k1, e.cone.family)


def roundtrip_object(obj) -> RoundTripReport:
    """Both composites, compared by exact structural equality."""
    if isinstance(obj, SObject):
        back = elliott_to_stevens(stevens_to_elliott(obj))
        if back == obj:
            return RoundTripReport("GF", "identity")
        return RoundTripReport("GF", "mismatch", witness=("family", "structure"))
    if isinstance(obj, EObject):
        back = stevens_to_elliott(elliott_to_stevens(obj))
        if back == obj:
            return RoundTripReport("FG", "identity")
        if obj.cone.phantom_dim != back.cone.phantom_dim:
            lost = obj.cone.phantom_dim
            noun = "ray" if lost == 1 else "rays"
            return RoundTripReport("FG", "mismatch",
                                   witness=("phantom", f"{lost} phantom {noun} lost"))
        return RoundTripReport("FG", "mismatch", witness=("family", "structure"))
    raise DomainError("round trips are defined for invariant objects")


def _require_ideal_property(*objs):
    for e in objs:
        if not has_ideal_property(e):
            raise TransportError(
                "morphism transport needs the ideal property (no phantom rays)")


def transport_stevens_to_elliott(m: SMorphism, src: SObject, dst: SObject,
                                 check: bool = True) -> EMorphism:
    """Extend the finite-trace maps to extended traces: infinity off the pulled ideal.

    The matrix family is reused as the trace map; consistency of the parts
    it glues from is re-derived from the commuting squares, and the result
    is checked against the Elliott-side laws.
    """
    e_src = stevens_to_elliott(src)
    e_dst = stevens_to_elliott(dst)
    out = EMorphism(m.theta0, m.theta1, dict(m.xi), Mat.identity(0))
    if check:
        _verify_gluing_consistency(out, e_src, e_dst)
        report = validate_e_morphism(out, e_src, e_dst)
        if not report.ok:
            raise TransportError(
                f"transported morphism fails the Elliott-side laws: {report.codes()}")
    return out


def _verify_gluing_consistency(m: EMorphism, src: EObject, dst: EObject):
    """The per-support trace maps must glue: checked on the rays of the full target cone."""
    fam_h = dst.cone.family
    full = frozenset(range(1, dst.group.rank + 1))
    dim = fam_h.dim(full)
    for j in range(dim):
        ray = tuple(1 if k == j else 0 for k in range(dim))
        y = dst.cone.element(full, ray)
        whole = zeta_apply(m, src, dst, y)
        parts = []
        for s in src.cone.family.supports():
            if s <= whole.support:
                img = m.theta0.image_support(s)
                parts.append((s, m.zeta[s].apply(fam_h.restriction(full, img).apply(ray))))
        try:
            glued = src.cone.glue_partial_traces(parts)
        except Exception as exc:
            raise TransportError(f"trace parts do not glue: {exc}") from exc
        if glued.support != whole.support or glued.finite != whole.finite:
            raise TransportError("glued trace parts disagree with the direct map")


def transport_elliott_to_stevens(m: EMorphism, src: EObject, dst: EObject,
                                 check: bool = True) -> SMorphism:
    """Restrict the extended trace map to finite traces on corners.

    Each component is the extended map conjugated by extend-then-restrict;
    with a coherent zeta family that is the component itself, so the data
    transports unchanged and is re-validated against the Stevens-side laws.
    """
    _require_ideal_property(src, dst)
    s_src = elliott_to_stevens(src)
    s_dst = elliott_to_stevens(dst)
    xi = {}
    for s in src.cone.family.supports():
        img = m.theta0.image_support(s)
        dim = dst.cone.family.dim(img)
        cols = []
        for j in range(dim):
            ray = tuple(1 if k == j else 0 for k in range(dim))
            extended = dst.cone.extend_by_infinity(ray, img)
            pulled = zeta_apply(m, src, dst, extended)
            cols.append(src.cone.restrict_x(pulled, s))
        rows = tuple(tuple(col[i] for col in cols) for i in range(src.cone.family.dim(s)))
        xi[s] = Mat.from_rows(rows, cols=dim)
    out = SMorphism(m.theta0, m.theta1, xi)
    if check:
        report = validate_s_morphism(out, s_src, s_dst)
        if not report.ok:
            raise TransportError(
                f"transported morphism fails the Stevens-side laws: {report.codes()}")
    return out


def roundtrip_morphism(m, src, dst) -> RoundTripReport:
    """Transport there and back; identity expected over ideal-property objects."""
    if isinstance(m, SMorphism):
        e_m = transport_stevens_to_elliott(m, src, dst)
        back = transport_elliott_to_stevens(e_m, stevens_to_elliott(src), stevens_to_elliott(dst))
        if back == m:
            return RoundTripReport("GF", "identity")
        return RoundTripReport("GF", "mismatch", witness=("xi", "component drift"))
    if isinstance(m, EMorphism):
        s_m = transport_elliott_to_stevens(m, src, dst)
        back = transport_stevens_to_elliott(s_m, elliott_to_stevens(src), elliott_to_stevens(dst))
        if back == m:
            return RoundTripReport("FG", "identity")
        return RoundTripReport("FG", "mismatch", witness=("zeta", "component drift"))
    raise DomainError("round trips are defined for invariant morphisms")


# ---------------------------------------------------------------------------
# Isomorphism checking


def _is_identity_s(m: SMorphism, obj: SObject) -> bool:
    return m == identity_s_morphism(obj)


def _is_identity_e(m: EMorphism, obj: EObject) -> bool:
    return m == identity_e_morphism(obj)


def verify_iso(a, b, forward=None, backward=None, search: bool = False) -> Report:
    """Witnessed isomorphism check, with a block-permutation search fallback.

    With witnesses, both composites must equal the identity presentations
    exactly.  Without witnesses (or with ``search``), block permutations of
    ranks up to 6 are tried; ``search_permutation_witness`` recovers the
    matching permutation when callers want it reported.
    """
    same_kind = (isinstance(a, SObject) and isinstance(b, SObject)) or \
                (isinstance(a, EObject) and isinstance(b, EObject))
    if not same_kind:
        return Report((Violation("iso", "objects live in different categories"),))
    if a.group.rank != b.group.rank:
        return Report((Violation("iso", "ranks differ"),))
    stevens_kind = isinstance(a, SObject)

    if forward is not None and backward is not None:
        if stevens_kind:
            rep_f = validate_s_morphism(forward, a, b)
            rep_b = validate_s_morphism(backward, b, a)
            if not (rep_f.ok and rep_b.ok):
                return Report((Violation("iso", "a witness fails validation"),))
            from .stevens import compose_s_morphisms
            if not _is_identity_s(compose_s_morphisms(backward, forward), a):
                return Report((Violation("iso", "backward . forward is not the identity"),))
            if not _is_identity_s(compose_s_morphisms(forward, backward), b):
                return Report((Violation("iso", "forward . backward is not the identity"),))
            return Report()
        rep_f = validate_e_morphism(forward, a, b)
        rep_b = validate_e_morphism(backward, b, a)
        if not (rep_f.ok and rep_b.ok):
            return Report((Violation("iso", "a witness fails validation"),))
        from .elliott import compose_e_morphisms
        if not _is_identity_e(compose_e_morphisms(backward, forward), a):
            return Report((Violation("iso", "backward . forward is not the identity"),))
        if not _is_identity_e(compose_e_morphisms(forward, backward), b):
            return Report((Violation("iso", "forward . backward is not the identity"),))
        return Report()

    if a.group.rank > 6:
        return Report((Violation("iso", "permutation search is capped at rank 6"),))
    if search_permutation_witness(a, b) is not None:
        return Report()
    return Report((Violation("iso", "no block permutation matches"),))


def search_permutation_witness(a, b):
    """The first block permutation turning a into b, or None after exhaustion."""
    for perm in permutations(range(1, a.group.rank + 1)):
        if _relabel(a, perm) == b:
            return perm
    return None


def _relabel(obj, perm):
    """Rename block i to perm[i-1] and re-sort rays into block order.

    Rays are abstract, so after renaming each cone's rays are put back into
    a canonical order read off the pairings (first block that sees a ray);
    without that, a renamed coordinate family would never compare equal to
    one built directly in the new labels.
    """
    from .stevens import twist_family

    mapping = {i + 1: perm[i] for i in range(len(perm))}

    def rename(s):
        return frozenset(mapping[i] for i in s)

    group = obj.group
    if group.scale.kind == "unit":
        u = [0] * group.rank
        for i, x in enumerate(group.scale.unit, start=1):
            u[mapping[i] - 1] = x
        group = ScaledOrderedGroup(group.rank, Scale.interval(u))
    fam = obj.family if isinstance(obj, SObject) else obj.cone.family
    dims = {rename(s): d for s, d in fam.dims.items()}
    restrictions = {(rename(s), rename(sub)): lam for (s, sub), lam in fam.restrictions.items()}
    pairings = {rename(s): {mapping[i]: row for i, row in rows.items()}
                for s, rows in fam.pairings.items()}
    renamed = DeltaFamily(fam.rank, dims, restrictions, pairings)
    twists = {}
    for s in renamed.supports():
        order = _canonical_ray_order(renamed, s)
        if order is not None:
            rows = [[1 if j == order[k] else 0 for j in range(len(order))]
                    for k in range(len(order))]
            twists[s] = Mat.from_rows(rows, cols=len(order))
    renamed = twist_family(renamed, twists)
    if isinstance(obj, SObject):
        return SObject(group, obj.k1, renamed)
    return EObject(group, obj.k1, TraceConeX(renamed, obj.cone.phantom_dim))


def _canonical_ray_order(fam: DeltaFamily, s: frozenset):
    """Rays sorted by the first block whose pairing sees them, or None."""
    dim = fam.dims[s]
    if dim == 0:
        return None
    keys = []
    for j in range(dim):
        owners = sorted(i for i in s if fam.pairings[s][i][j] != 0)
        if not owners:
            return None
        keys.append((owners[0], j))
    order = [j for _, j in sorted(keys)]
    return order if order != list(range(dim)) else None
