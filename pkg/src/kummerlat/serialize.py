"""JSON encoding of lattices, models and stability inputs.

Rationals are written as strings ("3", "-1/2"), never as floats, so files
round-trip bit-exactly.  Model files carry a SHA-256 digest of their
canonical body.
"""

import hashlib
import json
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import DigestMismatch, SchemaError
from .lattice import IntegerLattice, Sublattice

FORMAT_VERSION = 1


def enc(x):
    x = linalg._normalize(x)
    return str(x)


def dec(x, field="value"):
    if isinstance(x, bool):
        raise SchemaError("booleans are not rationals", field)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        raise SchemaError("floats are not allowed; write rationals as \"p/q\" strings", field)
    if isinstance(x, str):
        try:
            return linalg._normalize(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not a rational: {x!r}", field) from None
    raise SchemaError(f"expected a rational, got {type(x).__name__}", field)


def enc_matrix(A):
    return [[enc(x) for x in row] for row in np.asarray(A, dtype=object)]


def dec_vector(v, field="vector"):
    if isinstance(v, str):
        v = [t for t in v.replace(" ", "").split(",") if t]
    if not isinstance(v, list):
        raise SchemaError("expected a list", field)
    return [dec(x, f"{field}[{i}]") for i, x in enumerate(v)]


def dec_matrix(A, field="matrix"):
    if not isinstance(A, list) or any(not isinstance(r, list) for r in A):
        raise SchemaError("expected a list of rows", field)
    rows = [dec_vector(r, f"{field}[{i}]") for i, r in enumerate(A)]
    if rows and len({len(r) for r in rows}) != 1:
        raise SchemaError("ragged matrix", field)
    return linalg.as_matrix(rows) if rows else linalg.zeros(0, 0)


def parse_rationals(text):
    """'1,0,-1/2' -> [1, 0, Fraction(-1, 2)]"""
    return dec_vector(text, "argument")


def canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_of(body):
    return hashlib.sha256(canonical_dumps(body).encode()).hexdigest()


def _require(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError("missing field", key)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"expected {kind.__name__}", key)
    return v


# ---------------------------------------------------------------------------
# lattices


def lattice_to_json(L):
    return {"kind": "lattice", "label": L.label, "gram": enc_matrix(L.gram)}


def lattice_from_json(d):
    if d.get("kind", "lattice") != "lattice":
        raise SchemaError("not a lattice record", "kind")
    return IntegerLattice(dec_matrix(_require(d, "gram"), "gram"), label=d.get("label"))


def sublattice_to_json(S):
    return {"kind": "sublattice", "ambient": lattice_to_json(S.ambient),
            "basis": enc_matrix(S.basis)}


def sublattice_from_json(d):
    if _require(d, "kind") != "sublattice":
        raise SchemaError("not a sublattice record", "kind")
    return Sublattice(lattice_from_json(_require(d, "ambient", dict)),
                      dec_matrix(_require(d, "basis"), "basis"))


# ---------------------------------------------------------------------------
# models


def model_body(model):
    from .kummer import KummerModel, TorusModel

    if isinstance(model, KummerModel):
        named = {
            "u": [enc(x) for x in model.named["u"]],
            "u0": [enc(x) for x in model.named["u0"]],
            "E_hat": [[enc(x) for x in v] for v in model.named["E_hat"]],
            "B_Z": [enc(x) for x in model.named["B_Z"]],
        }
        return {"kind": "kummer-model", "version": FORMAT_VERSION,
                "ambient_gram": enc_matrix(model.ambient_gram),
                "generators": enc_matrix(model.generators),
                "basis": enc_matrix(model.basis),
                "gram": enc_matrix(model.lattice.gram),
                "named": named}
    if isinstance(model, TorusModel):
        return {"kind": "torus-model", "version": FORMAT_VERSION,
                "h2_gram": enc_matrix(model.h2_gram),
                "mukai_gram": enc_matrix(model.heven_gram),
                "intersection_gram": enc_matrix(model.intersection_gram)}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_digest(model):
    return digest_of(model_body(model))


def emit_model(model, path=None):
    body = model_body(model)
    doc = dict(body, digest=digest_of(body))
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return doc


def load_model_doc(doc, expect_digest=None):
    from .kummer import E_OFFSET, KummerModel, TorusModel

    if not isinstance(doc, dict):
        raise SchemaError("model file must hold a JSON object")
    stored = doc.get("digest")
    body = {k: v for k, v in doc.items() if k != "digest"}
    actual = digest_of(body)
    if stored is not None and stored != actual:
        raise DigestMismatch(f"stored digest {stored[:12]}... does not match content {actual[:12]}...")
    if expect_digest is not None and expect_digest != actual:
        raise DigestMismatch(f"expected {expect_digest[:12]}..., got {actual[:12]}...")
    kind = _require(body, "kind", str)
    if _require(body, "version", int) != FORMAT_VERSION:
        raise SchemaError("unsupported version", "version")
    if kind == "torus-model":
        return TorusModel(dec_matrix(_require(body, "h2_gram"), "h2_gram"),
                          dec_matrix(_require(body, "mukai_gram"), "mukai_gram"),
                          dec_matrix(_require(body, "intersection_gram"), "intersection_gram"))
    if kind != "kummer-model":
        raise SchemaError(f"unknown model kind {kind!r}", "kind")
    G = dec_matrix(_require(body, "ambient_gram"), "ambient_gram")
    basis = dec_matrix(_require(body, "basis"), "basis")
    gram = dec_matrix(_require(body, "gram"), "gram")
    named_d = _require(body, "named", dict)
    named = {"u": linalg.as_vector(dec_vector(_require(named_d, "u"), "named.u")),
             "u0": linalg.as_vector(dec_vector(_require(named_d, "u0"), "named.u0")),
             "B_Z": linalg.as_vector(dec_vector(_require(named_d, "B_Z"), "named.B_Z"))}
    named["E_hat"] = [linalg.as_vector(dec_vector(v, f"named.E_hat[{i}]"))
                      for i, v in enumerate(_require(named_d, "E_hat", list))]
    named["E"] = [linalg.as_vector([int(j == E_OFFSET + i) for j in range(G.shape[0])])
                  for i in range(16)]
    L = IntegerLattice(gram, label="Z^{4,20}")
    return KummerModel(G, dec_matrix(_require(body, "generators"), "generators"), basis, L, named)


def load_model(path, expect_digest=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
    return load_model_doc(doc, expect_digest)


# ---------------------------------------------------------------------------
# stability inputs


def numerical_from_json(d):
    from .stability import NumericalLattice

    ns = IntegerLattice(dec_matrix(_require(d, "ns_gram"), "ns_gram"), label=d.get("label"))
    ref = dec_vector(_require(d, "reference"), "reference")
    return NumericalLattice(ns, tuple(ref), bool(d.get("spherical", True)), d.get("label") or "")


def numerical_to_json(N):
    return {"kind": "numerical", "ns_gram": enc_matrix(N.ns.gram),
            "reference": [enc(x) for x in N.reference], "spherical": N.spherical,
            "label": N.label}


def path_from_json(d):
    from .stability import ChamberPoint, PathInChamber

    pts = _require(d, "points", list)
    points = []
    for i, p in enumerate(pts):
        points.append(ChamberPoint(tuple(dec_vector(_require(p, "B"), f"points[{i}].B")),
                                   tuple(dec_vector(_require(p, "omega"), f"points[{i}].omega"))))
    lam = d.get("lambdas")
    if lam is not None:
        lam = tuple(dec_vector(lam, "lambdas"))
    return PathInChamber(tuple(points), lam)


def path_to_json(path):
    out = {"points": [{"B": [enc(x) for x in p.B], "omega": [enc(x) for x in p.omega]}
                      for p in path.points]}
    if path.lambdas is not None:
        out["lambdas"] = [enc(x) for x in path.lambdas]
    return out


def vectors_from_json(d):
    if isinstance(d, dict):
        d = _require(d, "vectors", list)
    if not isinstance(d, list):
        raise SchemaError("expected a list of Mukai vectors", "vectors")
    return [dec_vector(v, f"vectors[{i}]") for i, v in enumerate(d)]


def mukai_to_json(v):
    return [enc(x) for x in v.as_tuple()]
