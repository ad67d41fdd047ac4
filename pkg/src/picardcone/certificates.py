"""JSON encoding, decoding and replay of every certificate kind.

Each record carries a ``kind`` field; :func:`verify` dispatches on it and
re-derives the record from its inputs, so a file can be checked without
trusting the program that wrote it.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import jsonschema

from picardcone import schema
from picardcone.cremona import (
    reduction_from_json,
    reduction_to_json,
    verify_reduction,
    word_from_json,
    word_to_json,
    ReductionResult,
)
from picardcone.kperp import (
    NefCertificate,
    NonNefWitness,
    verify_nef_certificate,
    verify_non_nef_witness,
)
from picardcone.lattice import (
    Ray,
    class_from_json,
    class_to_json,
    decode_number,
    encode_number,
    de_fernex_sign,
    k_pairing,
)
from picardcone.negcurves import NegCurveClass
from picardcone.uncollision import GoodRayCertificate, verify_good_ray_certificate


class CertificateError(ValueError):
    pass


def _ray(obj: dict) -> Ray:
    return Ray(class_from_json(obj))


def nef_to_json(c: NefCertificate) -> dict:
    return {
        "kind": "nef",
        "class": class_to_json(c.cls.rep),
        "word": word_to_json(c.word),
        "multiple": encode_number(c.multiple),
        "support": list(c.support),
    }


def nef_from_json(obj: dict) -> NefCertificate:
    return NefCertificate(
        _ray(obj["class"]),
        word_from_json(obj["word"]),
        decode_number(obj["multiple"]),
        tuple(int(x) for x in obj["support"]),
    )


def non_nef_to_json(w: NonNefWitness) -> dict:
    return {
        "kind": "non-nef",
        "class": class_to_json(w.cls.rep),
        "curve": class_to_json(w.curve.rep),
        "value": encode_number(w.value),
        "word": word_to_json(w.word),
        "index": w.index,
    }


def non_nef_from_json(obj: dict) -> NonNefWitness:
    return NonNefWitness(
        _ray(obj["class"]),
        NegCurveClass(_ray(obj["curve"])),
        decode_number(obj["value"]),
        word_from_json(obj["word"]),
        int(obj["index"]),
    )


def good_ray_to_json(c: GoodRayCertificate) -> dict:
    return {
        "kind": "good-ray",
        "ray": class_to_json(c.ray.rep),
        "source": class_to_json(c.source.rep),
        "source_certificate": nef_to_json(c.source_certificate),
        "index": c.index,
        "factor": c.factor,
        "scale": c.scale,
        "lemma_branch": c.lemma_branch,
        "m": c.m,
        "h0_bound": c.h0_bound,
        "h0_justification": c.h0_justification,
        "k_pairing": encode_number(c.k_pairing),
        "de_fernex_sign": int(c.de_fernex),
    }


def good_ray_from_json(obj: dict) -> GoodRayCertificate:
    cert = GoodRayCertificate(
        _ray(obj["ray"]),
        _ray(obj["source"]),
        nef_from_json(obj["source_certificate"]),
        int(obj["index"]),
        int(obj["factor"]),
        int(obj["scale"]),
        obj["lemma_branch"],
        int(obj["m"]),
        int(obj["h0_bound"]),
        obj["h0_justification"],
    )
    if decode_number(obj["k_pairing"]) != cert.k_pairing:
        raise CertificateError("recorded K pairing does not match the ray")
    if int(obj["de_fernex_sign"]) != int(cert.de_fernex):
        raise CertificateError("recorded de Fernex sign does not match the ray")
    return cert


def to_json(record: Any) -> dict:
    if isinstance(record, NefCertificate):
        return nef_to_json(record)
    if isinstance(record, NonNefWitness):
        return non_nef_to_json(record)
    if isinstance(record, GoodRayCertificate):
        return good_ray_to_json(record)
    if isinstance(record, ReductionResult):
        return reduction_to_json(record)
    if hasattr(record, "to_json"):
        return record.to_json()
    raise TypeError(f"no JSON encoding for {type(record).__name__}")


def certificate_id(obj: dict) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def verify(obj: dict) -> str:
    """Validate and replay one record or a report of records; returns its kind."""
    kind = obj.get("kind") if isinstance(obj, dict) else None
    try:
        record_schema = schema.for_kind(kind)
    except ValueError as exc:
        raise CertificateError(str(exc)) from None
    try:
        jsonschema.validate(obj, record_schema)
    except jsonschema.ValidationError as exc:
        raise CertificateError(f"{kind} record fails its schema: {exc.message}") from None
    try:
        if kind == "nef":
            verify_nef_certificate(nef_from_json(obj))
        elif kind == "non-nef":
            verify_non_nef_witness(non_nef_from_json(obj))
        elif kind == "good-ray":
            verify_good_ray_certificate(good_ray_from_json(obj))
        elif kind == "reduction":
            verify_reduction(reduction_from_json(obj))
        elif kind == "kpositivity":
            from picardcone.harness import verify_kpositivity_json

            verify_kpositivity_json(obj)
        elif kind == "report":
            for entry in obj["entries"]:
                cert = entry["certificate"]
                verify(cert)
                ray = class_from_json(cert["ray"] if cert["kind"] == "good-ray" else cert["class"])
                if class_to_json(ray)["m"] != entry["multiplicities"] or encode_number(ray.d) != entry["degree"]:
                    raise CertificateError("report row class differs from its certificate")
                if k_pairing(ray) != decode_number(entry["k_pairing"]):
                    raise CertificateError("report row K pairing mismatch")
                if int(de_fernex_sign(ray)) != entry["de_fernex_sign"]:
                    raise CertificateError("report row de Fernex sign mismatch")
                if certificate_id(cert) != entry["certificate_id"]:
                    raise CertificateError("report row certificate id mismatch")
            if obj.get("kpositivity") is not None:
                verify(obj["kpositivity"])
        else:
            raise CertificateError(f"unknown record kind {kind!r}")
    except CertificateError:
        raise
    except (ValueError, AssertionError, RuntimeError) as exc:
        raise CertificateError(f"{kind} record does not replay: {exc}") from exc
    return kind

