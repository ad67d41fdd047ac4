"""JSON schemas for class vectors, words and certificate records."""

from __future__ import annotations

NUMBER = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
    ]
}

CLASS = {
    "type": "object",
    "required": ["s", "d", "m"],
    "properties": {
        "s": {"type": "integer", "minimum": 1},
        "d": NUMBER,
        "m": {"type": "array", "items": NUMBER},
    },
}

WORD = {
    "type": "array",
    "items": {
        "oneOf": [
            {
                "type": "object",
                "required": ["quad"],
                "properties": {
                    "quad": {"type": "array", "items": {"type": "integer", "minimum": 1},
                             "minItems": 3, "maxItems": 3}
                },
            },
            {
                "type": "object",
                "required": ["perm"],
                "properties": {"perm": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
            },
        ]
    },
}


def _record(kind: str, required: dict) -> dict:
    return {
        "type": "object",
        "required": ["kind"] + list(required),
        "properties": {"kind": {"const": kind}, **required},
    }


NEF = _record("nef", {
    "class": CLASS,
    "word": WORD,
    "multiple": NUMBER,
    "support": {"type": "array", "items": {"type": "integer"}, "minItems": 9, "maxItems": 9},
})

NON_NEF = _record("non-nef", {
    "class": CLASS,
    "curve": CLASS,
    "value": NUMBER,
    "word": WORD,
    "index": {"type": "integer", "minimum": 1},
})

GOOD_RAY = _record("good-ray", {
    "ray": CLASS,
    "source": CLASS,
    "source_certificate": NEF,
    "index": {"type": "integer", "minimum": 1},
    "factor": {"type": "integer", "minimum": 2},
    "scale": {"type": "integer", "minimum": 1},
    "lemma_branch": {"enum": ["a", "b"]},
    "m": {"type": "integer", "minimum": 1},
    "h0_bound": {"const": 1},
    "h0_justification": {"type": "string"},
    "k_pairing": NUMBER,
    "de_fernex_sign": {"enum": [-1, 0, 1]},
})

REDUCTION = _record("reduction", {
    "input": CLASS,
    "final": CLASS,
    "word": WORD,
    "status": {"enum": ["Reduced", "NegativeMultiplicity", "NegativeDegree"]},
    "steps": {"type": "integer", "minimum": 0},
})

MATRIX = {"type": "array", "items": {"type": "array", "items": NUMBER}}

KPOSITIVITY = _record("kpositivity", {
    "s": {"type": "integer"},
    "pi_basis": {"type": "array", "items": CLASS, "minItems": 10, "maxItems": 10},
    "kperp_basis": {"type": "array", "items": CLASS},
    "gram": MATRIX,
    "minors": {"type": "array", "items": NUMBER},
    "negative_definite": {"type": "boolean"},
    "kperp_inertia": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
    "radical": {"type": "array", "items": CLASS},
    "pi_signature": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
    "witness": CLASS,
    "witness_k_pairing": NUMBER,
    "steps": {"type": "array", "items": {"type": "string"}},
})

ENTRY = {
    "type": "object",
    "required": ["s", "degree", "multiplicities", "k_pairing", "de_fernex_sign", "certificate_id", "certificate"],
    "properties": {
        "s": {"type": "integer"},
        "degree": NUMBER,
        "multiplicities": {"type": "array", "items": NUMBER},
        "k_pairing": NUMBER,
        "de_fernex_sign": {"enum": [-1, 0, 1]},
        "certificate_id": {"type": "string"},
        "certificate": {"type": "object", "required": ["kind"]},
    },
}

REPORT = _record("report", {
    "name": {"type": "string"},
    "params": {"type": "object"},
    "success": {"type": "boolean"},
    "entries": {"type": "array", "items": ENTRY},
    "kpositivity": {"oneOf": [{"type": "null"}, KPOSITIVITY]},
    "notes": {"type": "array", "items": {"type": "string"}},
})

_BY_KIND = {
    "nef": NEF,
    "non-nef": NON_NEF,
    "good-ray": GOOD_RAY,
    "reduction": REDUCTION,
    "kpositivity": KPOSITIVITY,
    "report": REPORT,
}


def for_kind(kind) -> dict:
    if kind not in _BY_KIND:
        raise ValueError(f"unknown record kind {kind!r}")
    return _BY_KIND[kind]
