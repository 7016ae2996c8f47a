"""JSON Schema (draft 2020-12) for the reports printed by the command line."""

from __future__ import annotations

_complex = {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}
_scalar = {"oneOf": [{"type": "string", "pattern": r"^-?\d+/\d+$"}, _complex]}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}
_window = {
    "type": "object",
    "required": ["neg", "pos"],
    "properties": {"neg": {"type": "integer", "minimum": 1}, "pos": {"type": "integer", "minimum": 1}},
}
_series = {"type": "object", "required": ["coeffs", "known_through"]}
_subspace = {"type": "object", "required": ["window", "basis"]}
_validation = {
    "type": "object",
    "required": ["passed", "axioms", "details"],
    "properties": {
        "passed": {"type": "boolean"},
        "axioms": {"type": "object", "additionalProperties": {"type": ["boolean", "null"]}},
    },
}
_eav = {
    "type": "object",
    "required": ["window", "K0", "Z", "Lambda", "n", "precision_bits"],
    "properties": {
        "window": _window,
        "K0": _subspace,
        "n": {"type": "integer", "minimum": 1},
        "precision_bits": {"type": "integer"},
    },
}

BODIES = {
    "error": {
        "required": ["error"],
        "properties": {
            "error": {
                "type": "object",
                "required": ["kind", "detail"],
                "properties": {"kind": {"type": "string"}, "detail": {"type": "string"}},
            }
        },
    },
    "expand": {
        "required": ["genus", "order", "x", "y", "f_antiderivs", "g_antiderivs", "semigroup"],
        "properties": {
            "genus": {"type": "integer", "minimum": 1},
            "x": _series,
            "y": _series,
            "f_antiderivs": {"type": "array", "items": _series},
            "g_antiderivs": {"type": "array", "items": _series},
        },
    },
    "pairing": {"required": ["pairing", "polarization", "n"],
                "properties": {"pairing": _scalar, "polarization": _complex}},
    "pairing_matrix": {"required": ["pairing_matrix", "polarization_matrix", "n"],
                       "properties": {"pairing_matrix": _matrix, "polarization_matrix": _matrix}},
    "annihilator": {
        "required": ["passed", "quotient_dim", "window"],
        "properties": {"passed": {"type": "boolean"}, "quotient_dim": {"type": "integer"}, "window": _window},
    },
    "verify-reciprocity": {
        "required": ["A", "B", "A2", "B2", "lhs", "rhs", "rel_err", "precision_bits", "passed"],
        "properties": {k: _complex for k in ("A", "B", "A2", "B2", "lhs", "rhs")},
    },
    "extend": {"required": ["eav", "validation"], "properties": {"eav": _eav, "validation": _validation}},
    "de-extend": {
        "required": ["validation"],
        "properties": {
            "validation": _validation,
            "siegel_point": {"type": "object", "required": ["g", "tau"]},
        },
    },
    "selfcheck": {"required": ["passed", "suites"],
                  "properties": {"passed": {"type": "boolean"}, "suites": {"type": "object"}}},
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "laurentdata report",
    "type": "object",
    "required": ["schema_version"],
    "properties": {"schema_version": {"const": 1}},
    "anyOf": [{"$ref": f"#/$defs/{name}"} for name in BODIES],
    "$defs": BODIES,
}
