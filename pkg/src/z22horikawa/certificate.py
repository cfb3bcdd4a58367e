"""Certificate documents: canonical JSON, flattened CSV rows, text tables.

A certificate is a plain JSON object.  Emission sorts keys and uses
compact separators, so ``emit(parse(text)) == text`` for any emitted line
and unknown keys survive a round trip untouched.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .cover import BuildingData
from .picard import surface_to_dict
from .records import ConstructionRecord

__all__ = ["SCHEMA_VERSION", "Certificate", "certificate_from_record", "CSV_COLUMNS", "to_csv", "to_text"]

SCHEMA_VERSION = "1"

REQUIRED_KEYS = ("schema_version", "line", "chi", "K2", "component", "recipe", "base",
                 "branch", "bundles", "invariants", "canonical")


@dataclass
class Certificate:
    fields: dict

    def to_json(self) -> str:
        return json.dumps(self.fields, sort_keys=True, separators=(",", ":"), ensure_ascii=True)

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("certificate must be a JSON object")
        missing = [k for k in REQUIRED_KEYS if k not in data]
        if missing:
            raise ValueError(f"certificate is missing {', '.join(missing)}")
        return cls(data)

    def __getitem__(self, key):
        return self.fields[key]

    @property
    def unknown_fields(self) -> dict:
        return {k: v for k, v in self.fields.items() if k not in _KNOWN}


_KNOWN = set(REQUIRED_KEYS) | {"genus2", "oracle", "annotations", "branch_annotations", "z22_action"}


def _vec(D):
    return list(D.coeffs)


def _datum(bd: BuildingData) -> dict:
    return {
        "base": surface_to_dict(bd.base),
        "branch": [_vec(d) for d in bd.branch],
        "bundles": [_vec(d) for d in bd.bundles],
        "annotations": [[a.to_dict() for a in notes] for notes in bd.annotations],
    }


def certificate_from_record(rec: ConstructionRecord) -> Certificate:
    bd, can = rec.building_data, rec.canonical
    check = can.image_h0_check
    singular = None
    if rec.singular is not None:
        sbd, sinv = rec.singular
        singular = dict(_datum(sbd), invariants=sinv.to_dict())
    fields = {
        "schema_version": SCHEMA_VERSION,
        "line": rec.line.value,
        "chi": rec.chi,
        "K2": rec.K2,
        "component": rec.component.value,
        "recipe": {
            "name": rec.recipe.name,
            "params": dict(rec.recipe.params),
            "intermediate": rec.recipe.intermediate,
            "image_route": None if rec.recipe.image is None else rec.recipe.image.to_dict(),
        },
        "base": surface_to_dict(bd.base),
        "branch": [_vec(d) for d in bd.branch],
        "bundles": [_vec(d) for d in bd.bundles],
        "branch_annotations": [[a.to_dict() for a in notes] for notes in bd.annotations],
        "invariants": rec.invariants.to_dict(),
        "canonical": {
            "half2K": _vec(can.half2K),
            "verdict": can.positivity.verdict.value,
            "witness": None if can.positivity.witness is None else _vec(can.positivity.witness),
            "is_canonical_model": can.is_canonical_model,
            "contracted_classes": [_vec(c) for c in can.contracted_classes],
            "image": str(can.image),
            "h0_check": None if check is None else {
                "expected": check.expected, "computed": check.computed, "match": check.match},
        },
        "genus2": None if can.genus2 is None else {
            "fiber_base_class": _vec(can.genus2.fiber_base_class),
            "contribution_sum": can.genus2.contribution_sum,
        },
        "oracle": None if rec.oracle is None else dict(rec.oracle),
        "annotations": {
            "singular_model": singular,
            "transports": [
                {"kind": s.kind, "indices": list(s.indices), "before": s.before.to_dict(),
                 "after": s.after.to_dict(), "base": surface_to_dict(s.datum.base),
                 "branch": [_vec(d) for d in s.datum.branch]}
                for s in rec.transports
            ],
            "ksba_note": rec.notes[0] if rec.notes else None,
        },
        "z22_action": rec.z22_action,
    }
    return Certificate(fields)


def _coeffs(v):
    return " ".join(str(c) for c in v)


CSV_COLUMNS = (
    "line", "chi", "K2", "component", "recipe", "params", "base",
    "D1", "D2", "D3", "L1", "L2", "L3", "cover_K2", "cover_chi", "pg", "q",
    "half2K", "verdict", "is_canonical_model", "contracted", "image",
    "h0_expected", "h0_computed", "h0_match", "genus2_sum", "oracle_pass",
)


def _row(cert: Certificate) -> dict:
    f = cert.fields
    can, inv, chk = f["canonical"], f["invariants"], f["canonical"]["h0_check"]
    base = f["base"]
    desc = {"plane": "P2", "quadric": "P1xP1"}.get(base["kind"], f"F{base['e']}")
    if base["blowups"]:
        desc = f"Bl{len(base['blowups'])}({desc})"
    oracle = f.get("oracle")
    return {
        "line": f["line"], "chi": f["chi"], "K2": f["K2"], "component": f["component"],
        "recipe": f["recipe"]["name"],
        "params": ";".join(f"{k}={v}" for k, v in sorted(f["recipe"]["params"].items())),
        "base": desc,
        **{f"D{i + 1}": _coeffs(v) for i, v in enumerate(f["branch"])},
        **{f"L{i + 1}": _coeffs(v) for i, v in enumerate(f["bundles"])},
        "cover_K2": inv["K2"], "cover_chi": inv["chi"],
        "pg": "" if inv["pg"] is None else inv["pg"], "q": inv["q"],
        "half2K": _coeffs(can["half2K"]), "verdict": can["verdict"],
        "is_canonical_model": can["is_canonical_model"],
        "contracted": "|".join(_coeffs(c) for c in can["contracted_classes"]),
        "image": can["image"],
        "h0_expected": "" if chk is None else chk["expected"],
        "h0_computed": "" if chk is None else chk["computed"],
        "h0_match": "" if chk is None else chk["match"],
        "genus2_sum": "" if f["genus2"] is None else f["genus2"]["contribution_sum"],
        "oracle_pass": "" if oracle is None else all(oracle.values()),
    }


def to_csv(certs) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for c in certs:
        writer.writerow(_row(c))
    return buf.getvalue()


_TEXT_COLS = ("line", "chi", "K2", "component", "recipe", "base", "verdict", "image", "h0_match", "genus2_sum")


def to_text(certs) -> str:
    rows = [[str(_row(c)[k]) for k in _TEXT_COLS] for c in certs]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(_TEXT_COLS)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(_TEXT_COLS, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"
