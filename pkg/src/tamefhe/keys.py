"""Key file formats.

The private file holds φ, ψ and the factorization; the public file holds φ
only.  Both carry the fingerprint of φ so that a mismatched pair of files is
caught on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .automorphism import AutomorphismPair, Factor, TamePlan, check_inverse, fingerprint
from .poly import PolyMap, polymap_from_json, polymap_to_json

FORMAT_VERSION = 1


class KeyFileError(ValueError):
    pass


@dataclass(frozen=True)
class PublicKey:
    n: int
    phi: PolyMap
    fingerprint: str

    @classmethod
    def from_pair(cls, pair: AutomorphismPair) -> PublicKey:
        return cls(pair.n, pair.phi, pair.fingerprint)


def private_key_to_json(pair: AutomorphismPair) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "private",
        "n": pair.n,
        "seed": pair.seed,
        "plan": pair.plan.to_json() if pair.plan else None,
        "fingerprint": pair.fingerprint,
        "phi": polymap_to_json(pair.phi),
        "psi": polymap_to_json(pair.psi),
        "factorization": [
            {"kind": f.kind, "forward": polymap_to_json(f.forward), "inverse": polymap_to_json(f.inverse)}
            for f in pair.factorization
        ],
    }


def private_key_from_json(data: Mapping, *, verify: bool = True) -> AutomorphismPair:
    if data.get("kind") != "private":
        raise KeyFileError("not a private key file")
    phi = polymap_from_json(data["phi"])
    psi = polymap_from_json(data["psi"])
    if fingerprint(phi) != data["fingerprint"]:
        raise KeyFileError("fingerprint does not match φ")
    factors = tuple(
        Factor(f["kind"], polymap_from_json(f["forward"]), polymap_from_json(f["inverse"]))
        for f in data.get("factorization", [])
    )
    ok = check_inverse(phi, psi).ok if verify else True
    if verify and not ok:
        raise KeyFileError("φ and ψ in the key file are not inverse to each other")
    plan = TamePlan.from_json(data["plan"]) if data.get("plan") else None
    return AutomorphismPair(int(data["n"]), phi, psi, factors, ok, data.get("seed"), plan)


def public_key_to_json(key: PublicKey | AutomorphismPair) -> dict:
    if isinstance(key, AutomorphismPair):
        key = PublicKey.from_pair(key)
    return {
        "format": FORMAT_VERSION,
        "kind": "public",
        "n": key.n,
        "fingerprint": key.fingerprint,
        "phi": polymap_to_json(key.phi),
    }


def public_key_from_json(data: Mapping) -> PublicKey:
    if data.get("kind") not in ("public", "private"):
        raise KeyFileError("not a key file")
    phi = polymap_from_json(data["phi"])
    fp = fingerprint(phi)
    if fp != data["fingerprint"]:
        raise KeyFileError("fingerprint does not match φ")
    return PublicKey(int(data["n"]), phi, fp)


def dump_json(data, path: str | Path) -> None:
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def load_json(path: str | Path):
    return json.loads(Path(path).read_text())
