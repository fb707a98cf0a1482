"""Small result containers shared by the verification routines."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


def _plain(x):
    # make nested data JSON friendly
    from .laurent import LaurentPoly
    if isinstance(x, LaurentPoly):
        return x.to_text()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    return repr(x)


@dataclass
class Report:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "details": _plain(self.details)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass
class Certificate:
    holds: bool
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "witness": _plain(self.witness), "details": _plain(self.details)}
