"""Resource caps.

Defaults keep every search at desk scale.  ``QUANDLEFORGE_CAP`` overrides them:
either a bare integer (the order cap) or comma-separated ``key=value`` pairs
with keys ``order``, ``gens`` and ``p``, e.g. ``order=6,p=128``.
"""

import os

DEFAULTS = {"order": 5, "gens": 4, "p": 64}


def _overrides() -> dict:
    raw = os.environ.get("QUANDLEFORGE_CAP", "").strip()
    if not raw:
        return {}
    if raw.isdigit():
        return {"order": int(raw)}
    out = {}
    for part in raw.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULTS or not value.strip().isdigit():
            raise ValueError(f"bad QUANDLEFORGE_CAP entry {part!r}")
        out[key] = int(value)
    return out


def cap(key: str) -> int:
    return _overrides().get(key, DEFAULTS[key])


def order_cap() -> int:
    return cap("order")


def gens_cap() -> int:
    return cap("gens")


def p_cap() -> int:
    return cap("p")
