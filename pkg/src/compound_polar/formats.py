"""CSV/JSON writers and the matching readers used by the command line."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .bounds import BoundRow
from .codec import PolarCode
from .trees import TreeProfile


def num(x):
    return f"{x:.15g}"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, default=_encode) + "\n"


def _encode(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _round15(v):
    # JSON keeps the same 15 significant digits as the CSV output
    return float(num(v)) if isinstance(v, float) else v


PROFILE_FIELDS = ("index", "sigma", "capacity", "bhattacharyya")
BOUND_FIELDS = ("n", "upper", "lower", "upper_slack", "lower_slack")
SIM_FIELDS = ("channel", "N", "rate", "trials", "block_errors", "seed")


# ------------------------------------------------------------------ profiles

def profile_csv(profile):
    return _csv(PROFILE_FIELDS, profile.records())


def profile_json(profile):
    return _json([dict(zip(PROFILE_FIELDS, map(_round15, r))) for r in profile.records()])


def read_profile(text):
    """Parse profile CSV or JSON back into a :class:`TreeProfile`."""
    text = text.strip()
    if text.startswith("["):
        recs = json.loads(text)
    else:
        recs = list(csv.DictReader(io.StringIO(text)))
    recs.sort(key=lambda r: int(r["index"]))
    n = len(str(recs[0]["sigma"])) if recs else 0
    cap = np.array([float(r["capacity"]) for r in recs])
    z = np.array([float(r["bhattacharyya"]) for r in recs])
    return TreeProfile(n, cap, z)


# -------------------------------------------------------------------- bounds

def bounds_csv(rows):
    return _csv(BOUND_FIELDS, [(r.n, r.upper, r.lower, r.upper_slack, r.lower_slack) for r in rows])


def bounds_json(rows):
    return _json([{k: _round15(v) for k, v in r.as_dict().items()} for r in rows])


def read_bounds(text):
    text = text.strip()
    recs = json.loads(text) if text.startswith("[") else list(csv.DictReader(io.StringIO(text)))
    return [
        BoundRow(int(r["n"]), float(r["upper"]), float(r["lower"]),
                 float(r["upper_slack"]), float(r["lower_slack"]))
        for r in recs
    ]


# --------------------------------------------------------------------- codes

def code_json(code):
    return _json({
        "n": code.n,
        "indices": list(code.info),
        "rate": _round15(code.rate),
        "union_bound": None if code.union_bound is None else _round15(code.union_bound),
    })


def read_code(text):
    obj = json.loads(text)
    return PolarCode(int(obj["n"]), tuple(obj["indices"]), obj.get("union_bound"))


# ---------------------------------------------------------------- simulation

def sim_csv(reports):
    return _csv(SIM_FIELDS, [tuple(r.as_row()[k] for k in SIM_FIELDS) for r in reports])


def sim_json(reports):
    return _json([{k: _round15(v) for k, v in r.as_row().items()} for r in reports])


def read_sim(text):
    text = text.strip()
    recs = json.loads(text) if text.startswith("[") else list(csv.DictReader(io.StringIO(text)))
    out = []
    for r in recs:
        out.append({
            "channel": str(r["channel"]),
            "N": int(r["N"]),
            "rate": float(r["rate"]),
            "trials": int(r["trials"]),
            "block_errors": int(r["block_errors"]),
            "seed": int(r["seed"]),
        })
    return out


# ------------------------------------------------------------------ generic

def records_csv(header, rows):
    return _csv(header, rows)


def records_json(obj):
    if isinstance(obj, dict):
        obj = {k: _round15(v) for k, v in obj.items()}
    return _json(obj)


def read_records(text):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    return list(csv.DictReader(io.StringIO(text)))
