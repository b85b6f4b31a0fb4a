"""Report emission: versioned JSON schema, delimited tables, and figures.

Reports carry only exact values (integers, [numerator, denominator] pairs,
cyclotomic coordinate vectors).  Figures are a rendering convenience on top
of the report path and may use floating point freely; they never feed back
into any verification.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "config", "checks", "results"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "results": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "description", "ok"],
                "properties": {
                    "id": {"type": "string"},
                    "description": {"type": "string"},
                    "ok": {"type": "boolean"},
                },
            },
        },
        "elapsed_seconds": {"type": "number"},
    },
}


def make_report(command: str, config: dict, results: dict, checks: list[dict]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "checks": checks,
    }


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, REPORT_SCHEMA)


def write_report(report: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_csv(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not rows:
        path.write_text("")
        return path
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return path


# --- figures ---------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def cyc_to_complex(value_json: dict) -> complex:
    """Numeric embedding of a cyclotomic value at the first primitive root."""
    p = value_json["p"]
    num, den = value_json["scalar"]
    s = num / den
    return sum(
        s * c * complex(math.cos(2 * math.pi * k / p), math.sin(2 * math.pi * k / p))
        for k, c in enumerate(value_json["coords"])
    )


def trace_magnitude_figure(trace_rows: list[dict], path: str | Path) -> Path:
    """Heatmap of |trace| over (character, class group)."""
    plt = _pyplot()
    chars = sorted({(r["char_a"], r["char_b"]) for r in trace_rows})
    groups = sorted({r["class_group"] for r in trace_rows})
    cidx = {c: i for i, c in enumerate(chars)}
    gidx = {g: i for i, g in enumerate(groups)}
    grid = [[0.0] * len(groups) for _ in chars]
    for r in trace_rows:
        grid[cidx[(r["char_a"], r["char_b"])]][gidx[r["class_group"]]] = abs(
            cyc_to_complex(r["value"])
        )
    fig, ax = plt.subplots(figsize=(10, 6))
    im = ax.imshow(grid, aspect="auto", interpolation="nearest", cmap="viridis")
    ax.set_xlabel("class group")
    ax.set_ylabel("character (a, b) index")
    ax.set_title("trace magnitude")
    fig.colorbar(im, ax=ax)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def chain_growth_figure(certs: list[dict], path: str | Path) -> Path:
    """Chain lengths across the certified elements of one sweep."""
    plt = _pyplot()
    lengths = [len(c["chain"]) for c in certs]
    starts = [len(c["chain"][0]) for c in certs]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(range(len(lengths)), lengths, marker="o", lw=1, label="chain length")
    ax.plot(range(len(starts)), starts, marker=".", lw=1, label="inversion set size")
    ax.set_xlabel("element index")
    ax.set_ylabel("count")
    ax.set_title("filtration chains")
    ax.legend()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def orbit_size_figure(sizes: list[int], path: str | Path) -> Path:
    plt = _pyplot()
    from collections import Counter

    hist = Counter(sizes)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([str(k) for k in sorted(hist)], [hist[k] for k in sorted(hist)])
    ax.set_xlabel("orbit size")
    ax.set_ylabel("characters")
    ax.set_title("coadjoint orbit sizes")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def maximality_figure(per_char: list[dict], path: str | Path) -> Path:
    plt = _pyplot()
    from collections import Counter

    kinds = Counter((c["s_coh"], c["dim"]) for c in per_char)
    labels = [f"s={s}, dim={d}" for s, d in sorted(kinds)]
    counts = [kinds[k] for k in sorted(kinds)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, counts)
    ax.set_ylabel("characters")
    ax.set_title("weight-space degrees and dimensions")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
