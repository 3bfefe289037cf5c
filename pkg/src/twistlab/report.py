"""JSON-lines reports and the figures that go with them."""
from __future__ import annotations

from collections import Counter, defaultdict
import json
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (set, tuple)):
        return list(o)
    return str(o)


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, default=_default, separators=(", ", ": "))


def write_jsonl(records, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(dumps(r) + "\n")
    return path


def _ord2_values(records):
    """(claim family, ord2) pairs from records whose measurement is an ord2."""
    out = defaultdict(list)
    for r in records:
        m = r.get("measured")
        if r.get("family") in ("ii", "bsd", "bw") and isinstance(m, int):
            out[r["family"]].append(m)
        elif r.get("family") == "s0" and isinstance(m, dict) and isinstance(m.get("ord2"), int):
            out["s0"].append(m["ord2"])
    return out


def figure_ord2_histograms(records, outdir: Path) -> list[Path]:
    paths = []
    for fam, vals in sorted(_ord2_values(records).items()):
        if not vals:
            continue
        c = Counter(vals)
        xs = sorted(c)
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.bar(xs, [c[x] for x in xs], color="#4c72b0")
        ax.set_xlabel("ord_2 L^alg(A^(M), 1)")
        ax.set_ylabel("instances")
        ax.set_title(f"{fam}: 2-adic valuations ({len(vals)} nonzero values)")
        ax.set_xticks(xs)
        p = outdir / f"ord2_{fam}.png"
        fig.tight_layout()
        fig.savefig(p, dpi=110)
        plt.close(fig)
        paths.append(p)
    return paths


def figure_pass_fail(records, outdir: Path) -> Path | None:
    if not records:
        return None
    counts = defaultdict(lambda: [0, 0])
    for r in records:
        counts[r.get("family", "?")][0 if r.get("pass") else 1] += 1
    fams = sorted(counts)
    fig, ax = plt.subplots(figsize=(max(4, 1.1 * len(fams)), 3.2))
    ok = [counts[f][0] for f in fams]
    bad = [counts[f][1] for f in fams]
    ax.bar(fams, ok, color="#55a868", label="pass")
    ax.bar(fams, bad, bottom=ok, color="#c44e52", label="fail")
    ax.set_ylabel("checks")
    ax.legend()
    fig.tight_layout()
    p = outdir / "pass_fail.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    return p


def figure_waldspurger(records, outdir: Path) -> Path | None:
    pts = []
    for r in records:
        if r.get("family") == "waldspurger" and r.get("claim", "").startswith("y_d^2"):
            try:
                pts.append((float(r["measured"]), float(eval_fraction(r["expected"]))))
            except (TypeError, ValueError):
                continue
    if not pts:
        return None
    fig, ax = plt.subplots(figsize=(4, 4))
    xs, ys = zip(*pts)
    ax.scatter(ys, xs, s=14)
    top = max(max(xs), max(ys), 1)
    ax.plot([0, top], [0, top], lw=0.8, color="gray")
    ax.set_xlabel("2^(2+delta) L^alg L^alg")
    ax.set_ylabel("y_d^2 (quaternion sum)")
    fig.tight_layout()
    p = outdir / "waldspurger_identity.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    return p


def eval_fraction(s) -> float:
    from fractions import Fraction
    return float(Fraction(str(s)))


def write_report(records, report_path, stem: str = "report") -> dict:
    """Write <report_path>/<stem>.jsonl and the figures; returns the paths."""
    outdir = Path(report_path)
    outdir.mkdir(parents=True, exist_ok=True)
    records = list(records)
    out = {"jsonl": str(write_jsonl(records, outdir / f"{stem}.jsonl"))}
    figs = figure_ord2_histograms(records, outdir)
    for f in (figure_pass_fail(records, outdir), figure_waldspurger(records, outdir)):
        if f is not None:
            figs.append(f)
    out["figures"] = [os.fspath(f) for f in figs]
    return out
