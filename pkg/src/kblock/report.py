"""CSV table and bar chart for a bounded search over k."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .transition import Verdict  # noqa: E402

FIELDS = ["k", "answer", "candidates_examined", "witness_states", "witness_transitions"]


def search_rows(results: list[tuple[int, Verdict]]) -> list[dict]:
    rows = []
    for k, v in results:
        w = v.witness
        rows.append({
            "k": k,
            "answer": "yes" if v.answer else "no",
            "candidates_examined": v.candidates_examined,
            "witness_states": len(w.states) if w else "",
            "witness_transitions": len(w.transitions) if w else "",
        })
    return rows


def write_search_report(results: list[tuple[int, Verdict]], directory: str | Path, title: str = "") -> tuple[Path, Path]:
    """Write ``search_k.csv`` and ``search_k.png`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    rows = search_rows(results)
    table = out / "search_k.csv"
    with table.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        writer.writerows(rows)

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ks = [r["k"] for r in rows]
    counts = [r["candidates_examined"] for r in rows]
    colors = ["tab:green" if r["answer"] == "yes" else "tab:red" for r in rows]
    ax.bar(ks, counts, color=colors)
    ax.set_xticks(ks)
    ax.set_xlabel("k")
    ax.set_ylabel("candidates examined")
    ax.set_title(title or "k-block determinism search")
    for x, y, r in zip(ks, counts, rows):
        ax.annotate(r["answer"], (x, y), ha="center", va="bottom", fontsize=9)
    fig.tight_layout()
    figure = out / "search_k.png"
    fig.savefig(figure, dpi=120)
    plt.close(fig)
    return table, figure
