"""Report rendering: delimited tables plus matplotlib figures.

The homology report writes the bigraded dimensions as a TSV and draws them
as a dot chart (Maslov degree against Alexander classes, dot area by
dimension).  The invariance report tabulates the trials and draws the
distribution of final grid sizes split by outcome.  Files land in the
requested directory next to the JSON the CLI prints.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def write_homology_report(dims, flavor: str, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = dims.items_sorted()

    tsv = out / f"homology_{flavor}.tsv"
    with tsv.open("w") as fh:
        fh.write("alexander\tmaslov\tdim\n")
        for (a, m), d in rows:
            fh.write(f"{','.join(map(str, a))}\t{m}\t{d}\n")

    classes = sorted({a for (a, _), _ in rows})
    class_pos = {a: i for i, a in enumerate(classes)}
    fig, ax = plt.subplots(figsize=(6, max(2.5, 0.4 * len(classes) + 1.5)))
    if rows:
        xs = [m for (_, m), _ in rows]
        ys = [class_pos[a] for (a, _), _ in rows]
        sizes = [80 * d for _, d in rows]
        ax.scatter(xs, ys, s=sizes, color="tab:blue", alpha=0.8)
        for (a, m), d in rows:
            ax.annotate(str(d), (m, class_pos[a]), textcoords="offset points",
                        xytext=(6, 4), fontsize=8)
        ax.set_xticks(sorted({m for (_, m), _ in rows}))
    ax.set_yticks(range(len(classes)))
    ax.set_yticklabels([",".join(map(str, a)) for a in classes], fontsize=8)
    ax.set_xlabel("Maslov degree")
    ax.set_ylabel("Alexander class")
    ax.set_title(f"{flavor} homology dimensions (total {dims.total()})")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    png = out / f"homology_{flavor}.png"
    fig.savefig(png, dpi=150)
    plt.close(fig)
    return [tsv, png]


def write_invariance_report(report: dict, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tsv = out / "invariance_trials.tsv"
    with tsv.open("w") as fh:
        fh.write("trial\tok\tfinal_n\tn_moves\tshift\tchi_ok\tmoves\n")
        for r in report["results"]:
            shift = "" if r["shift"] is None else ",".join(map(str, r["shift"]))
            fh.write(
                f"{r['trial']}\t{int(r['ok'])}\t{r['final_n']}\t{len(r['moves'])}"
                f"\t{shift}\t{int(r['chi_ok'])}\t{'; '.join(r['moves'])}\n"
            )

    sizes_pass = [r["final_n"] for r in report["results"] if r["ok"]]
    sizes_fail = [r["final_n"] for r in report["results"] if not r["ok"]]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    all_sizes = sizes_pass + sizes_fail
    if all_sizes:
        bins = [b - 0.5 for b in range(min(all_sizes), max(all_sizes) + 2)]
        ax.hist([sizes_pass, sizes_fail], bins=bins, stacked=True,
                color=["tab:green", "tab:red"], label=["pass", "fail"])
        ax.legend()
    ax.set_xlabel("final grid size")
    ax.set_ylabel("trials")
    ax.set_title(
        f"invariance: {report['passed']}/{report['trials']} passed "
        f"(seed {report['seed']})")
    fig.tight_layout()
    png = out / "invariance_trials.png"
    fig.savefig(png, dpi=150)
    plt.close(fig)
    return [tsv, png]
