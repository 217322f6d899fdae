"""Figure rendering for experiment results.

Each renderer takes the records of one experiment run and writes PNG
files into a directory, returning the paths it wrote.  Rendering is
file-only (Agg backend), so it works headless.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _series(records: list[dict], group_keys: tuple[str, ...], x_key: str):
    """Split records into {group label: (xs, records)} sorted by x."""
    groups: dict[tuple, list[dict]] = {}
    for rec in records:
        groups.setdefault(tuple(rec[k] for k in group_keys), []).append(rec)
    out = {}
    for key, recs in sorted(groups.items(), key=lambda kv: str(kv[0])):
        recs.sort(key=lambda r: r[x_key])
        label = ", ".join(f"{k}={v}" for k, v in zip(group_keys, key))
        out[label] = recs
    return out


def _save(fig, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _prob_axes(ax, records, group_keys, x_key, y_key):
    for label, recs in _series(records, group_keys, x_key).items():
        xs = [r[x_key] for r in recs]
        ys = [r[y_key] for r in recs]
        errs = [r.get("ci", 0.0) for r in recs]
        ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=3, label=label)
    ax.set_xlabel(x_key)
    ax.set_ylabel(y_key)
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)


def plot_solution_existence(records: list[dict], out_dir: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _prob_axes(ax, records, ("m", "q", "k"), "n", "success_prob")
    ax.set_title("Recode success probability")
    paths = [_save(fig, out_dir, "solution_existence_success.png")]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    hits = [r for r in records if r["mean_attempts"] is not None]
    for label, recs in _series(hits, ("m", "q", "k"), "n").items():
        ax.plot(
            [r["n"] for r in recs],
            [r["mean_attempts"] for r in recs],
            marker="o",
            label=label,
        )
    ax.set_xlabel("n")
    ax.set_ylabel("mean attempts (successful recodes)")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("Search cost")
    paths.append(_save(fig, out_dir, "solution_existence_attempts.png"))
    return paths


def plot_full_rank(records: list[dict], out_dir: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _prob_axes(ax, records, ("n", "m", "q"), "overhead", "full_rank_prob")
    ax.set_title("Full-rank probability vs. overhead")
    return [_save(fig, out_dir, "full_rank.png")]


def plot_header_table(records: list[dict], out_dir: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme in ("ssac_bits", "rlnc_bits", "ecc_bits"):
        for label, recs in _series(records, ("m", "q"), "n").items():
            ax.plot(
                [r["n"] for r in recs],
                [r[scheme] for r in recs],
                marker="o",
                label=f"{scheme.removesuffix('_bits')}, {label}",
            )
    ax.set_xlabel("n")
    ax.set_ylabel("header bits")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    ax.set_title("Header length by scheme")
    return [_save(fig, out_dir, "header_table.png")]


def plot_line_network(records: list[dict], out_dir: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _prob_axes(ax, records, ("n", "m", "q", "depth"), "overhead", "decode_prob")
    ax.set_title("End-to-end decode probability")
    return [_save(fig, out_dir, "line_network.png")]


RENDERERS = {
    "solution-existence": plot_solution_existence,
    "full-rank": plot_full_rank,
    "header-table": plot_header_table,
    "line-network": plot_line_network,
}


def render(kind: str, records: list[dict], out_dir: str) -> list[str]:
    """Render the figures for one experiment kind; returns written paths."""
    return RENDERERS[kind](records, out_dir)
