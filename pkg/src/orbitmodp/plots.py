"""Figure rendering for the report path.

Every CLI command that writes delimited output also drops a PNG next to
it (unless --no-figures); these helpers hold the actual matplotlib calls.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_DPI = 150


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_census_figure(census, path):
    """Orbit size against p, with the sqrt(p) random-map scale for reference."""
    good = [(rec.p, rec.m) for rec in census.records if not rec.bad]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if good:
        ps, ms = zip(*good)
        ax.scatter(ps, ms, s=4, alpha=0.4, label="m_p")
        xs = sorted(set(ps))
        ax.plot(xs, [math.sqrt(math.pi * x / 2) for x in xs], "r-", lw=1,
                label="sqrt(pi p / 2)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("orbit size mod p")
    ax.set_title(f"{census.map_desc}, start {census.start_desc}, X={census.limit}")
    ax.legend()
    _finish(fig, path)


def save_table_figure(checkpoints, columns, path, title=""):
    """Checkpoint statistic per map; `columns` maps label -> list of values."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, values in columns.items():
        ax.plot(checkpoints, values, marker="o", ms=3, label=label)
    ax.set_xlabel("X")
    ax.set_ylabel("(1/log X) sum log p / m_p^2")
    if title:
        ax.set_title(title)
    ax.legend()
    _finish(fig, path)


def save_density_figure(rows, path):
    """Density masses; rows are (label, mass) pairs."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = [r[0] for r in rows]
    masses = [r[1] for r in rows]
    ax.bar(range(len(rows)), masses)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("weighted density")
    _finish(fig, path)


def save_ssum_figure(rows, lam, path):
    """rows of (s, value, scaled value); log-log profile of both."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ss = [r[0] for r in rows]
    ax.loglog(ss, [r[1] for r in rows], marker="o", ms=3, label="S(s)")
    ax.loglog(ss, [r[2] for r in rows], marker="s", ms=3, label="s^(1/lambda) S(s)")
    ax.set_xlabel("s")
    ax.set_title(f"lambda = {lam}")
    ax.legend()
    _finish(fig, path)


def save_dm_figure(growth, path):
    """log log D(m) against m with its least-squares line."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ms = [m for m, _ in growth.points]
    ys = [y for _, y in growth.points]
    ax.plot(ms, ys, "o", label="log log D(m)")
    if len(ms) >= 2 and not math.isnan(growth.slope):
        mx = sum(ms) / len(ms)
        my = sum(ys) / len(ys)
        ax.plot(ms, [my + growth.slope * (m - mx) for m in ms], "r-",
                label=f"slope {growth.slope:.4f}")
    ax.set_xlabel("m")
    ax.set_ylabel("log log D(m)")
    ax.legend()
    _finish(fig, path)


def save_baseline_figure(sample, path):
    """Histogram of per-trial rho / sqrt(n) when the trials were kept."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if sample.rhos:
        scale = math.sqrt(sample.n)
        ax.hist([r / scale for r in sample.rhos], bins=40, alpha=0.8)
        ax.axvline(sample.mean_rho / scale, color="r", lw=1.5,
                   label=f"mean {sample.mean_rho / scale:.4f}")
        ax.axvline(math.sqrt(math.pi / 2), color="k", ls="--", lw=1,
                   label="sqrt(pi/2)")
        ax.legend()
    ax.set_xlabel("rho / sqrt(n)")
    ax.set_ylabel("trials")
    ax.set_title(f"n={sample.n}, trials={sample.trials}, seed={sample.seed}")
    _finish(fig, path)


def save_compare_figure(result, path):
    """m_p / sqrt(p) ratios against p with the weighted median."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ps = [row.p for row in result.rows]
    ratios = [row.ratio for row in result.rows]
    ax.scatter(ps, ratios, s=4, alpha=0.4)
    if 0.5 in result.quantiles:
        ax.axhline(result.quantiles[0.5], color="r", lw=1,
                   label=f"weighted median {result.quantiles[0.5]:.3f}")
    ax.axhline(result.reference, color="k", ls="--", lw=1, label="sqrt(pi/2)")
    ax.set_xscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("m_p / sqrt(p)")
    ax.legend()
    _finish(fig, path)
