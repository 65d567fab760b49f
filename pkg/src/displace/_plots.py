"""Figure rendering for the CLI report paths (optional, file output only)."""


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


_TAG_STYLE = {
    "realizable": dict(color="tab:red", marker="o", s=22, zorder=3),
    "prefix-only": dict(color="0.55", marker="o", s=14, zorder=2),
    "outside": dict(color="0.85", marker=".", s=6, zorder=1),
}


def plot_lattice(rows, path, projected):
    """Scatter of tagged integer points (rows of dicts from the lattice command)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    xkey, ykey = ("u", "v") if projected else ("y1", "y2")
    for tag, style in _TAG_STYLE.items():
        xs = [r[xkey] for r in rows if r["tag"] == tag]
        ys = [r[ykey] for r in rows if r["tag"] == tag]
        if xs:
            ax.scatter(xs, ys, label=tag, **style)
    ax.set_xlabel("first coordinate" if not projected else "first prefix sum")
    ax.set_ylabel("second coordinate" if not projected else "second prefix sum")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("integer points: envelope vs realizable lattice")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_envelope(rows, path):
    """Boost and suppress cutoff envelopes across displacement levels."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    lv = [r["level"] for r in rows if r["boost_b_max"] is not None]
    bmax = [r["boost_b_max"] for r in rows if r["boost_b_max"] is not None]
    ax.plot(lv, bmax, "o-", color="tab:blue", label="largest boost-feasible cutoff")
    lv = [r["level"] for r in rows if r["suppress_b_min"] is not None]
    bmin = [r["suppress_b_min"] for r in rows if r["suppress_b_min"] is not None]
    ax.plot(lv, bmin, "s-", color="tab:orange", label="smallest suppress-feasible cutoff")
    ax.set_xlabel("displacement level")
    ax.set_ylabel("cutoff")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("feasibility envelopes")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bench(rows, path):
    """Runtime vs candidate count, one curve per coalition size (log-log)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    sizes = sorted({r["m"] for r in rows})
    for m in sizes:
        xs = [r["x"] for r in rows if r["m"] == m]
        ys = [r["milliseconds"] for r in rows if r["m"] == m]
        ax.plot(xs, ys, "o-", label=f"m={m}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("candidates")
    ax.set_ylabel("milliseconds")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("solver runtime scaling")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_baseline(rows, path):
    """Displacement and runtime of the exact solver vs the greedy baseline."""
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ms = sorted({r["m"] for r in rows})

    def series(key):
        return [
            sum(r[key] for r in rows if r["m"] == m) / max(1, sum(1 for r in rows if r["m"] == m))
            for m in ms
        ]

    ax1.plot(ms, series("k_star_oracle"), "o-", label="exact solver")
    ax1.plot(ms, series("k_greedy"), "s-", label="greedy baseline")
    ax1.set_xlabel("coalition size")
    ax1.set_ylabel("winners displaced")
    ax1.legend(fontsize=8)
    ax2.plot(ms, series("ms_oracle"), "o-", label="exact solver")
    ax2.plot(ms, series("ms_greedy"), "s-", label="greedy baseline")
    ax2.set_yscale("log")
    ax2.set_xlabel("coalition size")
    ax2.set_ylabel("milliseconds")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
