"""Figures rendered from result tables (matplotlib, non-interactive backend).

SVG output is made reproducible by fixing the element-id salt and dropping
the creation date.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "casimir-array"
plt.rcParams["svg.fonttype"] = "path"

_METADATA = {
    "svg": {"Date": None, "Creator": None},
    "png": {"Software": None},
}


def save(fig, path: Path):
    path = Path(path)
    fmt = path.suffix.lstrip(".")
    fig.savefig(path, format=fmt, metadata=_METADATA.get(fmt), bbox_inches="tight")
    plt.close(fig)
    return path


def _grouped(table, key_cols, x_col, y_col):
    names = [c.name for c in table.columns]
    ki = [names.index(k) for k in key_cols]
    xi, yi = names.index(x_col), names.index(y_col)
    groups = defaultdict(lambda: ([], []))
    for row in table.rows:
        key = tuple(row[i] for i in ki)
        groups[key][0].append(row[xi])
        groups[key][1].append(row[yi])
    return groups


def plot_lobes(table, path):
    """Polar plot of rate versus polar angle, one panel per polarization."""
    fig, axes = plt.subplots(1, 2, subplot_kw={"projection": "polar"}, figsize=(9, 4.5))
    groups = _grouped(table, ["polarization", "kick"], "theta", "rate")
    kicks = sorted({abs(k[1]) for k in groups})
    colors = {k: plt.cm.viridis(i / max(1, len(kicks) - 1)) for i, k in enumerate(kicks)}
    for ax, pol in zip(axes, ("TE", "TM")):
        ax.set_theta_zero_location("N")
        ax.set_theta_direction(-1)
        ax.set_thetamin(-90)
        ax.set_thetamax(90)
        for (p, kick), (th, r) in sorted(groups.items()):
            if p != pol:
                continue
            ls = "--" if kick < 0 else "-"
            ax.plot(th, r, ls, color=colors[abs(kick)], lw=1,
                    label=f"{kick:+.1f}" if kick >= 0 else None)
        ax.set_title(pol)
    axes[1].legend(title="c beta / Omega", fontsize=7, loc="lower left", bbox_to_anchor=(1.0, 0.0))
    return save(fig, path)


def plot_density_maps(table, path):
    """Grid of polar density maps: rows are photon roles, columns kicks."""
    names = [c.name for c in table.columns]
    idx = {n: names.index(n) for n in ("role", "kick", "theta", "phi", "f_TE", "f_TM")}
    data = defaultdict(list)
    for row in table.rows:
        data[(row[idx["role"]], row[idx["kick"]])].append(row)
    roles = sorted({k[0] for k in data})
    kicks = sorted({k[1] for k in data})
    fig, axes = plt.subplots(len(roles), len(kicks), subplot_kw={"projection": "polar"},
                             figsize=(1.6 * len(kicks), 1.8 * len(roles)), squeeze=False)
    for i, role in enumerate(roles):
        for j, kick in enumerate(kicks):
            ax = axes[i, j]
            rows = data.get((role, kick), [])
            ax.set_xticks([])
            ax.set_yticks([])
            if not rows:
                continue
            arr = np.array([[r[idx["theta"]], r[idx["phi"]],
                             r[idx["f_TE"]] + r[idx["f_TM"]]] for r in rows])
            th = np.unique(arr[:, 0])
            ph = np.unique(arr[:, 1])
            z = arr[:, 2].reshape(len(th), len(ph))
            ax.pcolormesh(ph, np.sin(th), z, shading="auto", cmap="magma")
            if i == 0:
                ax.set_title(f"{kick:.1f}", fontsize=7)
        axes[i, 0].set_ylabel(role, fontsize=8)
    return save(fig, path)


def plot_spectra(table, path):
    """Spectral rate versus frequency for each kick, TE and TM panels."""
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, pol in zip(axes, ("TE", "TM")):
        groups = _grouped(table, ["kick"], "omega", pol)
        for (kick,), (x, y) in sorted(groups.items()):
            ax.plot(x, y, lw=1, label=f"{kick:.2f}")
        ax.set_xlabel("omega / Omega")
        ax.set_title(pol)
    axes[0].set_ylabel("dGamma/domega [Gamma0/Omega]")
    axes[1].legend(title="c beta / Omega", fontsize=7)
    return save(fig, path)


def plot_totals(table, path):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    names = [c.name for c in table.columns]
    x = table.column("kick")
    for col, style in (("TE", "-"), ("TM", "-"), ("R", "--"), ("total", "-")):
        if col in names:
            ax.plot(x, table.column(col), style, label=col if col != "R" else "R/L")
    ax.set_xlabel("c beta / Omega")
    ax.set_ylabel("Gamma [Gamma0]")
    ax.legend()
    return save(fig, path)


def plot_angular_momentum(table, path):
    """Heat map of the angular-momentum spectrum over frequency and ``m``."""
    names = [c.name for c in table.columns]
    iu, im, iv = names.index("omega"), names.index("m"), names.index("f")
    us = sorted({r[iu] for r in table.rows})
    ms = sorted({r[im] for r in table.rows})
    grid = np.zeros((len(ms), len(us)))
    for r in table.rows:
        grid[ms.index(r[im]), us.index(r[iu])] = r[iv]
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(us, ms, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="f")
    ax.set_xlabel("omega / Omega")
    ax.set_ylabel("m")
    return save(fig, path)


def plot_estimates(table, path):
    fig, ax = plt.subplots(figsize=(5, 3))
    names = table.column("scenario")
    ax.barh(names, table.column("log10_rate"))
    ax.set_xlabel("log10 rate [1/s]")
    fig.tight_layout()
    return save(fig, path)
