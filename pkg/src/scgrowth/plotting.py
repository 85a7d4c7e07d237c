"""Figures for ball data and separation runs (files only, Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cayley import GroupBall, growth_estimates  # noqa: E402
from .report import inline  # noqa: E402
from .spectra import SpectralEnclosure  # noqa: E402


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_ball(ball: GroupBall, path: str | Path, v: SpectralEnclosure | None = None) -> Path:
    """Sphere sizes on a log scale, next to the root and ratio estimates."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.6))
    n = list(range(ball.radius + 1))
    left.semilogy(n, ball.sphere_counts, "o-", label="#S(n)")
    left.semilogy(n, ball.ball_counts, "s--", label="#B(n)")
    left.set_xlabel("n")
    left.set_ylabel("count")
    left.legend()
    if ball.radius >= 2:
        est = growth_estimates(ball)
        right.plot(range(1, ball.radius + 1), est.root_sequence, "o-", label="#B(n)^(1/n)")
        right.plot(range(1, ball.radius), [float(r) for r in est.ratio_sequence], "s-", label="#S(n+1)/#S(n)")
    if v is not None:
        right.axhline(float(v.mid), color="k", lw=0.8, ls=":", label="v(M)")
    right.set_xlabel("n")
    right.legend()
    fig.suptitle(inline(ball.presentation), fontsize=9)
    return _save(fig, path)


def plot_balls(counts: Mapping[str, Sequence[int]], path: str | Path, title: str = "") -> Path:
    """Ball counts of several groups, divided by the first group's counts."""
    fig, ax = plt.subplots(figsize=(6, 3.6))
    names = list(counts)
    base = counts[names[0]]
    for name in names:
        ax.plot(range(len(counts[name])), [x / b for x, b in zip(counts[name], base)], "o-", label=name)
    ax.set_xlabel("n")
    ax.set_ylabel(f"#B(n) / #B(n) of {names[0]}")
    ax.legend()
    if title:
        ax.set_title(title, fontsize=9)
    return _save(fig, path)
