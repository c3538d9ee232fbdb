"""
Wronsk figure scripts

Regenerates the five reference plots from CSVs written by the wronsk CLI:
    plateau.html        tail Wronskians against x, Pöschl–Teller v0 = 2.5, ε = -1
    pt_energy.html      even/odd conditions against ε, Pöschl–Teller v0 = 6
    pt_coupling.html    threshold conditions against v0, Pöschl–Teller family
    gauss_coupling.html threshold conditions against v0, Gaussian family
    gauss_wave.html     Gaussian v0 = 5 wavefunction at ε = -3.6077 and B₃·e^{kx}

Usage:
    python docs/figures/make_figures.py [--out DIR]

The CSVs are kept next to the HTML files so every plot can be rebuilt from
its data file alone.
"""

import argparse
import logging
import os
import sys

import numpy as np
import plotly.graph_objects as go

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", ".."))

from wronsk.cli import main as wronsk_main  # noqa: E402
from wronsk.export import read_metadata, read_table  # noqa: E402

logger = logging.getLogger("wronsk.figures")

PT = ["--builtin", "poschl_teller"]
GAUSS = ["--builtin", "gaussian"]

RUNS = {
    "plateau": ["scan", "--expr=-2.5/cosh(x)^2", "--mode", "x", "--energy=-1", "--range", "0:6"],
    "pt_energy": ["scan", *PT, "--param", "v0=6", "--x-eval", "5", "--emin=-5.2", "--emax=-0.05"],
    "pt_levels": ["oracle", "--param", "v0=6"],
    "pt_coupling": ["scan", *PT, "--param", "v0=1", "--mode", "coupling", "--range", "0.2:10"],
    "gauss_coupling": ["scan", *GAUSS, "--param", "v0=1", "--mode", "coupling", "--range", "0.2:10"],
    "gauss_wave": ["wavefunction", *GAUSS, "--param", "v0=5", "--energy=-3.6077", "--x-eval", "5"],
}


def run_cli(name: str, out_dir: str) -> str:
    path = os.path.join(out_dir, f"{name}.csv")
    code = wronsk_main([*RUNS[name], "--output", path])
    if code != 0:
        raise RuntimeError(f"wronsk {' '.join(RUNS[name])} exited with {code}")
    logger.info("wrote %s", path)
    return path


def _layout(fig: go.Figure, title: str, x_title: str, y_title: str) -> go.Figure:
    fig.update_layout(
        title=title,
        xaxis_title=x_title,
        yaxis_title=y_title,
        template="plotly_white",
        height=450,
        legend=dict(orientation="h", yanchor="bottom", y=1.02),
    )
    return fig


def plateau(out_dir: str) -> go.Figure:
    df = read_table(run_cli("plateau", out_dir))
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df["x"], y=df["w_conv_c"], mode="lines", name="W(R_c, C)"))
    fig.add_trace(go.Scatter(x=df["x"], y=df["w_conv_s"], mode="lines", name="W(R_c, S)"))
    return _layout(fig, "Tail Wronskians, v0 = 2.5, ε = -1", "x", "W")


def energy_scan(out_dir: str) -> go.Figure:
    df = read_table(run_cli("pt_energy", out_dir))
    levels = read_table(run_cli("pt_levels", out_dir))
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df["energy"], y=df["even"], mode="lines", name="even"))
    fig.add_trace(go.Scatter(x=df["energy"], y=df["odd"], mode="lines", name="odd"))
    fig.add_trace(go.Scatter(
        x=levels["energy"], y=np.zeros(len(levels)),
        mode="markers", marker=dict(symbol="square", size=9), name="exact",
    ))
    fig.update_yaxes(range=[-3, 3])
    return _layout(fig, "Pöschl–Teller v0 = 6: conditions against ε", "ε", "W")


def coupling_scan(name: str, title: str, out_dir: str) -> go.Figure:
    df = read_table(run_cli(name, out_dir))
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df["v0"], y=df["even"], mode="lines", name="even"))
    fig.add_trace(go.Scatter(x=df["v0"], y=df["odd"], mode="lines", name="odd"))
    return _layout(fig, title, "v0", "W at ε = 0")


def gaussian_wavefunction(out_dir: str) -> go.Figure:
    path = run_cli("gauss_wave", out_dir)
    df = read_table(path)
    with open(path, encoding="utf-8") as fh:
        meta = read_metadata(fh.read())
    cut = float(meta["truncation_x"])
    beyond = df[df["x"] >= cut]
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df["x"], y=df["phi"].abs(), mode="lines", name="|φ|"))
    fig.add_trace(go.Scatter(
        x=beyond["x"][::25], y=beyond["divergent_tail"][::25].abs(),
        mode="markers", name=f"B₃ e^(kx), B₃ = {float(meta['B_div']):.4g}",
    ))
    fig.add_vline(x=cut, line_dash="dash", annotation_text="truncation")
    fig.update_yaxes(type="log")
    return _layout(fig, "Gaussian v0 = 5, ε = -3.6077", "x", "|φ|")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Rebuild the wronsk reference figures.")
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "out"))
    args = parser.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)

    figures = {
        "plateau": plateau(args.out),
        "pt_energy": energy_scan(args.out),
        "pt_coupling": coupling_scan("pt_coupling", "Pöschl–Teller family at threshold", args.out),
        "gauss_coupling": coupling_scan("gauss_coupling", "Gaussian family at threshold", args.out),
        "gauss_wave": gaussian_wavefunction(args.out),
    }
    for name, fig in figures.items():
        target = os.path.join(args.out, f"{name}.html")
        fig.write_html(target)
        logger.info("wrote %s", target)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
