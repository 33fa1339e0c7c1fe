"""Command-line interface: generate, render, analyze, gcode."""

from __future__ import annotations

import multiprocessing
import os
import sys

import click

from .analysis import compute_accuracy, compute_statistics
from .backpressure import FlowModel
from .beading import SCHEME_NAMES
from .errors import BeadpathError
from .gcode import save_gcode
from .layerio import (load_layer, load_toolpaths, save_report, save_toolpaths)
from .pipeline import GenerateParams, generate_toolpaths
from .svgrender import save_svg


@click.group()
def main():
    """Adaptive-width contour-parallel toolpath generation."""


def _scheme_options(f):
    for opt in reversed([
        click.option("--scheme", default="inward",
                     type=click.Choice(sorted(SCHEME_NAMES)),
                     show_default=True, help="Beading scheme."),
        click.option("--w-star", default=0.4, show_default=True,
                     help="Preferred bead width (mm)."),
        click.option("--alpha-max", default=135.0, show_default=True,
                     help="Limit bisector angle (degrees)."),
        click.option("--d-discretization", default=0.2, show_default=True,
                     help="Max discretized edge piece length (mm)."),
        click.option("--n", "n_weight", default=2.0, show_default=True,
                     help="Inward-distribution bead-count weight N."),
        click.option("--c", default=4, show_default=True,
                     help="Bead count for the constant scheme."),
        click.option("--shell", type=int, default=None,
                     help="Max bead count M for the shell meta-scheme."),
        click.option("--widening", nargs=2, type=float, default=None,
                     metavar="W_MIN R_MIN",
                     help="Widening meta-scheme: min width, min radius (mm)."),
        click.option("--retreat", type=float, default=None,
                     help="Retreat ratio for 3-way intersection ends."),
    ]):
        f = opt(f)
    return f


def _generate_one(args):
    in_path, out_path, params = args
    outline, config = load_layer(in_path)
    overrides = {k: v for k, v in config.items() if k in params.__dict__}
    p = GenerateParams(**{**params.__dict__, **overrides})
    if outline.is_empty():
        save_toolpaths([], out_path)
        return out_path
    save_toolpaths(generate_toolpaths(outline, p.scheme, p), out_path)
    return out_path


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("-o", "--output", required=True,
              help="Output toolpath file, or directory for multiple inputs.")
@_scheme_options
@click.option("--jobs", default=1, show_default=True,
              help="Parallel workers for multiple input files.")
def generate(inputs, output, scheme, w_star, alpha_max, d_discretization,
             n_weight, c, shell, widening, retreat, jobs):
    """Convert layer outline file(s) to toolpath file(s)."""
    params = GenerateParams(scheme=scheme, w_star=w_star, alpha_max=alpha_max,
                            d_discretization=d_discretization, c=c,
                            n_weight=n_weight, widening=widening, shell=shell,
                            retreat=retreat)
    if len(inputs) == 1 and not os.path.isdir(output):
        tasks = [(inputs[0], output, params)]
    else:
        os.makedirs(output, exist_ok=True)
        tasks = [(p, os.path.join(
            output, os.path.splitext(os.path.basename(p))[0] + ".toolpath.json"),
            params) for p in inputs]
    try:
        if jobs > 1 and len(tasks) > 1:
            with multiprocessing.Pool(jobs) as pool:
                for path in pool.imap(_generate_one, tasks):
                    click.echo(path)
        else:
            for t in tasks:
                click.echo(_generate_one(t))
    except BeadpathError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("toolpaths", type=click.Path(exists=True))
@click.option("--layer", type=click.Path(exists=True), default=None,
              help="Layer file drawn as outline (and used for the overlay).")
@click.option("-o", "--output", required=True, help="Output SVG path.")
@click.option("--w-star", default=0.4, show_default=True)
@click.option("--overlay", is_flag=True,
              help="Add overfill/underfill overlay layers (needs --layer).")
def render(toolpaths, layer, output, w_star, overlay):
    """Render a toolpath file as SVG."""
    lines = load_toolpaths(toolpaths)
    outline = None
    report = None
    if layer:
        outline, _ = load_layer(layer)
        if overlay:
            report = compute_accuracy(lines, outline)
    elif overlay:
        raise click.ClickException("--overlay requires --layer")
    save_svg(lines, output, outline=outline, w_star=w_star, report=report)
    click.echo(output)


@main.command()
@click.argument("toolpaths", type=click.Path(exists=True))
@click.argument("layer", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, help="Output report JSON path.")
def analyze(toolpaths, layer, output):
    """Measure overfill/underfill and toolpath statistics."""
    lines = load_toolpaths(toolpaths)
    outline, _ = load_layer(layer)
    report = compute_accuracy(lines, outline)
    stats = compute_statistics(lines)
    save_report(report, stats, output)
    click.echo(output)


@main.command()
@click.argument("toolpaths", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, help="Output G-code path.")
@click.option("--k", default=1.1, show_default=True,
              help="Back-pressure coefficient.")
@click.option("--v0", default=30.0, show_default=True,
              help="Reference speed (mm/s).")
@click.option("--w0", default=0.4, show_default=True,
              help="Reference width (mm).")
@click.option("--layer-height", default=0.1, show_default=True)
@click.option("--flow-factor", default=0.9, show_default=True)
@click.option("--clamp-min-flow", is_flag=True,
              help="Clamp to 5% of reference flow instead of erroring.")
@click.option("--start", nargs=2, type=float, default=(0.0, 0.0),
              show_default=True, help="Initial nozzle position (mm).")
def gcode(toolpaths, output, k, v0, w0, layer_height, flow_factor,
          clamp_min_flow, start):
    """Emit back-pressure compensated G-code for a toolpath file."""
    lines = load_toolpaths(toolpaths)
    model = FlowModel(v0=v0, w0=w0, h=layer_height, k=k,
                      flow_factor=flow_factor, clamp_min_flow=clamp_min_flow)
    try:
        save_gcode(lines, output, model, start)
    except BeadpathError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(output)


if __name__ == "__main__":
    sys.exit(main())
