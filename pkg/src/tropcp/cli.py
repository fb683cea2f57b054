"""Command-line surface: instance generation, exact path tracing, experiments.

Exit codes: 0 success, 2 usage, 3 parse failure, 4 infeasible/unbounded
tropical system, 5 numeric failure.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import numlab, pathtrace, troppoly
from .tropical import TropValue
from .troppoly import Empty, Unbounded

EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_NUMERIC = 5


def _fraction(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"not a rational number: {value!r}") from exc


def _load_instance(path: str) -> pathtrace.LWInstance:
    try:
        with open(path) as fh:
            return pathtrace.LWInstance.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        click.echo(f"error: cannot parse instance file {path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _default_seed() -> int:
    return int(os.environ.get("TROPCP_SEED", numlab.SamplerConfig().seed))


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


@click.group()
def main():
    """Tropical central-path laboratory."""


@main.command()
@click.option("--r", "r", type=int, required=True, help="instance size parameter")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def lw(r: int, out: str):
    """Write the size-r instance (Puiseux LP + tropicalization) as JSON."""
    if r < 1:
        raise click.UsageError("--r must be >= 1")
    inst = pathtrace.lw_instance(r)
    with open(out, "w") as fh:
        json.dump(inst.to_json(), fh, indent=1)
    click.echo(f"wrote {out}: {len(inst.plp.A)} constraints, dimension {2 * r}")


def _traced(instance: str, mu_lo: str, mu_hi: str, min_width: str | None):
    inst = _load_instance(instance)
    lo, hi = _fraction(mu_lo), _fraction(mu_hi)
    if not lo < hi:
        raise click.UsageError("--mu-lo must be < --mu-hi")
    width = _fraction(min_width) if min_width else Fraction(1, 2 ** (2 * inst.r + 4))
    try:
        return pathtrace.trace(inst.tropP, inst.tropc, lo, hi, width)
    except (Unbounded, Empty) as exc:
        click.echo(f"error: tropical system infeasible or unbounded: {exc}", err=True)
        sys.exit(EXIT_INFEASIBLE)
    except pathtrace.NondegenerateFailure as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)


@main.command("trop-path")
@click.option("--instance", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mu-lo", default="0", show_default=True)
@click.option("--mu-hi", default="2", show_default=True)
@click.option("--min-width", default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--fig/--no-fig", default=True, show_default=True,
              help="also render the path as a PNG next to the CSV")
def trop_path(instance, mu_lo, mu_hi, min_width, out, fig):
    """Trace the exact tropical path and write one CSV row per segment."""
    path = _traced(instance, mu_lo, mu_hi, min_width)
    with open(out, "w") as fh:
        fh.write(path.to_csv())
    click.echo(f"wrote {out}: {path.num_segments} segments")
    if fig:
        from .figures import render_path_figure

        figfile = _figure_path(out)
        render_path_figure(path, figfile)
        click.echo(f"wrote {figfile}")


@main.command()
@click.option("--instance", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mu-lo", default="0", show_default=True)
@click.option("--mu-hi", default="2", show_default=True)
@click.option("--min-width", default=None)
def pieces(instance, mu_lo, mu_hi, min_width):
    """Print the number of linear pieces of the tropical path."""
    path = _traced(instance, mu_lo, mu_hi, min_width)
    click.echo(str(pathtrace.count_pieces(path)))


@main.command()
@click.option("--j", "j", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
def table(j: int, k: int):
    """Print the three nondifferentiability triples for block j, slot k."""
    try:
        triples = pathtrace.lw_table(j, k)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo("mu,x_odd,x_even")
    for mu, odd, even in triples:
        click.echo(f"{mu},{odd},{even}")


@main.command()
@click.option("--r", "r", type=int, required=True)
@click.option("--mu-exp", default="1", show_default=True)
@click.option("--t-grid", default="10,100,1000", show_default=True,
              help="comma-separated increasing list of t values")
@click.option("--barrier", type=click.Choice(["entropic", "log", "both"]),
              default="both", show_default=True)
@click.option("--seed", type=int, default=None, help="defaults to $TROPCP_SEED")
@click.option("--chains", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--burn-in", type=int, default=None)
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file with sampler/newton settings")
@click.option("--no-rescale", is_flag=True, help="disable variable rescaling")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--fig/--no-fig", default=True, show_default=True)
def converge(r, mu_exp, t_grid, barrier, seed, chains, samples, burn_in,
             config_file, no_rescale, out, fig):
    """Run the log-limit experiment and write the report CSV."""
    if r < 1:
        raise click.UsageError("--r must be >= 1")
    try:
        ts = [float(x) for x in t_grid.split(",") if x.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad --t-grid: {exc}")
    if not ts:
        raise click.UsageError("--t-grid must be nonempty")

    sampler_kw, newton_kw = {}, {}
    if config_file:
        try:
            with open(config_file) as fh:
                cfg_obj = json.load(fh)
            sampler_kw.update(cfg_obj.get("sampler", {}))
            newton_kw.update(cfg_obj.get("newton", {}))
        except (OSError, ValueError) as exc:
            click.echo(f"error: cannot parse config {config_file}: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    sampler_kw["seed"] = seed if seed is not None else sampler_kw.get("seed", _default_seed())
    if chains is not None:
        sampler_kw["chains"] = chains
    if samples is not None:
        sampler_kw["samples_per_chain"] = samples
    if burn_in is not None:
        sampler_kw["burn_in"] = burn_in
    scfg = numlab.SamplerConfig(**sampler_kw)
    ncfg = numlab.NewtonConfig(**newton_kw)

    barriers = ("entropic", "log") if barrier == "both" else (barrier,)
    try:
        report = numlab.converge(r, _fraction(mu_exp), ts, scfg, ncfg,
                                 barriers=barriers, rescale=not no_rescale)
    except (numlab.NoInteriorFound, numlab.ChordDegeneracy,
            numlab.MaxIterations, numlab.LineSearchStall) as exc:
        click.echo(f"error: numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    with open(out, "w") as fh:
        fh.write(report.to_csv())
    click.echo(f"wrote {out} (seed={report.seed})")
    if fig:
        from .figures import render_convergence_figure

        figfile = _figure_path(out)
        render_convergence_figure(report, figfile)
        click.echo(f"wrote {figfile}")


@main.command("sample-check")
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=None, help="defaults to $TROPCP_SEED")
def sample_check(dim, seed):
    """Compare the sampler with the closed-form box oracle; fail beyond 4 SE."""
    if not 1 <= dim <= 6:
        raise click.UsageError("--dim must be between 1 and 6")
    seed = seed if seed is not None else _default_seed()
    worst = numlab.sampler_box_check(dim, seed)
    click.echo(f"max deviation: {worst:.3f} standard errors (seed={seed})")
    if worst > 4.0:
        click.echo("FAIL: sampler deviates from the box oracle", err=True)
        sys.exit(EXIT_NUMERIC)
    click.echo("PASS")


if __name__ == "__main__":
    main()
