"""Command-line interface for latticefactor.

Exit codes: 0 for success or a true verdict, 1 for a checked-false verdict,
2 for malformed input or a failed precondition.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from pydantic import ValidationError

from .config import Config, EngineConfig, SweepConfig, load_config
from .errors import LatticeFactorError
from .families import create_family, get_available_families
from .graph_forest import (
    bond_lattice,
    chromatic_polynomial,
    edge_partition,
    if_sweep,
    natural_order,
    peo_sweep,
    verify_chromatic_iff_peo,
    verify_if_factorization,
)
from .multichain import (
    converse_stanley_check,
    find_left_modular_chain,
    stanley_factorization,
    theorem_equivalence_report,
)
from .poset import characteristic_polynomial, is_geometric, mobius_vector, nonnegative_integer_factorization
from .quotient import verify_chi_preservation
from .transversal import MODES, factor_characteristic
from .utils.serialization import (
    PosetDocument,
    dump_report,
    load_atom_partition,
    load_element_partition,
    load_graph,
    load_multichain,
    load_poset,
    parse_ordering,
)

logger = logging.getLogger(__name__)


class ReportGroup(click.Group):
    """Maps library errors to exit code 2 with a one-line diagnostic."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except LatticeFactorError as e:
            logger.debug("command failed", exc_info=True)
            click.echo(f"error: {e}", err=True)
            ctx.exit(2)


def _config(ctx: click.Context) -> Config:
    return ctx.find_root().obj


def _emit(ctx: click.Context, data: Dict[str, Any], lines: List[str]) -> None:
    output = _config(ctx).output
    if output.json_output:
        click.echo(dump_report(data, indent=output.indent, sort_keys=output.sort_keys))
    else:
        for line in lines:
            click.echo(line)


def _verdict(ctx: click.Context, ok: bool) -> None:
    ctx.exit(0 if ok else 1)


def _load(ctx: click.Context, path: Path):
    return load_poset(path, max_size=_config(ctx).engine.max_poset_size)


poset_option = click.option(
    "--poset", "poset_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Poset JSON document",
)
graph_option = click.option(
    "--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Graph JSON document",
)


@click.group(cls=ReportGroup)
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Configuration file (defaults to ~/.config/latticefactor/config.json)")
@click.option("--json", "json_output", is_flag=True, default=None, help="Emit JSON reports")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--seed", type=int, default=None, help="Seed for sampled sweeps")
@click.option("--product-budget", type=int, default=None, help="Largest product poset to build")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], json_output: Optional[bool],
        debug: bool, seed: Optional[int], product_budget: Optional[int]) -> None:
    """Möbius functions, characteristic polynomials and their factorizations."""
    from .__main__ import setup_logging

    setup_logging(debug)
    config = load_config(config_path)
    if json_output:
        config.output.json_output = True
    if seed is not None:
        config.sweep.seed = seed
    if product_budget is not None:
        try:
            config.engine = EngineConfig.model_validate(
                {**config.engine.model_dump(), "product_budget": product_budget}
            )
        except ValidationError as e:
            raise click.BadParameter(e.errors()[0]["msg"], param_hint="--product-budget") from e
    ctx.obj = config


@cli.command()
@poset_option
@click.pass_context
def chi(ctx: click.Context, poset_path: Path) -> None:
    """Characteristic polynomial of a ranked poset."""
    poset = _load(ctx, poset_path)
    poly = characteristic_polynomial(poset)
    factored = nonnegative_integer_factorization(poly)
    lines = [str(poly)]
    if factored is not None:
        lines.append(f"factors: {factored}")
    _emit(ctx, {
        "chi": str(poly),
        "coeffs": list(poly.coeffs),
        "factored": factored.to_dict() if factored else None,
    }, lines)


@cli.command()
@poset_option
@click.pass_context
def mobius(ctx: click.Context, poset_path: Path) -> None:
    """Möbius function from 0̂ to every element."""
    poset = _load(ctx, poset_path)
    values = mobius_vector(poset).to_dict(poset)
    _emit(ctx, {"mobius": values}, [f"{label}: {value}" for label, value in values.items()])


@cli.command()
@poset_option
@click.option("--partition", "partition_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Ordered atom partition JSON document")
@click.option("--mode", type=click.Choice(MODES), default=None,
              help="Factor shape; defaults to claws on atomic lattices")
@click.pass_context
def factor(ctx: click.Context, poset_path: Path, partition_path: Path, mode: Optional[str]) -> None:
    """Certify a factorization of chi from an ordered atom partition."""
    lattice = _load(ctx, poset_path)
    part = load_atom_partition(partition_path, lattice)
    report = factor_characteristic(lattice, part, _config(ctx).engine, mode)
    lines = [f"chi: {report.chi}"]
    if report.factored is not None:
        lines.append(f"factors: {report.factored}")
        lines.append(f"roots: {list(report.factored.linear_roots)}")
    else:
        failed = [c.name for c in report.hypotheses.conditions if not c.passed]
        lines.append(f"hypotheses fail: {', '.join(failed)}")
    lines.extend(f"note: {note}" for note in report.notes)
    _emit(ctx, report.to_dict(lattice), lines)
    _verdict(ctx, report.factors)


@cli.command("quotient-check")
@poset_option
@click.option("--partition", "partition_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Element partition JSON document")
@click.pass_context
def quotient_check(ctx: click.Context, poset_path: Path, partition_path: Path) -> None:
    """Check the quotient hypotheses and whether chi is preserved."""
    poset = _load(ctx, poset_path)
    part = load_element_partition(partition_path, poset)
    report = verify_chi_preservation(poset, part)
    lines = [
        f"homogeneous: {report.homogeneous}",
        f"summation: {all(report.summation_ok.values())}",
        f"rank compatible: {report.rank_compatible}",
        f"chi: {report.chi_original}",
    ]
    if report.chi_quotient is not None:
        lines.append(f"chi of quotient: {report.chi_quotient}")
    lines.append(f"preserved: {report.chi_preserved}")
    lines.extend(f"note: {note}" for note in report.notes)
    _emit(ctx, report.to_dict(poset, part), lines)
    _verdict(ctx, report.chi_preserved)


@cli.command("multichain-report")
@poset_option
@click.option("--chain", "chain_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Multichain JSON document")
@click.pass_context
def multichain_report(ctx: click.Context, poset_path: Path, chain_path: Path) -> None:
    """Evaluate the four factorization conditions for a multichain."""
    lattice = _load(ctx, poset_path)
    chain = load_multichain(chain_path, lattice)
    report = theorem_equivalence_report(lattice, chain, _config(ctx).engine)
    lines = [f"support hypothesis: {report.support_hypothesis.passed}"]
    for result in (report.cond1, report.cond2, report.cond3_meet, report.cond4_factors):
        suffix = "" if result.passed else f" (witness: {result.witness})"
        lines.append(f"{result.name}: {result.passed}{suffix}")
    _emit(ctx, report.to_dict(lattice), lines)
    _verdict(ctx, report.cond4_factors.passed)


@cli.command()
@poset_option
@click.pass_context
def stanley(ctx: click.Context, poset_path: Path) -> None:
    """Find a left-modular saturated chain and factor chi along it."""
    lattice = _load(ctx, poset_path)
    chain = find_left_modular_chain(lattice)
    factored = stanley_factorization(lattice, _config(ctx).engine) if chain else None
    data: Dict[str, Any] = {
        "chain": chain.labels(lattice) if chain else None,
        "factored": factored.to_dict() if factored else None,
        "factored_str": str(factored) if factored else None,
    }
    lines = [f"chain: {' < '.join(data['chain']) if chain else 'none'}"]
    if factored is not None:
        lines.append(f"factors: {factored}")
    if chain is not None and is_geometric(lattice):
        converse = converse_stanley_check(lattice, chain)
        data["converse"] = converse.to_dict()
        lines.append(f"converse agrees: {converse.agree}")
    _emit(ctx, data, lines)
    _verdict(ctx, factored is not None)


@cli.command()
@click.argument("name", type=click.Choice(sorted(get_available_families())))
@click.argument("n", type=int, required=False)
@click.option("--long-running", is_flag=True, help="Allow partition lattices beyond n = 7")
@click.pass_context
def family(ctx: click.Context, name: str, n: Optional[int], long_running: bool) -> None:
    """Emit a named lattice as Poset JSON."""
    try:
        poset = create_family(name, n, long_running=long_running or _config(ctx).sweep.long_running)
    except ValueError as e:
        raise click.UsageError(str(e))
    output = _config(ctx).output
    click.echo(dump_report(PosetDocument.from_poset(poset), indent=output.indent,
                           sort_keys=output.sort_keys))


@cli.group()
def graph() -> None:
    """Bond lattices, chromatic polynomials and increasing forests."""


@graph.command()
@graph_option
@click.pass_context
def bond(ctx: click.Context, graph_path: Path) -> None:
    """Emit the bond lattice as Poset JSON."""
    lattice = bond_lattice(load_graph(graph_path))
    output = _config(ctx).output
    click.echo(dump_report(PosetDocument.from_poset(lattice), indent=output.indent,
                           sort_keys=output.sort_keys))


@graph.command()
@graph_option
@click.pass_context
def chromatic(ctx: click.Context, graph_path: Path) -> None:
    """Chromatic polynomial by deletion-contraction."""
    poly = chromatic_polynomial(load_graph(graph_path))
    _emit(ctx, {"chromatic": str(poly), "coeffs": list(poly.coeffs)}, [str(poly)])


@graph.command("if-poly")
@graph_option
@click.option("--order", default=None, help="Vertex ordering such as 1,3,2")
@click.pass_context
def if_poly(ctx: click.Context, graph_path: Path, order: Optional[str]) -> None:
    """Increasing-forest polynomial and its edge-block factorization."""
    g = load_graph(graph_path)
    ordering = parse_ordering(order, g.n) if order else natural_order(g.n)
    report = verify_if_factorization(g, ordering)
    data = report.to_dict()
    data["edge_partition"] = edge_partition(g, ordering).to_dict()["blocks"]
    _emit(ctx, data, [
        f"IF: {report.if_poly}",
        f"product: {report.product}",
        f"f: {list(report.f)}",
        f"holds: {report.holds}",
    ])
    _verdict(ctx, report.holds)


@graph.command("verify-peo")
@graph_option
@click.option("--order", default=None, help="Vertex ordering such as 1,3,2")
@click.option("--no-lattice", is_flag=True, help="Skip the bond-lattice cross-check")
@click.pass_context
def verify_peo(ctx: click.Context, graph_path: Path, order: Optional[str], no_lattice: bool) -> None:
    """Check P(G) == IF(G) against the perfect elimination property."""
    g = load_graph(graph_path)
    ordering = parse_ordering(order, g.n) if order else natural_order(g.n)
    report = verify_chromatic_iff_peo(g, ordering, lattice_pipeline=not no_lattice,
                                      config=_config(ctx).engine)
    summary = "PEO; P = IF" if report.peo else "not PEO; P ≠ IF"
    _emit(ctx, {**report.to_dict(), "ordering": list(ordering)}, [
        f"P: {report.chromatic}",
        f"IF: {report.if_poly}",
        summary,
    ])
    _verdict(ctx, report.peo)


@graph.command()
@click.option("--kind", type=click.Choice(["peo", "if"]), default="peo", help="Statement to sweep")
@click.option("--exhaustive", is_flag=True, default=None, help="Every graph and ordering")
@click.option("--max-vertices", type=int, default=None, help="Largest graph size")
@click.option("--workers", type=int, default=None, help="Worker processes")
@click.option("--sample-size", type=int, default=None, help="Random pairs when not exhaustive")
@click.option("--lattice", "lattice_pipeline", is_flag=True, help="Also run the bond-lattice pipeline")
@click.pass_context
def sweep(ctx: click.Context, kind: str, exhaustive: Optional[bool], max_vertices: Optional[int],
          workers: Optional[int], sample_size: Optional[int], lattice_pipeline: bool) -> None:
    """Sweep graphs and orderings for counterexamples."""
    config = _config(ctx)
    updates = {
        key: value
        for key, value in {
            "exhaustive": exhaustive,
            "max_vertices": max_vertices,
            "workers": workers,
            "sample_size": sample_size,
        }.items()
        if value is not None
    }
    try:
        settings = SweepConfig.model_validate({**config.sweep.model_dump(), **updates})
    except ValidationError as e:
        raise click.UsageError(e.errors()[0]["msg"])
    if settings.exhaustive and settings.max_vertices > 6 and not settings.long_running:
        raise click.UsageError("exhaustive sweeps beyond 6 vertices need long_running in the config")
    report = peo_sweep(settings, lattice_pipeline) if kind == "peo" else if_sweep(settings)
    lines = [f"{report.kind}: {report.pairs} pairs over {report.graphs} graphs"]
    if report.counterexample is not None:
        lines.append(f"counterexample: {report.counterexample}")
    _emit(ctx, report.to_dict(), lines)
    _verdict(ctx, report.ok)
