"""Operator command line: generate data, evaluate, recommend, serve."""

from __future__ import annotations

import json
import sys

import click

from .base import Query
from .casebase import CaseBaseError, load_case_base, save_case_base
from .config import EngineConfig, parse_engine_spec, parse_engine_specs
from .evaluation import DEFAULT_VERBOSITY_LEVELS, EvalConfig, leave_one_out
from .synth import GenConfig, GenerationError, generate


def _load_config(path: str | None) -> EngineConfig:
    return EngineConfig.from_file(path) if path else EngineConfig()


@click.group()
def main() -> None:
    """Hybrid recommender toolkit for BI consultancy case bases."""


@main.command()
@click.option("--cases", default=82, show_default=True, type=int)
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--sectors", default=4, show_default=True, type=int)
@click.option("--industries-per-sector", default=6, show_default=True, type=int)
@click.option("--pool-size", default=60, show_default=True, type=int)
@click.option("--overlap", default=0.1, show_default=True, type=float)
@click.option("--processes", default="sales,finance", show_default=True,
              help="Comma-separated business-process labels.")
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def gen(cases, seed, sectors, industries_per_sector, pool_size, overlap, processes, out):
    """Generate a synthetic case base and write it as a JSON document."""
    try:
        cfg = GenConfig(
            cases=cases,
            seed=seed,
            sectors=sectors,
            industries_per_sector=industries_per_sector,
            pool_size=pool_size,
            overlap_ratio=overlap,
            processes=tuple(p.strip() for p in processes.split(",") if p.strip()),
        )
        cb = generate(cfg)
    except GenerationError as exc:
        raise click.ClickException(str(exc))
    save_case_base(cb, out)
    click.echo(f"wrote {len(cb)} cases to {out}")


@main.command("eval")
@click.option("--case-base", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--engines", default="cbr:2,graph,hybrid:0.3", show_default=True,
              help="Comma-separated engine specs (cbr:N, graph, hybrid:BETA, cf:userknn:K).")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--levels", default=",".join(str(v) for v in DEFAULT_VERBOSITY_LEVELS),
              show_default=True, help="Comma-separated verbosity levels.")
@click.option("--relevance-mode", type=click.Choice(["all", "exclude-query"]),
              default="all", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--threads", default=1, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["pretty", "csv", "json"]),
              default="pretty", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report here as well.")
def eval_cmd(case_base, engines, seed, levels, relevance_mode, config_path, threads, fmt, out):
    """Leave-one-case-out MAP sweep over verbosity levels."""
    try:
        cb = load_case_base(case_base)
        cfg = _load_config(config_path)
        engine_map = parse_engine_specs(engines, cfg)
        eval_cfg = EvalConfig(
            verbosity_levels=tuple(int(v) for v in levels.split(",")),
            seed=seed,
            relevance_mode=relevance_mode,
        )
    except (CaseBaseError, ValueError) as exc:
        raise click.ClickException(str(exc))
    report = leave_one_out(cb, engine_map, eval_cfg, workers=threads)
    rendered = {"pretty": report.to_pretty, "csv": report.to_csv, "json": report.to_json}[fmt]()
    click.echo(rendered, nl=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(rendered)


@main.command()
@click.option("--case-base", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--query", "query_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON query: industry, business_process, goal, target_groups, chosen_elements.")
@click.option("--engine", default="hybrid:0.3", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--limit", default=20, show_default=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False))
def recommend(case_base, query_path, engine, config_path, limit, out):
    """Print a ranking for a one-shot query."""
    try:
        cb = load_case_base(case_base)
        cfg = _load_config(config_path)
        name, factory = parse_engine_spec(engine, cfg)
        with open(query_path, encoding="utf-8") as fh:
            qdoc = json.load(fh)
        query = Query(
            industry=qdoc["industry"],
            business_process=qdoc["business_process"],
            goal=qdoc.get("goal", ""),
            target_groups=frozenset(qdoc.get("target_groups", [])),
            chosen_elements=frozenset(qdoc.get("chosen_elements", [])),
        )
    except (CaseBaseError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.ClickException(str(exc))
    ranking = factory().fit(cb).recommend(query)
    lines = [f"{score:.6f}  {item}" for item, score in ranking.top(limit)]
    text = f"# engine: {name}\n" + "\n".join(lines) + "\n"
    click.echo(text, nl=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


@main.command()
@click.option("--case-base", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--journal", type=click.Path(dir_okay=False),
              help="Append-only JSONL journal of session mutations.")
def serve(case_base, config_path, port, host, journal):
    """Run the interactive session service."""
    import uvicorn

    from .service import create_app

    try:
        cb = load_case_base(case_base)
        cfg = _load_config(config_path)
    except (CaseBaseError, ValueError) as exc:
        raise click.ClickException(str(exc))
    app = create_app(cb, cfg, journal_path=journal)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
