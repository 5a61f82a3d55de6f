"""Command-line front end: verification campaigns, hierarchy documents and
SVG renderings.

Configuration comes from an optional JSON file plus flag overrides (flags
win).  All randomized checks draw from the configured seed, reports carry
no timestamps, and the SVG builders format every number with fixed
precision, so repeated runs with one configuration are byte-identical.
Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 output
I/O error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import click

from .clopen_partition import build_partition, flatten_refinement, refine_block
from .coarse_graining import (
    HierarchyPolicy,
    build_hierarchy,
    check_conjugation,
    check_isometry,
    verify_self_similarity,
)
from .code_space import FULL_SPACE, Address
from .dendrite import (
    DendriteGraph,
    check_continuity_modulus,
    check_surjectivity,
    dendrite_map,
    fiber_of,
)
from .quadratic_system import (
    QuadraticParams,
    hausdorff_distance,
    invariant_cover,
    inverse_branches,
    refine_cover,
    verify_statement_conditions,
)
from .svg import cantor_bars_svg, dendrite_svg, hierarchy_svg

__all__ = ["CheckRecord", "RunConfig", "main", "run_campaign"]

log = logging.getLogger("cantor_coarse")

# full covers double per depth step; past this the verification legs that
# enumerate them are capped (the config may still ask for depth up to 30)
MAX_ENUMERATED_DEPTH = 14
MAX_DOCUMENT_DEPTH = 10

_POLICIES = ("distinct", "merged", "explicit")


@dataclass(frozen=True)
class RunConfig:
    """One verification campaign's worth of knobs."""

    mu: float = 5.0
    depth: int = 12
    partition_n: int = 2
    levels: int = 2
    dendrite_depth: int = 4
    representatives: str = "distinct"
    explicit_representatives: tuple[tuple[Address, ...], ...] | None = None
    tolerance: float = 1e-12
    seed: int = 0
    out: str = "."

    def validate(self) -> None:
        if not self.mu > 4:
            raise ValueError("mu must exceed 4")
        if not 0 <= self.depth <= 30:
            raise ValueError("depth must lie in 0..30")
        if not 1 <= self.partition_n <= 64:
            raise ValueError("partition block count must lie in 1..64")
        if not 0 <= self.levels <= 8:
            raise ValueError("levels must lie in 0..8")
        if not 0 <= self.dendrite_depth <= 8:
            raise ValueError("dendrite depth must lie in 0..8")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.representatives not in _POLICIES:
            raise ValueError(f"representative policy must be one of {_POLICIES}")

    def policy(self) -> HierarchyPolicy:
        return HierarchyPolicy(
            blocks_per_level=self.partition_n,
            representative_policy=self.representatives,
            explicit_representatives=self.explicit_representatives,
        )

    def as_json(self) -> dict:
        data = asdict(self)
        if self.explicit_representatives is not None:
            data["explicit_representatives"] = [
                [{"prefix": a.prefix, "tail": a.tail} for a in level]
                for level in self.explicit_representatives
            ]
        return data


_CONFIG_KEYS = set(RunConfig.__dataclass_fields__)


def load_config(config_path: str | None, **overrides) -> RunConfig:
    """Merge a JSON config file with flag overrides; flags win."""
    data: dict = {}
    if config_path is not None:
        data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "explicit_representatives" in data and data["explicit_representatives"] is not None:
            data["explicit_representatives"] = tuple(
                tuple(Address(a["prefix"], a["tail"]) for a in level)
                for level in data["explicit_representatives"]
            )
    merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    cfg = RunConfig(**merged)
    cfg.validate()
    return cfg


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    location: str
    measured: object
    bound: object
    passed: bool

    def as_json(self) -> dict:
        return {
            "id": self.check_id,
            "location": self.location,
            "measured": self.measured,
            "bound": self.bound,
            "passed": self.passed,
        }


def _statement_checks(cfg: RunConfig) -> tuple[list[CheckRecord], bool]:
    sys_ = inverse_branches(QuadraticParams(cfg.mu))
    report = verify_statement_conditions(sys_)
    records = [
        CheckRecord("statement.i.injective", f"mu={cfg.mu}", report.injective, True, report.injective),
        CheckRecord(
            "statement.ii.fixed_points",
            f"mu={cfg.mu}",
            {"points": list(report.fixed_points), "residual": report.fixed_point_residual},
            cfg.tolerance,
            report.not_singleton and report.fixed_point_residual <= cfg.tolerance,
        ),
        CheckRecord(
            "statement.iii.modulus_sum",
            f"mu={cfg.mu}",
            report.modulus_sum,
            1.0,
            report.modulus_sum_below_one,
        ),
    ]
    return records, report.all_pass


def _coverage_checks(cfg: RunConfig) -> list[CheckRecord]:
    sys_ = inverse_branches(QuadraticParams(cfg.mu))
    records = []
    top = min(cfg.depth, MAX_ENUMERATED_DEPTH)
    cover = invariant_cover(sys_, 0)
    for n in range(top + 1):
        next_cover = invariant_cover(sys_, n + 1)
        dist = hausdorff_distance(refine_cover(sys_, cover), next_cover)
        nested = next_cover.subset_of(cover)
        records.append(
            CheckRecord("cover.identity", f"n={n}", dist, cfg.tolerance, dist <= cfg.tolerance)
        )
        records.append(CheckRecord("cover.nested", f"n={n}", nested, True, nested))
        cover = next_cover
    return records


def _partition_checks(cfg: RunConfig) -> list[CheckRecord]:
    records = []
    worst = 0
    ok = True
    for n in range(1, 65):
        try:
            build_partition(FULL_SPACE, n)
            worst = n
        except Exception:  # noqa: BLE001 - any failure fails the check
            ok = False
            break
    records.append(CheckRecord("partition.laws", "n=1..64", worst, 64, ok and worst == 64))
    p = build_partition(FULL_SPACE, 3)
    sub = refine_block(p, 1, 3)
    flat = flatten_refinement(p, 1, sub)
    sub2 = refine_block(flat, 2, 2)
    flat2 = flatten_refinement(flat, 2, sub2)
    depth3_ok = flat2.size == 6
    records.append(CheckRecord("partition.refine", "depth=3", flat2.size, 6, depth3_ok))
    return records


def _hierarchy_checks(cfg: RunConfig) -> list[CheckRecord]:
    tower = build_hierarchy(QuadraticParams(cfg.mu), cfg.levels, cfg.policy())
    records = []
    verify_depth = min(cfg.depth, MAX_DOCUMENT_DEPTH)
    for level in tower[1:]:
        quot = level.quotient
        multi = [f for f in quot.multi_fibers if not f.is_singleton]
        expected = cfg.partition_n - 1 if cfg.representatives == "distinct" else None
        nontrivial = bool(multi)
        records.append(
            CheckRecord("quotient.nontrivial", f"k={level.level}", len(multi), ">=1", nontrivial)
        )
        if expected is not None:
            records.append(
                CheckRecord(
                    "quotient.multi_fiber_count",
                    f"k={level.level}",
                    len(multi),
                    expected,
                    len(multi) == expected,
                )
            )
        iso = check_isometry(quot, pairs=1000, seed=cfg.seed, expected=tower[level.level - 1].metric)
        records.append(CheckRecord("quotient.isometry", f"k={level.level}", iso, True, iso))
        conj = check_conjugation(level, tower[level.level - 1], seed=cfg.seed)
        records.append(CheckRecord("hierarchy.conjugation", f"k={level.level}", conj, True, conj))
    for level in tower:
        rep = verify_self_similarity(
            level, verify_depth, samples=300, seed=cfg.seed, tolerance=cfg.tolerance
        )
        records.append(
            CheckRecord(
                "hierarchy.coverage",
                f"k={level.level} depth={verify_depth}",
                {"exact": rep.coverage_exact, "hausdorff": rep.hausdorff},
                cfg.tolerance,
                rep.coverage_pass,
            )
        )
        records.append(
            CheckRecord(
                "hierarchy.ratio",
                f"k={level.level}",
                max(rep.max_ratio),
                max(rep.ratio_bound),
                rep.ratio_pass,
            )
        )
    return records


def _dendrite_checks(cfg: RunConfig) -> list[CheckRecord]:
    tree = DendriteGraph(cfg.dendrite_depth)
    records = []
    conserved = tree.tour_length == 2 * tree.total_edge_length
    records.append(
        CheckRecord(
            "dendrite.tour_conservation",
            f"L={cfg.dendrite_depth}",
            str(tree.tour_length),
            str(2 * tree.total_edge_length),
            conserved,
        )
    )
    depth = 2 * cfg.dendrite_depth + 4
    surjective = check_surjectivity(tree, depth)
    records.append(
        CheckRecord("dendrite.surjectivity", f"L={cfg.dendrite_depth} depth={depth}", surjective, True, surjective)
    )
    continuous = check_continuity_modulus(tree, pairs=10_000, seed=cfg.seed)
    records.append(
        CheckRecord("dendrite.continuity", "pairs=10000", continuous, True, continuous)
    )
    sound = _fiber_soundness(tree, depth)
    records.append(CheckRecord("dendrite.fiber_soundness", f"depth={depth}", sound, 1e-9, sound <= 1e-9))
    return records


def _fiber_soundness(tree: DendriteGraph, depth: int) -> float:
    from fractions import Fraction

    worst = Fraction(0)
    for v in tree.vertices:
        p = tree.vertex_point(v)
        for wit in fiber_of(tree, p, depth).witnesses:
            worst = max(worst, tree.distance(dendrite_map(tree, wit), p))
    return float(worst)


def run_campaign(cfg: RunConfig) -> dict:
    """Run every verification family and assemble the JSON-ready report."""
    records: list[CheckRecord] = []
    statement, statement_ok = _statement_checks(cfg)
    records.extend(statement)
    records.extend(_coverage_checks(cfg))
    records.extend(_partition_checks(cfg))
    if statement_ok and cfg.levels >= 1:
        records.extend(_hierarchy_checks(cfg))
    elif not statement_ok:
        log.info("statement conditions failed; skipping hierarchy checks")
    records.extend(_dendrite_checks(cfg))
    passed = sum(1 for r in records if r.passed)
    return {
        "schema": "verification-report/1",
        "config": cfg.as_json(),
        "checks": [r.as_json() for r in records],
        "summary": {
            "total": len(records),
            "passed": passed,
            "failed": len(records) - passed,
            "all_passed": passed == len(records),
        },
    }


def hierarchy_document(cfg: RunConfig) -> dict:
    """Serialize the tower: carriers, homeomorphism rules, moduli, distances."""
    tower = build_hierarchy(QuadraticParams(cfg.mu), cfg.levels, cfg.policy())
    doc_depth = min(cfg.depth, MAX_DOCUMENT_DEPTH)
    cover_depth = min(cfg.depth, 8)
    cover = invariant_cover(inverse_branches(QuadraticParams(cfg.mu)), cover_depth)
    levels: dict[str, dict] = {}
    for level in tower:
        name = "S" if level.level == 0 else f"D{level.level}"
        base_len = max((len(w) for w in level.carrier.words), default=0)
        rep = verify_self_similarity(level, doc_depth, samples=100, seed=cfg.seed, tolerance=cfg.tolerance)
        entry: dict = {
            "carrier": list(level.carrier.words),
            "cylinders": list(level.carrier.refine(base_len + doc_depth)) if doc_depth else list(level.carrier.words),
            # the realized point set is the same at every floor: labels pull
            # back to ground addresses, and those realize to the cover
            "interval_cover": {"depth": cover_depth, "intervals": cover.intervals.tolist()},
            "modulus_bound": list(level.system.modulus_bound),
            "coverage_exact": rep.coverage_exact,
            "coverage_hausdorff": rep.hausdorff,
            "max_contraction_ratio": list(rep.max_ratio),
        }
        if level.quotient is not None:
            entry["homeomorphism"] = [
                {"rules": [[src, dst] for src, dst in stage.rules]}
                for stage in level.hom.stages
            ]
            entry["fiber_labels"] = [
                {"prefix": f.label.prefix, "tail": f.label.tail, "blocks": list(f.block_indices)}
                for f in level.quotient.multi_fibers
            ]
            entry["representatives"] = [
                {"prefix": q.prefix, "tail": q.tail} for q in level.quotient.spec.representatives
            ]
        levels[name] = entry
    return {
        "schema": "hierarchy-document/1",
        "config": cfg.as_json(),
        "level_names": ["S"] + [f"D{k}" for k in range(1, cfg.levels + 1)],
        "levels": levels,
    }


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot write {path}: {exc}", err=True)
        sys.exit(3)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _config_options(fn):
    options = [
        click.option("--mu", type=float, default=None, help="rate constant, must exceed 4"),
        click.option("--depth", type=int, default=None, help="interval cover depth (0..30)"),
        click.option("--n", "partition_n", type=int, default=None, help="partition blocks per level"),
        click.option("--levels", type=int, default=None, help="coarse-graining levels (0..8)"),
        click.option("--dendrite-depth", type=int, default=None, help="dendrite tree depth (0..8)"),
        click.option("--tolerance", type=float, default=None, help="identity tolerance"),
        click.option("--seed", type=int, default=None, help="seed for sampled checks"),
        click.option("--representatives", type=click.Choice(list(_POLICIES)), default=None),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None),
        click.option("--out", type=click.Path(file_okay=False), default=None, help="output directory"),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def _build_config(config_path, **overrides) -> RunConfig:
    try:
        return load_config(config_path, **overrides)
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"invalid configuration: {exc}") from exc


@click.group()
def main() -> None:
    """Construct and machine-verify self-similar coarse grainings of the
    Cantor-type invariant set of the quadratic map."""
    level_name = os.environ.get("CANTOR_COARSE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING))


@main.command()
@_config_options
def verify(config_path, **overrides) -> None:
    """Run the full verification campaign and write the JSON report."""
    cfg = _build_config(config_path, **overrides)
    report = run_campaign(cfg)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        click.echo(f"{status} {check['id']} [{check['location']}]")
    out = Path(cfg.out) / "verification_report.json"
    _write_text(out, _dump(report))
    click.echo(f"report: {out}")
    if not report["summary"]["all_passed"]:
        sys.exit(1)


@main.command()
@_config_options
def hierarchy(config_path, **overrides) -> None:
    """Write the hierarchy document for the configured tower."""
    cfg = _build_config(config_path, **overrides)
    doc = hierarchy_document(cfg)
    out = Path(cfg.out) / "hierarchy.json"
    _write_text(out, _dump(doc))
    click.echo(f"document: {out}")


@main.command()
@_config_options
def render(config_path, **overrides) -> None:
    """Write the Cantor-bar, hierarchy and dendrite SVG renderings."""
    cfg = _build_config(config_path, **overrides)
    sys_ = inverse_branches(QuadraticParams(cfg.mu))
    bar_depth = min(cfg.depth, MAX_ENUMERATED_DEPTH)
    covers = [invariant_cover(sys_, n) for n in range(bar_depth + 1)]
    out_dir = Path(cfg.out)
    _write_text(out_dir / "cantor_bars.svg", cantor_bars_svg(covers))

    tower = build_hierarchy(QuadraticParams(cfg.mu), cfg.levels, cfg.policy())
    names = ["S"] + [f"D{k}" for k in range(1, cfg.levels + 1)]
    moduli = [max(level.system.modulus_bound) for level in tower]
    _write_text(out_dir / "hierarchy.svg", hierarchy_svg(names, moduli, tower[0].system.branch_count))

    tree = DendriteGraph(cfg.dendrite_depth)
    fiber_depth = min(cfg.depth, MAX_DOCUMENT_DEPTH)
    counts = {
        v: len(fiber_of(tree, tree.vertex_point(v), fiber_depth).cylinders)
        for v in tree.vertices
    }
    _write_text(out_dir / "dendrite.svg", dendrite_svg(tree, counts))
    click.echo(f"renderings: {out_dir}")


@main.command()
@_config_options
def partition(config_path, **overrides) -> None:
    """Write the clopen partition of the full space into n blocks."""
    cfg = _build_config(config_path, **overrides)
    p = build_partition(FULL_SPACE, cfg.partition_n)
    doc = {
        "schema": "partition-document/1",
        "config": cfg.as_json(),
        "carrier": list(p.carrier.words),
        "blocks": [list(b.words) for b in p.blocks],
    }
    out = Path(cfg.out) / "partition.json"
    _write_text(out, _dump(doc))
    click.echo(f"document: {out}")


@main.command()
@_config_options
def dendrite(config_path, **overrides) -> None:
    """Write the dendrite structure and per-vertex fiber counts."""
    cfg = _build_config(config_path, **overrides)
    tree = DendriteGraph(cfg.dendrite_depth)
    fiber_depth = min(cfg.depth, MAX_DOCUMENT_DEPTH)
    doc = {
        "schema": "dendrite-document/1",
        "config": cfg.as_json(),
        "vertex_count": tree.vertex_count,
        "edges": [
            {"parent": tree.parent(v), "child": v, "length": str(tree.edge_length(v))}
            for v in range(2, tree.vertex_count + 1)
        ],
        "tour_length": str(tree.tour_length),
        "fiber_cylinder_counts": {
            str(v): len(fiber_of(tree, tree.vertex_point(v), fiber_depth).cylinders)
            for v in tree.vertices
        },
    }
    out = Path(cfg.out) / "dendrite.json"
    _write_text(out, _dump(doc))
    click.echo(f"document: {out}")


if __name__ == "__main__":
    main()
