"""Command-line entry point.

Exit codes: 0 no violations, 1 a theorem check reported a violation (an
engine bug, since the theorems are proved), 2 bad input, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .caps import Caps, InputError, ResourceError, caps_from_env, current_caps, use_caps
from .catalog import builtin_catalog_specs, builtin_module_catalog, load_catalog_file, parse_group_spec, parse_spec
from .group import GroupTable, center
from .series import nilpotency_profile
from .theorems import (
    HOLDS,
    MARGINAL,
    SKIPPED,
    VIOLATED,
    CheckReport,
    baer_duality_sweep,
    check_oracle_equivalence,
    check_schur_wiegold,
    check_theorem_b,
    hekster_sweep,
    kaloujnine_sweep,
    lemma3_sweep,
)
from .zgmodule import (
    augmentation_series,
    check_lemma2,
    module_from_json,
    search_decomposition_failure,
    upper_module_series,
    z_decomposition,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CAPS = 0, 1, 2, 3
SCHEMA_VERSION = "1"

CHECKS = (
    "schur-wiegold",
    "theorem-b",
    "baer-duality",
    "hekster",
    "kaloujnine",
    "lemma3",
    "lemma2",
    "oracle-equivalence",
)


def _hekster(G: GroupTable) -> CheckReport:
    cap = current_caps().subgroup_order
    if G.order > cap:
        return CheckReport("hekster", G.label, SKIPPED, {"order": G.order}, [], [f"order above subgroup-enumeration cap {cap}"])
    return hekster_sweep(G)


GROUP_CHECKS: dict[str, Callable[[GroupTable], CheckReport]] = {
    "schur-wiegold": check_schur_wiegold,
    "theorem-b": check_theorem_b,
    "baer-duality": baer_duality_sweep,
    "hekster": _hekster,
    "kaloujnine": kaloujnine_sweep,
    "lemma3": lemma3_sweep,
    "oracle-equivalence": check_oracle_equivalence,
}


@dataclass
class RunConfig:
    command: str
    target: str = "builtin"
    checks: tuple = CHECKS
    output_format: str = "table"
    out: Optional[str] = None
    caps: Caps = field(default_factory=Caps)
    jobs: int = 1
    modules: str = "builtin"


def parse_checks(text: str) -> tuple:
    names = tuple(n.strip() for n in text.split(",") if n.strip())
    if "all" in names:
        return CHECKS
    unknown = [n for n in names if n not in CHECKS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(f"unknown check(s) {unknown or [text]}; choose from {', '.join(CHECKS)}")
    return tuple(n for n in CHECKS if n in names)


# ------------------------------------------------------------ runners


def run_group_checks(G: GroupTable, checks: Sequence[str]) -> list[CheckReport]:
    return [GROUP_CHECKS[name](G) for name in CHECKS if name in checks and name in GROUP_CHECKS]


def _verify_spec(job: tuple) -> list[dict]:
    spec, checks, caps = job
    with use_caps(caps):
        G = parse_group_spec(spec)
        return [r.to_json() for r in run_group_checks(G, checks)]


def summarize(results: Sequence[dict]) -> dict:
    counts = {HOLDS: 0, MARGINAL: 0, VIOLATED: 0, SKIPPED: 0}
    for r in results:
        counts[r["verdict"]] += 1
    counts["total"] = len(results)
    return counts


def _load_modules(source: str):
    if source == "builtin":
        return builtin_module_catalog()
    try:
        doc = json.loads(Path(source).read_text())
    except OSError as exc:
        raise InputError(f"cannot read module file {source}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"module file {source} is not valid JSON: {exc}") from None
    docs = doc if isinstance(doc, list) else [doc]
    return [module_from_json(d, label=f"{Path(source).name}[{i}]") for i, d in enumerate(docs)]


def _catalog_specs(target: str) -> list[str]:
    if target == "builtin":
        return builtin_catalog_specs()
    try:
        return load_catalog_file(target)
    except OSError as exc:
        raise InputError(f"cannot read catalog {target}: {exc}") from None


def run_verify(config: RunConfig, groups: Optional[Sequence[GroupTable]] = None) -> tuple[dict, int]:
    """Run the selected checks over a catalog; returns ``(payload, exit code)``.

    *groups* bypasses catalog parsing (used to feed hand-built tables).
    """
    group_checks = [c for c in config.checks if c in GROUP_CHECKS]
    results: list[dict] = []
    with use_caps(config.caps):
        if group_checks:
            if groups is not None:
                for G in groups:
                    results.extend(r.to_json() for r in run_group_checks(G, group_checks))
            else:
                specs = _catalog_specs(config.target)
                for spec in specs:  # fail fast on syntax before fanning out
                    parse_spec(spec)
                jobs = [(s, tuple(group_checks), config.caps) for s in specs]
                if config.jobs > 1 and len(jobs) > 1:
                    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                        for chunk in pool.map(_verify_spec, jobs):
                            results.extend(chunk)
                else:
                    for job in jobs:
                        results.extend(_verify_spec(job))
        if "lemma2" in config.checks:
            results.extend(check_lemma2(A).to_json() for A in _load_modules(config.modules))
    summary = summarize(results)
    payload = {"version": SCHEMA_VERSION, "command": "verify", "results": results, "summary": summary}
    return payload, EXIT_VIOLATION if summary[VIOLATED] else EXIT_OK


def _members(S) -> list[int]:
    return S.elements.tolist()


def run_analyze(spec: str, caps: Caps = Caps(), full: bool = False) -> dict:
    with use_caps(caps):
        G = parse_group_spec(spec)
        prof = nilpotency_profile(G)
        Z1 = center(G)
        result = {
            "group": G.label,
            "order": G.order,
            "center_order": Z1.order,
            "upper_orders": prof.upper.orders(),
            "lower_orders": prof.lower.orders(),
            "zl": prof.zl,
            "hypercenter_order": prof.hypercenter.order,
            "residual_order": prof.residual.order,
            "t": prof.t,
            "nilpotent": prof.nilpotent,
            "class": prof.nilpotency_class,
        }
        if full:
            result["center"] = _members(Z1)
            result["upper_series"] = [_members(S) for S in prof.upper.terms]
            result["lower_series"] = [_members(S) for S in prof.lower.terms]
            result["hypercenter"] = _members(prof.hypercenter)
            result["residual"] = _members(prof.residual)
            result["table"] = G.product.tolist()
    return {"version": SCHEMA_VERSION, "command": "analyze", "results": [result], "summary": {"total": 1}}


def run_module_check(source: str, caps: Caps = Caps()) -> tuple[dict, int]:
    with use_caps(caps):
        modules = _load_modules(source)
        results = []
        for A in modules:
            report = check_lemma2(A).to_json()
            decomposition = z_decomposition(A)
            report["measured"]["hypercenter"] = upper_module_series(A)[-1].elements.tolist()
            report["measured"]["augmentation_stable"] = augmentation_series(A)[-1].elements.tolist()
            if decomposition is None:
                report["notes"].append("no Z-decomposition")
            results.append(report)
    summary = summarize(results)
    payload = {"version": SCHEMA_VERSION, "command": "module-check", "results": results, "summary": summary}
    return payload, EXIT_VIOLATION if summary[VIOLATED] else EXIT_OK


def run_search(
    max_module_order: int = 9,
    max_group_order: int = 48,
    max_generators: int = 2,
    nilpotent_only: bool = False,
    caps: Caps = Caps(),
) -> dict:
    from .series import is_nilpotent

    with use_caps(caps):
        found = search_decomposition_failure(max_module_order, max_group_order, max_generators, nilpotent_only)
        findings = []
        for A in found:
            doc = A.to_json()
            doc["acting_group_order"] = A.acting_group.order
            doc["acting_group_nilpotent"] = is_nilpotent(A.acting_group)
            doc["hypercenter_order"] = upper_module_series(A)[-1].order
            doc["augmentation_stable_order"] = augmentation_series(A)[-1].order
            findings.append(doc)
    return {
        "version": SCHEMA_VERSION,
        "command": "search",
        "kind": "decomposition-failure",
        "caps": {
            "max_module_order": max_module_order,
            "max_group_order": max_group_order,
            "max_generators": max_generators,
            "nilpotent_only": nilpotent_only,
        },
        "results": findings,
        "summary": {"findings": len(findings)},
    }


# ------------------------------------------------------------ output


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_table(payload: dict) -> str:
    lines = []
    command = payload["command"]
    if command == "analyze":
        for key, value in payload["results"][0].items():
            lines.append(f"{key:>18}  {_fmt(value)}")
        return "\n".join(lines) + "\n"
    if command == "search":
        lines.append(f"decomposition failures: {payload['summary']['findings']}")
        for doc in payload["results"]:
            lines.append(
                f"  {doc['invariants']} |G|={doc['acting_group_order']} action={doc['action']} "
                f"Z={doc['hypercenter_order']} E={doc['augmentation_stable_order']}"
            )
        return "\n".join(lines) + "\n"
    width = max([len(r["group"]) for r in payload["results"]] + [5])
    lines.append(f"{'check':<20} {'group':<{width}} {'verdict':<9} details")
    for r in payload["results"]:
        keys = ("t", "derived_order", "residual_order", "bound", "attained", "pairs", "nontrivial_pairs", "Z_order", "E_order")
        details = " ".join(f"{k}={_fmt(r['measured'][k])}" for k in keys if k in r["measured"])
        lines.append(f"{r['check']:<20} {r['group']:<{width}} {r['verdict']:<9} {details}")
    s = payload["summary"]
    lines.append(
        f"holds={s[HOLDS]} marginal={s[MARGINAL]} violated={s[VIOLATED]} skipped={s[SKIPPED]} total={s['total']}"
    )
    return "\n".join(lines) + "\n"


def _emit(payload: dict, fmt: str, out: Optional[str]) -> None:
    text = dump_json(payload) if fmt == "json" else render_table(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ argv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--cap-order", type=int, help="largest group order allowed")
    common.add_argument("--cap-subgroups", type=int, help="largest order for subgroup enumeration")

    parser = argparse.ArgumentParser(prog="hyplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="series, hypercenter and residual of one group")
    p.add_argument("spec", help='group spec, e.g. "C(2) x S(3)"')

    p = sub.add_parser("verify", parents=[common], help="run theorem checks over a catalog")
    p.add_argument("--catalog", default="builtin", help="catalog file (one spec per line) or 'builtin'")
    p.add_argument("--checks", type=parse_checks, default=CHECKS, help="comma-separated checks, or 'all'")
    p.add_argument("--modules", default="builtin", help="module JSON file for lemma2, or 'builtin'")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("module-check", parents=[common], help="series and Z-decomposition of modules")
    p.add_argument("source", nargs="?", default="builtin", help="module JSON file or 'builtin'")

    p = sub.add_parser("search", parents=[common], help="sweep small modules for decomposition failures")
    p.add_argument("--kind", choices=("decomposition-failure",), default="decomposition-failure")
    p.add_argument("--max-module-order", type=int, default=9)
    p.add_argument("--max-group-order", type=int, default=48)
    p.add_argument("--max-generators", type=int, default=2)
    p.add_argument("--nilpotent-only", action="store_true")
    return parser


def config_caps(args: argparse.Namespace) -> Caps:
    caps = caps_from_env()
    updates = {}
    if args.cap_order is not None:
        updates["order"] = args.cap_order
    if args.cap_subgroups is not None:
        updates["subgroup_order"] = args.cap_subgroups
    return dataclasses.replace(caps, **updates)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        caps = config_caps(args)
        if args.command == "analyze":
            payload, code = run_analyze(args.spec, caps, full=args.format == "json"), EXIT_OK
        elif args.command == "verify":
            if args.jobs < 1:
                raise InputError("--jobs must be at least 1")
            config = RunConfig(
                "verify", args.catalog, args.checks, args.format, args.out, caps, args.jobs, args.modules
            )
            payload, code = run_verify(config)
        elif args.command == "module-check":
            payload, code = run_module_check(args.source, caps)
        else:
            payload = run_search(
                args.max_module_order, args.max_group_order, args.max_generators, args.nilpotent_only, caps
            )
            code = EXIT_OK
    except InputError as exc:
        print(f"hyplab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"hyplab: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPS
    _emit(payload, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
