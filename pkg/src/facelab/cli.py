"""Batch command line front end.

Commands read a JSON input file, run the requested computation, and write
deterministic report files next to the input (or into ``--out-dir``):
``<name>.report.md`` always, ``<name>.summands.csv`` for the tabulated
decompositions, ``<name>.ring.json`` for ring dumps, ``<name>.hilbert.csv``
for Hilbert data.  Reports are byte-identical across runs for identical
inputs and flags.

Exit codes: 0 success, 1 internal inconsistency or verification mismatch,
2 malformed JSON or schema violation, 3 semantic validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .complexes import InvalidComplexError
from .constructions import format_subset, subsets
from .cupring import sphere_pair_ring
from .decomp import hochster_table, intersection_summands, union_summands
from .facering import (
    PosetFaceRing,
    hilbert_series,
    stanley_reisner_ring,
    topological_face_ring,
)
from .homology import ChainComplexError, chain_complex
from .jsonio import (
    SchemaError,
    complex_from_json,
    panel_input_from_json,
    poset_from_json,
)
from .polyprod import SpherePairs
from .sweep import sweep, verify_panel_complex

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_MALFORMED = 2
EXIT_INVALID = 3


class _Output:
    def __init__(self, input_path: str, out_dir: str | None):
        stem = Path(input_path).stem
        base = Path(out_dir) if out_dir else Path(input_path).parent
        base.mkdir(parents=True, exist_ok=True)
        self.base = base
        self.stem = stem

    def write(self, suffix: str, text: str) -> Path:
        path = self.base / f"{self.stem}.{suffix}"
        path.write_text(text)
        return path


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(str(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _group_lines(group) -> list:
    if group.is_trivial():
        return ["(trivial)"]
    out = []
    for degree, rank, torsion in group.groups:
        tor = " + ".join(f"Z/{d}" for d in torsion)
        rank_part = f"Z^{rank}" if rank else ""
        text = " + ".join(p for p in (rank_part, tor) if p)
        out.append(f"- degree {degree}: {text}")
    return out


def _summand_report(title, decomposition, extra=()):
    lines = [f"# {title}", ""]
    lines.extend(extra)
    lines.append("")
    lines.append("## Summands")
    lines.append("")
    lines.append("| subset | degree | rank | torsion |")
    lines.append("|---|---|---|---|")
    for subset, degree, rank, torsion in decomposition.rows():
        lines.append(f"| {subset} | {degree} | {rank} | {torsion or '-'} |")
    if decomposition.skipped:
        lines.append("")
        skipped = ", ".join(format_subset(J) for J in decomposition.skipped)
        lines.append(f"Skipped spanning subsets (contractible pieces): {skipped}")
    lines.append("")
    lines.append("## Total")
    lines.append("")
    lines.extend(_group_lines(decomposition.total))
    lines.append("")
    return "\n".join(lines)


def _parse_spec(text: str, expected: int) -> SpherePairs:
    pairs = SpherePairs.parse(text)
    if len(pairs) != expected:
        raise SchemaError(
            f"--spec lists {len(pairs)} sphere dimensions, input has {expected} panels"
        )
    return pairs


def cmd_homology(args) -> int:
    complex = complex_from_json(_load(args.input))
    chain = chain_complex(complex).check()
    homology = chain.homology(args.coefficients)
    cohomology = chain.cohomology(args.coefficients)
    out = _Output(args.input, args.out_dir)
    lines = [
        "# Homology report",
        "",
        f"Cells per dimension: {list(complex.f_vector())}",
        f"Euler characteristic: {complex.euler_characteristic()}",
        "",
        f"## Homology (coefficients {args.coefficients})",
        "",
        *_group_lines(homology),
        "",
        f"## Cohomology (coefficients {args.coefficients})",
        "",
        *_group_lines(cohomology),
        "",
    ]
    path = out.write("report.md", "\n".join(lines))
    print(f"homology: {homology}")
    print(f"report written to {path}")
    return EXIT_OK


def cmd_panelize(args) -> int:
    data = _load(args.input)
    if args.mode == "generic":
        if "complex" not in data:
            raise SchemaError("generic mode expects complex+panels input")
    elif args.mode == "simplicial":
        data = {"K": data} if "K" not in data else data
    elif args.mode == "poset":
        data = {"S": data} if "S" not in data else data
    elif args.mode == "partition":
        if "partition" not in data:
            raise SchemaError("partition mode expects K+partition input")
    panel_complex, kind, _ = panel_input_from_json(data)
    if kind != args.mode:
        raise SchemaError(f"input shape is {kind!r}, not {args.mode!r}")
    summary = panel_complex.summary()
    out = _Output(args.input, args.out_dir)
    lines = [
        "# Panel structure report",
        "",
        f"Panels: {panel_complex.m}",
        f"Cells of the underlying complex: {summary['cells']}",
        f"Core cells (in no panel): {summary['core_cells']}",
        f"Faces: {len(panel_complex.faces)}",
        "",
        "| face | cells | panel index |",
        "|---|---|---|",
    ]
    for i, face in enumerate(panel_complex.faces):
        lines.append(
            f"| {i} | {len(face.cells)} | {format_subset(face.panel_index)} |"
        )
    lines.append("")
    lines.append("Component counts per intersection:")
    lines.append("")
    for J in subsets(panel_complex.m):
        count = panel_complex.component_count(J)
        if count:
            lines.append(f"- {format_subset(J)}: {count}")
    lines.append("")
    path = out.write("report.md", "\n".join(lines))
    print(f"{len(panel_complex.faces)} faces; report written to {path}")
    return EXIT_OK


def cmd_decomp(args) -> int:
    panel_complex, kind, _ = panel_input_from_json(_load(args.input))
    pairs = _parse_spec(args.spec, panel_complex.m)
    fn = union_summands if args.mode == "X" else intersection_summands
    decomposition = fn(panel_complex, pairs, workers=args.parallel)
    out = _Output(args.input, args.out_dir)
    title = (
        "Decomposition by panel unions (contractible big factors)"
        if args.mode == "X"
        else "Decomposition by panel intersections (contractible small factors)"
    )
    report = _summand_report(
        title,
        decomposition,
        extra=[f"Input kind: {kind}", f"Sphere dimensions: {list(pairs.dims)}"],
    )
    out.write("report.md", report)
    csv_path = out.write(
        "summands.csv", _csv(decomposition.rows(), ("J", "degree", "rank", "torsion"))
    )
    out.write("summands.json", json.dumps(decomposition.to_json(), indent=2, sort_keys=True) + "\n")
    print(f"total: {decomposition.total}")
    print(f"tables written to {csv_path}")
    return EXIT_OK


def cmd_hochster(args) -> int:
    data = _load(args.input)
    if args.poset or "S" in data:
        source = poset_from_json(data["S"] if "S" in data else data)
        m = source.m
    else:
        source = complex_from_json(data["K"] if "K" in data else data)
        m = source.m
    pairs = _parse_spec(args.spec, m)
    table = hochster_table(source, pairs, workers=args.parallel)
    out = _Output(args.input, args.out_dir)
    report = _summand_report(
        "Hochster-type cohomology table",
        table,
        extra=[f"Sphere dimensions: {list(pairs.dims)}"],
    )
    out.write("report.md", report)
    out.write("summands.csv", _csv(table.rows(), ("J", "degree", "rank", "torsion")))
    print(f"total: {table.total}")
    return EXIT_OK


def cmd_ring(args) -> int:
    panel_complex, kind, _ = panel_input_from_json(_load(args.input))
    pairs = _parse_spec(args.spec, panel_complex.m)
    ring = sphere_pair_ring(panel_complex, pairs, coefficients=args.coefficients)
    out = _Output(args.input, args.out_dir)
    ring_json = json.dumps(ring.to_json(), indent=2, sort_keys=True) + "\n"
    path = out.write("ring.json", ring_json)
    lines = [
        "# Sphere-pair cohomology ring",
        "",
        f"Input kind: {kind}; sphere dimensions {list(pairs.dims)};"
        f" coefficients {args.coefficients}",
        "",
        f"Basis classes: {len(ring.basis)}",
        "",
        "| index | subset | internal degree | total degree | order |",
        "|---|---|---|---|---|",
    ]
    for i, el in enumerate(ring.basis):
        lines.append(
            f"| {i} | {format_subset(el.subset)} | {el.q} | {el.total_degree} |"
            f" {el.order or 'free'} |"
        )
    lines.append("")
    lines.append(f"Nonzero products: {sum(1 for t in ring.products.values() if t)}")
    lines.append("")
    out.write("report.md", "\n".join(lines))
    print(f"{len(ring.basis)} basis classes; ring written to {path}")
    return EXIT_OK


def cmd_facering(args) -> int:
    data = _load(args.input)
    out = _Output(args.input, args.out_dir)
    bound = args.degree_bound
    if args.variant == "sr":
        complex = complex_from_json(data["K"] if "K" in data else data)
        ring = stanley_reisner_ring(complex, x_degree=args.x_degree, coefficients=args.coefficients)
        title = "Stanley-Reisner face ring"
    elif args.variant == "poset":
        poset = poset_from_json(data["S"] if "S" in data else data)
        ring = PosetFaceRing(poset, x_degree=args.x_degree)
        title = "Simplicial poset face ring"
    else:
        panel_complex, kind, _ = panel_input_from_json(data)
        ring = topological_face_ring(
            panel_complex, x_degree=args.x_degree, coefficients=args.coefficients
        )
        title = "Topological face ring"
    hilbert = hilbert_series(ring, bound)
    rows = list(hilbert.rows())
    out.write("hilbert.csv", _csv(rows, ("degree", "rank", "torsion")))
    lines = [
        f"# {title}",
        "",
        f"Degree bound {bound}, generator degree {args.x_degree}.",
        "",
        "| degree | rank | torsion |",
        "|---|---|---|",
    ]
    lines.extend(f"| {d} | {r} | {t or '-'} |" for d, r, t in rows)
    lines.append("")
    out.write("report.md", "\n".join(lines))
    if not isinstance(ring, PosetFaceRing):
        out.write("ring.json", json.dumps(ring.to_json(), indent=2, sort_keys=True) + "\n")
    print(f"hilbert ranks: {hilbert.ranks}")
    return EXIT_OK


def cmd_verify(args) -> int:
    data = _load(args.input)
    panel_complex, kind, source = panel_input_from_json(data)
    pairs = _parse_spec(args.spec, panel_complex.m)
    classical_source = source if kind == "simplicial" else None
    result = verify_panel_complex(
        panel_complex, pairs, label=Path(args.input).stem, classical_source=classical_source
    )
    decomposition = union_summands(panel_complex, pairs, workers=args.parallel)
    out = _Output(args.input, args.out_dir)
    oracle_lines = []
    for name, group in result.oracles:
        oracle_lines.append(f"## Oracle: {name}")
        oracle_lines.append("")
        oracle_lines.extend(_group_lines(group))
        oracle_lines.append("")
    status = "MATCH" if result.matches else f"MISMATCH ({result.describe()})"
    report = _summand_report(
        "Formula vs brute-force verification",
        decomposition,
        extra=[
            f"Input kind: {kind}; sphere dimensions {list(pairs.dims)}",
            f"Status: {status}",
            "",
            *oracle_lines,
        ],
    )
    out.write("report.md", report)
    out.write(
        "summands.csv", _csv(decomposition.rows(), ("J", "degree", "rank", "torsion"))
    )
    if result.matches:
        print(f"verify: all degrees match ({result.formula})")
        return EXIT_OK
    name, degree, mine, theirs = result.first_mismatch
    print(f"verify: MISMATCH vs {name} at degree {degree}", file=sys.stderr)
    contributions = [
        f"  {format_subset(J)} -> {dict(g.as_dict()).get(degree)}"
        for J, g in decomposition.summands
        if degree in g.as_dict()
    ]
    for line in contributions:
        print(line, file=sys.stderr)
    return EXIT_INTERNAL


def cmd_selftest(args) -> int:
    results = sweep(
        max_vertices=args.max_vertices,
        sphere_dims=tuple(int(n) for n in args.dims.split(",")),
        workers=args.parallel,
    )
    failures = [r for r in results if not r.matches]
    for r in failures:
        print(r.describe(), file=sys.stderr)
    print(f"selftest: {len(results) - len(failures)}/{len(results)} cases match")
    return EXIT_OK if not failures else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="facelab",
        description="Exact cohomology of polyhedral products over spaces with faces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=False):
        p.add_argument("input", help="JSON input file")
        p.add_argument("--out-dir", default=None, help="directory for report files")
        p.add_argument(
            "--parallel",
            type=int,
            default=os.cpu_count() or 1,
            help="worker process cap (results are independent of this)",
        )
        if spec:
            p.add_argument(
                "--spec", required=True, help="comma-separated sphere dimensions n_j"
            )

    p = sub.add_parser("homology", help="Betti numbers and torsion of a complex")
    common(p)
    p.add_argument("--coefficients", default="Z", help="Z or a prime")
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("panelize", help="panel structure summary: faces, indices, components")
    p.add_argument("mode", choices=["generic", "simplicial", "poset", "partition"])
    common(p)
    p.set_defaults(fn=cmd_panelize)

    p = sub.add_parser("decomp", help="additive decomposition summand tables")
    common(p, spec=True)
    p.add_argument("--mode", choices=["X", "A"], default="X",
                   help="X: big factors contractible; A: small factors contractible")
    p.set_defaults(fn=cmd_decomp)

    p = sub.add_parser("hochster", help="Hochster-type table over a complex or poset")
    common(p, spec=True)
    p.add_argument("--poset", action="store_true", help="interpret the input as a poset")
    p.set_defaults(fn=cmd_hochster)

    p = sub.add_parser("ring", help="sphere-pair cohomology ring as JSON")
    common(p, spec=True)
    p.add_argument("--coefficients", default="Z", help="Z or a prime")
    p.set_defaults(fn=cmd_ring)

    p = sub.add_parser("facering", help="face rings and Hilbert series")
    common(p)
    p.add_argument("--variant", choices=["sr", "poset", "topological"], required=True)
    p.add_argument("--degree-bound", type=int, required=True)
    p.add_argument("--x-degree", type=int, default=2, help="degree of each generator")
    p.add_argument("--coefficients", default="Z", help="Z or a prime")
    p.set_defaults(fn=cmd_facering)

    p = sub.add_parser("verify", help="formula vs brute-force oracle; exit 0 iff equal")
    common(p, spec=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("selftest", help="exhaustive small-complex oracle sweep")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--dims", default="0,1", help="uniform sphere dimensions to sweep")
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (json.JSONDecodeError, SchemaError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except InvalidComplexError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ChainComplexError, AssertionError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
