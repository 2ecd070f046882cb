"""Command-line interface.

Exit codes: 0 on success, 1 on a semantic failure (failed validation or a
failed check), 2 on usage or I/O errors.  All outputs are deterministic for
a fixed input and flag set; JSON is emitted with sorted keys and floats at
17 significant digits.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import chamber, fixtures, oracles, sectors, spectra, transfer, verify
from .io_utils import dumps_canonical, rational_str
from .rootdata import Coweight

USAGE_ERROR = 2
CHECK_ERROR = 1


def _load_input(token: str) -> chamber.ChamberSystem:
    if token in fixtures.FIXTURES:
        return fixtures.load_fixture(token)
    path = Path(token)
    if not path.exists():
        raise FileNotFoundError(f"no such input: {token}")
    return chamber.load(str(path))


def _parse_mu(text: str, rank: int) -> Coweight:
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != rank:
        raise ValueError(f"--mu needs {rank} comma-separated integers")
    coords = tuple(int(p) for p in parts)
    mu = Coweight(coords)
    if not mu.dominant:
        raise ValueError("--mu must be dominant (nonnegative coordinates)")
    return mu


def _parse_theta(text: str) -> Fraction:
    theta = Fraction(text)
    if not (0 < theta < 1):
        raise ValueError("--theta must lie strictly between 0 and 1")
    return theta


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    system = _load_input(args.input)
    report = system.validate()
    print(report.summary())
    return 0 if report.passed else CHECK_ERROR


def cmd_germs(args) -> int:
    system = _load_input(args.input)
    space = sectors.SectorSpace(system, check=not args.force, threads=args.threads)
    table = space.table(args.radius)
    _emit(dumps_canonical(sectors.export_germs_json(table)), args.out)
    return 0


def cmd_transfer(args) -> int:
    system = _load_input(args.input)
    space = sectors.SectorSpace(system, check=not args.force, threads=args.threads)
    mu = _parse_mu(args.mu, system.root_system.rank)
    n = args.radius - mu.norm
    if n < 1:
        print(
            f"germ budget {args.radius} cannot hold the operator for mu={args.mu}: "
            f"building it on F_n consumes germ radius n + {mu.norm}; "
            f"need --radius >= {mu.norm + 1}",
            file=sys.stderr,
        )
        return CHECK_ERROR
    tm = transfer.transfer_matrix(space, mu, n)
    header = {
        "mu": list(mu.coords),
        "radius": n,
        "M_mu": tm.m_mu,
        "dim": tm.dim,
    }
    if args.format == "csv":
        import json

        lines = [json.dumps(header, sort_keys=True)]
        for h in range(tm.dim):
            lines.append(
                ",".join(rational_str(tm.entry(h, g)) for g in range(tm.dim))
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        doc = dict(header)
        doc["entries"] = [
            [rational_str(tm.entry(h, g)) for g in range(tm.dim)]
            for h in range(tm.dim)
        ]
        _emit(dumps_canonical(doc), args.out)
    return 0


def _generator_matrices(space, gens=None):
    system = space.system
    rank = system.root_system.rank
    if gens is None:
        gens = [
            Coweight(tuple(1 if j == i else 0 for j in range(rank)))
            for i in range(rank)
        ]
    mats, exact = [], []
    for mu in gens:
        tm = transfer.transfer_matrix(space, mu, 1)
        mats.append(tm.dense())
        exact.append((tm.counts, tm.m_mu))
    return gens, mats, exact


def _parse_generators(text: str, rank: int):
    gens = []
    for part in text.split(";"):
        coords = tuple(int(x) for x in part.split(","))
        if len(coords) != rank:
            raise ValueError(f"each generator needs {rank} coordinates")
        mu = Coweight(coords)
        if not mu.dominant or mu.norm == 0:
            raise ValueError("generators must be nonzero dominant coweights")
        gens.append(mu)
    return gens


def cmd_spectrum(args) -> int:
    system = _load_input(args.input)
    space = sectors.SectorSpace(system, check=not args.force)
    rank = system.root_system.rank
    gens = _parse_generators(args.generators, rank) if args.generators else None
    gens, mats, exact = _generator_matrices(space, gens)
    report = spectra.taylor_report(
        mats,
        float(args.theta),
        exact=exact,
        seed=args.seed,
        tol_res=args.tol_res,
        tol_rank=args.tol_rank,
        tol_merge=args.tol_merge,
    )
    doc = {
        "format": "spectrum/v1",
        "theta": float(args.theta),
        "generators": [list(g.coords) for g in gens],
        "dimF1": report.dim,
        "joint": [
            {
                "chi": [complex(c) for c in j.chi],
                "mult": j.multiplicity,
                "residual": j.residual,
                "taylor": bool(report.taylor.get(j.chi, False)),
                "cohomology": list(report.cohomology.get(j.chi, ())),
            }
            for j in report.joint
        ],
        "offspectrum_samples": [
            {
                "chi": [complex(c) for c in chi],
                "cohomology": list(report.cohomology.get(chi, ())),
            }
            for chi in report.offspectrum
        ],
    }
    _emit(dumps_canonical(doc), args.out)
    if report.mismatches:
        print("Taylor/joint mismatch: " + "; ".join(report.mismatches), file=sys.stderr)
        return CHECK_ERROR
    return 0


def _parse_chi(text: str, rank: int):
    parts = text.split(";") if ";" in text else text.split(",")
    vals = tuple(complex(p) for p in parts)
    if len(vals) != rank:
        raise ValueError(f"--chi needs {rank} complex entries")
    return vals


def cmd_koszul(args) -> int:
    system = _load_input(args.input)
    space = sectors.SectorSpace(system, check=not args.force)
    gens, mats, exact = _generator_matrices(space)
    chi = _parse_chi(args.chi, len(gens)) if args.chi else tuple(1.0 for _ in gens)
    rec = spectra.koszul_complexes(mats, chi, tol_rank=args.tol_rank)
    doc = {
        "format": "koszul/v1",
        "chi": [complex(c) for c in rec.chi],
        "space_dims": list(rec.cochain_dims),
        "cohomology": list(rec.cohomology),
        "homology": list(rec.homology),
        "max_defect": rec.max_defect,
        "ambiguous": rec.ambiguous,
    }
    _emit(dumps_canonical(doc), args.out)
    return 0


def cmd_verify(args) -> int:
    names = list(fixtures.FIXTURES) if args.input == "all" else [args.input]
    all_ok = True
    for name in names:
        system = _load_input(name)
        edges = None
        if name in fixtures.FIXTURES and system.root_system.rank == 1:
            doc = fixtures.fixture_documents()[name]
            edges = [tuple(e) for e in doc["edges"]]
        print(f"== {name} ==")
        radius = args.radius if args.radius is not None else 3
        results = verify.run_suite(name, system, metric_radius=radius, edges=edges)
        for res in results:
            print(res.line())
            all_ok = all_ok and res.passed
    return 0 if all_ok else CHECK_ERROR


def cmd_ihara(args) -> int:
    path = Path(args.input)
    if args.input in fixtures.FIXTURES:
        doc = fixtures.fixture_documents()[args.input]
    else:
        import json

        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("format") != chamber.GRAPH_FORMAT:
        print("ihara needs a graph/v1 input", file=sys.stderr)
        return USAGE_ERROR
    edges = [tuple(e) for e in doc["edges"]]
    vals, residual, des, q = oracles.ihara_spectrum(edges)
    doc = {
        "format": "ihara/v1",
        "directed_edges": len(des),
        "q": q,
        "identity_residual": residual,
        "eigenvalues": [complex(v) for v in vals],
    }
    _emit(dumps_canonical(doc), args.out)
    return 0


def cmd_gen_graph(args) -> int:
    if args.kind == "k33":
        edges = fixtures.k33_edges()
    elif args.kind == "q3":
        edges = fixtures.q3_edges()
    elif args.kind == "biregular":
        edges = fixtures.biregular_edges()
    else:
        print(f"unknown graph kind {args.kind}", file=sys.stderr)
        return USAGE_ERROR
    doc = {"format": chamber.GRAPH_FORMAT, "edges": [list(e) for e in edges]}
    _emit(dumps_canonical(doc), args.out)
    return 0


def cmd_gen_a2(args) -> int:
    doc = fixtures.a2_presentation(args.q)
    _emit(dumps_canonical(doc), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="weylflow",
        description="Shift dynamics and transfer-operator spectra on compact "
        "quotients of affine buildings",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument(
                "input",
                help="path to an input file, a bundled fixture name "
                f"({', '.join(fixtures.FIXTURES)}), or 'all' for verify",
            )
        sp.add_argument("--out", help="write output to a file instead of stdout")
        sp.add_argument("--threads", type=int, default=0,
                        help="cap worker threads (0 = number of cores)")
        sp.add_argument("--force", action="store_true",
                        help="proceed even if the local-building checks fail")

    sp = sub.add_parser("validate", help="run the local-building checks")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    def positive_int(text):
        v = int(text)
        if v < 1:
            raise argparse.ArgumentTypeError("must be >= 1")
        return v

    sp = sub.add_parser("germs", help="enumerate sector germs")
    common(sp)
    sp.add_argument("--radius", type=positive_int, default=1)
    sp.set_defaults(func=cmd_germs)

    sp = sub.add_parser("transfer", help="assemble a transfer matrix")
    common(sp)
    sp.add_argument("--mu", required=True, help="comma-separated generator exponents")
    sp.add_argument("--radius", type=int, default=2,
                    help="germ radius budget; the operator acts on F_(radius - |mu|)")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_transfer)

    sp = sub.add_parser("spectrum", help="joint spectra and Taylor classification on F_1")
    common(sp)
    def positive_float(text):
        v = float(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    sp.add_argument("--theta", type=_parse_theta, default=Fraction(1, 2))
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=spectra.DEFAULT_SEED)
    sp.add_argument("--tol-res", type=positive_float, default=spectra.TOL_RES)
    sp.add_argument("--tol-rank", type=positive_float, default=spectra.TOL_RANK)
    sp.add_argument("--tol-merge", type=positive_float, default=spectra.TOL_MERGE)
    sp.add_argument("--generators", help="semicolon-separated coweights, e.g. '1,0;0,1'")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("koszul", help="Koszul cohomology of one character")
    common(sp)
    sp.add_argument("--chi", help="complex values per generator, e.g. '1+0j,0.5j'")
    sp.add_argument("--tol-rank", type=float, default=spectra.TOL_RANK)
    sp.set_defaults(func=cmd_koszul)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    sp.add_argument("--radius", type=int, default=None,
                    help="metric-suite germ radius (default 3)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ihara", help="independent edge-operator oracle for graphs")
    common(sp)
    sp.set_defaults(func=cmd_ihara)

    sp = sub.add_parser("gen-graph", help="emit a bundled graph input file")
    common(sp, with_input=False)
    sp.add_argument("--kind", choices=("k33", "q3", "biregular"), required=True)
    sp.set_defaults(func=cmd_gen_graph)

    sp = sub.add_parser("gen-a2", help="emit the bundled triangle presentation")
    common(sp, with_input=False)
    sp.add_argument("--q", type=int, default=2)
    sp.set_defaults(func=cmd_gen_a2)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
