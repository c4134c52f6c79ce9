"""Command-line front end.

Subcommands mirror the library modules: ``rewrite``, ``gram``, ``rep``,
``gicar``, ``bratteli``, ``symmetry``, ``ideal`` and the ``verify``
umbrella that runs the acceptance suite. Output is deterministic for a
fixed argument list and seed; JSON payloads carry ``"schema": 1`` and
encode complex numbers as ``[re, im]`` pairs.

Exit codes: 0 success, 1 a verification failed (a JSON line names the
failed invariant), 2 bad input (the message names the violated
constraint where one applies).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .acceptance import CHECKS, run_acceptance
from .bratteli import build_diagram, closed_edges, emit_diagram, numeric_edges
from .fock import NotPositive, gram_block, orthonormalize
from .gicar import decompose
from .ideal import verify_ideal
from .qmatrix import QMatrix, QMatrixError
from .rep import TruncatedFock, creation, verify_relations
from .rewrite import normal_form
from .symmetry import NotUnitary, UnitaryCandidate, group_axiom_sample, relation_compatibility
from .words import OccVector, Word

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2


class BadInput(Exception):
    """Invalid arguments or files; maps to exit code 2."""


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _fail_json(invariant: str, extra: dict | None = None) -> None:
    payload = {"schema": 1, "passed": False, "invariant": invariant}
    if extra:
        payload.update(extra)
    print(_dumps(payload))


def _load_q(args: argparse.Namespace) -> QMatrix:
    if getattr(args, "q", None) and getattr(args, "preset", None):
        raise BadInput("choose one coefficient source: --q FILE or --preset NAME")
    if getattr(args, "q", None):
        try:
            payload = json.loads(Path(args.q).read_text())
        except OSError as exc:
            raise BadInput(f"cannot read coefficient file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise BadInput(f"coefficient file is not valid JSON: {exc}") from None
        return QMatrix.from_json(payload)
    preset = getattr(args, "preset", None)
    if preset is None:
        raise BadInput("provide a coefficient matrix with --q FILE or --preset NAME")
    n = args.n
    if preset == "zero":
        return QMatrix.zero(n)
    if preset == "random" or preset.startswith("random:"):
        parts = preset.split(":")
        seed = int(parts[1]) if len(parts) > 1 and parts[1] else args.seed
        max_modulus = float(parts[2]) if len(parts) > 2 else 0.8
        return QMatrix.random(n, seed=seed, max_modulus=max_modulus)
    raise BadInput(f"unknown preset {preset!r}; expected zero or random[:SEED[:MAXMOD]]")


def _figures_dir(args: argparse.Namespace) -> Path | None:
    target = getattr(args, "figures", None)
    if target is None:
        return None
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _complex_str(z: complex) -> str:
    return f"{z.real:+.12g}{z.imag:+.12g}j"


def cmd_rewrite(args: argparse.Namespace) -> int:
    q = _load_q(args)
    q.require_isom()
    try:
        word = Word.from_text(args.word)
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    result = normal_form(word, q)
    if args.format == "json":
        print(_dumps({
            "schema": 1,
            "input": str(word),
            "coefficient": _pair(result.coefficient),
            "mu": list(result.mu),
            "sigma": list(result.sigma),
            "normal_form": str(result.word()),
        }))
    else:
        print(f"input      : {word}")
        print(f"coefficient: {_complex_str(result.coefficient)}")
        print(f"normal form: {result.word()}")
    return EXIT_OK


def cmd_gram(args: argparse.Namespace) -> int:
    q = _load_q(args)
    try:
        entries = tuple(int(part) for part in args.v.split(","))
    except ValueError:
        raise BadInput(f"--v expects comma-separated integers, got {args.v!r}") from None
    if len(entries) != q.n or any(e < 0 for e in entries):
        raise BadInput(f"--v needs {q.n} non-negative entries for this matrix")
    v = OccVector(entries)
    try:
        block = gram_block(v, q)
    except NotPositive as exc:
        _fail_json("gram positive-definite", {"v": list(entries), "min_pivot": exc.min_pivot})
        return EXIT_CHECK_FAILED
    det = complex(np.linalg.det(block.gram))
    change = orthonormalize(block)
    if args.format == "json":
        print(_dumps({
            "schema": 1,
            "v": list(entries),
            "basis": [list(w) for w in block.basis],
            "gram": [[_pair(z) for z in row] for row in block.gram],
            "determinant": _pair(det),
            "positive": True,
            "min_pivot": block.min_pivot,
            "orthonormalizer": [[_pair(z) for z in row] for row in change],
        }))
    else:
        print(f"block v = {v}  (dimension {block.dim})")
        print("basis order:")
        for w in block.basis:
            print("  " + " ".join(f"a{i}" for i in w))
        print("gram matrix:")
        for row in block.gram:
            print("  [" + ", ".join(_complex_str(z) for z in row) + "]")
        print(f"determinant: {_complex_str(det)}")
        print(f"positive-definite: yes (min pivot {block.min_pivot:.6e})")
        print("orthonormal change of basis:")
        for row in change:
            print("  [" + ", ".join(_complex_str(z) for z in row) + "]")
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import gram_heatmap, save_figure
        tag = "-".join(str(e) for e in entries)
        save_figure(gram_heatmap(block), fig_dir / f"gram_v{tag}.png")
        _write_csv(fig_dir / f"gram_v{tag}.csv",
                   ["row", "col", "re", "im"],
                   [[a, b, block.gram[a, b].real, block.gram[a, b].imag]
                    for a in range(block.dim) for b in range(block.dim)])
    return EXIT_OK


def cmd_rep(args: argparse.Namespace) -> int:
    q = _load_q(args)
    q.require_isom()
    t = TruncatedFock(q, args.L)
    if not args.verify:
        if args.format == "json":
            print(_dumps({
                "schema": 1,
                "n": t.n,
                "L": t.L,
                "total_dim": t.total_dim,
                "blocks": [{"v": list(v.entries), "dim": t.dims[v]} for v in t.blocks],
            }))
        else:
            print(f"truncated representation: n={t.n}, L={t.L}, total dimension {t.total_dim}")
            for v in t.blocks:
                print(f"  block {v}: dim {t.dims[v]}")
        return EXIT_OK
    report = verify_relations(t, tol=args.tol)
    if args.format == "json":
        payload = report.to_json()
        if not report.passed:
            payload["invariant"] = "defining relations"
        print(_dumps(payload))
    else:
        for line in report.lines():
            print(line)
        if not report.passed:
            _fail_json("defining relations", {"max_residual": report.max_residual})
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import residual_bars, save_figure
        labels = [f"a{i}*a{i}-1" for i in sorted(report.isometry)]
        labels += [f"a{i}*a{j}" for i, j in sorted(report.cross)]
        residuals = [report.isometry[i] for i in sorted(report.isometry)]
        residuals += [report.cross[key] for key in sorted(report.cross)]
        save_figure(residual_bars(labels, residuals, report.tol, "relation residuals"),
                    fig_dir / "relations.png")
        _write_csv(fig_dir / "relations.csv", ["relation", "residual"],
                   list(zip(labels, residuals)))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_gicar(args: argparse.Namespace) -> int:
    q = _load_q(args)
    q.require_isom()
    L = args.L if args.L is not None else q.n * (args.k + 1)
    t = TruncatedFock(q, L)
    report = decompose(args.k, t, tol=args.tol)
    if args.format == "json":
        payload = report.to_json()
        if not report.passed:
            payload["invariant"] = "central unit decomposition"
        print(_dumps(payload))
    else:
        print(f"block decomposition at k={args.k} (n={q.n}, L={L})")
        for blk in report.blocks:
            print(f"  v={blk.v}: matrix block of rank {blk.unit_rank}, "
                  f"corner dimension {blk.checks['span_dim']}")
        print(f"  sum to identity : {report.sum_to_identity:.3e}")
        print(f"  orthogonality   : {report.pairwise_orthogonality:.3e}")
        print(f"  max commutator  : {report.max_commutator:.3e}")
        print(f"  total dimension : {report.total_dim}")
        print(f"  verdict         : {'pass' if report.passed else 'FAIL'}")
        if not report.passed:
            _fail_json("central unit decomposition", {"max_commutator": report.max_commutator})
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import block_dims_figure, save_figure
        labels = [str(blk.v) for blk in report.blocks]
        dims = [blk.dim for blk in report.blocks]
        save_figure(block_dims_figure(labels, dims, f"block dimensions at k={args.k}"),
                    fig_dir / "gicar_blocks.png")
        _write_csv(fig_dir / "gicar_blocks.csv", ["v", "dim", "unit_rank"],
                   [[str(blk.v), blk.dim, blk.unit_rank] for blk in report.blocks])
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_bratteli(args: argparse.Namespace) -> int:
    if args.q or args.preset:
        n = _load_q(args).n
    else:
        n = args.n
    if args.numeric:
        q = _load_q(args)
        q.require_isom()
        t = TruncatedFock(q, n * (args.k_max + 1))
        for k in range(1, args.k_max + 1):
            closed = sorted((e.v.entries, e.u.entries, e.m) for e in closed_edges(n, k))
            numeric = sorted((e.v.entries, e.u.entries, e.m)
                             for e in numeric_edges(k, t) if e.m > 0)
            if closed != numeric:
                _fail_json("embedding multiplicities match closed form", {"k": k})
                return EXIT_CHECK_FAILED
    print(emit_diagram(args.k_max, args.format, n), end="")
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import bratteli_figure, save_figure
        diagram = build_diagram(n, args.k_max)
        save_figure(bratteli_figure(diagram), fig_dir / "bratteli.png")
        _write_csv(fig_dir / "bratteli_edges.csv", ["k", "v", "u", "m"],
                   [[e.k, " ".join(map(str, e.v.entries)), " ".join(map(str, e.u.entries)), e.m]
                    for e in diagram.edges])
    return EXIT_OK


def cmd_symmetry(args: argparse.Namespace) -> int:
    q = _load_q(args)
    if args.u is None and args.sample is None:
        raise BadInput("symmetry needs --u FILE or --sample TRIALS")
    if args.u is not None:
        try:
            payload = json.loads(Path(args.u).read_text())
            rows = payload["u"]
            matrix = np.array([[complex(c[0], c[1]) for c in row] for row in rows])
        except OSError as exc:
            raise BadInput(f"cannot read unitary file: {exc}") from None
        except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
            raise BadInput(f"unitary file needs {{\"u\": [[[re,im],...],...]}}: {exc}") from None
        try:
            candidate = UnitaryCandidate(matrix)
        except NotUnitary as exc:
            raise BadInput(str(exc)) from None
        if candidate.matrix.shape[0] != q.n:
            raise BadInput(f"unitary is {candidate.matrix.shape[0]}x{candidate.matrix.shape[0]}, "
                           f"coefficient matrix needs {q.n}x{q.n}")
        compatible, witness = relation_compatibility(candidate, q, tol=args.tol)
        if args.format == "json":
            payload = {
                "schema": 1,
                "compatible": compatible,
                "witness": list(witness) if witness else None,
            }
            if not compatible:
                payload["invariant"] = "unitary relation compatibility"
            print(_dumps(payload))
        else:
            if compatible:
                print("compatible: the unitary preserves the commutation coefficients")
            else:
                print(f"incompatible: witness indices (i,j,k,l) = {witness}")
                _fail_json("unitary relation compatibility", {"witness": list(witness)})
        return EXIT_OK if compatible else EXIT_CHECK_FAILED
    report = group_axiom_sample(q, trials=args.sample, seed=args.seed)
    if args.format == "json":
        payload = report.to_json()
        if not report.passed:
            payload["invariant"] = "sampled symmetry group axioms"
        print(_dumps(payload))
    else:
        print(f"sampled group axioms over {report.trials} diagonal unitaries (n={report.n})")
        print(f"  identity passes       : {report.identity_passes}")
        print(f"  diagonal passes       : {report.diagonal_passes}/{report.trials}")
        print(f"  products pass         : {report.product_passes}/{report.product_trials}")
        print(f"  adjoints pass         : {report.adjoint_passes}/{report.adjoint_trials}")
        print(f"  diagonal separates    : {report.distinct_diagonal}")
        print(f"  dense unitaries fail  : {report.nondiagonal_failures}/{report.nondiagonal_trials}")
        print(f"  verdict               : {'pass' if report.passed else 'FAIL'}")
        if not report.passed:
            _fail_json("sampled symmetry group axioms")
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import block_dims_figure, save_figure
        labels = ["diagonal", "products", "adjoints", "dense rejected"]
        counts = [report.diagonal_passes, report.product_passes,
                  report.adjoint_passes, report.nondiagonal_failures]
        save_figure(block_dims_figure(labels, counts, "symmetry sampling outcomes"),
                    fig_dir / "symmetry_sample.png")
        _write_csv(fig_dir / "symmetry_sample.csv", ["category", "count"],
                   list(zip(labels, counts)))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_ideal(args: argparse.Namespace) -> int:
    q = _load_q(args)
    q.require_isom()
    t = TruncatedFock(q, args.L)
    report = verify_ideal(t, max_len=args.max_len, tol=args.tol)
    if args.format == "json":
        payload = report.to_json()
        if not report.passed:
            payload["invariant"] = "matrix unit relations"
        print(_dumps(payload))
    else:
        print(f"compact-ideal witness at n={report.n}, L={report.L}, words up to length {report.max_len}")
        print(f"  rank of vacuum complement p : {report.rank_p}")
        print(f"  spectral gap                : {report.spectral_gap:.6e}")
        print(f"  worst product residual      : {report.worst_product_residual:.3e}")
        print(f"  worst adjoint residual      : {report.worst_adjoint_residual:.3e}")
        print(f"  worst diagonal projection   : {report.worst_projection_residual:.3e}")
        print(f"  p annihilates generators    : {report.worst_annihilation_residual:.3e}")
        print(f"  independent units           : {report.independence_rank}/{report.family_size}")
        print(f"  verdict                     : {'pass' if report.passed else 'FAIL'}")
        if not report.passed:
            _fail_json("matrix unit relations", report.to_json()["worst_residuals"])
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .ideal import SUPPORT_THRESHOLD
        from .plots import save_figure, spectrum_figure
        total = None
        for i in range(1, t.n + 1):
            a = creation(i, t)
            term = a @ a.adjoint()
            total = term if total is None else total + term
        eigenvalues = np.linalg.eigvalsh(total.dense()).tolist()
        save_figure(spectrum_figure(eigenvalues, SUPPORT_THRESHOLD),
                    fig_dir / "ideal_spectrum.png")
        _write_csv(fig_dir / "ideal_spectrum.csv", ["index", "eigenvalue"],
                   list(enumerate(eigenvalues)))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    extra = []
    if args.q or args.preset:
        extra.append(_load_q(args))
    names = args.checks.split(",") if args.checks else None
    try:
        results = run_acceptance(names, extra_q=extra)
    except KeyError as exc:
        raise BadInput(str(exc.args[0])) from None
    all_passed = all(r.passed for r in results)
    if args.format == "json":
        payload = {
            "schema": 1,
            "checks": [r.to_json() for r in results],
            "passed": all_passed,
        }
        if not all_passed:
            payload["invariant"] = "acceptance checks"
            payload["failed"] = [r.name for r in results if not r.passed]
        print(_dumps(payload))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        if not all_passed:
            failed = [r.name for r in results if not r.passed]
            _fail_json("acceptance checks", {"failed": failed})
    fig_dir = _figures_dir(args)
    if fig_dir is not None:
        from .plots import acceptance_figure, save_figure
        save_figure(acceptance_figure([r.name for r in results],
                                      [r.elapsed for r in results],
                                      [r.limit for r in results],
                                      [r.passed for r in results]),
                    fig_dir / "acceptance.png")
        _write_csv(fig_dir / "acceptance.csv", ["check", "passed", "elapsed", "limit"],
                   [[r.name, r.passed, f"{r.elapsed:.4f}", r.limit] for r in results])
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def _build_parser() -> argparse.ArgumentParser:
    qsrc = argparse.ArgumentParser(add_help=False)
    qsrc.add_argument("--q", metavar="FILE", help="coefficient matrix JSON file")
    qsrc.add_argument("--preset", metavar="NAME",
                      help="zero | random[:SEED[:MAXMOD]] (with --n)")
    qsrc.add_argument("--n", type=int, default=2, help="generator count for presets (default 2)")
    qsrc.add_argument("--seed", type=int, default=0, help="seed for presets and sampling (default 0)")
    figs = argparse.ArgumentParser(add_help=False)
    figs.add_argument("--figures", metavar="DIR",
                      help="write PNG figures and CSV data files into DIR")

    parser = argparse.ArgumentParser(
        prog="qisom",
        description="Finite-dimensional structure of the deformed isometry algebra: "
                    "rewriting, inner products, block decompositions and their checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rewrite", parents=[qsrc], help="reduce a word to its normal form")
    p.add_argument("--word", required=True, metavar="TEXT",
                   help='word such as "a1* a2 a1" (trailing * marks the adjoint letter)')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("gram", parents=[qsrc, figs], help="Gram block of one occupation vector")
    p.add_argument("--v", required=True, metavar="V", help='occupation vector such as "1,1"')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("rep", parents=[qsrc, figs], help="truncated creation representation")
    p.add_argument("--L", type=int, default=3, help="truncation level (default 3)")
    p.add_argument("--verify", action="store_true", help="check the defining relations")
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("gicar", parents=[qsrc, figs], help="central units and block decomposition")
    p.add_argument("--k", type=int, default=1, help="filtration level (default 1)")
    p.add_argument("--L", type=int, default=None,
                   help="truncation level (default n*(k+1))")
    p.add_argument("--report", action="store_true",
                   help="accepted for compatibility; the report is always produced")
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=cmd_gicar)

    p = sub.add_parser("bratteli", parents=[qsrc, figs], help="embedding diagram of the filtration")
    p.add_argument("--k-max", dest="k_max", type=int, default=2,
                   help="deepest filtration level (default 2)")
    p.add_argument("--numeric", action="store_true",
                   help="cross-check multiplicities against matrix ranks first")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_bratteli)

    p = sub.add_parser("symmetry", parents=[qsrc, figs], help="unitary membership and sampling")
    p.add_argument("--u", metavar="FILE", help='unitary JSON file {"u": [[[re,im],...],...]}')
    p.add_argument("--sample", type=int, metavar="TRIALS",
                   help="sample the group axioms with this many trials")
    p.add_argument("--tol", type=float, default=1e-10, help="membership tolerance (default 1e-10)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("ideal", parents=[qsrc, figs], help="vacuum projection and matrix units")
    p.add_argument("--L", type=int, default=4, help="truncation level (default 4)")
    p.add_argument("--max-len", dest="max_len", type=int, default=2,
                   help="longest word labeling a matrix unit (default 2)")
    p.add_argument("--tol", type=float, default=1e-8, help="unit relation tolerance (default 1e-8)")
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("verify", parents=[qsrc, figs], help="run the acceptance suite")
    p.add_argument("--checks", metavar="NAMES",
                   help="comma-separated subset of: " + ", ".join(CHECKS))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except QMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
