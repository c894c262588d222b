"""``binorm-lab``: command-line front end.

Every subcommand prints one JSON report on stdout (keys sorted, so equal
inputs give byte-identical output).  Exit status: 0 when the computation
finished and every internal check passed, 1 when a check or verification
failed, 2 for usage and input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction

from . import certificates as certs
from .builtin import builtin_group, projective_extension
from .chevalley import check_relation_batch, root_system
from .factorize import bounded_length, factorize_bounded, factorize_euclid
from .finite import GroupTooLarge, element_cap
from .groups import FreeWord, Matrix, ModMatrix, Perm
from .metrics import (
    NotPerfect,
    biinvariant_norm_table,
    commutator_length_table,
    extension_norm_bound,
    fekete_violations,
    running_minimum,
    translation_length,
    word_norm_table,
)
from .quasimorphisms import (
    BrooksQM,
    binorm_lower_bound,
    empirical_defect,
    evaluate,
    homogenize,
    undistorted_certificate,
)
from .rings import RingDescriptor, parse, ring_by_name, to_string
from .verify import verify_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- input/output helpers -----------------------------------------------------


def _emit(report: dict, out: str | None = None):
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _write_atomic(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".binorm-", suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _element_json(g):
    if isinstance(g, Perm):
        return g.to_cycles()
    if isinstance(g, (Matrix, ModMatrix)):
        return g.to_json()
    if isinstance(g, FreeWord):
        return g.to_string() or "1"
    return str(g)


def _fraction(x: Fraction) -> str:
    return str(Fraction(x))


def read_matrix(path: str, ring_name: str | None = None, n: int | None = None) -> Matrix:
    """Load ``{"ring": ..., "n": ..., "entries": [[...]]}``; entries are decimal strings."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc}") from None
    try:
        ring = ring_by_name(data["ring"]) if isinstance(data["ring"], str) else RingDescriptor.from_json(data["ring"])
        size = int(data["n"])
        rows = [[parse(x, ring) for x in row] for row in data["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix file {path}: {exc}") from None
    if ring_name is not None and ring_by_name(ring_name) != ring:
        raise UsageError(f"--ring {ring_name} does not match the file's ring {ring.name}")
    if n is not None and n != size:
        raise UsageError(f"--n {n} does not match the file's n = {size}")
    if len(rows) != size or any(len(r) != size for r in rows):
        raise UsageError(f"entries are not a {size}x{size} array")
    return Matrix(rows, ring)


def matrix_json(M: Matrix) -> dict:
    return {"ring": M.ring.name, "n": M.n, "entries": M.to_json()}


def _group(spec: str):
    try:
        return builtin_group(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gens(bg, which: str):
    if which == "default":
        return bg.generators
    if which == "reflections":
        if not bg.name.startswith("dihedral:"):
            raise UsageError("--gens reflections only applies to dihedral groups")
        return bg.generators
    raise UsageError(f"unknown generator choice {which!r}")


def _table_report(spec: str, gens: str, table, full: bool, kind: str) -> tuple[dict, int]:
    axioms = table.check_axioms()
    report = {
        "command": kind,
        "group": spec,
        "group_order": table.group_size,
        "generators": gens,
        "closure_size": int(len(table.generator_indices)),
        "diameter": table.diameter,
        "histogram": {str(k): v for k, v in table.histogram().items()},
        "axioms": axioms,
    }
    if full:
        report["table"] = [[_element_json(table.group.element(i)), int(v)] for i, v in enumerate(table.norms)]
    return report, EXIT_OK if all(axioms.values()) else EXIT_FAIL


# -- finite groups ------------------------------------------------------------


def cmd_finite_binorm(args) -> int:
    bg = _group(args.group)
    table = biinvariant_norm_table(_gens(bg, args.gens), bg.group)
    report, code = _table_report(args.group, args.gens, table, args.full, "finite-binorm")
    _emit(report)
    return code


def cmd_finite_norm(args) -> int:
    bg = _group(args.group)
    table = word_norm_table(_gens(bg, args.gens), bg.group)
    report, code = _table_report(args.group, args.gens, table, args.full, "finite-norm")
    report["conjugation_invariant"] = table.conjugation_invariant
    _emit(report)
    return code


def cmd_cl(args) -> int:
    bg = _group(args.group)
    try:
        table = commutator_length_table(bg.group)
    except NotPerfect as exc:
        _emit({"command": "cl", "group": args.group, "perfect": False, "commutator_subgroup_index": exc.index, "message": str(exc)})
        return EXIT_FAIL
    report, code = _table_report(args.group, "commutators", table, args.full, "cl")
    report["perfect"] = True
    report["scl"] = "0"
    _emit(report)
    return code


def _parse_gen_word(text: str, count: int) -> list[int]:
    try:
        idx = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--element must be comma-separated generator indices, got {text!r}") from None
    if any(not 0 <= i < count for i in idx):
        raise UsageError(f"generator indices must lie in 0..{count - 1}")
    return idx


def cmd_translation_length(args) -> int:
    if args.powers < 1:
        raise UsageError("--powers must be positive")
    bg = _group(args.group)
    gens = list(bg.generators.elements)
    g = gens[0].identity()
    for i in _parse_gen_word(args.element, len(gens)):
        g = g * gens[i]
    table = biinvariant_norm_table(bg.generators, bg.group)
    tau_upper, seq = translation_length(g, table.norm, args.powers)
    runmin = running_minimum(seq)
    violations = fekete_violations(seq)
    order = int(bg.group.element_orders()[bg.group.index(g)])
    monotone = all(b <= a for a, b in zip(runmin, runmin[1:]))
    report = {
        "command": "translation-length",
        "group": args.group,
        "element": _element_json(g),
        "element_order": order,
        "powers": args.powers,
        "norms_of_powers": seq,
        "running_minimum": [_fraction(x) for x in runmin],
        "tau_upper": _fraction(tau_upper),
        "tau": "0",  # finite order: g^order = 1
        "fekete_violations": violations,
        "running_minimum_nonincreasing": monotone,
    }
    _emit(report)
    return EXIT_OK if not violations and monotone else EXIT_FAIL


def cmd_extension_bound(args) -> int:
    try:
        E = projective_extension(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = extension_norm_bound(E)
    d = {k: v for k, v in rep.details.items() if not k.endswith("_table")}
    _emit(
        {
            "command": "extension-bound",
            "group": args.group,
            "m": rep.m,
            "kappa": rep.kappa,
            "diameter": rep.diameter,
            "bound": rep.m + rep.kappa,
            "elementwise": rep.elementwise,
            "passed": rep.passed,
            **d,
        }
    )
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- matrices and certificates ------------------------------------------------


def cmd_factorize(args) -> int:
    A = read_matrix(args.input, args.ring, args.n)
    try:
        fac = factorize_bounded(A) if args.mode == "bounded" else factorize_euclid(A)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {
        "command": "factorize",
        "mode": args.mode,
        "input": matrix_json(A),
        "factors": [{"root": list(f.root), "t": to_string(f.t)} for f in fac.factors],
        "count": len(fac.factors),
        "verified": fac.product() == A,
    }
    if args.mode == "bounded":
        report.update(bound=fac.bound, tail=fac.tail, head=len(fac.factors) - fac.tail, fell_back=fac.fell_back)
    _emit(report)
    return EXIT_OK if report["verified"] else EXIT_FAIL


def cmd_certify(args) -> int:
    A = read_matrix(args.input, args.ring, args.n)
    S = certs.default_generating_set(A.n, A.ring, superdiagonal=args.superdiagonal)
    try:
        cert = certs.binorm_certificate(A, S)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    check = verify_certificate(cert)
    if args.out:
        _write_atomic(args.out, json.dumps(certs.certificate_to_json(cert), indent=1) + "\n")
    _emit(
        {
            "command": "certify",
            "input": matrix_json(A),
            "out": args.out,
            "superdiagonal": args.superdiagonal,
            "length": cert.length,
            "bound": cert.claimed_norm_bound,
            "stable_range_limit": 2 * bounded_length(A.n),
            "note": cert.note,
            "verification": check.as_dict(),
        }
    )
    return EXIT_OK if check.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        cert = certs.load_certificate(args.input)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        _emit({"command": "verify", "input": args.input, "ok": False, "message": f"unreadable certificate: {exc}"})
        return EXIT_FAIL
    rep = verify_certificate(cert)
    _emit({"command": "verify", "input": args.input, **rep.as_dict()})
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_relations(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    ring = ring_by_name(args.ring)
    if args.family == "C" and ring.name != "Z":
        raise UsageError("type C relations are checked over Z only")
    rng = random.Random(args.seed)

    def draw():
        return ring(*[rng.randint(-args.scale, args.scale) for _ in range(ring.rank)])

    roots = root_system(args.family, args.n)
    results, ok = [], True
    for alpha in roots:
        for beta in roots:
            if alpha == beta or alpha == tuple(-x for x in beta):
                continue
            ks = [draw() for _ in range(args.trials)]
            ls = [draw() for _ in range(args.trials)]
            rep = check_relation_batch(args.family, args.n, alpha, beta, ks, ls, ring)
            ok &= rep.passed
            results.append(
                {
                    "alpha": list(alpha),
                    "beta": list(beta),
                    "factors": [[list(r), list(ij)] for r, ij in rep.factors],
                    "constants": [None if c is None else str(c) for c in rep.constants],
                    "passed": rep.passed,
                }
            )
    consts = [abs(int(c)) for r in results for c in r["constants"] if c is not None]
    _emit(
        {
            "command": "relations",
            "family": args.family,
            "n": args.n,
            "ring": ring.name,
            "trials": args.trials,
            "scale": args.scale,
            "seed": args.seed,
            "pairs": len(results),
            "max_abs_constant": max(consts, default=0),
            "passed": ok,
            "results": results if args.details else [r for r in results if not r["passed"]],
        }
    )
    return EXIT_OK if ok else EXIT_FAIL


# -- quasimorphisms -----------------------------------------------------------


def _qm(args) -> BrooksQM:
    try:
        return BrooksQM.parse(args.pattern, args.rank, None if args.D is None else Fraction(args.D))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _word(text: str, rank: int) -> FreeWord:
    try:
        return FreeWord.parse("" if text == "1" else text, rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_qm(args) -> int:
    q = _qm(args)
    base = {"command": f"qm {args.action}", "pattern": args.pattern, "rank": args.rank}
    if args.action == "defect":
        est = empirical_defect(q, args.samples, args.max_len, args.seed)
        report = {**base, "samples": args.samples, "max_len": args.max_len, "seed": args.seed, "empirical_defect": _fraction(est)}
        code = EXIT_OK
        if q.defect_bound is not None:
            report["D"] = _fraction(q.defect_bound)
            report["consistent"] = est <= q.defect_bound
            code = EXIT_OK if est <= q.defect_bound else EXIT_FAIL
        _emit(report)
        return code
    if args.word is None:
        raise UsageError(f"qm {args.action} needs --word")
    g = _word(args.word, args.rank)
    base["word"] = g.to_string() or "1"
    try:
        if args.action == "eval":
            _emit({**base, "value": evaluate(q, g)})
            return EXIT_OK
        if args.action == "homogenize":
            D = Fraction(0) if q.defect_bound is None and q.is_homomorphism else q.defect_bound
            value, err = homogenize(q, g, args.N, D, args.precision)
            N_used = args.N if not err else int(D / err)
            _emit({**base, "N": N_used, "D": _fraction(D), "value": _fraction(value), "error": _fraction(err)})
            return EXIT_OK
        if args.action == "lower-bound":
            rep = binorm_lower_bound(q, g)
            _emit({**base, **rep.as_dict()})
            return EXIT_FAIL if rep.impossible else EXIT_OK
        rep = undistorted_certificate(q, g, N=args.N)
        _emit({**base, **rep.as_dict()})
        return EXIT_OK
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="binorm-lab", description="Exact bi-invariant word norms, certificates and quasimorphism bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    def group_cmd(name, func, help_text, gens=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--group", required=True, help="cyclic:N, dihedral:N, quaternion8, sl:n:m or alternating:N")
        if gens:
            sp.add_argument("--gens", default="default", choices=["default", "reflections"])
        sp.add_argument("--full", action="store_true", help="include the full norm table")
        sp.set_defaults(func=func)
        return sp

    group_cmd("finite-binorm", cmd_finite_binorm, "bi-invariant norm table of a finite group")
    group_cmd("finite-norm", cmd_finite_norm, "plain word norm table of a finite group")
    group_cmd("cl", cmd_cl, "commutator length table of a finite perfect group", gens=False)

    sp = sub.add_parser("translation-length", help="norms of powers of an element of a finite group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--element", required=True, help="comma-separated indices into the default generators")
    sp.add_argument("--powers", type=int, default=32)
    sp.set_defaults(func=cmd_translation_length)

    sp = sub.add_parser("extension-bound", help="diameter of a finite central extension against m + kappa")
    sp.add_argument("--group", required=True, help="quaternion8 or sl:2:p")
    sp.set_defaults(func=cmd_extension_bound)

    def matrix_args(sp):
        sp.add_argument("--in", dest="input", required=True, help='matrix file {"ring", "n", "entries"}')
        sp.add_argument("--ring", choices=["Z", "Zsqrt2", "Zi"])
        sp.add_argument("--n", type=int)

    sp = sub.add_parser("factorize", help="elementary factorization of an SL(n) matrix")
    matrix_args(sp)
    sp.add_argument("--mode", choices=["euclid", "bounded"], default="bounded")
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("certify", help="conjugate-word certificate for an SL(n) matrix")
    matrix_args(sp)
    sp.add_argument("--out", help="write the certificate JSON here")
    sp.add_argument("--superdiagonal", action="store_true", help="restrict S to positions (i, i+1)")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify", help="check a certificate")
    sp.add_argument("--in", dest="input", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("relations", help="check the Chevalley commutator formula on random parameters")
    sp.add_argument("--family", choices=["A", "C"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--ring", choices=["Z", "Zsqrt2", "Zi"], default="Z")
    sp.add_argument("--scale", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--details", action="store_true", help="list every root pair, not just failures")
    sp.set_defaults(func=cmd_relations)

    sp = sub.add_parser("qm", help="Brooks counting quasimorphisms on free groups")
    sp.add_argument("action", choices=["eval", "defect", "homogenize", "lower-bound", "undistorted"])
    sp.add_argument("--pattern", required=True, help="e.g. xy; uppercase letters are inverses")
    sp.add_argument("--word", help="reduced word, or 1 for the identity")
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--D", help="defect bound (rational); not needed for one-letter patterns")
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--precision", type=Fraction)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--max-len", dest="max_len", type=int, default=40)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_qm)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"binorm-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroupTooLarge as exc:
        print(f"binorm-lab: error: {exc} (cap {element_cap()}, set BINORM_ELEMENT_CAP to raise it)", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
