"""Batch command-line interface.

Subcommands: validate, cohomology, verify, deform, export-matrix.  All output
is plain text (TSV tables with a stable header); exit codes are 0 for
success, 1 for a failed check or violation, 2 for parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .compare import Comparison
from .complexbase import SparseCochain
from .deform import (DeformationDatum, build_deformation, classify_h2,
                     deformation_is_cocycle, validate_deformation)
from .graded import GradedComplex
from .gscomplex import GSComplex
from .io import (ParseError, cochain_from_text, cochain_to_text, load_prestack,
                 prestack_from_doc, prestack_to_doc, save_prestack)
from .lincat import diagonal_bimodule
from .linalg import SparseMatrix, betti


def _load(path, fp=None):
    try:
        if fp is None:
            return load_prestack(path)
        doc = json.loads(open(path).read())
        doc["ring"] = {"Fp": fp}
        return prestack_from_doc(doc)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        sys.exit(2)


def _complexes(P):
    M = diagonal_bimodule(P)
    return GSComplex(P, M), GradedComplex(P, M)


def cmd_validate(args):
    P = _load(args.file)
    bad = P.validate()
    if bad is None:
        print("OK")
        return 0
    print("violation: %s" % bad)
    return 1


def _betti_list(matrix_fn, dim_fn, max_degree, field):
    out = []
    mats = {n: matrix_fn(n) for n in range(0, max_degree + 2)}
    for n in range(0, max_degree + 1):
        d_in = mats[n] if n >= 1 else SparseMatrix(dim_fn(0), 0, field)
        d_out = mats[n + 1]
        out.append(betti(d_in, d_out))
    return out


def cohomology_table(P, which, max_degree):
    CG, CU = _complexes(P)
    F = P.field
    if which == "gs":
        def mat(n):
            return CG.matrix(n) if n >= 1 else SparseMatrix(CG.dim(0), 0, F)
        return _betti_list(lambda n: mat(n), CG.dim, max_degree, F)
    if which == "nr":
        def mat(n):
            return CG.nr_matrix(n) if n >= 1 else SparseMatrix(
                CG._offsets(CG.nr_keys(0))[1], 0, F)
        return _betti_list(lambda n: mat(n),
                           lambda n: CG._offsets(CG.nr_keys(n))[1], max_degree, F)
    if which == "graded":
        def mat(n):
            return CU.matrix(n) if n >= 1 else SparseMatrix(CU.dim(0), 0, F)
        return _betti_list(lambda n: mat(n), CU.dim, max_degree, F)
    raise ValueError("unknown complex %r" % which)


def cmd_cohomology(args):
    cap = int(os.environ.get("PRESTACKS_DEGREE_CAP", "5"))
    if args.max_degree > cap:
        print("degree %d exceeds cap %d" % (args.max_degree, cap), file=sys.stderr)
        return 1
    P = _load(args.file, fp=args.fp)
    bad = P.validate()
    if bad is not None:
        print("violation: %s" % bad)
        return 1
    dims = cohomology_table(P, args.complex, args.max_degree)
    print("degree\tdim H^n")
    for n, h in enumerate(dims):
        print("%d\t%d" % (n, h))
    return 0


def _witness_keys(complex_, degree, vec, limit=3):
    """The first few cell keys carrying nonzero coordinates."""
    bad = complex_.from_vector(degree, vec)
    keys = []
    for simplex, objects, btuple in sorted(bad.data, key=repr)[:limit]:
        keys.append("(%s; %s; %s)" % (" ".join(simplex.arrows) or simplex.source,
                                      " ".join(objects),
                                      " ".join(map(str, btuple))))
    return ", ".join(keys)


def _square_zero_law(name, complex_, P, N, T, seed, report):
    ok = True
    mats = {n: complex_.matrix(n) for n in range(1, N + 2)}
    for n in range(1, N + 1):
        if not mats[n + 1].mul(mats[n]).is_zero():
            report("%s.%s != 0 at degree %d" % (name, name, n))
            ok = False
    for n in range(1, N + 1):
        for t in range(T):
            phi = complex_.random_cochain(n - 1, seed + 1000 * n + t)
            out = mats[n + 1].matvec(mats[n].matvec(complex_.to_vector(phi)))
            if any(not P.field.is_zero(v) for v in out):
                report("pointwise %s(%s(phi)) != 0, degree %d trial %d, witness %s"
                       % (name, name, n, t, _witness_keys(complex_, n + 1, out)))
                ok = False
    return ok


def _law_d2(P, CG, CU, cmp_, N, T, seed, report):
    return _square_zero_law("d", CG, P, N, T, seed, report)


def _law_delta2(P, CG, CU, cmp_, N, T, seed, report):
    return _square_zero_law("delta", CU, P, N, T, seed, report)


def _law_fd(P, CG, CU, cmp_, N, T, seed, report):
    ok = True
    for n in range(1, N + 1):
        if cmp_.matrix_F(n).mul(CG.matrix(n)) != CU.matrix(n).mul(cmp_.matrix_F(n - 1)):
            report("F.d != delta.F at degree %d" % n)
            ok = False
    return ok


def _law_gd(P, CG, CU, cmp_, N, T, seed, report):
    ok = True
    for n in range(1, N + 1):
        if cmp_.matrix_G(n).mul(CU.matrix(n)) != CG.matrix(n).mul(cmp_.matrix_G(n - 1)):
            report("G.delta != d.G at degree %d" % n)
            ok = False
    return ok


def _law_gf(P, CG, CU, cmp_, N, T, seed, report):
    ok = True
    F = P.field
    for n in range(0, N + 1):
        nr = CG.nr_keys(n)
        for key in nr:
            for b in range(CG.value_rank(key)):
                phi = SparseCochain(CG, n)
                vec = [F.zero] * CG.value_rank(key)
                vec[b] = F.one
                phi.data[key] = vec
                if not cmp_.check_gf_identity(phi):
                    report("GF != 1 on nr basis vector %r at degree %d" % (key, n))
                    ok = False
    return ok


def _law_homotopy(P, CG, CU, cmp_, N, T, seed, report):
    ok = True
    F = P.field
    for n in range(1, N + 1):
        lhs = cmp_.matrix_F(n).mul(cmp_.matrix_G(n))
        for i in range(CU.dim(n)):
            lhs.add_entry(i, i, F.neg(F.one))
        rhs = CU.matrix(n).mul(cmp_.matrix_T(n))
        for entry, v in cmp_.matrix_T(n + 1).mul(CU.matrix(n + 1)).data.items():
            rhs.add_entry(entry[0], entry[1], v)
        if lhs != rhs:
            report("FG - 1 != delta T + T delta at degree %d" % n)
            ok = False
    return ok


def _law_paths(P, CG, CU, cmp_, N, T, seed, report):
    from math import factorial
    from .combinatorics import enumerate_paths, eval_path, flip
    ok = True
    base = P.base
    for p in range(2, min(N, 6) + 1):
        for simplex in base.nerve(p)[:40]:
            paths = enumerate_paths(simplex.arrows)
            if len(paths) != factorial(p - 1):
                report("|P(sigma)| != (p-1)! at %r" % (simplex,))
                ok = False
            vals = None
            for r in paths:
                t = eval_path(P, r)
                comp = {a: t.at(a).coords for a in t.components}
                if vals is None:
                    vals = comp
                elif vals != comp:
                    report("path evaluation differs on %r" % (simplex,))
                    ok = False
                if p >= 3:
                    for k in range(1, p - 1):
                        if flip(flip(r, k), k) != r or flip(r, k).sign != -r.sign:
                            report("flip law fails on %r" % (simplex,))
                            ok = False
    return ok


def _law_shuffles(P, CG, CU, cmp_, N, T, seed, report):
    from math import comb
    from .combinatorics import brute_force_shuffles, enumerate_conditioned, enumerate_shuffles
    ok = True
    for m in range(0, 5):
        for n in range(0, 5):
            got = len(enumerate_shuffles((m, n)))
            if got != comb(m + n, m):
                report("|S_(%d,%d)| = %d != C(m+n,m)" % (m, n, got))
                ok = False
            if m + n <= 6 and got != len(brute_force_shuffles((m, n))):
                report("shuffle enumeration disagrees with brute force at (%d,%d)" % (m, n))
                ok = False
    if len(enumerate_shuffles((2, 1))) != 3:
        report("|S_(2,1)| != 3")
        ok = False
    if len(enumerate_conditioned((2, 2))) != 3:
        report("conditioned (2,2) count != 3")
        ok = False
    return ok


LAWS = {
    "d2": (_law_d2, 4, 50),
    "delta2": (_law_delta2, 4, 50),
    "fd": (_law_fd, 3, 30),
    "gd": (_law_gd, 3, 30),
    "gf": (_law_gf, 3, 30),
    "homotopy": (_law_homotopy, 3, 20),
    "paths": (_law_paths, 5, 1),
    "shuffles": (_law_shuffles, 5, 1),
}


def cmd_verify(args):
    P = _load(args.file)
    bad = P.validate()
    if bad is not None:
        print("violation: %s" % bad)
        return 1
    fn, default_n, default_t = LAWS[args.law]
    N = args.degree if args.degree is not None else default_n
    T = args.trials if args.trials is not None else default_t
    CG, CU = _complexes(P)
    cmp_ = Comparison(CG, CU)
    failures = []
    ok = fn(P, CG, CU, cmp_, N, T, args.seed, failures.append)
    if ok:
        print("law %s\tdegree<=%d\ttrials=%d\tseed=%d\tPASS" % (args.law, N, T, args.seed))
        return 0
    print("law %s\tFAIL" % args.law)
    for f in failures:
        print("  " + f)
    return 1


def cmd_deform(args):
    P = _load(args.file)
    bad = P.validate()
    if bad is not None:
        print("violation: %s" % bad)
        return 1
    CG = GSComplex(P)
    if args.from_cocycle:
        text = open(args.from_cocycle).read()
        phi = cochain_from_text(CG, 2, text)
        datum = DeformationDatum(CG, phi)
        if not deformation_is_cocycle(CG, datum):
            img = CG.apply_diff(phi)
            print("not a normalized reduced cocycle; d has %d nonzero components"
                  % len(img.data))
            for key in sorted(img.data, key=repr)[:5]:
                print("  nonzero at %r" % (key,))
            return 1
        Q = build_deformation(P, datum)
        bad = validate_deformation(Q)
        if bad is not None:
            print("deformed prestack fails validation: %s" % bad)
            return 1
        out = args.out or (os.path.splitext(args.file)[0] + ".deformed.json")
        save_prestack(Q, out)
        print("deformed prestack written to %s" % out)
        return 0
    reps = classify_h2(P, CG)
    print("dim H^2 (normalized reduced)\t%d" % len(reps))
    outdir = args.out_dir or "."
    os.makedirs(outdir, exist_ok=True)
    for i, rep in enumerate(reps):
        datum = DeformationDatum(CG, rep)
        Q = build_deformation(P, datum)
        bad = validate_deformation(Q)
        if bad is not None:
            print("representative %d fails validation: %s" % (i, bad))
            return 1
        path = os.path.join(outdir, "%s-h2-rep%d.json" % (P.name, i))
        save_prestack(Q, path)
        cpath = os.path.join(outdir, "%s-h2-rep%d.cochain" % (P.name, i))
        with open(cpath, "w") as fh:
            fh.write(cochain_to_text(CG, rep))
        print("representative %d\t%s" % (i, path))
    return 0


def cmd_export_matrix(args):
    P = _load(args.file)
    CG, CU = _complexes(P)
    if args.complex == "gs":
        mat = CG.matrix(args.degree)
    elif args.complex == "nr":
        mat = CG.nr_matrix(args.degree)
    elif args.complex == "graded":
        mat = CU.matrix(args.degree)
    else:
        raise ValueError(args.complex)
    with open(args.out, "w") as fh:
        fh.write(mat.to_triplet_text())
    print("wrote %dx%d matrix with %d entries to %s"
          % (mat.rows, mat.cols, mat.nnz, args.out))
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(prog="prestacks",
                                 description="Exact cohomology of prestacks")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check the prestack axioms")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("cohomology", help="print a dim H^n table")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--complex", choices=["gs", "nr", "graded"], default="gs")
    p.add_argument("--fp", type=int, default=None,
                   help="reinterpret the input over F_p")
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("file")
    p.add_argument("--law", choices=sorted(LAWS), required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("deform", help="classify H^2 or validate a cocycle")
    p.add_argument("file")
    p.add_argument("--from-cocycle", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(fn=cmd_deform)

    p = sub.add_parser("export-matrix", help="write a differential in triplet form")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--complex", choices=["gs", "nr", "graded"], default="gs")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_export_matrix)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
