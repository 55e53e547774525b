"""Command-line interface: generation, verification, graphs, sieves, chains.

Every subcommand writes deterministic output for fixed flags and seed;
files go through write-temp-then-rename so interrupts leave no partial
artifacts.  Errors are emitted as one JSON object on stderr; exit codes
are 0 (success), 1 (verification failure), 2 (usage error).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

from . import modpoly, qseries
from .errors import WeberError
from .exactnum import sqrt2, zeta_power
from .gf import make_field
from .qseries import QSeries


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".weber-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _default_seed(args: argparse.Namespace) -> int:
    blob = json.dumps(
        {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        sort_keys=True,
        default=str,
    )
    return int.from_bytes(hashlib.sha256(blob.encode()).digest()[:8], "big")


def _cache_dir(args) -> str | None:
    if getattr(args, "no_cache", False):
        return None
    return args.cache_dir or os.environ.get("WEBER_CACHE") or ".weber-cache"


def _poly_header(line: str, ell: int) -> str:
    return f"# line={line} ell={ell} norm=monic-x"


def _cached_poly(line: str, ell: int, cache_dir: str | None) -> modpoly.BiPoly:
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, f"{line}_{ell}.poly")
        if os.path.exists(path):
            try:
                poly, meta = modpoly.BiPoly.from_text(open(path).read())
                if meta.get("line") == line and meta.get("ell") == str(ell):
                    return poly
                raise WeberError("metadata mismatch")
            except Exception:
                sys.stderr.write(
                    json.dumps({"warning": f"corrupted cache entry {path}; regenerating"})
                    + "\n"
                )
    poly = modpoly.cached_generate(line, ell)
    if cache_dir and path:
        try:
            os.makedirs(cache_dir, exist_ok=True)
            _atomic_write(path, poly.to_text(_poly_header(line, ell)))
        except OSError as exc:
            sys.stderr.write(
                json.dumps({"warning": f"cache not writable: {exc}"}) + "\n"
            )
    return poly


# ---------------------------------------------------------------------------
# Subcommands


def cmd_modpoly(args) -> int:
    poly = _cached_poly(args.line, args.ell, _cache_dir(args))
    text = poly.to_text(_poly_header(args.line, args.ell))
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    summary = {
        "line": args.line,
        "ell": args.ell,
        "terms": poly.nonzero_count(),
        "bidegree": list(poly.bidegree()),
        "integral": poly.is_integral(),
    }
    if args.out:
        _emit(summary, None)
    return 0


def cmd_modpoly_verify(args) -> int:
    if args.infile:
        poly, meta = modpoly.BiPoly.from_text(open(args.infile).read())
        line = meta.get("line", args.line)
        ell = int(meta.get("ell", args.ell or 0))
    else:
        line, ell = args.line, args.ell
        poly = _cached_poly(line, ell, _cache_dir(args))
    report = modpoly.verify(poly, line, ell, prec=args.prec)
    _emit(
        {
            "line": line,
            "ell": ell,
            "ok": report.ok,
            "checked_limit": report.checked_limit,
            "first_bad_exponent": report.first_bad_exponent,
            "residual_leading": report.residual_leading,
        },
        args.out,
    )
    return 0 if report.ok else 1


def cmd_qid_check(args) -> int:
    prec = args.prec
    f = qseries.weber_series("f", prec)
    f1 = qseries.weber_series("f1", prec)
    f2 = qseries.weber_series("f2", prec)
    j = qseries.j_series(prec)
    e_t = qseries.eta_component("tau", prec)
    e_h = qseries.eta_component("tau_half", prec)
    e_p = qseries.eta_component("tau_plus1_half", prec)
    e_2 = qseries.eta_component("two_tau", prec)
    f24, f124, f224 = f**24, f1**24, f2**24
    checks = {
        "f8_sum": (f**8 - f1**8 - f2**8).is_zero(),
        "product_sqrt2": (f * f1 * f2 - QSeries.constant(sqrt2(), prec // 2)).is_zero(),
        "eta_triple": (e_p * e_h * e_2 * zeta_power(-1) - e_t**3).is_zero(),
        "j_from_f": ((f24 - 16) ** 3 / f24 - j).is_zero(),
        "j_from_f1": ((f124 + 16) ** 3 / f124 - j).is_zero(),
        "j_from_f2": ((f224 + 16) ** 3 / f224 - j).is_zero(),
        "conjugate_shift": (f1**8 + f.shift_tau(3) ** 8).is_zero(),
    }
    _emit({"precision": prec, "checks": checks, "ok": all(checks.values())}, args.out)
    return 0 if all(checks.values()) else 1


def cmd_group_check(args) -> int:
    from .weberaction import group_closure, sl2_identity_check

    rep = group_closure()
    sl2 = sl2_identity_check()
    ok = (
        rep.order_g == 1152
        and rep.order_d == 192
        and rep.quotient == "S3"
        and rep.relation_t16
        and sl2["matches_13_8_8_5"]
        and sl2["square_is_9I"]
    )
    _emit(
        {
            "orderG": rep.order_g,
            "orderD": rep.order_d,
            "quotient": rep.quotient,
            "relation_T16_is_zeta3_inv": rep.relation_t16,
            "coset_permutations": {k: list(v) for k, v in rep.coset_permutations.items()},
            "sl2_mod16": sl2,
            "ok": ok,
        },
        args.out,
    )
    return 0 if ok else 1


def cmd_ss(args) -> int:
    from .ssgraph import build_graph, ss_j_enumerate

    F = make_field(args.p)
    if args.line and args.ell:
        poly = _cached_poly(args.line, args.ell, _cache_dir(args))
        g = build_graph(F, args.line, args.ell, poly=poly)
        if args.format == "dot":
            text = g.to_dot() + "\n"
            if args.out:
                _atomic_write(args.out, text)
            else:
                sys.stdout.write(text)
        else:
            _emit(g.to_json_dict(), args.out)
    else:
        js = ss_j_enumerate(F)
        _emit(
            {
                "p": args.p,
                "d": F.d,
                "count": len(js),
                "supersingular_j": [j.to_text() for j in js],
            },
            args.out,
        )
    return 0


def cmd_split_check(args) -> int:
    from .ssgraph import split_check

    primes = []
    if args.p:
        primes = [args.p]
    else:
        from .gf import is_prime

        primes = [p for p in range(5, args.pmax) if is_prime(p)]
    reports = []
    violations = 0
    for p in primes:
        rep = split_check(make_field(p))
        violations += rep.violations
        reports.append(
            {
                "p": p,
                "violations": rep.violations,
                "fibers": [
                    {"j": j, "distinct": d, "expected": e, "ok": ok}
                    for j, d, e, ok in rep.entries
                ],
            }
        )
    _emit({"reports": reports, "total_violations": violations}, args.out)
    return 0 if violations == 0 else 1


def cmd_hecke(args) -> int:
    from .hecke import commute_check, eigen_sieve, hecke_matrix, twist_orbits
    from .ssgraph import build_graph

    t0 = time.perf_counter()
    F = make_field(args.p)
    ells = [int(x) for x in args.ells.split(",")]
    ops = []
    for ell in ells:
        poly = _cached_poly(args.line, ell, _cache_dir(args))
        g = build_graph(F, args.line, ell, poly=poly)
        ops.append(hecke_matrix(g))
    commuting = all(
        commute_check(a, b) for i, a in enumerate(ops) for b in ops[i + 1 :]
    )
    systems = eigen_sieve(ops, exclude_eisenstein=not args.include_eisenstein)
    payload = {
        "p": args.p,
        "line": args.line,
        "ells": ells,
        "nodes": ops[0].dim,
        "pairwise_commuting": commuting,
        "systems": [
            {"eigenvalues": s.eigenvalues, "dim": s.space_dim} for s in systems
        ],
        "time_seconds": round(time.perf_counter() - t0, 3),
    }
    try:
        orbits = twist_orbits(systems, args.line)
        payload["orbits"] = [
            {"members": o.members, "ambiguous": o.ambiguous} for o in orbits
        ]
        payload["orbit_count"] = len(orbits)
    except WeberError as exc:
        payload["orbits_error"] = str(exc)
    _emit(payload, args.out)
    return 0 if commuting else 1


def cmd_chain(args) -> int:
    from .chains import (
        build_chain,
        composed_degree,
        kernel_x_count,
        legendre_recursion_holds,
        legendre_sequence,
    )

    F = make_field(args.p)
    t3 = F.from_text(args.t3)
    w = build_chain(F, t3, args.variant)
    payload = {
        "p": args.p,
        "variant": args.variant,
        "seed_t3": t3.to_text(),
        "tower": [w.t3.to_text(), w.t2.to_text(), w.t1.to_text(), w.t0.to_text()],
        "constants": {k: v.to_text() for k, v in w.constants.items()},
        "curves": [
            {"a2": E.a2.to_text(), "a4": E.a4.to_text(), "a6": E.a6.to_text()}
            for E in w.curves
        ],
        "torsion": [[T.x.to_text(), T.y.to_text()] for T in w.torsion],
        "checks": w.checks,
        "composed_degree": composed_degree(w),
        "kernel_points": kernel_x_count(w)[0],
        "u3_in_prime_field": w.u3_in_prime_field,
    }
    if args.variant == "twisted":
        lam = legendre_sequence(w)
        payload["legendre"] = [x.to_text() for x in lam]
        payload["legendre_recursion"] = legendre_recursion_holds(lam)
    ok = all(w.checks.values()) and payload["composed_degree"] == 8
    _emit(payload, args.out)
    return 0 if ok else 1


def cmd_models_check(args) -> int:
    import random

    from .models import (
        fermat_to_weber,
        random_fermat_point,
        random_weber_point,
        weber_to_fermat,
    )

    F = make_field(args.p)
    seed = args.seed if args.seed is not None else _default_seed(args)
    rng = random.Random(seed)
    results = {}
    ok = True
    for n in (1, 2, 4, 8):
        good = 0
        for _ in range(args.trials):
            P = random_fermat_point(n, F, rng)
            if weber_to_fermat(n, fermat_to_weber(n, P)) == P:
                good += 1
            Q = random_weber_point(n, F, rng)
            if fermat_to_weber(n, weber_to_fermat(n, Q)) == Q:
                good += 1
        results[f"n={n}"] = {"roundtrips": good, "expected": 2 * args.trials}
        ok = ok and good == 2 * args.trials
    _emit({"p": args.p, "seed": seed, "results": results, "ok": ok}, args.out)
    return 0 if ok else 1


def cmd_walk(args) -> int:
    from .ssgraph import walk

    F = make_field(args.p)
    seed = args.seed if args.seed is not None else _default_seed(args)
    u0 = F.from_text(args.start)
    poly = _cached_poly(args.line, args.ell, _cache_dir(args))
    rep = walk(F, args.line, args.ell, u0, args.length, seed, poly=poly)
    _emit(
        {
            "p": args.p,
            "line": args.line,
            "ell": args.ell,
            "seed": seed,
            "path": [x.to_text() for x in rep.path],
            "dead_end": rep.dead_end,
        },
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="webermod")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, cache=True):
        p.add_argument("--out", default=None)
        if cache:
            p.add_argument("--cache-dir", default=None)
            p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("modpoly", help="generate a modular polynomial")
    p.add_argument("--line", required=True)
    p.add_argument("--ell", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_modpoly)

    p = sub.add_parser("modpoly-verify", help="verify a polynomial against q-expansions")
    p.add_argument("--line", default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--prec", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_modpoly_verify)

    p = sub.add_parser("qid-check", help="check the Weber q-series identities")
    p.add_argument("--prec", type=int, default=300)
    common(p, cache=False)
    p.set_defaults(func=cmd_qid_check)

    p = sub.add_parser("group-check", help="closure of the Weber triple action")
    common(p, cache=False)
    p.set_defaults(func=cmd_group_check)

    p = sub.add_parser("ss", help="supersingular set or graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--line", default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    common(p)
    p.set_defaults(func=cmd_ss)

    p = sub.add_parser("split-check", help="Weber fiber splitting over GF(p^2)")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--pmax", type=int, default=200)
    common(p, cache=False)
    p.set_defaults(func=cmd_split_check)

    p = sub.add_parser("hecke", help="Hecke operators and the eigensystem sieve")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--line", default="x1")
    p.add_argument("--ells", default="5,7,13")
    p.add_argument("--include-eisenstein", action="store_true")
    common(p)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("chain", help="explicit 2-isogeny chain witness")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t3", required=True, help="seed, e.g. '3' or '2+5*u'")
    p.add_argument("--variant", choices=("standard", "twisted"), default="twisted")
    common(p, cache=False)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("models-check", help="Weber <-> Fermat round trips")
    p.add_argument("--p", type=int, default=97)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    common(p, cache=False)
    p.set_defaults(func=cmd_models_check)

    p = sub.add_parser("walk", help="non-backtracking isogeny walk")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--line", default="x1")
    p.add_argument("--ell", type=int, default=5)
    p.add_argument("--start", required=True)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_walk)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except WeberError as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
