"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 numerical failure,
3 a monogamy counterexample was found.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cglmp, chsh, dicke, io, monogamy
from .linalg import DensityMatrix, NumericalError, StateVector, outer
from .tolerances import TOL

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _density(state, dims) -> DensityMatrix:
    rho = outer(state) if isinstance(state, StateVector) else state
    if rho.dims != dims:
        raise InputError(f"expected subsystem dims {list(dims)}, got {list(rho.dims)}")
    return rho


def _show(**fields) -> None:
    for k, v in fields.items():
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, float):
            v = repr(v)
        print(f"{k}={v}")


def _chsh_eval(args) -> int:
    report = chsh.chsh_value(_density(io.load_state(args.statefile), (2, 2)))
    _show(value=report.value, violates=report.violates, eigenvalues_U=" ".join(repr(x) for x in report.eigenvalues_U))
    return EXIT_OK


def _chsh_oracle(args) -> int:
    rho = _density(io.load_state(args.statefile), (2, 2))
    _show(value=chsh.chsh_direct(rho, restarts=args.restarts, seed=args.seed))
    return EXIT_OK


def _chen(args) -> int:
    res = chsh.chen_criterion(_density(io.load_state(args.statefile), (2, 2)))
    _show(extendible=res.extendible, lhs=res.lhs, rhs=res.rhs)
    return EXIT_OK


def _verdict(args) -> int:
    state = io.load_state(args.statefile)
    if args.system == "qubit":
        verdict = chsh.nonextendibility_verdict_qubit(_density(state, (2, 2)))
    else:
        verdict = monogamy.nonextendibility_verdict_qutrit(
            _density(state, (3, 3)), restarts=args.restarts, seed=args.seed
        )
    _show(verdict=verdict.value)
    return EXIT_OK


def _dicke_rdm(args) -> int:
    psi = dicke.DickeState(io.load_coefficients(args.coeffs))
    rdm = dicke.rdm_from_dicke(psi)
    _show(
        n_qubits=psi.n_qubits,
        v_plus=rdm.v_plus,
        v_minus=rdm.v_minus,
        w=rdm.w,
        y=rdm.y,
        x_plus=rdm.x_plus,
        x_minus=rdm.x_minus,
        u=rdm.u,
        chsh=chsh.chsh_value(rdm.density_matrix()).value,
    )
    return EXIT_OK


def _dicke_theorem1(args) -> int:
    if args.nmin < 3 or args.nmax < args.nmin:
        raise InputError("need 3 <= nmin <= nmax")
    worst, failures, total = 0.0, 0, 0
    for n in range(args.nmin, args.nmax + 1):
        rng = np.random.default_rng([args.seed, n])
        for _ in range(args.samples):
            res = dicke.theorem1_check(dicke.random_dicke_state(n, rng))
            worst = max(worst, res.chsh)
            failures += not res.passed
            total += 1
    _show(states=total, failures=failures, max_chsh=worst)
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def _cglmp_max(args) -> int:
    rho = _density(io.load_state(args.statefile), (3, 3))
    rep = cglmp.cglmp_max(rho, restarts=args.restarts, seed=args.seed, tol=args.tol)
    _show(
        value=rep.value,
        violates=rep.value > cglmp.LHV_BOUND + TOL.cglmp_eps,
        restarts=rep.restarts_used,
        evaluations=rep.evaluations,
        phi=" ".join(repr(float(a)) for a in rep.best_angles.phi.ravel()),
        varphi=" ".join(repr(float(a)) for a in rep.best_angles.varphi.ravel()),
    )
    return EXIT_OK


def _scan_monogamy(args) -> int:
    manifest = io.RunManifest(
        command="scan monogamy",
        parameters={"states": args.states, "seed": args.seed, "restarts": args.restarts},
        master_seed=args.seed,
    )
    records = []
    with io.CsvEmitter(args.out) as out:
        for rec in monogamy.iter_monogamy_scan(args.states, args.seed, args.restarts):
            out.write(rec)
            records.append(rec)
    manifest.finish(len(records))
    io.write_manifest(manifest, args.out)
    summary = monogamy.summarize(records)
    bad = [r for r in records if r.double_violation]
    if bad:
        io.write_counterexamples(
            [
                {"seed": r.seed, "index": r.index, "values": list(r.values), "state": monogamy.random_3qutrit(r.seed, r.index)}
                for r in bad
            ],
            args.out,
        )
    _show(
        states=summary.n_states,
        max_second_largest=summary.max_second_largest,
        double_violations=summary.double_violations,
    )
    return EXIT_COUNTEREXAMPLE if bad else EXIT_OK


def _scan_gamma(args) -> int:
    grid = monogamy.gamma_grid(args.start, args.stop, args.points)
    manifest = io.RunManifest(
        command="scan gamma",
        parameters={
            "family": args.family,
            "from": args.start,
            "to": args.stop,
            "points": args.points,
            "restarts": args.restarts,
            "seed": args.seed,
        },
        master_seed=args.seed,
    )
    points = monogamy.gamma_sweep(args.family, grid, restarts=args.restarts, seed=args.seed)
    io.emit_csv(points, args.out)
    manifest.finish(len(points))
    io.write_manifest(manifest, args.out)
    bad = [p for p in points if p.violations() >= 2]
    if bad:
        io.write_counterexamples(
            [
                {
                    "family": args.family,
                    "gamma": p.gamma,
                    "values": [p.b_ab, p.b_bc, p.b_ac],
                    "state": monogamy.gamma_state(args.family, p.gamma),
                }
                for p in bad
            ],
            args.out,
        )
    _show(points=len(points), max_violations=max(p.violations() for p in points))
    return EXIT_COUNTEREXAMPLE if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bellsym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("chsh", help="CHSH value of a 2-qubit state")
    csub = c.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    e = csub.add_parser("eval", help="closed-form value")
    e.add_argument("statefile")
    e.set_defaults(func=_chsh_eval)
    o = csub.add_parser("oracle", help="direct optimization over measurements")
    o.add_argument("statefile")
    o.add_argument("--restarts", type=int, default=16)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=_chsh_oracle)

    ch = sub.add_parser("chen", help="2-qubit symmetric extendibility criterion")
    ch.add_argument("statefile")
    ch.set_defaults(func=_chen)

    v = sub.add_parser("verdict", help="symmetric non-extendibility verdict")
    v.add_argument("system", choices=["qubit", "qutrit"])
    v.add_argument("statefile")
    v.add_argument("--restarts", type=int, default=24)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_verdict)

    d = sub.add_parser("dicke", help="symmetric multiqubit states")
    dsub = d.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    r = dsub.add_parser("rdm", help="two-qubit marginal of a Dicke-basis state")
    r.add_argument("--coeffs", required=True)
    r.set_defaults(func=_dicke_rdm)
    t = dsub.add_parser("theorem1", help="CHSH of marginals of random symmetric states")
    t.add_argument("--samples", type=int, default=500)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--nmin", type=int, default=3)
    t.add_argument("--nmax", type=int, default=8)
    t.set_defaults(func=_dicke_theorem1)

    g = sub.add_parser("cglmp", help="CGLMP value of a 2-qutrit state")
    gsub = g.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    m = gsub.add_parser("max", help="maximize I3 over measurement phases")
    m.add_argument("statefile")
    m.add_argument("--restarts", type=int, default=24)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--tol", type=float, default=1e-8)
    m.set_defaults(func=_cglmp_max)

    s = sub.add_parser("scan", help="CGLMP monogamy experiments")
    ssub = s.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    mo = ssub.add_parser("monogamy", help="random 3-qutrit pure states")
    mo.add_argument("--states", type=int, default=1000)
    mo.add_argument("--seed", type=int, default=0)
    mo.add_argument("--restarts", type=int, default=24)
    mo.add_argument("--out", required=True)
    mo.set_defaults(func=_scan_monogamy)
    ga = ssub.add_parser("gamma", help="sweep a gamma-parametrized 3-qutrit family")
    ga.add_argument("--family", choices=["psi1", "psi2"], required=True)
    ga.add_argument("--from", dest="start", type=float, default=0.0)
    ga.add_argument("--to", dest="stop", type=float, default=2.0)
    ga.add_argument("--points", type=int, default=41)
    ga.add_argument("--restarts", type=int, default=24)
    ga.add_argument("--seed", type=int, default=0)
    ga.add_argument("--out", required=True)
    ga.set_defaults(func=_scan_gamma)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
