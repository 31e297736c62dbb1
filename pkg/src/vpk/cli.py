"""Command line entry point: ``vpk <subcommand> <algebra file> [flags]``.

Every subcommand produces a Report.  Exit codes: 0 when no record failed,
1 when some record failed, 2 for input errors, 3 when ``--strict`` is given
and some record is inconclusive.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import io
from .deformation import (build_vh, classical_limit, h_adic_weak_commutativity, rees_checks,
                          rees_deformation, specialization_check, star_deformation_check)
from .enveloping import VacuumModule, check_omega, check_va_axioms, invariants_subspace, parse_mode, parse_state
from .filtration import (build_filtration, c1_space, check_filtration, check_gr_poisson, pbw_spanning_check,
                         psi_iso_check)
from .loop import check_lie
from .poisson import check_poisson_axioms, extend_weak_prestructure, poisson_from_vertex_lie
from .report import Record, Report
from .scalars import as_scalar, fmt
from .vertex_lie import StructureError, VLStructure, check_axioms

SUBCOMMANDS = ("check", "loop-check", "ope", "vacuum", "va-check", "poisson-check", "gr", "c1", "pbw-check",
               "psi-check", "deform", "invariants")


class UsageError(Exception):
    pass


def _kv_list(items: list[str] | None, what: str) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if "=" not in part:
                raise UsageError(f"{what} entries look like name=value, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _names(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [t.strip() for t in text.split(",") if t.strip()]


def _range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    n = int(text)
    return range(n, n + 1)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vpk", description="Exact checks for vertex Lie, vertex and vertex Poisson algebras.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("file", help="algebra JSON file, or the name of a shipped algebra (heisenberg, sl2, ...)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--max-weight", type=int, default=None, help="conformal weight cap")
    p.add_argument("--max-mode", type=int, default=None, help="mode window [-N, N]")
    p.add_argument("--max-len", type=int, default=None, help="PBW length cap when central factors are free")
    p.add_argument("--max-dpow", type=int, default=None, help="∂-power cap")
    p.add_argument("--max-degree", type=int, default=None, help="polynomial degree cap")
    p.add_argument("--h-order", type=int, default=3, help="h-adic truncation order N (work mod h^N)")
    p.add_argument("--strict", action="store_true", help="treat inconclusive records as failures")
    p.add_argument("--lambda", dest="lam", action="append", help="central specialization, e.g. c=2 or c=ell")
    p.add_argument("--no-lambda", action="store_true", help="ignore the lambda given in the file")
    p.add_argument("--state", help="state for vacuum, e.g. 'a(-1)|0>'")
    p.add_argument("--act", action="append", help="mode operator, e.g. 'a(1)'; repeated flags act in the order given")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--modes", default=None, help="range such as 0..3")
    p.add_argument("--kind", choices=("vh", "rees"), default="vh")
    p.add_argument("--splitting", choices=("symmetric", "pbw"), default="symmetric")
    p.add_argument("--check", default=None, help="deform checks: limits,star,specialize,hadic")
    p.add_argument("--u-spec", default="standard", help="'standard' or comma-separated generator names")
    p.add_argument("--compare-with", default="standard")
    p.add_argument("--order", default=None, help="PBW order for pbw-check, comma-separated")
    p.add_argument("--fw", action="append", help="filtration weights, e.g. L=2")
    p.add_argument("--elements", default=None, help="comma-separated generators for invariants")
    return p


def _lambda(args, af: io.AlgebraFile) -> dict | None:
    lam = {} if args.no_lambda else dict(af.lam)
    lam.update({k: as_scalar(v) for k, v in _kv_list(args.lam, "--lambda").items()})
    return lam or None


class InvalidStructure(Exception):
    def __init__(self, report: Report):
        self.report = report


def _vl(structure, sub: str, validate: bool = True) -> VLStructure:
    """The vertex Lie structure of the file; constructions on top of it require the axioms."""
    if not isinstance(structure, VLStructure):
        raise UsageError(f"{sub} needs a vertex Lie structure file, not a prestructure")
    if validate:
        rep = check_axioms(structure, max_dpow=1)
        if rep.failed():
            out = Report(command="", caps={})
            out.add(Record("vl.input_structure")).fail({"error": "structure fails the vertex Lie axioms"})
            out.extend(rep)
            raise InvalidStructure(out)
    return structure


def _or(x, default):
    return default if x is None else x


def run(argv: list[str]) -> tuple[Report, str | None]:
    """Execute one subcommand; returns the report and optional plain text result."""
    args = build_parser().parse_args(argv)
    af = io.load(args.file)
    S = af.structure()
    lam = _lambda(args, af)
    sub = args.subcommand
    seed = args.seed
    extra = None
    try:
        rep, extra = _dispatch(sub, S, lam, args, af)
    except InvalidStructure as exc:
        rep = exc.report
    rep.command = " ".join(["vpk", sub, af.name] + _echo_flags(argv))
    rep.seed = seed
    return rep, extra


def _dispatch(sub, S, lam, args, af):
    seed = args.seed
    extra = None

    if sub == "check":
        R = _vl(S, sub, validate=False)
        rep = check_axioms(R, max_dpow=_or(args.max_dpow, 2), seed=seed, full_sweep=True)
    elif sub == "loop-check":
        rep = check_lie(_vl(S, sub, validate=False), samples=_or(args.samples, 500), window=_or(args.max_mode, 4), seed=seed)
    elif sub == "ope":
        R = _vl(S, sub, validate=False)
        if not (args.left and args.right):
            raise UsageError("ope needs --left and --right")
        a, b = R.el(args.left), R.el(args.right)
        modes = _range(args.modes) if args.modes else range(R.product_bound(a, b) + 1)
        rep = Report(command=f"ope {R.name} --left {args.left} --right {args.right}", seed=seed,
                     caps={"modes": [modes.start, modes.stop - 1]})
        rec = rep.add(Record("ope.table"))
        rows = []
        for n in modes:
            if n < 0:
                raise UsageError("ope modes are the nonnegative products n >= 0")
            val = R.nth_product(a, n, b)
            rec.tick()
            rows.append([n, R.fmt(val)])
        rec.info["rows"] = rows
        extra = "\n".join(f"{n}: {v}" for n, v in rows)
    elif sub == "vacuum":
        ctx = VacuumModule(_vl(S, sub), lam)
        if not args.state:
            raise UsageError("vacuum needs --state")
        v = parse_state(ctx, args.state)
        for op in args.act or []:
            a, n = parse_mode(ctx, op)
            v = ctx.apply_mode(v, ctx.R.atoms[a], n)
        rep = Report(command=f"vacuum {ctx.R.name}", seed=seed,
                     caps={"lambda": {k: fmt(x) for k, x in (lam or {}).items()}, "state": args.state,
                           "act": list(args.act or [])})
        rec = rep.add(Record("vacuum.result"))
        rec.tick()
        extra = ctx.fmt(v)
        rec.info["result"] = extra
    elif sub == "va-check":
        ctx = VacuumModule(_vl(S, sub, validate=False), lam)
        rep = check_va_axioms(ctx, samples=_or(args.samples, 200), window=_or(args.max_mode, 3),
                              weight_cap=_or(args.max_weight, 3), seed=seed, max_len=args.max_len)
        rep.extend(check_omega(ctx, weight_cap=_or(args.max_weight, 3) + 1, samples=_or(args.samples, 100) // 2,
                               seed=seed, max_len=args.max_len))
    elif sub == "poisson-check":
        rep = _poisson_check(S, lam, args)
    elif sub == "gr":
        ctx = VacuumModule(_vl(S, sub), lam)
        fw = {k: int(v) for k, v in _kv_list(args.fw, "--fw").items()} or None
        spec = build_filtration(ctx, fw)
        rep = check_filtration(spec, samples=_or(args.samples, 30), weight_cap=_or(args.max_weight, 3),
                               window=_or(args.max_mode, 3), seed=seed, max_len=args.max_len)
        rep.extend(check_gr_poisson(spec, samples=_or(args.samples, 20), weight_cap=_or(args.max_weight, 3),
                                    seed=seed, max_len=args.max_len))
    elif sub == "c1":
        ctx = VacuumModule(_vl(S, sub), lam)
        cap = _or(args.max_weight, 3)
        data = c1_space(ctx, cap)
        rep = Report(command=f"c1 {ctx.R.name}", seed=seed, caps={"max_weight": cap})
        rec = rep.add(Record("c1.complement"))
        rec.tick(len(data))
        rows = {str(w): {"dim": d["dim"], "dim_c1": d["dim_c1"], "complement": [ctx.fmt(v) for v in d["complement"]]}
                for w, d in sorted(data.items())}
        rec.info["weights"] = rows
        extra = "\n".join(f"weight {w}: dim V = {d['dim']}, dim C1 = {d['dim_c1']}, complement = {d['complement']}"
                          for w, d in rows.items())
    elif sub == "pbw-check":
        ctx = VacuumModule(_vl(S, sub), lam)
        if ctx.free_centrals():
            raise UsageError("pbw-check needs every central element specialized (--lambda)")
        u = args.u_spec if args.u_spec == "standard" else _names(args.u_spec)
        cw = args.compare_with
        cw = None if cw == "none" else (cw if cw == "standard" else _names(cw))
        rep = pbw_spanning_check(ctx, u, weight_cap=_or(args.max_weight, 3), order=_names(args.order), compare_with=cw)
    elif sub == "psi-check":
        rep = psi_iso_check(_vl(S, sub), degree_cap=_or(args.max_degree, 4), weight_cap=_or(args.max_weight, 4),
                            samples=_or(args.samples, 30), seed=seed)
    elif sub == "deform":
        rep = _deform(_vl(S, sub), lam, args)
    elif sub == "invariants":
        ctx = VacuumModule(_vl(S, sub), lam)
        names = _names(args.elements) or [ctx.R.atoms[a] for a in range(ctx.G)]
        cap = _or(args.max_weight, 3)
        max_len = args.max_len if args.max_len is not None or not ctx.free_centrals() else 3
        inv = invariants_subspace(ctx, [ctx.R.el(n) for n in names], cap, max_len)
        rep = Report(command=f"invariants {ctx.R.name}", seed=seed,
                     caps={"max_weight": cap, "max_len": max_len, "elements": names})
        rec = rep.add(Record("invariants.zero_mode_kernel"))
        rec.tick(len(inv))
        rec.info["basis"] = {str(w): [ctx.fmt(v) for v in vs] for w, vs in sorted(inv.items())}
        rec.info["dims"] = {str(w): len(vs) for w, vs in sorted(inv.items())}
    else:  # pragma: no cover
        raise UsageError(sub)
    return rep, extra


def _echo_flags(argv: list[str]) -> list[str]:
    out, skip = [], True
    for tok in argv:
        if skip and not tok.startswith("-"):
            continue  # subcommand and file
        skip = False
        out.append(tok)
    return out


def _poisson_check(S, lam, args) -> Report:
    samples = _or(args.samples, 30)
    max_deg = _or(args.max_degree, 4)
    max_dpow = _or(args.max_dpow, 3)
    if isinstance(S, VLStructure):
        try:
            ctx = poisson_from_vertex_lie(S, lam, strict=True)
        except StructureError as exc:
            rep = Report(command="", seed=args.seed, caps={})
            rec = rep.add(Record("vp.input_structure"))
            rec.fail({"error": str(exc)})
            if getattr(exc, "report", None) is not None:
                rep.extend(exc.report)
            return rep
    else:
        ctx = extend_weak_prestructure(S)
        if lam:
            raise UsageError("a prestructure has no central elements to specialize")
    return check_poisson_axioms(ctx, samples=samples, max_deg=max_deg, max_dpow=max_dpow, seed=args.seed)


def _deform(R: VLStructure, lam, args) -> Report:
    checks = _names(args.check) or ["limits", "star", "specialize"]
    unknown = set(checks) - {"limits", "star", "specialize", "hadic"}
    if unknown:
        raise UsageError(f"unknown deform checks: {sorted(unknown)}")
    N = args.h_order
    if N < 1:
        raise UsageError("--h-order must be >= 1")
    seed = args.seed
    wc = _or(args.max_weight, 3)
    rep = Report(command="", seed=seed, caps={"kind": args.kind, "checks": checks, "h_order": N})
    if args.kind == "vh":
        hc = build_vh(R, lam)
        if "limits" in checks:
            rep.extend(classical_limit(hc, samples=_or(args.samples, 100), weight_cap=wc, seed=seed,
                                       max_len=args.max_len)[1])
        if "hadic" in checks:
            rep.extend(h_adic_weak_commutativity(hc, orders=range(1, N + 1), seed=seed, max_len=args.max_len))
    else:
        V = VacuumModule(R, lam)
        fw = {k: int(v) for k, v in _kv_list(args.fw, "--fw").items()} or None
        hc = rees_deformation(V, build_filtration(V, fw), args.splitting)
        if "limits" in checks:
            rep.extend(rees_checks(hc, samples=_or(args.samples, 20), weight_cap=wc, seed=seed, max_len=args.max_len))
        if "hadic" in checks:
            raise UsageError("hadic checks apply to --kind vh")
    if "star" in checks:
        rep.extend(star_deformation_check(hc, samples=_or(args.samples, 30), weight_cap=wc, seed=seed,
                                          max_len=args.max_len))
    if "specialize" in checks:
        rep.extend(specialization_check(hc, samples=_or(args.samples, 100), weight_cap=wc, seed=seed,
                                        max_len=args.max_len))
    return rep


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt_json = "--format" in argv and argv[argv.index("--format") + 1:argv.index("--format") + 2] == ["json"]
    start = time.perf_counter()
    try:
        rep, extra = run(argv)
    except io.AlgebraFileError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    except (UsageError, StructureError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep.timing = time.perf_counter() - start
    if fmt_json:
        sys.stdout.write(rep.to_json())
    else:
        if extra is not None:
            print(extra)
        sys.stdout.write(rep.to_text())
    if rep.failed():
        return 1
    if any(r.status == "inconclusive" for r in rep.records):
        if "--strict" in argv:
            return 3
        print("warning: some checks hit a cap and are inconclusive", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
