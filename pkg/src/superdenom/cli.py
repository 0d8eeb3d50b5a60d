"""Command-line interface: verifications, tables and series dumps.

Exit codes: 0 = all checks pass, 1 = a mathematical discrepancy was found,
2 = usage or resource error.  Reports are canonical JSON with every number
rendered as an exact decimal string, so they are byte-stable across runs
and worker counts (except for the wall-time field).
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from fractions import Fraction

from . import denom, etaq, lattices, mult, octonion
from .etaq import SERIES_NAMES

THETA_CASE = {3: "A2A2", 7: "A6"}

LATTICE_FACTS = {
    # order: (rank, det, level, disc invariants, complement root count)
    3: (4, 9, 3, (3, 3), 12),
    7: (2, 7, 7, (7,), 42),
}


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------
# report plumbing

def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def check(name, ok, range_=None, location=None, expected=None, got=None):
    disc = None
    if not ok:
        disc = {"location": _s(location), "expected": _s(expected),
                "got": _s(got)}
    return {"name": name, "range": _s(range_), "pass": bool(ok),
            "first_discrepancy": disc}


def _s(x):
    """Render any value as an exact string (numbers never as floats)."""
    if x is None:
        return None
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


def make_report(command: str, params: dict, checks: list,
                wall_ms: int) -> dict:
    status = "pass" if all(c["pass"] for c in checks) else "fail"
    return {"command": command,
            "params": {k: _s(v) for k, v in sorted(params.items())},
            "status": status, "checks": checks, "wall_ms": wall_ms}


def emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# ----------------------------------------------------------------------
# verify targets

def verify_susy(cfg):
    ok, results = etaq.verify_susy_identity(cfg.order, Fraction(cfg.prec))
    checks = [check(name, good, range_=f"q^0..q^{cfg.prec}",
                    location=disc, expected=0,
                    got="nonzero difference" if disc is not None else None)
              for name, good, disc in results]
    return checks


def verify_theta(cfg):
    if cfg.order not in THETA_CASE:
        raise UsageError(f"no closed theta formula for order {cfg.order}")
    case = THETA_CASE[cfg.order]
    tc = mult.TwistClass(cfg.order)
    prec = Fraction(cfg.prec)
    checks = []
    for lab, shift in sorted(tc.shift_table.items()):
        s = tuple(Fraction(x) for x in shift)
        cls = sum(x * x for x in s) % 2
        brute = lattices.theta_coset(tc.complement, s, prec)
        closed = etaq.theta_coset_formula(case, cls, prec)
        d = brute.first_difference(closed)
        checks.append(check(f"theta_coset_{'+'.join(map(str, lab))}",
                            d is None, range_=f"q^0..q^{cfg.prec}",
                            location=d,
                            expected=None if d is None else brute.coeff(d),
                            got=None if d is None else closed.coeff(d)))
    return checks


def verify_spin(cfg):
    u = octonion.build_twist_element(cfg.order)
    rv = octonion.rho_V(u)
    rl = octonion.rho_L(u)
    rr = octonion.rho_R(u)
    expected = octonion.permutation_matrix(
        octonion.REFERENCE_ACTIONS[cfg.order])
    shapes = {1: "1^8", 3: "1^23^2", 7: "1^17^1"}
    checks = [
        check("vector_action_matches_table", rv == expected,
              location="rho_V", expected="reference permutation",
              got="different matrix"),
        check("matrix_order", octonion.matrix_order(rv) == cfg.order,
              expected=cfg.order, got=octonion.matrix_order(rv)),
        check("cycle_shape_V",
              octonion.cycle_shape(rv).label() == shapes[cfg.order],
              expected=shapes[cfg.order], got=octonion.cycle_shape(rv).label()),
        check("cycle_shape_L",
              octonion.cycle_shape(rl).label() == shapes[cfg.order],
              expected=shapes[cfg.order], got=octonion.cycle_shape(rl).label()),
        check("spinor_traces_equal",
              octonion.mat_trace8(rl) == octonion.mat_trace8(rr),
              expected=octonion.mat_trace8(rl), got=octonion.mat_trace8(rr)),
        check("triality_on_basis_pairs", octonion.verify_triality(u),
              range_="64 basis pairs"),
        check("spin_reps_equal_vector_rep", rl == rv and rr == rv,
              location="rho_L,rho_R", expected="equal to rho_V",
              got="different matrices"),
    ]
    return checks


def verify_lattice(cfg):
    tc = mult.TwistClass(cfg.order)
    checks = []
    if cfg.order == 1:
        th = lattices.theta_coset(tc.e8, None, 3)
        checks.append(check("e8_det", tc.e8.det() == 1,
                            expected=1, got=tc.e8.det()))
        checks.append(check("e8_even", tc.e8.is_even()))
        checks.append(check("e8_theta", [th.coeff(0), th.coeff(1),
                                         th.coeff(2)] == [1, 240, 2160],
                            expected="(1,240,2160)",
                            got=(th.coeff(0), th.coeff(1), th.coeff(2))))
        return checks
    rank, det_, level, invs, roots = LATTICE_FACTS[cfg.order]
    f = tc.fixed
    checks.append(check("fixed_rank", f.rank == rank,
                        expected=rank, got=f.rank))
    checks.append(check("fixed_det", f.det() == det_,
                        expected=det_, got=f.det()))
    checks.append(check("fixed_level", f.level() == level,
                        expected=level, got=f.level()))
    checks.append(check("discriminant_group", tc.disc.invariants == invs,
                        expected=invs, got=tc.disc.invariants))
    checks.append(check("fixed_even", f.is_even()))
    nroots = sum(1 for c in lattices.enumerate_coset(tc.complement, None, 2)
                 if tc.complement.norm_of_coords(c) == 2)
    checks.append(check("complement_root_count", nroots == roots,
                        expected=roots, got=nroots))
    checks.append(check("complement_det",
                        tc.complement.det() == f.det(),
                        expected=f.det(), got=tc.complement.det()))
    # level * dual gram is an even integer matrix iff N*L* sits inside L
    dual = f.dual()
    n_dual_in_l = all(
        all((level * x).denominator == 1 for x in row)
        and (level * dual.gram[i][i]).numerator % 2 == 0
        for i, row in enumerate(dual.gram))
    checks.append(check("n_dual_inside_lattice", n_dual_in_l))
    return checks


def verify_mult(cfg):
    tc = mult.TwistClass(cfg.order)
    try:
        table = mult.build_mult_table(tc, cfg.height, cfg.max_norm)
    except (mult.TheoremClosedFormMismatch,
            mult.NonIntegralMultiplicity) as exc:
        return [check("mult_theorem1_equals_closed", False,
                      range_=f"height<={cfg.height}", location=str(exc))]
    return [check("mult_theorem1_equals_closed", True,
                  range_=f"height<={cfg.height}, {len(table)} points")]


def verify_denominator(cfg):
    report = denom.verify_identity(cfg.order, cfg.height, jobs=cfg.jobs)
    loc = exp = got = None
    if report.first_discrepancy is not None:
        loc, exp, got = report.first_discrepancy
    checks = [
        check("product_equals_sum", report.first_discrepancy is None,
              range_=f"height<={cfg.height}, {report.factor_count} factors",
              location=loc, expected=exp, got=got),
        check("anisotropic_cancellation", report.anisotropic_ok,
              range_=f"height<={cfg.height}"),
    ]
    return checks


VERIFY_TARGETS = {
    "susy": verify_susy,
    "theta": verify_theta,
    "spin": verify_spin,
    "lattice": verify_lattice,
    "mult": verify_mult,
    "denominator": verify_denominator,
}


# ----------------------------------------------------------------------
# table and dump commands

def run_table(cfg):
    if cfg.kind == "simple_roots":
        tc = mult.TwistClass(cfg.order)
        rows = [(k,) + mult.simple_root_mult(tc, k)
                for k in range(1, cfg.height + 1)]
        if cfg.format == "json":
            text = canonical_json(
                {"columns": ["k", "mult_even", "mult_odd"],
                 "order": str(cfg.order),
                 "rows": [[str(x) for x in r] for r in rows]})
        elif cfg.format == "csv":
            lines = ["k,mult_even,mult_odd"]
            lines += [",".join(str(x) for x in r) for r in rows]
            text = "\n".join(lines) + "\n"
        else:
            lines = ["k\tmult_even\tmult_odd"]
            lines += ["\t".join(str(x) for x in r) for r in rows]
            text = "\n".join(lines) + "\n"
    else:
        tc = mult.TwistClass(cfg.order)
        table = mult.build_mult_table(tc, cfg.height, cfg.max_norm)
        text = {"json": table.to_json, "csv": table.to_csv,
                "text": table.to_text}[cfg.format]()
    emit(text, cfg.out)
    return 0


def run_dump(cfg):
    if cfg.series not in SERIES_NAMES:
        raise UsageError(f"unknown series {cfg.series!r}; "
                         f"choose from {', '.join(SERIES_NAMES)}")
    qs = etaq.named_series(cfg.series, Fraction(cfg.prec))
    pairs = qs.to_pairs()
    if cfg.format == "json":
        text = canonical_json({"series": cfg.series, "prec": str(cfg.prec),
                               "terms": pairs})
    elif cfg.format == "csv":
        text = "exponent,coefficient\n" + \
            "\n".join(f"{e},{c}" for e, c in pairs) + "\n"
    else:
        text = "\n".join(f"{e}\t{c}" for e, c in pairs) + "\n"
    emit(text, cfg.out)
    return 0


# ----------------------------------------------------------------------
# argument handling

def _read_config(path) -> dict:
    cp = configparser.ConfigParser()
    with open(path) as fh:
        content = fh.read()
    if not content.lstrip().startswith("["):
        content = "[run]\n" + content
    cp.read_string(content)
    merged = {}
    for section in cp.sections():
        merged.update(dict(cp.items(section)))
    return merged


_INT_KEYS = ("order", "height", "prec", "max_norm", "jobs")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="superdenom",
        description="Exact verification of the twisted denominator "
                    "identities of the fake monster superalgebra.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--order", type=int, default=None,
                        help="twist order (1, 3 or 7)")
        sp.add_argument("--height", type=int, default=None,
                        help="height truncation of lattice expansions")
        sp.add_argument("--prec", type=int, default=None,
                        help="q-expansion precision")
        sp.add_argument("--max-norm", dest="max_norm", type=int, default=None)
        sp.add_argument("--format", choices=("text", "json", "csv"),
                        default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--config", default=None,
                        help="INI-style key=value defaults (flags win)")

    sv = sub.add_parser("verify", help="run an exact verification")
    sv.add_argument("target", choices=sorted(VERIFY_TARGETS))
    common(sv)

    st = sub.add_parser("table", help="emit a multiplicity table")
    st.add_argument("kind", choices=("mult", "simple_roots"))
    common(st)

    sd = sub.add_parser("dump", help="dump a named q-series")
    sd.add_argument("series")
    common(sd)
    return p


def resolve_config(args) -> argparse.Namespace:
    values = {}
    if args.config:
        for k, v in _read_config(args.config).items():
            key = k.replace("-", "_")
            values[key] = int(v) if key in _INT_KEYS else v
    for k, v in vars(args).items():
        if v is not None:
            values[k] = v
    cfg = argparse.Namespace(**values)
    # defaults
    if getattr(cfg, "order", None) is None:
        cfg.order = 3 if args.command != "dump" else 1
    if getattr(cfg, "prec", None) is None:
        cfg.prec = 50
    if getattr(cfg, "height", None) is None:
        cfg.height = 4 if cfg.order == 1 else 6
    if getattr(cfg, "jobs", None) is None:
        cfg.jobs = 1
    if getattr(cfg, "format", None) is None:
        cfg.format = "text"
    if getattr(cfg, "max_norm", None) is None:
        cfg.max_norm = None
    if getattr(cfg, "out", None) is None:
        cfg.out = None
    cfg.command = args.command
    for attr in ("target", "kind", "series"):
        if hasattr(args, attr):
            setattr(cfg, attr, getattr(args, attr))
    return cfg


def validate(cfg):
    if cfg.command in ("verify", "table") and cfg.order not in (1, 3, 7):
        raise UsageError(f"unsupported twist order {cfg.order}")
    if cfg.jobs < 1:
        raise UsageError("jobs must be at least 1")
    if cfg.prec < 1 or (cfg.height is not None and cfg.height < 0):
        raise UsageError("precision and height must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = resolve_config(args)
        validate(cfg)
        if cfg.command == "verify":
            start = time.monotonic()
            checks = VERIFY_TARGETS[cfg.target](cfg)
            wall = int((time.monotonic() - start) * 1000)
            params = {"order": cfg.order, "height": cfg.height,
                      "prec": cfg.prec, "jobs": cfg.jobs}
            report = make_report(f"verify {cfg.target}", params, checks, wall)
            if cfg.format == "json" or cfg.out:
                emit(canonical_json(report), cfg.out)
            else:
                for c in checks:
                    state = "pass" if c["pass"] else "FAIL"
                    print(f"{state}  {c['name']}"
                          + (f"  [{c['range']}]" if c["range"] else ""))
                print(f"status: {report['status']}")
            return 0 if report["status"] == "pass" else 1
        if cfg.command == "table":
            return run_table(cfg)
        if cfg.command == "dump":
            return run_dump(cfg)
        raise UsageError(f"unknown command {cfg.command}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, mult.UnsupportedTwistOrder) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
