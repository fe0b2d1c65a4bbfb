"""Command-line front end.

Every subcommand renders to one of three formats (table, json, csv) and is
deterministic: repeated runs, and runs with different shard counts, produce
byte-identical output.  All configuration is by flags; no environment
variables are consulted.

Exit codes: 0 success; 1 when a verify-style command (fl-check, sandwich,
pigeonhole) finds a violated bound; 2 on usage errors.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__
from .affine import canonical_form, orbit
from .bounds import (
    fl_growth_check,
    kl_bound,
    lower_bound_family,
    pigeonhole_witness,
    rep_decompose,
    sandwich_bounds,
    witness_order_bound,
)
from .core import IntSet, ZnSet, format_fraction, format_order, parse_exact_number
from .spectrum import (
    DEFAULT_CARD_CAP,
    DEFAULT_EXHAUSTIVE_LIMIT,
    spectrum,
    verify_conjecture,
)
from .structure import df_analyze, pipeline_trace
from .sumsets import order, trajectory

SCHEMA_VERSION = 1

FORMAT_OPTION = click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "json", "csv"]),
    default="table",
    show_default=True,
    help="Output format.",
)


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise click.UsageError(f"range must look like A..B, got {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError as exc:
        raise click.UsageError(f"range bounds must be integers: {exc}") from exc
    if a > b:
        raise click.UsageError(f"empty range {text!r}")
    return a, b


def _parse_set(n: int, text: str) -> ZnSet:
    try:
        a = ZnSet.from_text(n, text)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if not a:
        raise click.UsageError("the set must be nonempty")
    return a


def _parse_sigma(text: str) -> Fraction:
    try:
        sigma = parse_exact_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"sigma must be an exact rational: {exc}") from exc
    return sigma


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc


@click.group(cls=_Cli)
@click.version_option(
    __version__, message=f"znbases {__version__} (schema {SCHEMA_VERSION})"
)
def main() -> None:
    """Orders of additive bases of finite cyclic groups: exact computation,
    spectra, structure analysis, and bound verification."""


@main.command("order")
@click.option("--n", type=int, required=True, help="Modulus of Z_n.")
@click.option("--set", "set_text", required=True, help='Set literal, e.g. "0,1,3".')
@click.option("--trajectory", "with_trajectory", is_flag=True,
              help="Show the whole growth trajectory, not just the order.")
@FORMAT_OPTION
def order_cmd(n: int, set_text: str, with_trajectory: bool, fmt: str) -> None:
    """Order of a subset of Z_n: least h with hA = Z_n, or inf."""
    a = _parse_set(n, set_text)
    if not with_trajectory:
        rho = order(a)
        if fmt == "json":
            click.echo(_emit_json({"n": n, "set": a.to_text(), "order": rho}))
        elif fmt == "csv":
            click.echo("n,set,order")
            click.echo(f"{n},{a.to_text(';')},{format_order(rho)}")
        else:
            click.echo(format_order(rho))
        return
    traj = trajectory(a)
    if fmt == "json":
        click.echo(_emit_json({"n": n, "set": a.to_text(), **traj.to_dict()}))
    elif fmt == "csv":
        lines = ["h,size"]
        lines += [f"{h},{s}" for h, s in enumerate(traj.sizes, start=1)]
        lines.append("n,set,order")
        lines.append(f"{n},{a.to_text(';')},{format_order(traj.order)}")
        click.echo("\n".join(lines))
    else:
        click.echo(f"base (0-translated): {{{traj.base.to_text()}}}")
        for h, (lv, s) in enumerate(zip(traj.levels, traj.sizes), start=1):
            click.echo(f"  h={h:<3d} |hA|={s:<4d} {{{lv.to_text()}}}")
        if traj.order is not None:
            click.echo(f"order: {traj.order}")
        else:
            click.echo(f"order: inf (stabilized at {{{traj.stabilized.to_text()}}})")


@main.command("canon")
@click.option("--n", type=int, required=True, help="Modulus of Z_n.")
@click.option("--set", "set_text", required=True, help="Set literal.")
@FORMAT_OPTION
def canon_cmd(n: int, set_text: str, fmt: str) -> None:
    """Canonical affine-orbit representative and orbit size."""
    a = _parse_set(n, set_text)
    canon = canonical_form(a)
    size = len(orbit(a))
    if fmt == "json":
        click.echo(_emit_json(
            {"n": n, "set": a.to_text(), "canonical": canon.to_text(), "orbit_size": size}
        ))
    elif fmt == "csv":
        click.echo("n,set,canonical,orbit_size")
        click.echo(f"{n},{a.to_text(';')},{canon.to_text(';')},{size}")
    else:
        click.echo(f"canonical: {{{canon.to_text()}}}")
        click.echo(f"orbit size: {size}")


@main.command("spectrum")
@click.option("--n", type=int, required=True, help="Modulus of Z_n.")
@click.option("--exhaustive", is_flag=True, help="Scan every basis orbit (default).")
@click.option("--max-card", type=int, default=None,
              help=f"Cap orbit cardinality instead of scanning exhaustively "
                   f"(e.g. {DEFAULT_CARD_CAP}).")
@click.option("--limit", type=int, default=DEFAULT_EXHAUSTIVE_LIMIT, show_default=True,
              help="Largest n allowed in exhaustive mode.")
@click.option("--shards", type=int, default=1, show_default=True,
              help="Number of work partitions (result is shard-count independent).")
@FORMAT_OPTION
def spectrum_cmd(n, exhaustive, max_card, limit, shards, fmt) -> None:
    """Achieved orders of bases of Z_n, with gap runs and witnesses."""
    if exhaustive and max_card is not None:
        raise click.UsageError("--exhaustive and --max-card are mutually exclusive")
    report = spectrum(n, max_card=max_card, limit=limit, shards=shards)
    if fmt == "json":
        click.echo(_emit_json(report.to_dict()))
    elif fmt == "csv":
        lines = ["n,order,witness"]
        lines += [f"{n},{o},{w.to_text(';')}" for o, w in report.witnesses]
        lines.append("n,gap_start,gap_end")
        lines += [f"{n},{a},{b}" for a, b in report.gaps]
        click.echo("\n".join(lines))
    else:
        click.echo(f"spectrum of Z_{n} ({report.mode}"
                   + (f", max card {report.max_card}" if report.max_card else "")
                   + ")")
        for o, w in report.witnesses:
            click.echo(f"  order {o:<4d} witness {{{w.to_text()}}}")
        if report.gaps:
            runs = ", ".join(f"[{a},{b}]" for a, b in report.gaps)
            click.echo(f"  gaps: {runs}")
        else:
            click.echo("  gaps: none")


def _conjecture_csv_single(report) -> str:
    lines = ["n,k,order,witness,nearest_l,min_gap"]
    for e in report.exceeders:
        lines.append(
            f"{report.n},{report.k},{e.order},{e.witness.to_text(';')},"
            f"{e.nearest_l},{format_fraction(e.min_gap)}"
        )
    lines.append("n,k,max_min_gap,argmax_witness,caveat")
    argmax = "" if report.argmax_witness is None else report.argmax_witness.to_text(";")
    lines.append(
        f"{report.n},{report.k},{format_fraction(report.max_min_gap)},"
        f"{argmax},{_bool(report.completeness_caveat)}"
    )
    return "\n".join(lines)


@main.command("conjecture")
@click.option("--k", type=int, required=True, help="Threshold parameter: orders > n/k.")
@click.option("--n", type=int, default=None, help="Single modulus to check.")
@click.option("--n-range", default=None, help="Range of moduli A..B to sweep.")
@click.option("--max-card", type=int, default=None,
              help="Cardinality cap (required above the exhaustive limit).")
@click.option("--limit", type=int, default=DEFAULT_EXHAUSTIVE_LIMIT, show_default=True)
@click.option("--shards", type=int, default=1, show_default=True)
@click.option("--no-kl-cap", is_flag=True,
              help="Do not tighten the cap with the order/cardinality bound.")
@FORMAT_OPTION
def conjecture_cmd(k, n, n_range, max_card, limit, shards, no_kl_cap, fmt) -> None:
    """Largest gap to the nearest n/l over bases of order > n/k."""
    if (n is None) == (n_range is None):
        raise click.UsageError("exactly one of --n and --n-range is required")
    if n is not None:
        moduli = [n]
    else:
        lo, hi = _parse_range(n_range)
        moduli = list(range(lo, hi + 1))
    reports = [
        verify_conjecture(m, k, max_card=max_card, limit=limit, shards=shards,
                          use_kl_cap=not no_kl_cap)
        for m in moduli
    ]
    if len(reports) == 1:
        report = reports[0]
        if fmt == "json":
            click.echo(_emit_json(report.to_dict()))
        elif fmt == "csv":
            click.echo(_conjecture_csv_single(report))
        else:
            caveat = " (completeness caveat: cardinality-capped)" \
                if report.completeness_caveat else ""
            click.echo(f"bases of Z_{report.n} with order > {report.n}/{report.k}:"
                       f"{caveat}")
            for e in report.exceeders:
                click.echo(
                    f"  order {e.order:<4d} gap {format_fraction(e.min_gap):>8s} "
                    f"(nearest l={e.nearest_l}) witness {{{e.witness.to_text()}}}"
                )
            click.echo(f"max min-gap: {format_fraction(report.max_min_gap)}")
        return
    running = Fraction(0)
    rows = []
    for rep in reports:
        running = max(running, rep.max_min_gap)
        rows.append((rep, running))
    if fmt == "json":
        click.echo(_emit_json({
            "k": k,
            "reports": [rep.to_dict() for rep in reports],
            "running_max": [
                {"n": rep.n, "value": format_fraction(rm)} for rep, rm in rows
            ],
        }))
    elif fmt == "csv":
        lines = ["n,k,max_min_gap,running_max,argmax_witness,caveat"]
        for rep, rm in rows:
            argmax = "" if rep.argmax_witness is None else rep.argmax_witness.to_text(";")
            lines.append(
                f"{rep.n},{rep.k},{format_fraction(rep.max_min_gap)},"
                f"{format_fraction(rm)},{argmax},{_bool(rep.completeness_caveat)}"
            )
        click.echo("\n".join(lines))
    else:
        click.echo(f"order > n/{k} gap sweep:")
        for rep, rm in rows:
            click.echo(
                f"  n={rep.n:<4d} max gap {format_fraction(rep.max_min_gap):>8s}"
                f"  running max {format_fraction(rm):>8s}"
            )


@main.command("kl-bound")
@click.option("--n", type=int, required=True)
@click.option("--rho", type=int, required=True, help="Order threshold in [2, n-1].")
@click.option("--check", is_flag=True,
              help="Also enumerate basis orbits of order >= rho and verify "
                   "every cardinality against the bound (n <= limit).")
@click.option("--limit", type=int, default=DEFAULT_EXHAUSTIVE_LIMIT, show_default=True)
@FORMAT_OPTION
def kl_bound_cmd(n: int, rho: int, check: bool, limit: int, fmt: str) -> None:
    """Cardinality bound for bases of Z_n of order at least rho.

    With --check, exits 1 if some enumerated basis violates the bound.
    """
    report = kl_bound(n, rho)
    violations = 0
    checked = None
    if check:
        checked = 0
        from .spectrum import enumerate_bases
        from .sumsets import order as _order

        for rep in enumerate_bases(n, limit=limit):
            rho_a = _order(rep)
            if rho_a is not None and rho_a >= rho:
                checked += 1
                if len(rep) > report.bound:
                    violations += 1
    if fmt == "json":
        payload = report.to_dict()
        if check:
            payload["checked_orbits"] = checked
            payload["violations"] = violations
        click.echo(_emit_json(payload))
    elif fmt == "csv":
        lines = ["n,rho,d,value"]
        lines += [f"{n},{rho},{d},{v}" for d, v in report.terms]
        lines.append("n,rho,bound")
        lines.append(f"{n},{rho},{report.bound}")
        if check:
            lines.append("checked_orbits,violations")
            lines.append(f"{checked},{violations}")
        click.echo("\n".join(lines))
    else:
        for d, v in report.terms:
            click.echo(f"  d={d:<4d} term={v}")
        click.echo(f"bound: {report.bound}")
        if check:
            click.echo(f"checked {checked} basis orbits, {violations} violations")
    if violations:
        sys.exit(1)


@main.command("fl-check")
@click.option("--set", "set_text", required=True,
              help='Normalized integer set literal, e.g. "0,1,3".')
@click.option("--h-max", type=int, required=True, help="Check h = 1..h_max.")
@FORMAT_OPTION
def fl_check_cmd(set_text: str, h_max: int, fmt: str) -> None:
    """Integer-sumset growth check |hA| >= |A| + (h-1)*span.

    Exits 1 if the bound fails anywhere while its hypothesis holds.
    """
    a = IntSet.from_text(set_text)
    report = fl_growth_check(a, h_max)
    if fmt == "json":
        click.echo(_emit_json(report.to_dict()))
    elif fmt == "csv":
        lines = ["members,span,hypothesis_ok"]
        lines.append(f"{a.to_text(';')},{report.span},{_bool(report.hypothesis_ok)}")
        lines.append("h,size,lower_bound,holds")
        lines += [
            f"{r.h},{r.size},{r.lower_bound},{_bool(r.holds)}" for r in report.records
        ]
        click.echo("\n".join(lines))
    else:
        hyp = "holds" if report.hypothesis_ok else "FAILS (records not asserted)"
        click.echo(f"span {report.span}, hypothesis 2|A|-3 >= span: {hyp}")
        for r in report.records:
            mark = "ok" if r.holds else "VIOLATED"
            click.echo(f"  h={r.h:<3d} |hA|={r.size:<6d} bound {r.lower_bound:<6d} {mark}")
    if report.hypothesis_ok and not report.all_hold:
        sys.exit(1)


@main.command("sandwich")
@click.option("--n", type=int, required=True)
@click.option("--a", type=int, required=True, help="Proper divisor of n, a >= 2.")
@click.option("--b", type=int, required=True, help="Element coprime to a.")
@FORMAT_OPTION
def sandwich_cmd(n: int, a: int, b: int, fmt: str) -> None:
    """Two-sided order bound for the triple {0, a, b} with a | n.

    Exits 1 if the measured order falls outside the bound.
    """
    report = sandwich_bounds(n, a, b)
    if fmt == "json":
        click.echo(_emit_json(report.to_dict()))
    elif fmt == "csv":
        click.echo("n,a,b,lower,upper,actual,holds")
        click.echo(
            f"{n},{a},{b},{report.lower},{report.upper},{report.actual},"
            f"{_bool(report.holds)}"
        )
    else:
        mark = "ok" if report.holds else "VIOLATED"
        click.echo(
            f"{report.lower} <= order {{0,{a},{b}}} = {report.actual} "
            f"<= {report.upper}: {mark}"
        )
    if not report.holds:
        sys.exit(1)


@main.command("pigeonhole")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--t", type=int, required=True, help="Third element of {0, 1, t}.")
@FORMAT_OPTION
def pigeonhole_cmd(n: int, k: int, t: int, fmt: str) -> None:
    """Pigeonhole witness for {0,1,t}: multiplier c, signed residue r = c*t,
    order bound s + c*n/s, and the representation t = (d*n + e)/c.

    Exits 1 if the measured order exceeds the bound.
    """
    witness = pigeonhole_witness(n, k, t)
    bound = witness_order_bound(witness)
    decomp = rep_decompose(n, k, t, witness.c)
    if fmt == "json":
        click.echo(_emit_json({
            "witness": witness.to_dict(),
            "order_bound": bound.to_dict(),
            "decomposition": decomp.to_dict(),
        }))
    elif fmt == "csv":
        click.echo("n,k,t,c,r,s,bound,actual,holds,d,e,applicable")
        b_txt = "inf" if bound.bound is None else format_fraction(bound.bound)
        click.echo(
            f"{n},{k},{t},{witness.c},{witness.r},{witness.s},{b_txt},"
            f"{bound.actual},{_bool(bound.holds)},{decomp.d},{decomp.e},"
            f"{_bool(decomp.applicable)}"
        )
    else:
        click.echo(f"witness: c={witness.c}, r={witness.r}, s={witness.s}")
        b_txt = "inf" if bound.bound is None else format_fraction(bound.bound)
        mark = "ok" if bound.holds else "VIOLATED"
        click.echo(f"order {{0,1,{t}}} = {bound.actual} <= {b_txt}: {mark}")
        if decomp.applicable:
            click.echo(f"t = ({decomp.d}*{n} + {decomp.e})/{decomp.c}")
        else:
            click.echo(f"no representation with |e| <= c*k (s = {witness.s} > {witness.c * k})")
    if not bound.holds:
        sys.exit(1)


@main.command("df-analyze")
@click.option("--n", type=int, required=True)
@click.option("--set", "set_text", required=True, help="Set literal.")
@click.option("--sigma", default="2.04", show_default=True,
              help="Doubling threshold as an exact rational.")
@click.option("--coprime-diff", is_flag=True,
              help="Restrict covering progressions to differences coprime to q.")
@FORMAT_OPTION
def df_analyze_cmd(n: int, set_text: str, sigma: str, coprime_diff: bool, fmt: str) -> None:
    """Small-doubling coset structure scan over every proper subgroup."""
    a = _parse_set(n, set_text)
    analysis = df_analyze(a, sigma=_parse_sigma(sigma), coprime_only=coprime_diff)
    if fmt == "json":
        click.echo(_emit_json(analysis.to_dict()))
    elif fmt == "csv":
        lines = ["m,q,cosets_met,max_coset_fraction,ap_start,ap_diff,ap_len,case,inequality_holds"]
        for r in analysis.reports:
            lines.append(
                f"{r.m},{r.q},{r.cosets_met},{format_fraction(r.max_coset_fraction)},"
                f"{r.ap_start},{r.ap_diff},{r.ap_len},{r.case},{_bool(r.inequality_holds)}"
            )
        lines.append("set_size,double_size,doubling_ratio,doubling_ok,density_ok,best_m")
        best_m = "" if analysis.best is None else str(analysis.best.m)
        lines.append(
            f"{analysis.set_size},{analysis.double_size},"
            f"{format_fraction(analysis.doubling_ratio)},"
            f"{_bool(analysis.doubling_hypothesis_ok)},"
            f"{_bool(analysis.density_hypothesis_ok)},{best_m}"
        )
        click.echo("\n".join(lines))
    else:
        click.echo(
            f"|A| = {analysis.set_size}, |2A| = {analysis.double_size}, "
            f"ratio {format_fraction(analysis.doubling_ratio)} "
            f"(< sigma: {_bool(analysis.doubling_hypothesis_ok)})"
        )
        for r in analysis.reports:
            star = " *" if r is analysis.best else ""
            click.echo(
                f"  m={r.m:<4d} cosets {r.cosets_met:<4d} "
                f"frac {format_fraction(r.max_coset_fraction):>6s} "
                f"AP(start {r.ap_start}, diff {r.ap_diff}, len {r.ap_len}) "
                f"{r.case:<13s} ineq {_bool(r.inequality_holds)}{star}"
            )
        if analysis.best is None:
            click.echo("best: none")


@main.command("pipeline")
@click.option("--n", type=int, required=True)
@click.option("--set", "set_text", required=True, help="Set literal.")
@click.option("--k", type=int, required=True)
@click.option("--sigma", default="2.04", show_default=True,
              help="Doubling threshold as an exact rational.")
@FORMAT_OPTION
def pipeline_cmd(n: int, set_text: str, k: int, sigma: str, fmt: str) -> None:
    """End-to-end structure-argument trace with exact slack values."""
    a = _parse_set(n, set_text)
    trace = pipeline_trace(a, k, sigma=_parse_sigma(sigma))
    d = trace.to_dict()
    if fmt == "json":
        click.echo(_emit_json(d))
    elif fmt == "csv":
        lines = ["field,value"]
        for key in sorted(d):
            v = d[key]
            if isinstance(v, bool):
                v = _bool(v)
            elif isinstance(v, list):
                v = ";".join(str(x) for x in v)
            elif isinstance(v, str):
                v = v.replace(",", ";")
            elif v is None:
                v = ""
            lines.append(f"{key},{v}")
        click.echo("\n".join(lines))
    else:
        for key in sorted(d):
            click.echo(f"  {key}: {d[key]}")


@main.command("family")
@click.option("--k", type=int, required=True)
@click.option("--n-range", required=True, help="Range of moduli A..B.")
@FORMAT_OPTION
def family_cmd(k: int, n_range: str, fmt: str) -> None:
    """Measured orders of {0,1,k} for moduli n = -1 mod k in the range."""
    lo, hi = _parse_range(n_range)
    records = lower_bound_family(k, (lo, hi))
    if fmt == "json":
        click.echo(_emit_json({"k": k, "records": [r.to_dict() for r in records]}))
    elif fmt == "csv":
        lines = ["k,n,rho,nearest_l,min_gap"]
        lines += [
            f"{r.k},{r.n},{r.rho},{r.nearest_l},{format_fraction(r.min_gap)}"
            for r in records
        ]
        click.echo("\n".join(lines))
    else:
        for r in records:
            forms = []
            if r.matches_k_minus_2_form:
                forms.append("matches (k-2)+1/k")
            if r.matches_k_minus_3_form:
                forms.append("matches (k-3)+1/k")
            note = f"  [{', '.join(forms)}]" if forms else ""
            click.echo(
                f"  n={r.n:<5d} rho={r.rho:<5d} nearest l={r.nearest_l} "
                f"gap {format_fraction(r.min_gap)}{note}"
            )


if __name__ == "__main__":
    main()
