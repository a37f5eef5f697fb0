"""Command-line front end: ``coideal verify|eval|demazure|bubble``."""

from __future__ import annotations

import json
import re
import sys

import click

from . import diagram as dg
from . import gamma
from . import relcheck as rc
from .demazure import FrobeniusPair
from .flagcat import FlagObject, parse_label
from .k0 import k0_suite
from .polyring import Poly

SUITE_CHOICES = ("core", "bubbleslides", "jserre", "k0", "all")
_RELCHECK_SUITES = {"core": (rc.CORE,), "bubbleslides": (rc.SLIDES,), "jserre": (rc.JSERRE,),
                    "k0": (), "all": rc.SUITES}


@click.group()
def main():
    """Coideal flag-category relation checker."""


@main.command()
@click.option("--suite", type=click.Choice(SUITE_CHOICES), default="core", show_default=True)
@click.option("--r", "r_max", type=click.IntRange(min=1), default=1, show_default=True, help="largest rank")
@click.option("--m", "m_max", type=click.IntRange(min=1), default=2, show_default=True, help="largest m")
@click.option("--jobs", type=click.IntRange(min=1), default=1, envvar="COIDEAL_JOBS", show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False, writable=True), default=None)
def verify(suite, r_max, m_max, jobs, json_path):
    """Run relation suites over all objects within the bounds."""
    failures = 0
    out = {}
    suites = _RELCHECK_SUITES[suite]
    if suites:
        report = rc.sweep(r_max, m_max, suites=suites, jobs=jobs)
        failures += report["failures"]
        out["relcheck"] = report
        click.echo(f"relcheck {'+'.join(suites)}: r<={r_max} m<={m_max} jobs={jobs}")
        for case_id, c in report["cases"].items():
            click.echo(f"  {case_id:28s} pass {c['pass']:6d}  fail {c['fail']}")
        click.echo("  objects by diamond weight: " + _fmt_regimes(report["regimes"]))
        click.echo("  exercised diamond weights: " + _fmt_regimes(report["exercised_regimes"]))
        click.echo(f"  {report['checks']} checks, {report['failures']} failures, {report['seconds']} s")
    if suite in ("k0", "all"):
        k0 = k0_suite(r_max, m_max)
        n_fail = len(k0["failures"])
        failures += n_fail
        out["k0"] = k0
        click.echo(f"k0: r<={r_max} m<={m_max}")
        for group in ("relations", "expansions"):
            for name, c in k0[group].items():
                click.echo(f"  {name:28s} pass {c['pass']:6d}  fail {c['fail']}")
        inv = k0["involutions"]
        click.echo(f"  involutions: bar-invariant {inv['bar_invariant']}, omega {inv['omega']}, "
                   f"sigma {inv['sigma']}, skipped {inv['skipped']}, mismatches {inv['mismatch']}")
        for line in k0["failures"]:
            click.echo(f"  FAIL {line}")
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(out, fh, indent=1)
    click.echo("ALL PASS" if failures == 0 else f"{failures} FAILURES")
    sys.exit(0 if failures == 0 else 1)


def _fmt_regimes(regimes: dict) -> str:
    return ", ".join(f"{k}: {v}" for k, v in regimes.items())


@main.command("paper-map")
def paper_map():
    """List the checked relation families and their case ids."""
    for name, ids in rc.PAPER_MAP.items():
        click.echo(f"{name}: {', '.join(ids)}")


@main.command("eval")
@click.option("--diagram", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--vector", default=None, help='basis tuple such as "0,1"')
@click.option("--all", "all_columns", is_flag=True, help="print every column")
def eval_cmd(path, vector, all_columns):
    """Evaluate a diagram file under the bimodule functor."""
    if (vector is None) == (not all_columns):
        raise click.UsageError("give exactly one of --vector or --all")
    try:
        with open(path) as fh:
            d = dg.parse(fh.read())
        matrix = gamma.eval_diagram(d)
    except dg.DiagramError as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(f"degree {d.degree()}")
    if all_columns:
        for tup, el in matrix.columns:
            click.echo(f"{_fmt_tuple(tup)} -> {el.render()}")
        return
    tup = tuple(int(x) for x in re.findall(r"-?\d+", vector))
    try:
        click.echo(f"{_fmt_tuple(tup)} -> {matrix.column(tup).render()}")
    except KeyError:
        raise click.ClickException(f"{tup} is not a basis tuple of {matrix.source}") from None


def _fmt_tuple(tup) -> str:
    return "(" + ",".join(map(str, tup)) + ")"


_OP = re.compile(r"\s*(j?)\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*")


def parse_operator(text: str, m: int) -> FrobeniusPair:
    """'[b,a]' with b > a, '[a,b]' with a < b, or 'j[1,a]'."""
    mm = _OP.fullmatch(text)
    if not mm:
        raise ValueError(f"malformed operator {text!r}")
    x, y = int(mm.group(2)), int(mm.group(3))
    if mm.group(1):
        if x != 1:
            raise ValueError("type B operator must start at 1")
        return FrobeniusPair.jblock(y, m)
    if x >= y:
        return FrobeniusPair.split_left(x, y, m)
    return FrobeniusPair.split_right(x, y, m)


@main.command()
@click.option("--op", "op", required=True, help='"[b,a]", "[a,b]" or "j[1,a]"')
@click.option("--poly", "poly", required=True, help='polynomial in t1, t2, ... e.g. "t1^2"')
@click.option("--m", "m", type=click.IntRange(min=1), default=None, help="number of variables")
def demazure(op, poly, m):
    """Apply the Frobenius trace of a block extension to a polynomial."""
    try:
        f = Poly.parse(poly)
        nums = [int(x) for x in re.findall(r"\d+", op)]
        m = max([m or 0, f.num_vars] + nums)
        F = parse_operator(op, m)
        click.echo(str(F.form(Poly.parse(poly, m))))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None


@main.command()
@click.option("--i", "label", required=True, help='label, e.g. "1/2"')
@click.option("--s", "dots", type=int, required=True, help="number of dots (may be negative)")
@click.option("--orient", type=click.Choice(["cw", "ccw"]), required=True)
@click.option("--object", "obj", required=True, help='"a=1,2;r=2;m=3" or "1,2" with --m')
@click.option("--m", "m", type=click.IntRange(min=0), default=None)
def bubble(label, dots, orient, obj, m):
    """Value of a dotted bubble in the invariant ring of an object."""
    try:
        a = parse_object(obj, m)
        i = parse_label(label)
        click.echo(str(gamma.bubble(i, dots, orient == "cw", a)))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None


def parse_object(text: str, m: int | None = None) -> FlagObject:
    mm = re.fullmatch(r"\s*a\s*=\s*([\d,\s]*?)\s*;\s*r\s*=\s*(\d+)\s*;?\s*m\s*=\s*(\d+)\s*", text)
    if mm:
        return FlagObject(int(mm.group(2)), int(mm.group(3)), tuple(int(x) for x in mm.group(1).split(",") if x.strip()))
    if not re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", text):
        raise ValueError(f"malformed object {text!r}")
    entries = tuple(int(x) for x in text.split(","))
    return FlagObject(len(entries), m if m is not None else max(entries), entries)


if __name__ == "__main__":
    main()
