"""Command-line front end.

Usage:
    z22horikawa scan --line 2chi-6 --chi-min 4 --chi-max 40 --format csv
    z22horikawa construct --line 2chi-5 --chi 6 --component II
    z22horikawa verify --chi-max 120 --report report.json

Exit codes: 0 pass, 1 construction or verification failure, 2 usage error.
An optional ``--config FILE`` holds ``key = value`` lines (keys as the long
flag names); flags given on the command line win.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .certificate import Certificate, certificate_from_record, to_csv, to_text
from .errors import Z22Error
from .horikawa import components_for, construct, verify_theorem
from .records import ComponentTag, LineTag

__all__ = ["cli", "main", "scan_certificates", "read_config"]

DEFAULTS = {"line": "2chi-6", "chi_min": None, "chi_max": None, "component": None,
            "format": "json", "oracle": "on"}


def read_config(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, quotes are stripped."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("'\"")
    return out


def _resolve(ctx: click.Context, name: str, value):
    if value is not None:
        return value
    cfg = (ctx.obj or {}).get("config", {})
    return cfg.get(name, DEFAULTS.get(name))


def _parse_line(text) -> LineTag:
    try:
        return LineTag.parse(str(text))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _parse_int(name, value):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise click.UsageError(f"--{name.replace('_', '-')} needs an integer, got {value!r}") from None


def _parse_component(value) -> ComponentTag | None:
    if value is None:
        return None
    try:
        return ComponentTag.parse(str(value))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _parse_choice(name, value, choices):
    if value not in choices:
        raise click.UsageError(f"--{name} must be one of {', '.join(choices)}, got {value!r}")
    return value


def _emit(certs: list[Certificate], fmt: str) -> str:
    if fmt == "json":
        return "".join(c.to_json() + "\n" for c in certs)
    if fmt == "csv":
        return to_csv(certs)
    return to_text(certs)


def scan_certificates(line: LineTag, chi_min: int, chi_max: int,
                      component: ComponentTag | None = None, oracle: bool = True):
    """Certificates for every (pair, component) in range, ordered by (chi, component)."""
    certs, failures = [], []
    for chi in range(chi_min, chi_max + 1):
        for comp in components_for(line, chi):
            if component is not None and comp is not component:
                continue
            try:
                rec = construct(line, chi, comp, oracle=oracle)
            except (Z22Error, AssertionError) as exc:
                failures.append(f"{line.value} chi={chi} {comp.value}: {exc}")
                continue
            if rec.oracle is not None and not all(rec.oracle.values()):
                bad = ", ".join(k for k, ok in rec.oracle.items() if not ok)
                failures.append(f"{line.value} chi={chi} {comp.value}: oracle checks failed: {bad}")
            certs.append(certificate_from_record(rec))
    return certs, failures


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="key = value file supplying defaults for any flag")
@click.pass_context
def cli(ctx, config_path):
    """Z2^2-cover constructions on the Horikawa lines K^2 = 2chi-6 and K^2 = 2chi-5."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = read_config(config_path) if config_path else {}


_fmt_option = click.option("--format", "fmt", default=None, help="json | csv | text")
_oracle_option = click.option("--oracle", default=None, help="on | off (default on)")


@cli.command()
@click.option("--line", default=None, help="2chi-6 | 2chi-5")
@click.option("--chi-min", default=None)
@click.option("--chi-max", default=None)
@click.option("--component", default=None, help="restrict to only | I | II")
@_fmt_option
@_oracle_option
@click.pass_context
def scan(ctx, line, chi_min, chi_max, component, fmt, oracle):
    """Emit one certificate per (pair, component) along a line."""
    tag = _parse_line(_resolve(ctx, "line", line))
    lo = _resolve(ctx, "chi_min", chi_min)
    hi = _resolve(ctx, "chi_max", chi_max)
    floor = 4 if tag is LineTag.L6 else 3
    lo = floor if lo is None else _parse_int("chi_min", lo)
    if hi is None:
        raise click.UsageError("--chi-max is required")
    hi = _parse_int("chi_max", hi)
    if lo > hi:
        raise click.UsageError(f"empty range: chi-min {lo} > chi-max {hi}")
    if lo < floor:
        raise click.UsageError(f"chi-min must be at least {floor} on line {tag.value}")
    comp = _parse_component(_resolve(ctx, "component", component))
    fmt = _parse_choice("format", _resolve(ctx, "format", fmt), ("json", "csv", "text"))
    use_oracle = _parse_choice("oracle", _resolve(ctx, "oracle", oracle), ("on", "off")) == "on"

    certs, failures = scan_certificates(tag, lo, hi, comp, use_oracle)
    click.echo(_emit(certs, fmt), nl=False)
    for msg in failures:
        click.echo(msg, err=True)
    ctx.exit(1 if failures else 0)


@cli.command(name="construct")
@click.option("--line", default=None, help="2chi-6 | 2chi-5")
@click.option("--chi", default=None)
@click.option("--component", default=None, help="only | I | II")
@_fmt_option
@_oracle_option
@click.pass_context
def construct_cmd(ctx, line, chi, component, fmt, oracle):
    """Build and certify a single construction."""
    tag = _parse_line(_resolve(ctx, "line", line))
    chi = _resolve(ctx, "chi", chi)
    if chi is None:
        raise click.UsageError("--chi is required")
    chi = _parse_int("chi", chi)
    comp = _parse_component(_resolve(ctx, "component", component)) or ComponentTag.ONLY
    fmt = _parse_choice("format", _resolve(ctx, "format", fmt), ("json", "csv", "text"))
    use_oracle = _parse_choice("oracle", _resolve(ctx, "oracle", oracle), ("on", "off")) == "on"
    try:
        rec = construct(tag, chi, comp, oracle=use_oracle)
    except (Z22Error, AssertionError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
    cert = certificate_from_record(rec)
    click.echo(_emit([cert], fmt), nl=False)
    if rec.oracle is not None and not all(rec.oracle.values()):
        click.echo("oracle checks failed", err=True)
        ctx.exit(1)


@cli.command()
@click.option("--chi-max", default=None)
@click.option("--report", "report_path", default=None, help="write the JSON report here (default stdout)")
@click.pass_context
def verify(ctx, chi_max, report_path):
    """Check that every moduli component up to chi-max contains a constructed cover."""
    hi = _resolve(ctx, "chi_max", chi_max)
    if hi is None:
        raise click.UsageError("--chi-max is required")
    hi = _parse_int("chi_max", hi)
    if hi < 7:
        raise click.UsageError("--chi-max must be at least 7")
    report = verify_theorem(hi)
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    report_path = _resolve(ctx, "report", report_path)
    if report_path and report_path != "-":
        Path(report_path).write_text(text)
    else:
        click.echo(text, nl=False)
    status = "PASS" if report.passed else "FAIL"
    click.echo(f"{status}: {len(report.entries)} pairs, {report.component_total} pair-components, "
               f"{len(report.failures)} failures", err=True)
    ctx.exit(0 if report.passed else 1)


def main(argv=None):
    cli.main(args=argv, prog_name="z22horikawa")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
