"""Command-line front end.

Exit codes form a small contract so scripts can assert outcomes:
0 success, 1 surface problems, 2 unparseable input, 3 engine errors,
4 refuted centrality.  Reports are deterministic: the same inputs and
seed produce byte-identical output.
"""

from __future__ import annotations

import functools
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .algebra import Skein
from .center import decompose_central, is_central
from .coeffs import GENERIC, RingMode, root_of_unity
from .curves import AdmissibilityError, enumerate_basis
from .diagrams import EngineError
from .exprs import ParseError, parse_expression
from .qtorus import center_lattice, kernel_size, pi_degree, read_matrix
from .surface import Surface, SurfaceError, builtin_surface

EXIT_SURFACE = 1
EXIT_INPUT = 2
EXIT_ENGINE = 3
EXIT_REFUTED = 4


@dataclass
class RunConfig:
    mode: RingMode
    fmt: str
    seed: int | None

    @property
    def rng(self):
        return None if self.seed is None else random.Random(self.seed)


def _parse_mode(text: str) -> RingMode:
    if text == "generic":
        return GENERIC
    if text.startswith("root:"):
        try:
            n = int(text[5:])
        except ValueError:
            raise click.UsageError(f"bad root order in --mode {text!r}")
        if n < 3 or n % 2 == 0:
            raise click.UsageError(f"root order must be odd and at least 3, got {n}")
        return root_of_unity(n)
    raise click.UsageError(f"--mode must be generic or root:N, got {text!r}")


def _mode_str(mode: RingMode) -> str:
    return "generic" if mode.is_generic else f"root:{mode.order}"


def _load_surface(spec: str) -> Surface:
    path = Path(spec)
    if path.suffix == ".surf" or path.exists():
        return Surface.from_file(path)
    return builtin_surface(spec)


def _die(code: int, msg: str):
    click.echo(msg, err=True)
    sys.exit(code)


def _guarded(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SurfaceError as exc:
            _die(EXIT_SURFACE, f"surface error: {exc}")
        except (ParseError, AdmissibilityError, ValueError) as exc:
            _die(EXIT_INPUT, f"input error: {exc}")
        except EngineError as exc:
            _die(EXIT_ENGINE, f"engine error: {exc}")
    return wrapper


def _emit(cfg: RunConfig, text: str, payload: dict):
    if cfg.fmt == "structured":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(text)


def _skein_payload(z: Skein) -> dict:
    return {
        "rendered": str(z),
        "terms": [{"coefficient": str(z.coefficient(mc)), "curve": mc.describe()}
                  for mc in z.support()],
    }


@click.group()
@click.option("--mode", default="generic", show_default=True,
              help="Coefficient ring: generic, or root:N for an odd root of unity.")
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]),
              default="text", show_default=True, help="Report format.")
@click.option("--seed", type=int, default=None,
              help="Seed for randomized superposition drawings in mul.")
@click.pass_context
def main(ctx, mode, fmt, seed):
    """Exact calculator for skein algebras of triangulated marked surfaces."""
    ctx.obj = RunConfig(_parse_mode(mode), fmt, seed)


@main.group()
def surface():
    """Surface file operations."""


@surface.command("validate")
@click.argument("surface_spec", metavar="SURFACE")
@click.pass_obj
@_guarded
def surface_validate(cfg: RunConfig, surface_spec: str):
    """Check a surface file (or builtin name) and report its shape."""
    surf = _load_surface(surface_spec)
    boundary = sum(1 for k in surf.vertex_kinds.values() if k == "boundary")
    bedges = sum(1 for e in surf.edges if e.boundary)
    order = [e.id for e in surf.edges]
    text = "\n".join([
        f"surface: {surf.name}",
        "verdict: valid",
        f"euler characteristic: {surf.euler_characteristic()}",
        f"punctures: {len(surf.punctures)}",
        f"boundary marked points: {boundary}",
        f"edges: {surf.n_edges} ({bedges} boundary, {surf.n_edges - bedges} interior)",
        f"triangles: {len(surf.triangles)}",
        "edge order: " + " ".join(order),
    ] + [f"warning: {w}" for w in surf.warnings])
    _emit(cfg, text, {
        "surface": surf.name, "valid": True,
        "euler_characteristic": surf.euler_characteristic(),
        "punctures": len(surf.punctures), "boundary_marked_points": boundary,
        "edges": surf.n_edges, "boundary_edges": bedges,
        "triangles": len(surf.triangles), "edge_order": order,
        "warnings": list(surf.warnings),
    })


@main.group()
def basis():
    """Reduced multicurve basis operations."""


@basis.command("enumerate")
@click.option("--bound", type=int, required=True,
              help="Maximum edge coordinate (undoubled).")
@click.argument("surface_spec", metavar="SURFACE")
@click.pass_obj
@_guarded
def basis_enumerate(cfg: RunConfig, bound: int, surface_spec: str):
    """List every basis curve with coordinates up to the bound."""
    if bound < 0:
        raise click.UsageError("--bound must be nonnegative")
    surf = _load_surface(surface_spec)
    curves = [mc.describe() for mc in enumerate_basis(surf, bound)]
    text = "\n".join([f"{len(curves)} basis curves on {surf.name} at bound {bound}:"]
                     + [f"  {c}" for c in curves])
    _emit(cfg, text, {"surface": surf.name, "bound": bound,
                      "count": len(curves), "curves": curves})


@main.command()
@click.argument("surface_spec", metavar="SURFACE")
@click.argument("expr_a")
@click.argument("expr_b")
@click.pass_obj
@_guarded
def mul(cfg: RunConfig, surface_spec: str, expr_a: str, expr_b: str):
    """Multiply two skein expressions."""
    surf = _load_surface(surface_spec)
    a = parse_expression(expr_a, surf, cfg.mode)
    b = parse_expression(expr_b, surf, cfg.mode)
    prod = a.mul(b, cfg.rng)
    _emit(cfg, str(prod), {
        "surface": surf.name, "mode": _mode_str(cfg.mode),
        "product": _skein_payload(prod),
    })


def _require_root(cfg: RunConfig) -> int:
    if cfg.mode.is_generic:
        raise click.UsageError("center commands need --mode root:N")
    return cfg.mode.order


@main.group()
def center():
    """Centrality checks and center decomposition at a root of unity."""


@center.command("verify")
@click.option("--bound", type=int, default=2, show_default=True,
              help="Basis bound for the commutator sweep.")
@click.argument("surface_spec", metavar="SURFACE")
@click.argument("expr")
@click.pass_obj
@_guarded
def center_verify(cfg: RunConfig, bound: int, surface_spec: str, expr: str):
    """Check an element against every basis curve up to the bound."""
    _require_root(cfg)
    if bound < 1:
        raise click.UsageError("--bound must be at least 1")
    surf = _load_surface(surface_spec)
    z = parse_expression(expr, surf, cfg.mode)
    report = is_central(z, bound)
    payload = {
        "surface": surf.name, "mode": _mode_str(cfg.mode), "bound": bound,
        "central": report.central,
        "witness": None if report.central else report.witness.describe(),
        "commutator": None if report.central else str(report.commutator),
    }
    _emit(cfg, str(report), payload)
    if not report.central:
        sys.exit(EXIT_REFUTED)


@center.command("decompose")
@click.option("--bound", type=int, default=2, show_default=True,
              help="Basis bound for the witness search on failure.")
@click.argument("surface_spec", metavar="SURFACE")
@click.argument("expr")
@click.pass_obj
@_guarded
def center_decompose(cfg: RunConfig, bound: int, surface_spec: str, expr: str):
    """Express a central element in the standard central generators."""
    n = _require_root(cfg)
    if bound < 1:
        raise click.UsageError("--bound must be at least 1")
    surf = _load_surface(surface_spec)
    z = parse_expression(expr, surf, cfg.mode)
    cert = decompose_central(z, n, bound)
    payload = {
        "surface": surf.name, "mode": _mode_str(cfg.mode), "bound": cert.bound,
        "ok": cert.ok, "reason": cert.reason,
        "entries": [{
            "coefficient": str(coeff),
            "generators": [{"kind": g.kind, "label": g.label, "exponent": e}
                           for g, e in gens],
        } for gens, coeff in cert.entries],
        "residual": _skein_payload(cert.residual),
        "witness": None if cert.witness is None or cert.witness.central else {
            "curve": cert.witness.witness.describe(),
            "commutator": str(cert.witness.commutator),
        },
    }
    _emit(cfg, cert.render(), payload)
    if not cert.ok:
        sys.exit(EXIT_REFUTED)


@main.group()
def torus():
    """Quantum torus computations over skew integer matrices."""


@torus.command("pidegree")
@click.option("--order", type=int, default=None,
              help="Odd root order; defaults to the --mode root order.")
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def torus_pidegree(cfg: RunConfig, order: int | None, matrix_file: str):
    """Center lattice and PI degree of the torus of a skew matrix."""
    if order is None:
        if cfg.mode.is_generic:
            raise click.UsageError("give --order N or --mode root:N")
        order = cfg.mode.order
    if order < 3 or order % 2 == 0:
        raise click.UsageError(f"order must be odd and at least 3, got {order}")
    P = read_matrix(Path(matrix_file).read_text())
    lattice = center_lattice(P, order)
    pi = pi_degree(P, order)
    if P.k <= 4 and order <= 7:
        oracle = "agreed" if pi * pi * kernel_size(P, order) == order ** P.k \
            else "disagreed"
    else:
        oracle = "skipped"
    text = "\n".join([
        f"matrix size: {P.k}",
        f"order: {order}",
        "center lattice basis:",
    ] + ["  " + " ".join(str(x) for x in row) for row in lattice] + [
        f"PI degree: {pi}",
        f"oracle: {oracle}",
    ])
    _emit(cfg, text, {
        "size": P.k, "order": order,
        "center_lattice": [list(row) for row in lattice],
        "pi_degree": pi, "oracle": oracle,
    })
