"""Command-line front end.

Subcommands print JSON (``measure``, ``region``, ``counterexample``,
``verify``) or CSV (``sweep``).  Exit codes: 0 success, 1 a verification
check failed, 2 invalid input, 3 unsupported feature.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .eof import (
    EofResult,
    eof_bell_diagonal,
    eof_bruteforce,
    eof_isotropic,
    eof_oo,
    eof_werner,
    epsilon_isotropic,
    epsilon_werner,
    extension_applies_werner,
    isotropic_envelope,
)
from .errors import Infeasible, InputError, SymtangleError, Unsupported
from .geometry import invariant_state_space, ppt_states, ppt_region, separable_region
from .groups import GroupSpec, coords, real_embedding, twirl, twirl_residual
from .opcore import DensityMatrix, _log_scale
from .ree import (
    ReeResult,
    additivity_counterexample,
    coords_from_weights,
    ree_isotropic,
    ree_numeric,
    ree_oo,
    ree_werner,
    weights_from_coords,
)
from .verify import SUITES

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3

GROUP_CHOICES = ("uu", "uubar", "oo", "bell", "weyl", "weyltilde", "su2", "uuvv", "tensorflip")


def make_group(name: str, d: Optional[int] = None, j1: Optional[str] = None, j2: Optional[str] = None) -> GroupSpec:
    name = name.lower()
    if name == "bell":
        return GroupSpec.bell()
    if name == "su2":
        if j1 is None or j2 is None:
            raise InputError("su2 needs --j1 and --j2")
        return GroupSpec.su2(Fraction(j1), Fraction(j2))
    if d is None:
        raise InputError(f"group {name} needs --d")
    if d < 2:
        raise InputError("d must be at least 2")
    if name == "uuvv":
        return GroupSpec.tensor(GroupSpec.uu(d), GroupSpec.uu(d))
    ctor = {"uu": GroupSpec.uu, "uubar": GroupSpec.uubar, "oo": GroupSpec.oo, "weyl": GroupSpec.weyl,
            "weyltilde": GroupSpec.weyl_tilde, "tensorflip": GroupSpec.tensor_flip}
    if name not in ctor:
        raise InputError(f"unknown group {name!r}; choose from {', '.join(GROUP_CHOICES)}")
    return ctor[name](d)


def threads() -> int:
    raw = os.environ.get("SYMTANGLE_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"SYMTANGLE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"SYMTANGLE_THREADS must be a positive integer, got {raw!r}")
    return n


# -- state files -------------------------------------------------------------------------

def load_state_file(path: str) -> tuple[DensityMatrix, dict]:
    """Read ``{"d1", "d2", "re", "im"}`` and report residuals before validating."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read state file {path}: {exc}") from None
    try:
        d1, d2 = int(data["d1"]), int(data["d2"])
        m = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data.get("im", 0.0), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"state file needs fields d1, d2, re, im: {exc}") from None
    n = d1 * d2
    if m.shape != (n, n):
        raise InputError(f"matrix shape {m.shape} does not match d1*d2={n}")
    report = {
        "hermiticity": float(np.max(np.abs(m - m.conj().T))),
        "trace": float(abs(np.trace(m) - 1)),
        "min_eigenvalue": float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0]),
    }
    return DensityMatrix.from_matrix(m, (d1, d2)), report


# -- measure -------------------------------------------------------------------------------

def _vec_json(v) -> dict:
    a = np.asarray(getattr(v, "amplitudes", v))
    return {"re": [float(x) for x in a.real], "im": [float(x) for x in a.imag]}


def _eof_record(r: EofResult) -> dict:
    out = {"value": float(r.value), "method": r.method, "base": r.base}
    if r.decomposition:
        out["witness"] = [{"weight": float(w), "vector": _vec_json(v)} for w, v in r.decomposition]
    if r.flat_piece is not None:
        out["flat_piece"] = [float(x) for x in r.flat_piece]
    return out


def _ree_record(r: ReeResult, scale: float, base: str) -> dict:
    out = {"value": float(r.value) * scale, "method": r.method,
           "minimizer": [float(x) for x in np.atleast_1d(r.minimizer)], "base": base}
    if r.endpoint_ok is not None:
        out["endpoint_ok"] = bool(r.endpoint_ok)
    if r.meta.get("derived_by_analogy"):
        out["derived_by_analogy"] = True
    if r.meta.get("exact_region") is False:
        # minimized over an inner approximation of the separable set
        out["upper_bound"] = True
    return out


def _coords_from_flags(group: GroupSpec, f, fhat, coord_list, weights) -> np.ndarray:
    fam = group.family
    if coord_list is not None:
        return np.array(coord_list, dtype=float)
    if fam == "UU":
        if f is None:
            raise InputError("uu needs --f")
        return np.array([f])
    if fam == "UUbar":
        if fhat is None:
            raise InputError("uubar needs --fhat")
        return np.array([fhat])
    if fam == "OO":
        if f is None or fhat is None:
            raise InputError("oo needs --f and --fhat")
        return np.array([f, fhat])
    if fam == "Bell" and weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != (4,) or np.any(w < -1e-12) or abs(w.sum() - 1) > 1e-9:
            raise InputError("--weights needs four probabilities summing to 1")
        return coords_from_weights(group, w)
    raise InputError(f"give --coords for group {group.name}")


def cmd_measure(group: GroupSpec, c=None, measure: str = "eof", *, state: Optional[DensityMatrix] = None,
                allow_twirl: bool = False, base: str = "nats", seed: int = 0, budget="small") -> dict:
    """Entanglement measure of an invariant state given by coordinates or a density matrix."""
    scale = _log_scale(base)
    record: dict = {"group": group.name, "measure": measure}
    if state is not None:
        if state.dims != group.dims:
            raise InputError(f"state dims {state.dims} do not match {group.name} dims {group.dims}")
        resid = twirl_residual(group, state.mat)
        record["twirl_residual"] = resid
        if resid > 1e-9:
            if measure == "eof" and group.family == "UU":
                ext = extension_applies_werner(state, seed=seed)
                record["extension_verdict"] = ext.verdict
                if ext.applies:
                    record.update({"value": ext.value * scale, "method": "extension", "base": base,
                                   "coords": [ext.f]})
                    return record
            if not allow_twirl:
                raise Unsupported(f"state is not {group.name}-invariant (twirl residual {resid:.3g}); "
                                  "pass --twirl to evaluate its twirl instead")
            record["twirled"] = True
        c = real_embedding(np.atleast_1d(coords(group, twirl(group, state.mat)).values))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    record["coords"] = [float(x) for x in c]
    fam = group.family
    if measure == "eof":
        if fam == "UU":
            r = eof_werner(c[0], group.d, base)
        elif fam == "UUbar":
            r = eof_isotropic(c[0], group.d, base)
        elif fam == "OO":
            r = eof_oo(c[0], c[1], group.d, base)
        elif fam == "Bell":
            r = eof_bell_diagonal(np.clip(weights_from_coords(group, c), 0, None), base)
        else:
            r = eof_bruteforce(group, c, budget=budget, seed=seed, base=base)
        record.update(_eof_record(r))
    elif measure == "ree":
        if fam == "UU":
            v = ree_werner(c[0])
            r = ReeResult(v, np.array([min(max(c[0], 0.0), 1.0)]), "closed_form")
        elif fam == "UUbar":
            v = ree_isotropic(c[0], group.d)
            r = ReeResult(v, np.array([min(c[0], 1.0)]), "closed_form")
        elif fam == "OO":
            r = ree_oo(c[0], c[1], group.d)
        else:
            r = ree_numeric(group, c)
        record.update(_ree_record(r, scale, base))
    else:
        raise InputError(f"unknown measure {measure!r}")
    return record


# -- sweep ------------------------------------------------------------------------------------

def parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"grid must be start:stop:count, got {spec!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop)) or count < 1 or (count == 1 and start != stop):
        raise InputError(f"bad grid {spec!r}")
    if count > 1 and stop <= start:
        raise InputError(f"grid stop must exceed start, got {spec!r}")
    return np.linspace(start, stop, count)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def cmd_sweep(group: GroupSpec, measure: str, grid: np.ndarray, *, along: Optional[str] = None,
              fixed: Optional[float] = None, base: str = "nats", seed: int = 0, budget="small") -> str:
    """CSV of a measure along a 1-D grid of coordinates."""
    fam = group.family
    if fam in ("UU", "UUbar"):
        label = "f" if fam == "UU" else "fhat"
        points = [np.array([x]) for x in grid]
    elif fam == "OO":
        if along not in ("f", "fhat") or fixed is None:
            raise InputError("oo sweeps need --along f|fhat and --fixed value of the other coordinate")
        label = along
        points = [np.array([x, fixed]) if along == "f" else np.array([fixed, x]) for x in grid]
    else:
        raise Unsupported(f"sweeps are available for uu, uubar and oo, not {group.name}")

    def row(p):
        if measure == "epsilon":
            if fam == "UU":
                return epsilon_werner(p[0], base), "closed_form"
            if fam == "UUbar":
                return epsilon_isotropic(p[0], group.d, base), "closed_form"
            raise Unsupported("epsilon sweeps are available for uu and uubar")
        r = cmd_measure(group, p, measure, base=base, seed=seed, budget=budget)
        return r["value"], r["method"]

    with ThreadPoolExecutor(max_workers=threads()) as pool:
        rows = list(pool.map(row, points))  # map keeps grid order

    meta = {"group": group.name, "measure": measure, "base": base, "seed": seed,
            "grid": f"{_fmt(grid[0])}:{_fmt(grid[-1])}:{len(grid)}"}
    if fam == "OO":
        meta["fixed"] = _fmt(fixed)
    if fam == "UUbar" and measure == "eof":
        _, pieces = isotropic_envelope(group.d)
        meta["flat_pieces"] = ";".join(f"{_fmt(a)}:{_fmt(b)}" for a, b in pieces) or "none"
    buf = io.StringIO(newline="")
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    buf.write(f"{label},value,method\n")
    for x, (v, m) in zip(grid, rows):
        buf.write(f"{_fmt(x)},{_fmt(v)},{m}\n")
    return buf.getvalue()


# -- region, counterexample, verify ---------------------------------------------------------------

def cmd_region(group: GroupSpec, which: str, *, budget: int = 32, seed: int = 0) -> dict:
    if which == "state-space":
        r = invariant_state_space(group)
    elif which == "ppt":
        r = ppt_states(group)
    elif which == "ppt-image":
        r = ppt_region(group)
    elif which == "separable":
        r = separable_region(group, budget, seed=seed)
    else:
        raise InputError(f"unknown region {which!r}")
    out = r.to_dict()
    out["group"] = group.name
    out["which"] = which
    return out


def cmd_counterexample(d: int) -> dict:
    if d < 2:
        raise InputError("d must be at least 2")
    return additivity_counterexample(d).to_dict()


def cmd_verify(suite: str, *, seed: int = 0, budget: str = "small") -> dict:
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[suite]
    checks = fn(seed=seed, budget=budget) if suite == "eof-oracle" else fn(seed=seed)
    return {"suite": suite, "seed": seed, "passed": all(c["passed"] for c in checks), "checks": checks}


# -- argument parsing -----------------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _budget(text: str):
    return int(text) if text.isdigit() else text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symtangle", description="Entanglement measures for symmetric bipartite states.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def group_flags(sp, required=True):
        sp.add_argument("--group", required=required, choices=GROUP_CHOICES, type=str.lower)
        sp.add_argument("--d", type=int)
        sp.add_argument("--j1")
        sp.add_argument("--j2")

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--base", choices=("nats", "bits"), default="nats")
        sp.add_argument("--output", "-o")

    m = sub.add_parser("measure", help="entanglement of formation or relative entropy of entanglement")
    group_flags(m)
    m.add_argument("--measure", choices=("eof", "ree"), default="eof")
    m.add_argument("--f", type=float)
    m.add_argument("--fhat", type=float)
    m.add_argument("--coords", type=_floats)
    m.add_argument("--weights", type=_floats, help="Bell-diagonal weights")
    m.add_argument("--state-file")
    m.add_argument("--twirl", action="store_true", help="evaluate the twirl of a non-invariant state")
    m.add_argument("--budget", type=_budget, default="small")
    common(m)

    s = sub.add_parser("sweep", help="CSV of a measure along a grid")
    group_flags(s)
    s.add_argument("--measure", choices=("eof", "ree", "epsilon"), default="eof")
    s.add_argument("--grid", required=True, help="start:stop:count")
    s.add_argument("--along", choices=("f", "fhat"))
    s.add_argument("--fixed", type=float)
    s.add_argument("--budget", type=_budget, default="small")
    common(s)

    r = sub.add_parser("region", help="state space, PPT set or separable set as JSON")
    group_flags(r)
    r.add_argument("--which", choices=("state-space", "ppt", "ppt-image", "separable"), default="separable")
    r.add_argument("--budget", type=int, default=32)
    common(r)

    c = sub.add_parser("counterexample", help="additivity counterexample for two Werner copies")
    c.add_argument("--d", type=int, default=3)
    common(c)

    v = sub.add_parser("verify", help="run a self-check suite")
    v.add_argument("--suite", choices=tuple(SUITES), required=True)
    v.add_argument("--budget", default="small")
    common(v)
    return p


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(args: argparse.Namespace) -> int:
    if args.command == "counterexample":
        _emit(json.dumps(cmd_counterexample(args.d), indent=2) + "\n", args.output)
        return EXIT_OK
    if args.command == "verify":
        rep = cmd_verify(args.suite, seed=args.seed, budget=args.budget)
        _emit(json.dumps(rep, indent=2) + "\n", args.output)
        return EXIT_OK if rep["passed"] else EXIT_CHECK_FAILED
    group = make_group(args.group, args.d, args.j1, args.j2)
    if args.command == "region":
        _emit(json.dumps(cmd_region(group, args.which, budget=args.budget, seed=args.seed), indent=2) + "\n",
              args.output)
        return EXIT_OK
    if args.command == "sweep":
        grid = parse_grid(args.grid)
        _emit(cmd_sweep(group, args.measure, grid, along=args.along, fixed=args.fixed, base=args.base,
                        seed=args.seed, budget=args.budget), args.output)
        return EXIT_OK
    # measure
    state = None
    if args.state_file:
        state, report = load_state_file(args.state_file)
        sys.stderr.write("state file residuals: " + json.dumps(report) + "\n")
        c = None
    else:
        c = _coords_from_flags(group, args.f, args.fhat, args.coords, args.weights)
    rec = cmd_measure(group, c, args.measure, state=state, allow_twirl=args.twirl, base=args.base,
                      seed=args.seed, budget=args.budget)
    _emit(json.dumps(rec, indent=2) + "\n", args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let grids and coordinate lists start with a minus sign: "--grid -1:0:11"
    for i in range(len(argv) - 1, 0, -1):
        if argv[i - 1] in ("--grid", "--coords", "--weights") and argv[i].startswith("-"):
            argv[i - 1:i + 1] = [f"{argv[i - 1]}={argv[i]}"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return run(args)
    except Unsupported as exc:
        sys.stderr.write(f"symtangle: unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    except (InputError, Infeasible) as exc:
        sys.stderr.write(f"symtangle: error: {exc}\n")
        return EXIT_INPUT
    except SymtangleError as exc:
        sys.stderr.write(f"symtangle: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
