"""Command-line front end.

Exit codes: 0 on success, 1 when a verification check fails, 2 for usage or
domain errors (argparse uses 2 for its own errors as well).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import coupled_states as cs
from . import mlo
from .errors import DegeneracyError, SpinWeaveError
from .linalg_core import DEFAULT_TOL, Tolerance, clean_float, complex_pair
from .rff_basis import q_second_j, rff_basis, rff_report
from .schur_weyl import decompose
from .spin_system import SpinSystem, half_integer, total_angular_momentum
from .verify import SUITES, run_suites

FORMATS = ("json", "csv", "pretty")
CSCO_CHOICES = ("sym", "binary-12-34", "binary-13-24", "binary-14-23")


class UsageError(SpinWeaveError):
    pass


@dataclass
class RunConfig:
    n_sites: int
    command: str
    tol: Tolerance
    out: Optional[str]
    format: str

    @property
    def system(self) -> SpinSystem:
        return SpinSystem(self.n_sites)


# -- rendering -------------------------------------------------------------------

def _pretty(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_pair(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return lines
    if isinstance(obj, list):
        lines = []
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_pair(item):
                sub = _pretty(item, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}" if sub else f"{pad}-")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(item)}")
        return lines
    return [f"{pad}{_scalar(obj)}"]


def _is_pair(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v)


def _scalar(v) -> str:
    if _is_pair(v):
        re, im = v
        if im == 0:
            return f"{re:.12g}"
        sign = "+" if im >= 0 else "-"
        return f"{re:.12g}{sign}{abs(im):.12g}i"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.12g}"
    if v is None:
        return "-"
    return str(v)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, payload, rows: Optional[list[dict]] = None) -> None:
    if cfg.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg.format == "pretty":
        text = "\n".join(_pretty(payload)) + "\n"
    else:
        if rows is None:
            raise UsageError(f"csv output is only available for spectra tables, not '{cfg.command}'")
        text = _csv(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _frac(x: Fraction) -> str:
    return str(x)


# -- commands ----------------------------------------------------------------------

def cmd_decompose(cfg: RunConfig, csco_kind: str) -> int:
    s = cfg.system
    if csco_kind == "sym" and cfg.n_sites > 4:
        # only the second-largest spin has a constructed MLO here
        j_vec, j_sq, _ = total_angular_momentum(s)
        csco = mlo.CscoSet("sym", [j_sq, j_vec.z, mlo.mlo_second_j(s, tol=cfg.tol).matrix],
                           None, ["J^2", "J_z", "M_j2"])
    else:
        csco = mlo.build_csco(csco_kind, s, cfg.tol)
    d = decompose(s, csco.operators, cfg.tol, csco.lambda_of)
    report = {"n": cfg.n_sites, "csco": csco.name, "operators": csco.labels,
              "blocks": d.to_json()}
    rows = []
    for block in d.blocks:
        p = block.partition
        for st in block.states:
            row = {"nu": str(p), "j": _frac(p.j), "m": _frac(st.m),
                   "lambda": "" if st.lam is None else st.lam}
            for name, v in zip(csco.labels, st.eigenvalues):
                row[name] = f"{clean_float(complex(v).real, 12):.12g}"
            rows.append(row)
    _emit(cfg, report, rows)
    return 0


def _state_list(n: int, s: SpinSystem) -> list[cs.CoupledKet]:
    if n in (3, 4):
        return cs.listed_states(n)
    top = Fraction(n, 2)
    out = [cs.max_j_state(top - k, s) for k in range(n + 1)]
    if n >= 2:
        j2 = top - 1
        out += [cs.second_j_states(j2 - k, lam, s)
                for k in range(int(2 * j2) + 1) for lam in range(1, n)]
    return out


def cmd_states(cfg: RunConfig, j, m, lam) -> int:
    n = cfg.n_sites
    s = cfg.system
    if j is not None:
        j = half_integer(j)
        if j not in s.j_values:
            raise UsageError(f"j={j} does not occur for N={n}")
        if n not in (3, 4) and j < Fraction(n, 2) - 1:
            raise UsageError(f"explicit kets for j={j} are not constructed at N={n}")
    kets = _state_list(n, s)
    if j is not None:
        kets = [k for k in kets if k.j == j]
    if m is not None:
        kets = [k for k in kets if k.m == half_integer(m)]
    if lam is not None:
        kets = [k for k in kets if k.lam == lam]
    if not kets:
        raise UsageError("no constructed ket matches the requested labels")
    kets.sort(key=lambda k: (-k.j, -k.m, k.lam or 0))
    payload = {"n": n, "states": [k.to_json() for k in kets]}
    _emit(cfg, payload)
    return 0


def cmd_rff(cfg: RunConfig) -> int:
    s = cfg.system
    ops = rff_basis(s, cfg.tol) if cfg.n_sites <= 4 else q_second_j(s, cfg.tol)
    _emit(cfg, {"n": cfg.n_sites, "count": len(ops), "operators": rff_report(ops, cfg.tol)})
    return 0


def _mlo_list(s: SpinSystem, tol: Tolerance) -> list[tuple[str, mlo.MissingLabelOperator]]:
    n = s.n_sites
    if n < 3:
        raise UsageError("J^2 and J_z are complete for N < 3; there is no missing label")
    out = []
    if n == 3:
        out.append(("K", mlo.k_operator(s, tol)))
    if n == 4:
        m1, m0 = mlo.mlo_n4(tol)
        out += [("M_j1", m1), ("M_j0", m0)]
    out.append(("M_j2", mlo.mlo_second_j(s, tol=tol)))
    return out


def cmd_mlo(cfg: RunConfig) -> int:
    s = cfg.system
    entries, rows = [], []
    for name, op in _mlo_list(s, cfg.tol):
        nu = op.target_partition
        spectra = []
        for j in s.j_values:
            spec = mlo.block_spectrum(op, j, s, cfg.tol)
            spectra.append({"j": float(j),
                            "spectrum": [{"value": clean_float(v, 12), "multiplicity": k}
                                         for v, k in spec]})
            rows += [{"operator": name, "j": _frac(j), "eigenvalue": f"{clean_float(v, 12):.12g}",
                      "multiplicity": k} for v, k in spec]
        entry = {"name": name, "construction": op.construction,
                 "target": list(nu.as_tuple()),
                 "coefficients": {str(k): v for k, v in sorted(op.coefficients.items())},
                 "spectra": spectra}
        if nu.s + 1 <= s.n_sites:
            entry["symmetric_coupling"] = mlo.is_symmetric_coupling(op, nu, s, cfg.tol).to_json()
        if s.n_sites <= 4:
            entry["symmetry"] = mlo.conjugation_symmetry(op, s.n_sites, cfg.tol).to_json(name)
        entries.append(entry)
    _emit(cfg, {"n": cfg.n_sites, "mlos": entries}, rows)
    return 0


def cmd_verify(cfg: RunConfig, suites) -> int:
    report = run_suites(cfg.n_sites, suites, cfg.tol)
    rows = [{"suite": st["suite"], "check": c["name"], "passed": c["passed"],
             "deviation": c["deviation"]} for st in report["suites"] for c in st["checks"]]
    _emit(cfg, report, rows if cfg.format == "csv" else None)
    return 0 if report["passed"] else 1


# -- argument parsing -----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, required=True, help="number of spin-1/2 sites")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL.abs_tol,
                   help="absolute tolerance for equality checks")
    p.add_argument("--degeneracy-tol", type=float, default=None,
                   help="eigenvalue clustering gap (default max(1e-8, 100 * tol))")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", default=None, help="write output to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="spinweave",
                                     description="Symmetric coupling of spin-1/2 systems")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("decompose", parents=[common], help="Schur-Weyl block decomposition")
    p.add_argument("--csco", choices=CSCO_CHOICES, default="sym")
    p = sub.add_parser("states", parents=[common], help="coupled kets")
    p.add_argument("--j", default=None)
    p.add_argument("--m", default=None)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    sub.add_parser("rff", parents=[common], help="reference-frame-free basis operators")
    sub.add_parser("mlo", parents=[common], help="missing-label operators")
    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None,
                   help="suite to run (repeatable; default all)")
    return parser


def _config(args) -> RunConfig:
    deg = args.degeneracy_tol if args.degeneracy_tol is not None else max(1e-8, 100 * args.tol)
    return RunConfig(args.n, args.command, Tolerance(args.tol, deg), args.out, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        cfg.system  # validates the site count
        if args.command == "decompose":
            return cmd_decompose(cfg, args.csco)
        if args.command == "states":
            return cmd_states(cfg, args.j, args.m, args.lam)
        if args.command == "rff":
            return cmd_rff(cfg)
        if args.command == "mlo":
            return cmd_mlo(cfg)
        return cmd_verify(cfg, args.suite)
    except DegeneracyError as exc:
        label = exc.label if exc.label is None else [complex_pair(v) if isinstance(v, complex)
                                                     else v for v in exc.label]
        diag = {"error": "degeneracy", "message": str(exc), "label": label,
                "multiplicity": exc.multiplicity}
        sys.stderr.write(json.dumps(diag) + "\n")
        return 2
    except (SpinWeaveError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
