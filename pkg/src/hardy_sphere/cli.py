"""Command-line front end emitting deterministic JSON/CSV reports.

Commands: ``verify-lemmas``, ``check``, ``sweep``, ``counterexample`` and
``report-all``.  Exit codes separate mathematics from numerics: 0 means all
verdicts passed (or an expected violation was found), 1 means a proven
statement appears violated beyond tolerance, 2 means the numerics gave up
or an I/O or usage problem prevented a verdict.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import families, functionals, geometry
from .families import FamilyId, Quantity
from .functionals import ExponentConfig, Regime
from .quadrature import NonIntegrableError, NumericalFailureError, QuadratureSpec

__all__ = ["RunConfig", "UsageError", "parse_args", "execute", "render_report", "main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_NUMERICAL = 2

_FORM_SUFFIXES = ("shrp1", "shrp2", "shrp3")
_FAMILY_TOKENS = {f.value: f for f in FamilyId}


class UsageError(Exception):
    """Invalid flags or an inadmissible parameter combination."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 5
    p: float = 2.0
    regime: str = "sub"
    ineq: str | None = None
    form: str | None = None
    family: str | None = None
    eps_start: float = 0.2
    eps_factor: float = 0.5
    steps: int = 8
    tol: float = 1e-6
    samples: int = 200
    seed: int = 42
    fmt: str = "json"
    out: str | None = None

    def exponent_config(self) -> ExponentConfig:
        if self.regime == "crit":
            return ExponentConfig.critical(self.n)
        return ExponentConfig.subcritical(self.n, self.p)

    def schedule(self) -> tuple[float, ...]:
        return families.default_schedule(self.eps_start, self.eps_factor, self.steps)

    def quadrature_spec(self) -> QuadratureSpec:
        rel = min(self.tol, 1e-10)
        return QuadratureSpec(rel_tol=rel, abs_tol=rel * 1e-4)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy-sphere",
        description="Numerical verification of sharp Hardy-type inequalities "
                    "on the unit sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, dims=True):
        if dims:
            sp.add_argument("--n", type=int, default=5,
                            help="ambient dimension (the sphere sits in R^n)")
            sp.add_argument("--p", type=float, default=2.0,
                            help="integrability exponent (ignored with --regime crit)")
            sp.add_argument("--regime", choices=("sub", "crit"), default="sub")
        sp.add_argument("--tol", type=float, default=1e-6)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        default="json")
        sp.add_argument("--out", type=str, default=None)

    sp = sub.add_parser("verify-lemmas",
                        help="finite-difference checks of the distance calculus")
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--samples", type=int, default=200)
    common(sp, dims=False)

    sp = sub.add_parser("check", help="inequality margins on a profile battery")
    sp.add_argument("--ineq", required=True, choices=functionals.INEQUALITIES)
    common(sp)

    sp = sub.add_parser("sweep", help="sharpness-ratio sweep with extrapolation")
    sp.add_argument("--ineq", required=True, choices=("f1", "f3", "fc1", "fc2"))
    sp.add_argument("--form", required=True, choices=_FORM_SUFFIXES)
    sp.add_argument("--family", choices=sorted(_FAMILY_TOKENS), default=None)
    sp.add_argument("--eps-start", type=float, default=0.2)
    sp.add_argument("--eps-factor", type=float, default=0.5)
    sp.add_argument("--steps", type=int, default=8)
    common(sp)

    sp = sub.add_parser("counterexample",
                        help="scan for a violation of the strengthened inequality")
    sp.add_argument("--eps-start", type=float, default=0.2)
    sp.add_argument("--eps-factor", type=float, default=0.5)
    sp.add_argument("--steps", type=int, default=8)
    common(sp)

    sp = sub.add_parser("report-all",
                        help="run every verification at its canonical configuration")
    sp.add_argument("--samples", type=int, default=200)
    common(sp, dims=False)
    return parser


def parse_args(argv) -> RunConfig:
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse reports its own message
        raise UsageError("invalid arguments") from exc
    kwargs = {k: v for k, v in vars(ns).items() if v is not None}
    cfg = RunConfig(**kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.command in ("check", "sweep", "counterexample"):
        if cfg.regime == "crit" and cfg.n < 3:
            raise UsageError("critical regime requires n >= 3 (sphere dimension >= 2)")
        if cfg.regime == "sub":
            if cfg.n < 4:
                raise UsageError("subcritical regime requires n >= 4")
            if not 1.0 < cfg.p < cfg.n - 1:
                raise UsageError(
                    f"subcritical exponent requires 1 < p < n-1 = {cfg.n - 1}, "
                    f"got p = {cfg.p}")
    if cfg.command == "check":
        if cfg.ineq in ("f1", "f3", "inqfls") and cfg.regime != "sub":
            raise UsageError(f"{cfg.ineq} requires --regime sub")
        if cfg.ineq in ("fc1", "fc2") and cfg.regime != "crit":
            raise UsageError(f"{cfg.ineq} requires --regime crit")
        if cfg.ineq == "f3" and cfg.p < 2.0:
            raise UsageError(f"f3 requires p >= 2, got p = {cfg.p}")
    if cfg.command == "sweep":
        form = cfg.ineq + cfg.form
        if form not in families.SWEEP_PAIRINGS:
            raise UsageError(f"no sharpness statement {form} "
                             f"(fc1 has no shrp3 form)")
        expected = families.SWEEP_PAIRINGS[form]
        if cfg.family is not None and _FAMILY_TOKENS[cfg.family] is not expected:
            raise UsageError(
                f"{form} is proven along family {expected.value}, not {cfg.family}")
        wants_crit = cfg.ineq.startswith("fc")
        if wants_crit != (cfg.regime == "crit"):
            raise UsageError(
                f"{cfg.ineq} requires --regime {'crit' if wants_crit else 'sub'}")
        if cfg.ineq == "f3" and cfg.p < 2.0:
            raise UsageError(f"f3 requires p >= 2, got p = {cfg.p}")
        if not 0.0 < cfg.eps_factor < 1.0:
            raise UsageError("--eps-factor must lie in (0, 1)")
        if cfg.steps < 3:
            raise UsageError("--steps must be at least 3 for extrapolation")
    if cfg.command == "counterexample" and cfg.regime != "sub":
        raise UsageError("the counterexample scan is subcritical; use --regime sub")
    if cfg.command == "report-all" and cfg.fmt != "json":
        raise UsageError("report-all emits a composite document; use --format json")


# --------------------------------------------------------------------------
# command bodies
# --------------------------------------------------------------------------

def _float(x) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x


def _run_verify_lemmas(cfg: RunConfig) -> tuple[int, dict]:
    reports = geometry.verify_identities(cfg.n, cfg.samples, cfg.tol, cfg.seed)
    rows = [
        {
            "identity": r.identity,
            "samples": r.samples,
            "max_abs_deviation": r.max_abs_deviation,
            "tolerance": r.tolerance,
            "passed": r.passed,
            "excluded": r.excluded,
            "note": r.note,
        }
        for r in reports
    ]
    all_passed = all(r.passed for r in reports)
    report = {
        "command": "verify-lemmas",
        "config": {"n": cfg.n, "samples": cfg.samples, "tol": cfg.tol,
                   "seed": cfg.seed},
        "identities": rows,
        "all_passed": all_passed,
    }
    return (EXIT_OK if all_passed else EXIT_VIOLATION), report


def margin_battery(inequality: str, econf: ExponentConfig,
                   spec: QuadratureSpec | None = None):
    """Margins over constants, cosine polynomials and admissible family
    members; combinations whose energies are not integrable are skipped."""
    profiles = [functionals.constant_profile(1.0),
                functionals.constant_profile(2.5),
                functionals.profile_from_t_poly("poly[1+t^2/2]", [1.0, 0.0, 0.5]),
                functionals.profile_from_t_poly("poly[1+t/2+t^3/4]",
                                                [1.0, 0.5, 0.0, 0.25]),
                functionals.profile_from_t_poly("poly[quartic]",
                                                [1.0, 0.0, -0.5, 0.0, 0.25])]
    if econf.regime is Regime.SUBCRITICAL:
        fams = (FamilyId.COT_COS, FamilyId.COT, FamilyId.INV_SIN,
                FamilyId.HALF_ANGLE_COT)
    else:
        fams = (FamilyId.LOG_POWER,)
    for fam in fams:
        hi = families.admissible_eps_upper(fam, econf)
        for eps in (0.5, 0.2, 0.1, 0.05):
            if eps < hi:
                profiles.append(families.make_profile(fam, econf, eps))
    margins = []
    skipped = []
    for prof in profiles:
        try:
            margins.append(functionals.inequality_margin(inequality, prof, econf, spec))
        except NonIntegrableError as exc:
            skipped.append({"profile": prof.label, "reason": str(exc)})
    return margins, skipped


def _run_check(cfg: RunConfig) -> tuple[int, dict]:
    econf = cfg.exponent_config()
    spec = cfg.quadrature_spec()
    margins, skipped = margin_battery(cfg.ineq, econf, spec)
    rows = [
        {
            "profile": m.profile_label,
            "lhs": m.lhs,
            "rhs": m.rhs,
            "margin": m.margin,
            "violates": m.violates(),
        }
        for m in margins
    ]
    violations = [r for r in rows if r["violates"]]
    expected_violation = cfg.ineq == "inqfls"
    if expected_violation:
        status = "violation found" if violations else "no violation in battery"
        code = EXIT_OK
    else:
        status = "all margins nonnegative" if not violations else "margin violated"
        code = EXIT_OK if not violations else EXIT_VIOLATION
    report = {
        "command": "check",
        "config": {"ineq": cfg.ineq, "n": cfg.n,
                   "p": econf.exponent, "regime": cfg.regime, "tol": cfg.tol},
        "margins": rows,
        "skipped": skipped,
        "violations": len(violations),
        "status": status,
    }
    return code, report


def _run_sweep(cfg: RunConfig) -> tuple[int, dict]:
    econf = cfg.exponent_config()
    form = cfg.ineq + cfg.form
    family = families.SWEEP_PAIRINGS[form]
    rep = families.sharpness_sweep(form, family, econf, cfg.schedule(),
                                   cfg.quadrature_spec())
    rows = [
        {
            "eps": r.eps,
            "ratio_quadrature": r.ratio_quadrature,
            "ratio_closed_form": r.ratio_closed_form,
            "rel_gap": r.rel_gap,
            "target": rep.target,
        }
        for r in rep.rows
    ]
    report = {
        "command": "sweep",
        "config": {"form": form, "family": family.value, "n": cfg.n,
                   "p": econf.exponent, "regime": cfg.regime,
                   "eps_start": cfg.eps_start, "eps_factor": cfg.eps_factor,
                   "steps": cfg.steps},
        "rows": rows,
        "extrapolated": rep.extrapolated,
        "consistency_residual": rep.consistency_residual,
        "target": rep.target,
        "relative_gap": rep.relative_gap,
        "verdict": rep.verdict,
        "notes": list(rep.notes),
    }
    return (EXIT_OK if rep.verdict else EXIT_VIOLATION), report


def _run_counterexample(cfg: RunConfig) -> tuple[int, dict]:
    econf = cfg.exponent_config()
    res = families.find_counterexample(econf, cfg.schedule(), cfg.quadrature_spec())
    report = {
        "command": "counterexample",
        "config": {"n": cfg.n, "p": econf.exponent,
                   "eps_start": cfg.eps_start, "eps_factor": cfg.eps_factor,
                   "steps": cfg.steps},
        "status": res.status,
        "eps_star": _float(res.eps_star),
        "margin_closed_form": _float(res.margin),
        "margin_quadrature": _float(res.margin_quadrature),
        "oracle_rel_gap": _float(res.oracle_rel_gap),
        "gap_limit": res.gap_limit,
        "reduced_limit": res.reduced_limit,
        "note": res.note,
    }
    return EXIT_OK, report


def _run_report_all(cfg: RunConfig) -> tuple[int, dict]:
    spec = QuadratureSpec()
    sections: dict = {}
    worst = EXIT_OK

    lemmas = {}
    for n in range(2, 7):
        code, rep = _run_verify_lemmas(RunConfig("verify-lemmas", n=n,
                                                 samples=cfg.samples,
                                                 tol=cfg.tol, seed=cfg.seed))
        worst = max(worst, code)
        lemmas[str(n)] = rep
    sections["lemmas"] = lemmas

    grid = []
    eps_grid = (0.5, 0.25, 0.1, 0.05)
    for n in range(4, 9):
        for p in (2.0, 3.0):
            if not 1.0 < p < n - 1:
                continue
            econf = ExponentConfig.subcritical(n, p)
            for qty in families._MOMENT_TEMPLATES:
                for eps in eps_grid:
                    try:
                        cf = families.closed_form(qty, econf, eps)
                    except (ValueError, NonIntegrableError):
                        continue
                    mq = families.moment_quadrature(qty, econf, eps, spec)
                    rel = abs(mq - cf) / abs(cf)
                    grid.append({"quantity": qty.value, "n": n, "p": p,
                                 "eps": eps, "closed_form": cf,
                                 "quadrature": mq, "rel_gap": rel})
    for eps in eps_grid:
        cf = 1.0 / eps
        mq = families.moment_quadrature(Quantity.LOG_UNIT,
                                        ExponentConfig.critical(3), eps, spec)
        grid.append({"quantity": Quantity.LOG_UNIT.value, "n": None, "p": None,
                     "eps": eps, "closed_form": cf, "quadrature": mq,
                     "rel_gap": abs(mq - cf) * eps})
    worst_gap = max(r["rel_gap"] for r in grid)
    if worst_gap > 1e-8:
        worst = max(worst, EXIT_VIOLATION)
    sections["oracle_grid"] = {"entries": grid, "worst_rel_gap": worst_gap,
                               "passed": worst_gap <= 1e-8}

    checks = {}
    for ineq, n, p, regime in (("f1", 5, 2.0, "sub"), ("f3", 5, 2.0, "sub"),
                               ("f1", 7, 2.0, "sub"), ("f3", 6, 3.0, "sub"),
                               ("fc1", 3, None, "crit"), ("fc2", 3, None, "crit"),
                               ("fc1", 4, None, "crit"), ("fc2", 4, None, "crit"),
                               ("inqfls", 7, 2.0, "sub"), ("inqfls", 5, 2.0, "sub")):
        rc = RunConfig("check", n=n, p=p if p is not None else 2.0,
                       regime=regime, ineq=ineq, tol=cfg.tol, seed=cfg.seed)
        code, rep = _run_check(rc)
        worst = max(worst, code)
        checks[f"{ineq}[n={n}]"] = rep
    sections["margins"] = checks

    sweeps = {}
    sweep_configs = [("f1shrp1", 5, 2.0), ("f1shrp2", 5, 2.0), ("f1shrp3", 7, 2.0),
                     ("f3shrp1", 5, 2.0), ("f3shrp2", 5, 2.0), ("f3shrp3", 5, 2.0),
                     ("fc1shrp1", 3, None), ("fc1shrp2", 3, None),
                     ("fc2shrp1", 3, None), ("fc2shrp2", 3, None),
                     ("fc2shrp3", 3, None)]
    for form, n, p in sweep_configs:
        ineq, suffix = form[:-5], form[-5:]
        rc = RunConfig("sweep", n=n, p=p if p is not None else 2.0,
                       regime="crit" if ineq.startswith("fc") else "sub",
                       ineq=ineq, form=suffix, tol=cfg.tol, seed=cfg.seed)
        code, rep = _run_sweep(rc)
        worst = max(worst, code)
        sweeps[form] = rep
    sections["sharpness"] = sweeps

    cex = {}
    for n, p in ((7, 2.0), (5, 2.0), (4, 2.0)):
        rc = RunConfig("counterexample", n=n, p=p, ineq=None, tol=cfg.tol,
                       seed=cfg.seed)
        code, rep = _run_counterexample(rc)
        worst = max(worst, code)
        cex[f"n={n},p={p:g}"] = rep
    sections["counterexample"] = cex

    report = {"command": "report-all", "sections": sections,
              "exit_status": worst}
    return worst, report


# --------------------------------------------------------------------------
# serialization and entry point
# --------------------------------------------------------------------------

def _fmt_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


_CSV_SCHEMAS = {
    "verify-lemmas": ("identities",
                      ("identity", "samples", "max_abs_deviation", "tolerance",
                       "passed", "excluded", "note")),
    "check": ("margins", ("profile", "lhs", "rhs", "margin", "violates")),
    "sweep": ("rows", ("eps", "ratio_quadrature", "ratio_closed_form",
                       "rel_gap", "target")),
}


def _jsonable(obj):
    """Strict-JSON copy: non-finite floats become null."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def render_report(report: dict, fmt: str) -> str:
    """Deterministic serialization: same report, same bytes."""
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2,
                          allow_nan=False) + "\n"
    command = report["command"]
    if command == "counterexample":
        header = ("status", "eps_star", "margin_closed_form",
                  "margin_quadrature", "oracle_rel_gap", "gap_limit",
                  "reduced_limit")
        lines = [",".join(header),
                 ",".join(_fmt_float(report[k]) for k in header)]
        return "\n".join(lines) + "\n"
    if command not in _CSV_SCHEMAS:
        raise UsageError(f"{command} has no CSV rendering; use --format json")
    key, header = _CSV_SCHEMAS[command]
    lines = [",".join(header)]
    for row in report[key]:
        lines.append(",".join(_fmt_float(row[h]) for h in header))
    if command == "sweep":
        # extrapolated limit as a final row at eps = 0
        lines.append(",".join(_fmt_float(v) for v in (
            0.0, report["extrapolated"], math.nan, report["relative_gap"],
            report["target"])))
    return "\n".join(lines) + "\n"


_RUNNERS = {
    "verify-lemmas": _run_verify_lemmas,
    "check": _run_check,
    "sweep": _run_sweep,
    "counterexample": _run_counterexample,
    "report-all": _run_report_all,
}


def execute(cfg: RunConfig) -> tuple[int, dict]:
    """Run a validated configuration; returns (exit code, report)."""
    return _RUNNERS[cfg.command](cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        code, report = execute(cfg)
        text = render_report(report, cfg.fmt)
    except (NumericalFailureError, NonIntegrableError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        try:
            with open(cfg.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
    return code


if __name__ == "__main__":
    sys.exit(main())
