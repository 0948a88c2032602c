"""Command-line front-end.

Every command reads one or more input files (or ``--pi`` text), runs the
library operation and prints a report, either as ``key: value`` lines or
as JSON.  Exit status: 0 on success, 1 on a mathematical failure, 2 on a
parse or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import AbElement
from .errors import AbModulesError, InputError
from .fresco import (
    FrescoPresentation,
    bernstein_element,
    bernstein_polynomial_fresco,
    exact_sequence_check,
    is_fresco,
    module_from_element,
    module_from_presentation,
    presentation_from_module,
    principal_jh,
)
from .module import (
    AbModule,
    bernstein_matrix,
    bernstein_polynomial,
    change_of_variable,
    hom_dimension,
    is_geometric,
    saturate,
)
from .parsing import parse, parse_series
from .scalars import Polynomial, factored_str, fraction_str
from .theme import (
    CanonicalForm,
    FundamentalData,
    canonical_form,
    fundamental_data,
    is_theme,
    theme_from_canonical,
)
from .xi import (
    XiElement,
    co_ss_filtration,
    generate_theme,
    lambda_class,
    primitive_filtration,
    ss_filtration,
    xi_a,
    xi_b,
)

DEFAULT_PREC = 16


class Job:
    """Command name, inputs and precisions of one invocation."""

    def __init__(self, args: argparse.Namespace):
        self.command = args.command
        self.inputs = list(getattr(args, "inputs", []) or [])
        self.prec = args.prec
        self.log_prec = args.log_prec
        self.shift_prec = args.shift_prec if args.shift_prec is not None else args.prec
        self.json = args.json
        if self.prec < 4:
            raise InputError("--prec must be at least 4")
        if self.shift_prec < 1 or (self.log_prec is not None and self.log_prec < 0):
            raise InputError("precisions must be positive")


# ---------------------------------------------------------------------------
# input files


def load_input(source, job: Job):
    """Read a file (or a parsed JSON value) into a module, presentation, element or expansion."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        if path.suffix == ".json":
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: invalid JSON: {exc}") from None
        else:
            return parse(text.strip(), job.prec)
    else:
        data = source
    try:
        return _from_json(data, job)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed input: {exc}") from None


def _from_json(data, job: Job):
    if isinstance(data, list):
        return XiElement.from_json(data, job.shift_prec)
    if isinstance(data, dict):
        if "input" in data:
            return _from_json(data["input"], job)
        if "matrix" in data:
            return AbModule.from_json(data).truncate(job.prec)
        if "factors" in data:
            return FrescoPresentation.from_json(data)
        if "lambda1" in data:
            return CanonicalForm.from_json(data)
        if "pi" in data:
            return parse(data["pi"], job.prec)
        if "expansion" in data:
            return XiElement.from_json(data["expansion"], job.shift_prec)
    raise InputError("unrecognized input: expected a module, presentation, expansion or canonical form")


def as_module(obj, job: Job) -> AbModule:
    if isinstance(obj, AbModule):
        return obj
    if isinstance(obj, FrescoPresentation):
        return module_from_presentation(obj, job.prec)
    if isinstance(obj, AbElement):
        return module_from_element(obj.truncate(job.prec))
    if isinstance(obj, CanonicalForm):
        return theme_from_canonical(obj, job.prec)
    if isinstance(obj, XiElement):
        return generate_theme(_widen(obj, job)).module.truncate(job.prec)
    raise InputError(f"cannot build a module from {type(obj).__name__}")


def _widen(x: XiElement, job: Job) -> XiElement:
    n_log = x.n_log if job.log_prec is None else max(job.log_prec, x.n_log)
    return XiElement(x.terms, x.dim, n_log, x.m_prec)


def _inputs(job: Job, args, count: int | None = None) -> list:
    objs = []
    if getattr(args, "pi", None):
        objs.append(parse(args.pi, job.prec))
    objs.extend(load_input(p, job) for p in job.inputs)
    if not objs:
        raise InputError("no input given")
    if count is not None and len(objs) != count:
        raise InputError(f"expected {count} inputs, got {len(objs)}")
    return objs


# ---------------------------------------------------------------------------
# reports


def _frac(x) -> str:
    return fraction_str(x) if isinstance(x, Fraction) else str(x)


def _poly(B: Polynomial) -> str:
    return factored_str(B)


def _bernstein_report(obj, job: Job) -> dict:
    report = {"precision": job.prec}
    if isinstance(obj, AbElement) and not _fresco_shape(obj):
        report["input"] = f"{obj} (not a fresco presentation; using the module it defines)"
    F = as_module(obj, job)
    report["rank"] = F.rank
    ok, _ = is_fresco_safe(F)
    if ok:
        B = bernstein_polynomial_fresco(F)
        report["path"] = "fresco (characteristic polynomial, checked against the initial form)"
        report["bernstein_element"] = str(bernstein_element(F))
    else:
        B = bernstein_polynomial(F)
        report["path"] = "module (minimal polynomial on the saturation)"
    report["bernstein_polynomial"] = _poly(B)
    report["geometric"] = is_geometric(F)
    return report


def _fresco_shape(pi: AbElement) -> bool:
    try:
        return pi.a_coefficient(pi.a_degree()).coeff(0) != 0 and pi.a_degree() > 0
    except AbModulesError:
        return False


def is_fresco_safe(F: AbModule):
    try:
        return is_fresco(F)
    except AbModulesError:
        return False, None


def cmd_bernstein(job, args):
    return [_bernstein_report(obj, job) for obj in _inputs(job, args)]


def cmd_saturate(job, args):
    out = []
    for obj in _inputs(job, args):
        E = as_module(obj, job)
        res = saturate(E)
        report = {"precision": job.prec, "status": res.status, "steps": res.steps, "gap": res.gap,
                  "valuations": res.valuations, "precision_sensitive": not res.saturated}
        if res.saturated:
            report["module"] = res.module.to_json() if job.json else str(res.module)
            report["minus_residue"] = [[_frac(x) for x in r] for r in bernstein_matrix(E)]
        out.append(report)
    return out


def cmd_jh(job, args):
    out = []
    for obj in _inputs(job, args):
        F = as_module(obj, job)
        jh = principal_jh(F)
        gens = jh.to_json()["generators"] if job.json else [
            "(" + ", ".join(str(s) for s in g) + ")" for g in jh.generators
        ]
        out.append({"precision": job.prec, "lambdas": [_frac(x) for x in jh.lambdas], "generators": gens})
    return out


def cmd_theme_of(job, args):
    out = []
    for obj in _inputs(job, args):
        if not isinstance(obj, XiElement):
            raise InputError("theme-of expects an expansion file")
        x = _widen(obj, job)
        gen = generate_theme(x)
        F = gen.module.truncate(job.prec)
        report = {"precision": job.prec, "shift_precision": x.m_prec, "log_precision": x.n_log,
                  "rank": gen.rank, "presentation": str(gen.presentation.truncate(job.prec))}
        if gen.bernstein_element is not None:
            report["bernstein_element"] = str(gen.bernstein_element)
            report["bernstein_polynomial"] = _poly(bernstein_polynomial_fresco(F))
        try:
            report["fundamental_data"] = fundamental_data(F).to_json() if job.json else str(fundamental_data(F))
        except AbModulesError as exc:
            report["fundamental_data"] = None
            report["note"] = f"{exc.code}: {exc}"
        out.append(report)
    return out


def cmd_canonical_form(job, args):
    out = []
    for obj in _inputs(job, args):
        F = as_module(obj, job)
        cf = canonical_form(F)
        out.append({"precision": job.prec, "fundamental_data": str(cf.data), "canonical_form": str(cf),
                    "unique": cf.unique, "json": cf.to_json()})
    return out


def cmd_hom_dim(job, args):
    objs = _inputs(job, args)
    if len(objs) == 1:
        objs = objs * 2
    if len(objs) != 2:
        raise InputError("hom-dim expects one or two inputs")
    E1, E2 = (as_module(o, job) for o in objs)
    d, stable = hom_dimension(E1, E2)
    report = {"precision": job.prec, "hom_dimension": d, "stabilized": stable}
    if E1 is E2 or len(job.inputs) + bool(getattr(args, "pi", None)) == 1:
        report["rank"] = E1.rank
        report["invariant"] = d == E1.rank
    return [report]


def cmd_change_var(job, args):
    theta = parse_series(args.theta, job.prec + 8)
    out = []
    for obj in _inputs(job, args):
        E = as_module(obj, job)
        G = change_of_variable(E, theta)
        out.append({
            "precision": G.prec, "theta": args.theta, "rank": G.rank,
            "module": G.to_json() if job.json else str(G),
            "bernstein_before": _poly(bernstein_polynomial(E)),
            "bernstein_after": _poly(bernstein_polynomial(G)),
        })
    return out


def cmd_filtrations(job, args):
    out = []
    for obj in _inputs(job, args):
        if not isinstance(obj, XiElement):
            raise InputError("filtrations expects an expansion file")
        x = _widen(obj, job)
        R = generate_theme(x).realization
        classes = _lambda_set(args.lambda_set) if args.lambda_set else None
        report = {"precision": R.module.prec, "rank": R.module.rank,
                  "ss_ranks": [s.rank for s in ss_filtration(R)]}
        try:
            report["co_ss_ranks"] = [s.rank for s in co_ss_filtration(R)]
        except AbModulesError as exc:
            report["co_ss_ranks"] = None
            report["note"] = f"{exc.code}: {exc}"
        primitive = {}
        for c in (classes if classes is not None else [[c] for c in x.classes()]):
            st = primitive_filtration(R, c)
            key = ",".join(_frac(lambda_class(v)) for v in c)
            primitive[key] = {"rank": st.rank,
                              "generators": [str(R.space.from_vector(R.to_vector(v))) for v in st.basis]}
        report["primitive"] = primitive
        out.append(report)
    return out


def _lambda_set(text: str) -> list:
    try:
        return [[Fraction(t.strip()) for t in text.split(",") if t.strip()]]
    except ValueError as exc:
        raise InputError(f"--lambda-set: {exc}") from None


# ---------------------------------------------------------------------------
# consistency checks


def run_checks(obj, job: Job, expect: dict | None = None) -> list[tuple[str, bool, str]]:
    """Cross-path assertions on one input; returns (name, passed, detail) triples."""
    expect = expect or {}
    results = []

    def record(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    if isinstance(obj, XiElement):
        x = _widen(obj, job)
        record("commutation in expansions", xi_a(xi_b(x)) - xi_b(xi_a(x)) == xi_b(xi_b(x)))
        gen = generate_theme(x)
        record("realization intertwines a", gen.realization.verify())
        if "rank" in expect:
            record("rank", gen.rank == expect["rank"], f"rank {gen.rank}")
        F = gen.module.truncate(job.prec)
    else:
        try:
            F = as_module(obj, job)
        except AbModulesError as exc:
            return _expected_error(exc, expect, results)
    try:
        _module_checks(F, job, expect, record)
    except AbModulesError as exc:
        return _expected_error(exc, expect, results)
    if "error" in expect:
        record("expected error", False, f"{expect['error']} was not raised")
    return results


def _expected_error(exc, expect, results):
    wanted = expect.get("error")
    results.append(("expected error" if wanted else "no error",
                    wanted == exc.code, f"{exc.code}: {exc}"))
    return results


def _module_checks(F: AbModule, job: Job, expect: dict, record):
    res = saturate(F)
    if "saturation_steps" in expect:
        record("saturation steps", res.steps == expect["saturation_steps"], f"{res.status} in {res.steps}")
    if not res.saturated:
        record("saturation", expect.get("error") == "ab_module.NotStabilized",
               f"not stabilized, valuations {res.valuations}")
        if expect.get("error") == "ab_module.NotStabilized":
            vals = res.valuations
            record("valuations decrease", all(b < a for a, b in zip(vals, vals[1:])) and len(vals) >= 5)
            expect.pop("error")
        return
    B = bernstein_polynomial(F)
    if "bernstein" in expect:
        record("bernstein polynomial", _poly(B) == expect["bernstein"], _poly(B))
    geometric = is_geometric(F)
    if "geometric" in expect:
        record("geometric", geometric == expect["geometric"], str(geometric))
    record("change of variable z+z^2 keeps B",
           bernstein_polynomial(change_of_variable(F, parse_series("z + z^2", F.prec + 8))) == B)
    if not geometric:
        return
    fresco, _ = is_fresco(F)
    if "fresco" in expect:
        record("fresco", fresco == expect["fresco"], str(fresco))
    if not fresco:
        return
    BF = bernstein_polynomial_fresco(F)
    record("minimal polynomial divides the fresco B", (BF % B).is_zero(), _poly(BF))
    P = bernstein_element(F)
    pi, P2 = presentation_from_module(F)
    back = module_from_element(pi, F.rank)
    record("presentation round trip", bernstein_element(back) == P == P2, str(P))
    jh = principal_jh(F)
    lambdas = [_frac(x) for x in jh.lambdas]
    if "jh" in expect:
        record("principal J-H", lambdas == expect["jh"], str(lambdas))
    for j in range(F.rank + 1):
        rep = exact_sequence_check(F, jh.generators[:j])
        record(f"exact sequence, prefix {j}", rep.ok)
    th = is_theme(F) if len({lambda_class(x) for x in jh.lambdas}) == 1 else None
    if "theme" in expect:
        record("theme", bool(th) == expect["theme"], str(bool(th)))
    if th:
        data = fundamental_data(F)
        if "fundamental_data" in expect:
            record("fundamental data", data == FundamentalData.from_json(expect["fundamental_data"]), str(data))
        cf = canonical_form(F)
        G = theme_from_canonical(cf, job.prec)
        record("canonical form rebuilds the theme", bernstein_element(G) == P, str(cf))
        if "unique" in expect:
            record("canonical form unique", cf.unique == expect["unique"], str(cf.unique))
    if "hom_dimension" in expect:
        d, stable = hom_dimension(F, F)
        record("hom dimension", d == expect["hom_dimension"] and stable, f"{d} (stabilized: {stable})")


def bundled_corpus() -> list:
    """(name, data) pairs of the bundled worked examples, in name order."""
    root = resources.files("abmodules") / "data"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out.append((entry.name, json.loads(entry.read_text())))
    return out


def cmd_check(job, args):
    items = []
    if getattr(args, "pi", None):
        items.append(("--pi", parse(args.pi, job.prec), {}))
    for p in job.inputs:
        data = json.loads(Path(p).read_text()) if p.endswith(".json") else None
        expect = data.get("expect", {}) if isinstance(data, dict) else {}
        items.append((p, load_input(p, job), expect))
    if not items:
        items = [(name, load_input(data, job), dict(data.get("expect", {}))) for name, data in bundled_corpus()]
    out = []
    for name, obj, expect in items:
        results = run_checks(obj, job, dict(expect))
        out.append({
            "input": name,
            "precision": job.prec,
            "passed": all(ok for _, ok, _ in results),
            "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results],
        })
    return out


COMMANDS = {
    "bernstein": (cmd_bernstein, "Bernstein polynomial, element and geometricity"),
    "saturate": (cmd_saturate, "saturation by b^-1 a with step count and gap"),
    "jh": (cmd_jh, "principal Jordan-Hölder sequence of a fresco"),
    "theme-of": (cmd_theme_of, "theme generated by an expansion"),
    "canonical-form": (cmd_canonical_form, "canonical form of a primitive theme"),
    "hom-dim": (cmd_hom_dim, "dimension of the space of module maps"),
    "change-var": (cmd_change_var, "change of variable a -> theta(a)"),
    "filtrations": (cmd_filtrations, "semi-simple, co-semi-simple and primitive filtrations"),
    "check": (cmd_check, "cross-path consistency checks (bundled corpus by default)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="input files (.json or presentation text)")
    common.add_argument("--pi", help="presentation or element text, e.g. \"(a - 3/2 b)*(a - 1/2 b)\"")
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="b-adic working precision N")
    common.add_argument("--log-prec", type=int, default=None, help="log bound N_log for expansions")
    common.add_argument("--shift-prec", type=int, default=None, help="shift window M for expansions")
    common.add_argument("--json", action="store_true", help="emit JSON")
    parser = argparse.ArgumentParser(prog="abmodules", description="Computations with (a,b)-modules.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "change-var":
            p.add_argument("--theta", required=True, help="series in z, e.g. \"z + z^2\"")
        if name == "filtrations":
            p.add_argument("--lambda-set", help="classes for the primitive part, e.g. \"1/2,1/3\"")
    return parser


def _emit(reports: list, job: Job, stream) -> None:
    if job.json:
        json.dump(reports if len(reports) != 1 else reports[0], stream, indent=2, default=str)
        stream.write("\n")
        return
    for i, rep in enumerate(reports):
        if i:
            stream.write("\n")
        if job.command == "check":
            mark = "PASS" if rep["passed"] else "FAIL"
            stream.write(f"{mark} {rep['input']} (precision {rep['precision']})\n")
            for c in rep["checks"]:
                flag = "ok  " if c["passed"] else "FAIL"
                detail = f"  [{c['detail']}]" if c["detail"] else ""
                stream.write(f"  {flag} {c['name']}{detail}\n")
            continue
        for key, value in rep.items():
            if key == "json":
                continue
            if isinstance(value, str) and "\n" in value:
                stream.write(f"{key}:\n")
                for line in value.splitlines():
                    stream.write(f"  {line}\n")
            else:
                stream.write(f"{key}: {_human(value)}\n")


def _human(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "(" + ", ".join(_human(v) for v in value) + ")"
    return str(value)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        job = Job(args)
        reports = COMMANDS[job.command][0](job, args)
    except InputError as exc:
        stderr.write(f"error [{exc.code}]: {exc}\n")
        return 2
    except AbModulesError as exc:
        stderr.write(f"error [{exc.code}]: {exc}\n")
        return exc.exit_status
    except ValueError as exc:
        stderr.write(f"error [io.input]: {exc}\n")
        return 2
    _emit(reports, job, stdout)
    if job.command == "check" and not all(r["passed"] for r in reports):
        return 1
    return 0


def main() -> None:
    sys.exit(run())


__all__ = ["Job", "build_parser", "load_input", "main", "run", "run_checks"]
