"""Command-line front end.

JSON in, JSON out (CSV for tabular sweeps), one subcommand per engine,
and a `verify all` runner for the behavior-tagged self-check matrix.

Exit codes: 0 success, 1 malformed input (unreadable files, bad JSON,
missing flags), 2 mathematical rejection (unstable forms, inconsistent
cohomology data, windows sitting on indicial roots, failed verify rows).
Identical arguments and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import Form, contract, form_from_json, form_to_json, hodge
from .polyforms import (Poly, const_coeffs, euler_vector, poly_form,
                        polyform_from_json, polyform_to_json)
from .scalars import scalar_to_json
from .su3 import decompose2, decompose3, hitchin_dual, stability_invariant, \
    standard_su3, su3_structure, torsion_classes
from .g2 import ASData, ASDerivatives, as_residual, assemble_s1_invariant, \
    g2_metric
from .cone import (CartLink, EigenformSymbol, cart_to_cone,
                   classify_homogeneous_harmonic, cone_laplacian, conical_cy,
                   conical_su3_residuals, generic_su2_structure,
                   sasaki_einstein_structure, se_residual)
from .indicial import (ALLOWED_OPERATORS, LinkSpectralData,
                       closed_coclosed_dim, dirac_kernel_cone,
                       gauge_kernel_dim, harmonic_form_dim, index_jump,
                       indicial_set)
from .topology import (CircleBundleSpec, CohomologyModel, cAp_model,
                       ch1_check, gysin_betti, kp1p1_bundles, kp1p1_model)
from .series import hitchin_Qk, majorant_check, mock_iterate
from .verify import row_tags, run_matrix

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MATH = 2

SCHEMA = "conekit/1"


class InputError(ValueError):
    """Malformed request: bad file, bad JSON, bad flag combination."""


@dataclass(frozen=True)
class RunConfig:
    """Shared knobs of a single invocation."""
    subcommand: str
    input: str | None = None
    output: str | None = None
    mode: str = "exact"
    tolerance: float = 1e-10
    seed: int = 0
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise InputError(f"mode must be exact or float, not {self.mode!r}")
        if self.mode == "float" and not self.tolerance > 0:
            raise InputError("tolerance must be positive in float mode")
        if self.jobs < 1:
            raise InputError("jobs must be at least 1")


def config_from_args(args) -> RunConfig:
    mode = getattr(args, "mode", None) or os.environ.get(
        "CONEKIT_MODE", "exact")
    return RunConfig(
        subcommand=f"{args.group} {args.action}",
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        mode=mode,
        tolerance=getattr(args, "tolerance", 1e-10),
        seed=getattr(args, "seed", 0),
        jobs=getattr(args, "jobs", 1),
    )


# ------------------------------------------------------------------ I/O helpers

def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: not valid JSON ({e})")


def _get(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"missing key {key!r}")
    return obj[key]


def _form_in(obj: dict, key: str) -> Form:
    try:
        return form_from_json(_get(obj, key))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad form under {key!r}: {e}")


def _polyform_in(obj: dict, key: str) -> Form:
    try:
        return polyform_from_json(_get(obj, key))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad polynomial form under {key!r}: {e}")


def _scalar_in(v):
    try:
        if isinstance(v, bool):
            raise ValueError("bool is not a scalar")
        if isinstance(v, (int, str)):
            return Fraction(v)
        return float(v)
    except (TypeError, ValueError) as e:
        raise InputError(f"bad scalar {v!r}: {e}")


def _cli_scalar(text: str):
    """Parse a number flag: exact when it looks exact, float otherwise."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise InputError(f"cannot parse number {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}")


_sc = scalar_to_json


def _dump_form(a: Form) -> dict:
    if any(isinstance(c, Poly) for c in a.terms.values()):
        b = a.map_coeffs(
            lambda c: c if isinstance(c, Poly) else Poly.const(a.dim, c))
        return polyform_to_json(b)
    return form_to_json(a)


def _sup(a: Form) -> float:
    out = 0.0
    for c in a.terms.values():
        if isinstance(c, Poly):
            out = max(out, max((abs(float(v)) for v in c.terms.values()),
                               default=0.0))
        else:
            out = max(out, abs(float(c)))
    return out


def _emit(report: dict, output: str | None) -> None:
    doc = {"schema": SCHEMA}
    doc.update(report)
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _structure_from(obj: dict):
    """SU(3)-structure from a JSON object; the standard one when absent."""
    if "structure" in obj:
        s = obj["structure"]
        return su3_structure(_form_in(s, "omega"), _form_in(s, "re"),
                             _form_in(s, "im"))
    return standard_su3()


# ------------------------------------------------------------------ su3 commands

def cmd_su3_decompose(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    a = _form_in(obj, "form")
    s = _structure_from(obj)
    if a.degree == 2:
        lam, x, sigma0 = decompose2(a, s)
        return EXIT_OK, {
            "degree": 2,
            "omega_multiple": _sc(lam),
            "vector": [_sc(c) for c in x],
            "primitive_part": _dump_form(sigma0),
        }
    if a.degree == 3:
        gamma, lam, mu, rho0 = decompose3(a, s)
        return EXIT_OK, {
            "degree": 3,
            "one_form": _dump_form(gamma),
            "re_multiple": _sc(lam),
            "im_multiple": _sc(mu),
            "primitive_part": _dump_form(rho0),
        }
    raise InputError("decompose expects a 2- or 3-form")


def cmd_su3_dual(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    rho = _form_in(obj, "form")
    lam = stability_invariant(rho)
    dual = hitchin_dual(rho)
    return EXIT_OK, {
        "stability_invariant": _sc(lam),
        "dual": _dump_form(dual),
    }


def cmd_su3_torsion(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    s = su3_structure(_form_in(obj, "omega"), _form_in(obj, "re"),
                      _form_in(obj, "im"))
    classes, cons = torsion_classes(s, _form_in(obj, "d_omega"),
                                    _form_in(obj, "d_re"),
                                    _form_in(obj, "d_im"))
    return EXIT_OK, {
        "w1": _sc(classes.w1),
        "w1_hat": _sc(classes.w1_hat),
        "w2": _dump_form(classes.w2),
        "w2_hat": _dump_form(classes.w2_hat),
        "w3": _dump_form(classes.w3),
        "w4": _dump_form(classes.w4),
        "w5": _dump_form(classes.w5),
        "consistency_zero": cons.is_zero(),
        "consistency_max": cons.max_abs(),
    }


# ------------------------------------------------------------------ g2 commands

def cmd_g2_residual(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    s = su3_structure(_form_in(obj, "omega"), _form_in(obj, "re"),
                      _form_in(obj, "im"))
    h = _scalar_in(_get(obj, "h"))
    theta = _form_in(obj, "theta")
    dh = _form_in(obj, "dh")
    dtheta = _form_in(obj, "dtheta")
    data = ASData(s=s, h=h, theta=theta, dh=dh, dtheta=dtheta)
    dv = ASDerivatives(d_omega=_form_in(obj, "d_omega"),
                       d_re=_form_in(obj, "d_re"),
                       d_im=_form_in(obj, "d_im"),
                       dh=dh, dtheta=dtheta)
    r = as_residual(data, dv)
    report = {
        "torsion_free": all(x.is_zero() for x in r),
        "sup_norms": [_sup(x) for x in r],
    }
    if args.dump:
        report["residuals"] = [_dump_form(x) for x in r]
        phi, star_phi = assemble_s1_invariant(data)
        report["phi"] = _dump_form(phi)
        report["star_phi"] = _dump_form(star_phi)
    return EXIT_OK, report


def cmd_g2_metric(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    phi = _form_in(obj, "phi")
    g, vol = g2_metric(phi)
    return EXIT_OK, {
        "metric": [[_sc(x) for x in row] for row in g],
        "volume_coefficient": _sc(vol),
    }


# ------------------------------------------------------------------ cone commands

def cmd_cone_conical(cfg: RunConfig, args):
    c_eta = _cli_scalar(args.deta)
    c_w2 = _cli_scalar(args.dw2)
    c_w3 = _cli_scalar(args.dw3)
    if (c_eta, c_w2, c_w3) == (Fraction(2), Fraction(-3), Fraction(3)):
        s = sasaki_einstein_structure()
    else:
        s = generic_su2_structure(
            d_eta=lambda alg: c_eta * alg.word("w1"),
            d_w2=lambda alg: c_w2 * alg.word("eta.w3"),
            d_w3=lambda alg: c_w3 * alg.word("eta.w2"))
    se = se_residual(s)
    cy = conical_cy(s)
    closure = [a.is_zero() and b.is_zero() for a, b in cy.d_residuals]
    algebraic = [r.is_zero() for r in conical_su3_residuals(cy)]
    return EXIT_OK, {
        "einstein": se.scal is not None,
        "scalar_curvature": se.scal,
        "cone_closure_zero": closure,
        "su3_constraints_zero": algebraic,
        "ricci_flat_cone": se.scal is not None and all(closure),
    }


def _cart_entries(parts) -> list[dict]:
    out = []
    for x in parts:
        if not isinstance(x, CartLink):
            raise InputError("expected a polynomial link representative")
        out.append({"radial_power": x.s, "numerator": _dump_form(x.form)})
    return out


def cmd_cone_laplacian(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    a = _polyform_in(obj, "form")
    g = cart_to_cone(a, a.dim)
    A, B = cone_laplacian(g)
    return EXIT_OK, {
        "n": g.n,
        "degree": g.k,
        "input_rate": _sc(g.rate),
        "output_rate": _sc(g.rate - 2),
        "harmonic": all(x.is_zero() for x in A + B),
        "dr_part": _cart_entries(A),
        "link_part": _cart_entries(B),
    }


def _symbol_from_json(d: dict) -> EigenformSymbol:
    def pair(key):
        v = d.get(key)
        if v is None:
            return None
        return (str(v[0]), _scalar_in(v[1]))
    mu = d.get("mu")
    return EigenformSymbol(
        name=str(_get(d, "name")), degree=int(_get(d, "degree")),
        kind=str(_get(d, "kind")),
        mu=None if mu is None else _scalar_in(mu),
        d_to=pair("d_to"), codiff_to=pair("codiff_to"),
        star_to=pair("star_to"), primitive=bool(d.get("primitive", False)))


def cmd_cone_classify(cfg: RunConfig, args):
    obj = _read_json(cfg.input)
    lam = _scalar_in(_get(obj, "rate"))
    k = int(_get(obj, "degree"))
    n = int(obj.get("n", 6))
    alg = sasaki_einstein_structure().algebra
    for d in obj.get("symbols", []):
        alg.declare(_symbol_from_json(d))
    alpha = [(_scalar_in(c), str(name)) for c, name in obj.get("alpha", [])]
    beta = [(_scalar_in(c), str(name)) for c, name in obj.get("beta", [])]
    comps = classify_homogeneous_harmonic(lam, k, n, alpha, beta, alg)
    return EXIT_OK, {
        "rate": _sc(lam),
        "degree": k,
        "n": n,
        "components": [{"type": c.type_tag, "closed": c.closed,
                        "coclosed": c.coclosed} for c in comps],
    }


# ------------------------------------------------------------------ indicial

def _operator_name(args) -> str:
    op = args.op
    if op == "laplacian":
        if args.degree is None:
            raise InputError("--op laplacian needs --degree")
        op = f"laplacian_{args.degree}"
    elif op == "d_plus_dstar":
        if args.parity is None:
            raise InputError("--op d_plus_dstar needs --parity")
        op = f"d_plus_dstar_{args.parity}"
    if op not in ALLOWED_OPERATORS:
        raise InputError(f"unknown operator {op!r}; choose from "
                         f"{', '.join(ALLOWED_OPERATORS)}")
    return op


def _spectra_in(path: str | None) -> LinkSpectralData:
    if path is None:
        raise InputError("--spectra FILE is required")
    obj = _read_json(path)
    try:
        return LinkSpectralData.from_json_dict(obj)
    except (KeyError, TypeError) as e:
        raise InputError(f"bad spectral data: {e}")


def cmd_indicial_roots(cfg: RunConfig, args):
    data = _spectra_in(args.spectra)
    op = _operator_name(args)
    lo, hi = _cli_scalar(args.window[0]), _cli_scalar(args.window[1])
    roots = indicial_set(op, data, (lo, hi))
    return EXIT_OK, {
        "operator": op,
        "window": [_sc(lo), _sc(hi)],
        "roots": [{"rate": _sc(r.lam), "multiplicity": r.multiplicity,
                   "log_order": r.log_order, "degree": r.degree}
                  for r in roots],
        "total_multiplicity": sum(r.multiplicity for r in roots),
    }


def cmd_indicial_jump(cfg: RunConfig, args):
    data = _spectra_in(args.spectra)
    op = _operator_name(args)
    nu1, nu2 = _cli_scalar(args.nu1), _cli_scalar(args.nu2)
    return EXIT_OK, {
        "operator": op,
        "nu1": _sc(nu1),
        "nu2": _sc(nu2),
        "jump": index_jump(op, data, nu1, nu2),
    }


def cmd_indicial_dims(cfg: RunConfig, args):
    data = _spectra_in(args.spectra)
    lam = _cli_scalar(args.rate)
    k, n = args.degree, args.n
    report = {
        "n": n,
        "degree": k,
        "rate": _sc(lam),
        "harmonic": harmonic_form_dim(data, n, k, lam),
        "closed_coclosed": closed_coclosed_dim(data, n, k, lam),
    }
    if n == 6:
        report["dirac"] = dirac_kernel_cone(data, lam).dimension
        report["gauge"] = gauge_kernel_dim(data, lam)
    return EXIT_OK, report


# ------------------------------------------------------------------ topology

def cmd_topology_gysin(cfg: RunConfig, args):
    if args.family is not None:
        if args.family != "cAp":
            raise InputError(f"unknown family {args.family!r}")
        if args.p is None:
            raise InputError("--family cAp needs --p")
        fam = cAp_model(args.p)
        total, end = fam.total_space_betti, fam.end_bundle_betti
        return EXIT_OK, {
            "family": "cAp",
            "p": args.p,
            "link": fam.link_description,
            "total_space_betti": list(total),
            "end_bundle_betti": list(end),
            "b2": total[2],
            "b3": total[3],
        }
    if args.model is None or args.c1 is None:
        raise InputError("need either --family cAp --p P or --model FILE --c1 LIST")
    obj = _read_json(args.model)
    try:
        model = CohomologyModel.from_json_dict(obj)
    except (KeyError, TypeError) as e:
        raise InputError(f"bad cohomology model: {e}")
    c1 = _int_list(args.c1)
    cup = tuple(_int_list(args.cup_ranks)) if args.cup_ranks else None
    spec = CircleBundleSpec(c1=tuple(c1), primitive=args.primitive,
                            cup_ranks=cup)
    betti = gysin_betti(model, spec)
    return EXIT_OK, {
        "c1": c1,
        "betti": list(betti),
        "b2": betti[2],
        "b3": betti[3],
    }


def cmd_topology_ch1(cfg: RunConfig, args):
    if args.model is not None:
        obj = _read_json(args.model)
        try:
            model = CohomologyModel.from_json_dict(obj)
        except (KeyError, TypeError) as e:
            raise InputError(f"bad cohomology model: {e}")
        if args.c1 is None or args.kahler is None:
            raise InputError("--model needs --c1 and --kahler")
        c1 = _int_list(args.c1)
        a = [_cli_scalar(x) for x in args.kahler.split(",")]
        out = ch1_check(model, c1, a)
        return EXIT_OK, {
            "admissible": out["admissible"],
            "pairing_value": _sc(out["pairing_value"]),
            "c1_lattice_basis": [[_sc(x) for x in v]
                                 for v in out["c1_lattice_basis"]],
            "kahler_normal": [_sc(x) for x in out["kahler_normal"]],
            "kahler_slice_nonempty": out["kahler_slice_nonempty"],
        }
    if args.m is None or args.n is None:
        raise InputError("need --m and --n (canonical-bundle family) or --model")
    a = _cli_scalar(args.a)
    out = kp1p1_bundles(args.m, args.n, a)
    return EXIT_OK, {
        "m": args.m,
        "n": args.n,
        "c1": list(out["c1"]),
        "kahler_class": [_sc(x) for x in out["kahler_class"]],
        "pairing_value": _sc(out["pairing_value"]),
        "admissible": out["admissible"],
    }


def cmd_topology_family(cfg: RunConfig, args):
    if args.family != "cAp":
        raise InputError(f"unknown family {args.family!r}")
    if args.p_min < 1 or args.p_max < args.p_min:
        raise InputError("need 1 <= p-min <= p-max")
    rows = []
    for p in range(args.p_min, args.p_max + 1):
        fam = cAp_model(p)
        rows.append({
            "p": p,
            "link": fam.link_description,
            "equation": fam.equation,
            "b2_total": fam.total_space_betti[2],
            "b3_total": fam.total_space_betti[3],
            "b2_end": fam.end_bundle_betti[2],
            "b3_end": fam.end_bundle_betti[3],
        })
    report = {"family": "cAp", "rows": rows}
    if args.csv:
        header = ["p", "b2_total", "b3_total", "b2_end", "b3_end", "link",
                  "equation"]
        _write_csv(args.csv, header,
                   [[r["p"], r["b2_total"], r["b3_total"], r["b2_end"],
                     r["b3_end"], r["link"], r["equation"]] for r in rows])
        report["csv"] = args.csv
    return EXIT_OK, report


# ------------------------------------------------------------------ series

def _flat_rho1() -> Form:
    kappa = Form.basis(6, 0, 1) - Form.basis(6, 2, 3)
    return Fraction(1, 4) * contract(euler_vector(6),
                                     const_coeffs(hodge(kappa)))


def cmd_series_qk(cfg: RunConfig, args):
    if cfg.input is not None:
        obj = _read_json(cfg.input)
        rho_list = [_polyform_in({"form": f}, "form")
                    for f in _get(obj, "rho")]
    else:
        rho_list = [_flat_rho1()]
    orders = []
    for k in range(1, args.order + 1):
        q = hitchin_Qk(rho_list, k)
        entry = {"k": k, "is_zero": q.is_zero()}
        if args.dump:
            entry["q"] = _dump_form(q)
        orders.append(entry)
    return EXIT_OK, {"orders": orders}


def cmd_series_majorant(cfg: RunConfig, args):
    b, c = _cli_scalar(args.b), _cli_scalar(args.c)
    rep = majorant_check(b, c, args.order)
    return EXIT_OK, {
        "b": _sc(Fraction(b)),
        "c": _sc(Fraction(c)),
        "order": rep["order"],
        "holds": rep["holds"],
        "max_ratio": _sc(rep["max_ratio"]),
        "failures": len(rep["failures"]),
    }


def _nonlinearity_in(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise InputError(f"nonlinearity entries look like M:COEFF, got {part!r}")
        m, v = part.split(":", 1)
        try:
            out[int(m)] = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad nonlinearity entry {part!r}")
    if not out:
        raise InputError("empty nonlinearity")
    return out


def cmd_series_iterate(cfg: RunConfig, args):
    coeffs = _nonlinearity_in(args.nonlinearity)
    radius = None if args.radius is None else _cli_scalar(args.radius)
    out = mock_iterate(_cli_scalar(args.solver), coeffs,
                       _cli_scalar(args.rho1_norm), args.order,
                       embedding_bound=_cli_scalar(args.embedding),
                       radius=radius)
    report = {
        "order": args.order,
        "b": _sc(out["b"]),
        "c": _sc(out["c"]),
        "closing_value": _sc(out["closing_value"]),
        "certified": out["certified"],
        "first_violation": out["first_violation"],
        "norms": [_sc(x) for x in out["norms"]],
        "majorant": [_sc(x) for x in out["majorant"]],
    }
    if args.csv:
        rows = [[k + 1, _sc(out["norms"][k]), _sc(out["majorant"][k])]
                for k in range(len(out["norms"]))]
        _write_csv(args.csv, ["k", "norm", "bound"], rows)
        report["csv"] = args.csv
    return EXIT_OK, report


# ------------------------------------------------------------------ verify

def cmd_verify_all(cfg: RunConfig, args):
    tags = None
    if args.tags:
        tags = [t.strip() for t in args.tags.split(",") if t.strip()]
        known = set(row_tags())
        bad = [t for t in tags if t not in known]
        if bad:
            raise InputError(f"unknown tags: {', '.join(bad)}")
    report = run_matrix(mode=cfg.mode, seed=cfg.seed,
                        tolerance=cfg.tolerance, jobs=cfg.jobs, tags=tags)
    for row in report["rows"]:
        status = "PASS" if row["passed"] else "FAIL"
        line = f"{status}  {row['tag']:<34} {row['checks']:>6} checks"
        sys.stdout.write(line + "\n")
        if not row["passed"]:
            sys.stdout.write(f"      {row['detail']}\n")
    n = len(report["rows"])
    ok = n - len(report["failures"])
    sys.stdout.write(f"{report['mode']} mode, seed {report['seed']}: "
                     f"{ok}/{n} rows passed, {report['checks']} checks\n")
    if cfg.output:
        doc = {"schema": SCHEMA}
        doc.update(report)
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return (EXIT_OK if report["passed"] else EXIT_MATH), None


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # accept negative rationals like -5/2 as option values
        self._negative_number_matcher = re.compile(
            r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _add_io(sp, need_input=False):
    if need_input:
        sp.add_argument("--input", "-i", required=True,
                        help="JSON input file")
    sp.add_argument("--output", "-o", default=None,
                    help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conekit",
                description="special-holonomy structure calculators")
    sub = p.add_subparsers(dest="group", required=True, metavar="GROUP")

    su = sub.add_parser("su3", help="pointwise SU(3)-structure algebra")
    ssub = su.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = ssub.add_parser("decompose", help="split a 2- or 3-form into types")
    _add_io(d, need_input=True)
    d = ssub.add_parser("dual", help="stable-form dual of a 3-form")
    _add_io(d, need_input=True)
    d = ssub.add_parser("torsion", help="torsion classes from derivatives")
    _add_io(d, need_input=True)

    g = sub.add_parser("g2", help="circle-invariant 3-forms in 7 dimensions")
    gsub = g.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = gsub.add_parser("residual", help="first-order system residuals")
    _add_io(d, need_input=True)
    d.add_argument("--dump", action="store_true",
                   help="include residual forms and the assembled 3-form")
    d = gsub.add_parser("metric", help="metric and volume of a positive 3-form")
    _add_io(d, need_input=True)

    c = sub.add_parser("cone", help="cone calculus over a 5-manifold link")
    csub = c.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = csub.add_parser("conical", help="check the conical structure closes")
    _add_io(d)
    d.add_argument("--deta", default="2", help="coefficient in d eta = C w1")
    d.add_argument("--dw2", default="-3", help="coefficient in d w2 = C eta^w3")
    d.add_argument("--dw3", default="3", help="coefficient in d w3 = C eta^w2")
    d = csub.add_parser("laplacian", help="cone Laplacian of a homogeneous form")
    _add_io(d, need_input=True)
    d = csub.add_parser("classify", help="type split of a harmonic cone form")
    _add_io(d, need_input=True)

    i = sub.add_parser("indicial", help="indicial roots of cone operators")
    isub = i.add_subparsers(dest="action", required=True, metavar="ACTION")
    for name, hlp in (("roots", "roots in a window"),
                      ("jump", "index change between two rates"),
                      ("dims", "kernel dimensions at a rate")):
        d = isub.add_parser(name, help=hlp)
        _add_io(d)
        d.add_argument("--spectra", required=True,
                       help="JSON file with the link spectral data")
        if name in ("roots", "jump"):
            d.add_argument("--op", required=True,
                           help="laplacian | d_plus_dstar | dirac | gauge")
            d.add_argument("--degree", type=int, default=None,
                           help="form degree (laplacian only)")
            d.add_argument("--parity", choices=("even", "odd"), default=None)
        if name == "roots":
            d.add_argument("--window", nargs=2, required=True,
                           metavar=("LO", "HI"))
        if name == "jump":
            d.add_argument("--nu1", required=True)
            d.add_argument("--nu2", required=True)
        if name == "dims":
            d.add_argument("--degree", type=int, required=True)
            d.add_argument("--rate", required=True)
            d.add_argument("--n", type=int, default=6,
                           help="cone dimension (default 6)")

    t = sub.add_parser("topology", help="circle-bundle cohomology bookkeeping")
    tsub = t.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = tsub.add_parser("gysin", help="Betti numbers of a circle bundle")
    _add_io(d)
    d.add_argument("--family", default=None, help="named family (cAp)")
    d.add_argument("--p", type=int, default=None, help="family index")
    d.add_argument("--model", default=None, help="cohomology model JSON")
    d.add_argument("--c1", default=None, help="Chern class, comma-separated")
    d.add_argument("--cup-ranks", default=None,
                   help="explicit cup ranks, comma-separated")
    d.add_argument("--primitive", action="store_true",
                   help="assert c1 is a primitive lattice vector")
    d = tsub.add_parser("ch1", help="admissibility of a bundle class")
    _add_io(d)
    d.add_argument("--m", type=int, default=None)
    d.add_argument("--n", type=int, default=None)
    d.add_argument("--a", default="1", help="fibre Kahler parameter")
    d.add_argument("--model", default=None, help="cohomology model JSON")
    d.add_argument("--c1", default=None, help="Chern class, comma-separated")
    d.add_argument("--kahler", default=None,
                   help="Kahler class coordinates, comma-separated")
    d = tsub.add_parser("family", help="sweep a named family")
    _add_io(d)
    d.add_argument("--family", default="cAp")
    d.add_argument("--p-min", type=int, default=1)
    d.add_argument("--p-max", type=int, default=10)
    d.add_argument("--csv", default=None, help="write the table here as CSV")

    s = sub.add_parser("series", help="adiabatic power-series engine")
    ssub2 = s.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = ssub2.add_parser("qk", help="nonlinear Taylor coefficients of the dual")
    d.add_argument("--input", "-i", default=None,
                   help="JSON with the correction list under 'rho'")
    d.add_argument("--output", "-o", default=None)
    d.add_argument("--order", type=int, default=4)
    d.add_argument("--dump", action="store_true", help="include the forms")
    d = ssub2.add_parser("majorant", help="convolution-stability check")
    _add_io(d)
    d.add_argument("--b", default="16")
    d.add_argument("--c", default="16")
    d.add_argument("--order", type=int, default=30)
    d = ssub2.add_parser("iterate", help="norm recursion against the majorant")
    _add_io(d)
    d.add_argument("--solver", default="1", help="linear solver bound")
    d.add_argument("--rho1-norm", default="1/2", help="first-order norm")
    d.add_argument("--order", type=int, default=50)
    d.add_argument("--nonlinearity", default="2:1",
                   help="degree:coefficient pairs, e.g. 2:1,3:1/4")
    d.add_argument("--embedding", default="1", help="embedding bound")
    d.add_argument("--radius", default=None,
                   help="convergence radius of the nonlinearity")
    d.add_argument("--csv", default=None, help="write the norm table as CSV")

    v = sub.add_parser("verify", help="structural identity matrix")
    vsub = v.add_subparsers(dest="action", required=True, metavar="ACTION")
    d = vsub.add_parser("all", help="run the matrix and print pass/fail rows")
    d.add_argument("--mode", choices=("exact", "float"), default=None,
                   help="arithmetic mode (default from CONEKIT_MODE, else exact)")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--tolerance", type=float, default=1e-10)
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--tags", default=None,
                   help="comma-separated row tags to run (default: all)")
    d.add_argument("--output", "-o", default=None,
                   help="also write the full JSON report here")
    return p


_HANDLERS = {
    ("su3", "decompose"): cmd_su3_decompose,
    ("su3", "dual"): cmd_su3_dual,
    ("su3", "torsion"): cmd_su3_torsion,
    ("g2", "residual"): cmd_g2_residual,
    ("g2", "metric"): cmd_g2_metric,
    ("cone", "conical"): cmd_cone_conical,
    ("cone", "laplacian"): cmd_cone_laplacian,
    ("cone", "classify"): cmd_cone_classify,
    ("indicial", "roots"): cmd_indicial_roots,
    ("indicial", "jump"): cmd_indicial_jump,
    ("indicial", "dims"): cmd_indicial_dims,
    ("topology", "gysin"): cmd_topology_gysin,
    ("topology", "ch1"): cmd_topology_ch1,
    ("topology", "family"): cmd_topology_family,
    ("series", "qk"): cmd_series_qk,
    ("series", "majorant"): cmd_series_majorant,
    ("series", "iterate"): cmd_series_iterate,
    ("verify", "all"): cmd_verify_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(args)
        code, report = _HANDLERS[(args.group, args.action)](cfg, args)
    except InputError as e:
        sys.stderr.write(f"conekit: input error: {e}\n")
        return EXIT_INPUT
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        sys.stderr.write(f"conekit: rejected: {e}\n")
        return EXIT_MATH
    if report is not None:
        _emit(report, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
