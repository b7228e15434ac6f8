"""Command-line front end.

Exit codes: 0 when every check passes, 1 when some check fails, 2 on input or
configuration errors.  Reports are deterministic for a fixed configuration.
"""

import argparse
import csv
import io as _io
import json
import os
import sys

import numpy as np

from . import dynamics as dyn
from .cone_ops import (
    PartialOperator,
    diagonal_criterion,
    extend_operator,
    positive_bijection_certificate,
    sample_positive,
    theta_of,
)
from .errors import InputError, KreinError, NeutralEigenvectorError, ShiftNotZeroError
from .io import clean, dumps, flow_report_csv, matrix_from_json, space_from_json, spec_from_json
from .krein_core import (
    KreinSpace,
    VectorKind,
    classify_vector,
    definite_inner,
    fundamental_decomposition,
    indefinite_inner,
    krein_adjoint,
)
from .models import (
    SIGMA1,
    SIGMA3,
    GridFunction,
    GridParams,
    boost_model,
    diagonal_model,
    dilation_model,
    fourier_weight_check,
    hermite_basis,
    minkowski_space,
    oscillator_eigenvalues,
    oscillator_space,
    oscillator_spec,
    parity_decomposition,
    pauli_family,
    pt_inner,
)
from .numerics import DEFAULT_TOL, matrix_exp

FIXTURES = ("minkowski", "pauli", "diagonal", "dilation", "oscillator", "shifted", "boost")
DEFAULT_SEED = 42


class UsageError(Exception):
    """Bad configuration detected after argument parsing."""


# --------------------------------------------------------------------------
# report

class Report:
    def __init__(self, command, config):
        self.command = command
        self.config = config
        self.records = []

    def add(self, name, passed, measured=None, tolerance=None, status=None):
        self.records.append(
            {
                "name": name,
                "status": status or ("pass" if passed else "fail"),
                "measured": clean(measured),
                "tolerance": clean(tolerance),
            }
        )

    def check_le(self, name, value, tol):
        value = float(value)
        self.add(name, bool(np.isfinite(value) and value <= tol), value, tol)

    def check_close(self, name, value, expected, tol):
        err = float(np.max(np.abs(np.asarray(value) - np.asarray(expected))))
        self.add(name, err <= tol, {"value": value, "expected": expected, "error": err}, tol)

    def error(self, name, exc):
        self.add(name, False, {"error": type(exc).__name__, "message": str(exc)}, None, status="error")

    @property
    def status(self):
        return "pass" if all(r["status"] == "pass" for r in self.records) else "fail"

    def to_json(self):
        return dumps({"command": self.command, "config": self.config, "records": self.records, "status": self.status})

    def to_csv(self):
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "measured", "tolerance"])
        for r in self.records:
            w.writerow([r["name"], r["status"], json.dumps(r["measured"], sort_keys=True), json.dumps(r["tolerance"])])
        w.writerow(["overall", self.status, "", ""])
        return buf.getvalue()


# --------------------------------------------------------------------------
# parsing helpers

def parse_complex_list(text, what="list"):
    try:
        return np.array([complex(tok.strip().replace("i", "j")) for tok in text.split(",") if tok.strip()])
    except ValueError as exc:
        raise UsageError(f"cannot parse {what} {text!r}: {exc}") from exc


def parse_real_list(text, what="list"):
    vals = parse_complex_list(text, what)
    if np.any(vals.imag != 0):
        raise UsageError(f"{what} must be real")
    return vals.real


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_input(path):
    """``--in`` file: a space object, or ``{"space", "W", "vectors", "spec"}``."""
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise UsageError("input JSON must be an object")
    out = {}
    if "gram" in obj:
        out["space"] = space_from_json(obj)
    elif "space" in obj:
        out["space"] = space_from_json(obj["space"])
    else:
        raise UsageError("input JSON needs a 'gram' or a 'space' entry")
    if "W" in obj:
        out["W"] = matrix_from_json(obj["W"])
    if "spec" in obj:
        out["spec"] = spec_from_json(obj["spec"])
    if "vectors" in obj:
        try:
            out["vectors"] = [
                np.asarray(v["re"], dtype=float) + 1j * np.asarray(v.get("im", [0.0] * len(v["re"])), dtype=float)
                if isinstance(v, dict)
                else np.asarray(v, dtype=complex)
                for v in obj["vectors"]
            ]
        except (TypeError, ValueError, KeyError) as exc:
            raise UsageError(f"malformed vectors: {exc}") from exc
    return out


def fixture_space(args):
    name = args.fixture
    if name == "minkowski":
        return minkowski_space()
    if name == "pauli":
        return pauli_family(args.rho, args.xi).space
    if name == "diagonal":
        return KreinSpace(np.diag(parse_real_list(args.signs, "signs")), args.tol)
    if name == "boost":
        return boost_model()[0]
    if name in ("oscillator", "shifted"):
        return oscillator_space(args.n)
    raise UsageError(f"fixture {name!r} has no finite-dimensional space")


def resolve_space(args):
    if (args.fixture is None) == (args.input is None):
        raise UsageError("give exactly one of --fixture and --in")
    if args.input is not None:
        data = load_input(args.input)
        return data["space"], data
    return fixture_space(args), {}


def resolve_operator(args, data):
    if args.diag is not None:
        return np.diag(parse_complex_list(args.diag, "--diag"))
    if args.matrix is not None:
        obj = _read_json(args.matrix)
        return matrix_from_json(obj)
    if "W" in data:
        return data["W"]
    raise UsageError("no operator given (use --diag, --matrix or a 'W' entry in --in)")


def resolve_vectors(args, data, space, default_count=0):
    vecs = [parse_complex_list(v, "--vector") for v in (args.vector or [])]
    vecs += list(data.get("vectors", []))
    if not vecs and default_count:
        rng = np.random.default_rng(args.seed)
        vecs = [rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim) for _ in range(default_count)]
    for v in vecs:
        if v.shape != (space.dim,):
            raise InputError(f"vector of length {v.shape[0]} in a {space.dim}-dimensional space")
    return vecs


def t_grid(args):
    if args.t_count < 1:
        raise UsageError("--t-count must be at least 1")
    return np.linspace(args.t_start, args.t_stop, args.t_count)


# --------------------------------------------------------------------------
# commands

def cmd_classify(args, report):
    space, data = resolve_space(args)
    vecs = resolve_vectors(args, data, space)
    if not vecs:
        raise UsageError("no vectors to classify (use --vector)")
    for k, f in enumerate(vecs):
        cls = classify_vector(space, f)
        report.add(f"vector[{k}]", True, {"vector": f, "class": cls.kind.value, "value": cls.value}, space.tol)


def cmd_theta(args, report):
    space, data = resolve_space(args)
    W = resolve_operator(args, data)
    rep = theta_of(space, W, seed=args.seed, tol=args.tol)
    report.add("theta", True, rep.to_dict(), args.tol)
    try:
        cert = positive_bijection_certificate(space, W, seed=args.seed, tol=args.tol)
        measured = {"certified": cert.certified, "sampled": cert.sampled, "violations": cert.violations}
        report.add("bijection_consistency", cert.consistent, measured, args.tol)
    except KreinError as exc:
        report.error("bijection_consistency", exc)
        cert = None
    if args.expect_unitary:
        report.add("expect_scaled_unitary", bool(cert and cert.certified), rep.residual, args.tol)


def cmd_extend(args, report):
    space, data = resolve_space(args)
    W = resolve_operator(args, data)
    if W.shape != (space.dim, space.dim):
        raise InputError(f"operator of shape {W.shape} on a {space.dim}-dimensional space")
    op = PartialOperator.from_matrix(space, W)
    for k, f in enumerate(resolve_vectors(args, data, space, default_count=10)):
        try:
            value = extend_operator(space, op, f, tol=args.tol)
        except KreinError as exc:
            report.error(f"extend[{k}]", exc)
            continue
        direct = W @ f
        err = float(np.linalg.norm(value - direct))
        report.add(f"extend[{k}]", err <= args.tol * (np.linalg.norm(direct) + 1), {"value": value, "error": err}, args.tol)


def _flow_inputs(args):
    if (args.fixture is None) == (args.input is None):
        raise UsageError("give exactly one of --fixture and --in")
    if args.input is not None:
        data = load_input(args.input)
        if "spec" not in data:
            raise UsageError("flow input needs a 'spec' entry")
        return data["space"], data["spec"]
    name = args.fixture
    if name == "boost":
        return boost_model()
    if name == "diagonal":
        return diagonal_model(parse_real_list(args.signs, "signs"), parse_complex_list(args.lambdas, "lambdas"))
    if name == "oscillator":
        return oscillator_space(args.n), oscillator_spec(args.n, 0.0)
    if name == "shifted":
        return oscillator_space(args.n), oscillator_spec(args.n, args.a)
    raise UsageError(f"fixture {name!r} has no flow; use boost, diagonal, oscillator or shifted")


def run_flow(space, spec, ts, seed, report):
    """Full normalization pipeline; returns the FlowReport (or None if it could not start)."""
    try:
        alpha = dyn.fit_alpha(space, spec, seed=seed)
        report.add("alpha", True, alpha, dyn.FLOW_TOL)
    except KreinError as exc:
        report.error("alpha", exc)
        return None
    try:
        group = dyn.normalize_to_group(space, spec, alpha)
    except KreinError as exc:
        report.error("normalize", exc)
        return None
    report.check_le("group_unitarity", max(group.unitarity_residual(t) for t in ts), dyn.FLOW_TOL)
    decomp = fundamental_decomposition(space)
    inter = 0.0
    for t in ts:
        U = group.evaluate(t)
        Jt = dyn.evolved_symmetry(space, decomp, group, t)
        inter = max(inter, float(np.linalg.norm(Jt @ U - U @ decomp.J)))
    report.check_le("intertwining", inter, 1e-9)
    flow = dyn.uniform_bound_scan(space, decomp, group, ts)
    report.add(
        "uniform_bound",
        flow.uniformly_bounded,
        {"max_jt_norm": max(flow.jt_norms), "growth_rate": flow.growth_rate},
        flow.bound_c,
    )
    fac = [max(r.factorization_residual, r.q_anticomm_residual) for r in flow.rows]
    report.check_le("factorization", max(fac), dyn.FLOW_TOL)
    try:
        inv = dyn.invariant_decomposition(space, group)
        report.add("invariant_decomposition", True, {"signature": [inv.basis_plus.shape[1], inv.basis_minus.shape[1]]})
    except KreinError as exc:
        report.error("invariant_decomposition", exc)
    try:
        A = dyn.generator(group)
        eig = np.linalg.eigvals(A)
        eig = eig[np.lexsort((eig.real, eig.imag))]
        report.add("generator", True, {"eigenvalues": eig}, dyn.FLOW_TOL)
    except KreinError as exc:
        report.error("generator", exc)
    line = dyn.line_spectrum_check(spec)
    report.add("line_spectrum", line.on_line, {"real_part": line.real_part, "alpha_over_2": alpha / 2})
    return flow


def cmd_flow(args, report):
    space, spec = _flow_inputs(args)
    return run_flow(space, spec, t_grid(args), args.seed, report)


# --------------------------------------------------------------------------
# named examples

def _example_minkowski(args, r):
    space = minkowski_space()
    f = np.array([2, 1, 0, 0])
    r.add("signature", space.signature == (1, 3), list(space.signature), [1, 3])
    r.check_close("inner_2100", indefinite_inner(space, f, f), 3.0, args.tol)
    c1, c2 = classify_vector(space, f), classify_vector(space, [1, 1, 0, 0])
    r.add("classify_2100_positive", c1.kind is VectorKind.POSITIVE, c1.kind.value)
    r.add("classify_1100_neutral", c2.kind is VectorKind.NEUTRAL, c2.kind.value)
    dec = fundamental_decomposition(space)
    r.check_close("J", dec.J, np.diag([1.0, -1, -1, -1]), args.tol)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(200):
        g = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        worst = max(worst, abs(definite_inner(dec, g, g) - np.sum(np.abs(g) ** 2)))
    r.check_le("definite_inner_is_euclidean", worst, args.tol * 10)
    samples = sample_positive(space, args.seed, 50)
    r.add("sampled_inside_light_cone", all(abs(s[0]) ** 2 > np.sum(np.abs(s[1:]) ** 2) for s in samples), len(samples))


def _example_pauli(args, r):
    m = pauli_family(args.rho, args.xi)
    space, JL, JM, Q = m.space, m.J_L, m.J_M, m.Q
    r.check_close("inner_e1_e2", indefinite_inner(space, [1, 0], [0, 1]), 1.0, args.tol)
    cls = classify_vector(space, [1, -1])
    r.check_close("classify_1m1_negative", cls.value, -2.0, args.tol)
    r.check_close("J_L_is_sigma1", m.decomp_L.J, SIGMA1, args.tol)
    r.check_close("L_plus", np.abs(m.decomp_L.basis_plus[:, 0]), np.full(2, 2 ** -0.5), args.tol)
    r.check_close("definite_inner_e1", definite_inner(m.decomp_L, [1, 0], [1, 0]), 1.0, args.tol)
    r.check_close("exp_sigma3", matrix_exp(SIGMA3), np.diag([np.e, 1 / np.e]), 1e-12)
    r.check_close("exp_Q_closed_form", matrix_exp(Q), SIGMA1 @ JM, args.tol)
    r.check_le("J_M_involution", np.linalg.norm(JM @ JM - np.eye(2)), args.tol)
    r.check_le("J_M_self_adjoint", np.linalg.norm(krein_adjoint(space, JM) - JM), args.tol)
    r.check_le("J_L_J_M_is_exp_Q", np.linalg.norm(JL @ JM - matrix_exp(Q)), args.tol)
    r.check_le("J_M_anticommutes_Q", np.linalg.norm(JM @ Q + Q @ JM), args.tol)
    Qrec = dyn.q_operator(space, m.decomp_L, m.decomp_M)
    r.check_le("q_operator_recovers_Q", np.linalg.norm(Qrec - Q), args.tol)
    v = m.M_plus[:, 0]
    vv = indefinite_inner(space, v, v).real
    r.add("M_plus_positive", vv > 0, vv, 0.0)
    r.check_le("decomposition_J_matches", np.linalg.norm(m.decomp_M.J - JM), args.tol)


def _example_diagonal(args, r):
    space, spec = diagonal_model(parse_real_list(args.signs, "signs"), parse_complex_list(args.lambdas, "lambdas"))
    lam = spec.lambdas
    line = dyn.line_spectrum_check(spec)
    r.add("line_spectrum", line.on_line, line.real_part)
    moduli = np.abs(np.exp(lam * 1.3))
    r.add("diagonal_criterion_t1.3", diagonal_criterion(moduli) == line.on_line, moduli)
    try:
        alpha = dyn.fit_alpha(space, spec, seed=args.seed)
    except KreinError as exc:
        r.error("alpha", exc)
        return
    r.check_close("alpha_is_2re_lambda", alpha, 2 * line.real_part, 1e-8)
    group = dyn.normalize_to_group(space, spec, alpha)
    t = 0.7
    r.check_close("phases_exp_i_im_lambda_t", np.diag(group.evaluate(t)), np.exp(1j * lam.imag * t), args.tol)
    rep = theta_of(space, np.diag(np.where(np.arange(space.dim) % 2 == 0, 2.0, 2j)), seed=args.seed)
    r.check_close("theta_diag_2_2i", rep.theta, 4.0, args.tol)


def _example_dilation(args, r):
    params = GridParams()
    gauss = GridFunction.sample(lambda x: np.exp(-0.5 * x * x), params)
    base = pt_inner(gauss, gauss)
    r.check_close("gaussian_pt_norm", base, np.sqrt(np.pi), 1e-8)
    f1 = hermite_basis(2, 0.0, params).functions[1]
    r.check_close("hermite_f1_pt_norm", pt_inner(f1, f1), -1.0, 1e-7)
    ts, ratios = [], []
    for t in (0.1, 0.3, 0.5):
        Wg = dilation_model(params, t, with_prefactor=False)(gauss)
        ratio = (pt_inner(Wg, Wg) / base).real
        r.check_close(f"unnormalized_ratio_t{t:g}", ratio, np.exp(-t), 1e-5)
        ts.append(t)
        ratios.append(ratio)
    alpha, _ = dyn.fit_exponential_rate(ts, ratios)
    r.check_close("alpha", alpha, -1.0, 1e-5)
    Ug = dilation_model(params, 0.3)(gauss)
    r.check_close("normalized_preserves_pt", pt_inner(Ug, Ug), base, 1e-6)


def _example_oscillator(args, r, a=0.0):
    n = args.n
    basis = hermite_basis(n, a)
    signs = np.diag((-1.0) ** np.arange(n))
    tol_gram = 1e-7 if a == 0 else 1e-5
    r.check_close("gram_pt", basis.gram_pt, signs, tol_gram)
    if a == 0:
        r.check_close("gram_l2", basis.gram_l2, np.eye(n), 1e-7)
        dec = parity_decomposition(basis)
        r.check_close("parity_J", dec.J, signs, 1e-7)
        r.check_close("f2_definite_norm", definite_inner(dec, np.eye(n)[2], np.eye(n)[2]), 1.0, 1e-7)
    else:
        try:
            parity_decomposition(basis)
            r.add("shift_breaks_parity_split", False, "no error")
        except ShiftNotZeroError as exc:
            r.add("shift_breaks_parity_split", True, type(exc).__name__)
        norms = basis.l2_norms()
        r.add("l2_norms_increasing", bool(np.all(np.diff(norms) > 0)), norms)
    r.check_le("fourier_weight_a0", fourier_weight_check(n, 0.0), 1e-5)
    if a != 0:
        r.check_le(f"fourier_weight_a{a:g}", fourier_weight_check(n, a), 1e-5)
    space, spec = oscillator_space(n), oscillator_spec(n, a)
    alpha = dyn.fit_alpha(space, spec, seed=args.seed)
    r.check_close("alpha", alpha, 0.0, 1e-8)
    group = dyn.normalize_to_group(space, spec, alpha)
    inv = dyn.invariant_decomposition(space, group)
    r.check_close("invariant_split_is_parity", inv.J, signs, 1e-8)
    A = dyn.generator(group)
    eig = np.linalg.eigvals(A)
    eig = eig[np.argsort(eig.imag)]
    r.check_close("generator_eigenvalues", eig, oscillator_eigenvalues(n, a), 1e-8)
    line = dyn.line_spectrum_check(spec)
    r.add("line_spectrum", line.on_line and abs(line.real_part) <= 1e-12, line.real_part)
    dec = fundamental_decomposition(space)
    drift = max(np.linalg.norm(dyn.evolved_symmetry(space, dec, group, t) - dec.J) for t in (-2.0, 0.5, 3.0))
    r.check_le("J_t_constant", drift, 1e-9)
    if a == 0:
        r.check_close("U_pi_is_minus_identity", group.evaluate(np.pi), -np.eye(n), 1e-9)


def _example_boost(args, r):
    space, spec = boost_model()
    group = dyn.normalize_to_group(space, spec, 0.0)
    dec = fundamental_decomposition(space)
    for t in (0.5, 1.0):
        Jt = dyn.evolved_symmetry(space, dec, group, t)
        c, s = np.cosh(2 * t), np.sinh(2 * t)
        r.check_close(f"J_t_closed_form_t{t:g}", Jt, np.array([[c, -s], [s, -c]]), 1e-9)
    flow = dyn.uniform_bound_scan(space, dec, group, np.linspace(1, 5, 9))
    ratio = np.array(flow.jt_norms) / np.exp(2 * np.array(flow.t_grid))
    r.add("jt_norm_tracks_exp_2t", bool(np.all((ratio >= 0.9) & (ratio <= 1.1))), ratio, [0.9, 1.1])
    r.add("not_uniformly_bounded", not flow.uniformly_bounded, max(flow.jt_norms), flow.bound_c)
    try:
        dyn.invariant_decomposition(space, group)
        r.add("neutral_eigenvector", False, "decomposition found")
    except NeutralEigenvectorError as exc:
        r.add("neutral_eigenvector", True, type(exc).__name__)


def cmd_example(args, report):
    if args.fixture is None:
        raise UsageError("example needs --fixture")
    runners = {
        "minkowski": _example_minkowski,
        "pauli": _example_pauli,
        "diagonal": _example_diagonal,
        "dilation": _example_dilation,
        "oscillator": _example_oscillator,
        "shifted": lambda a, r: _example_oscillator(a, r, a=a.a),
        "boost": _example_boost,
    }
    try:
        runners[args.fixture](args, report)
    except KreinError as exc:
        if isinstance(exc, InputError):
            raise
        report.error("example", exc)


COMMANDS = {
    "classify": cmd_classify,
    "theta": cmd_theta,
    "extend": cmd_extend,
    "flow": cmd_flow,
    "example": cmd_example,
}


# --------------------------------------------------------------------------
# entry point

def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--fixture", choices=FIXTURES)
    p.add_argument("--in", dest="input", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--t-start", type=float, default=-2.0)
    p.add_argument("--t-stop", type=float, default=2.0)
    p.add_argument("--t-count", type=int, default=21)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--xi", type=float, default=float(np.pi / 2))
    p.add_argument("--a", type=float, default=0.3)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--signs", default="1,-1")
    p.add_argument("--lambdas", default="-0.5+1j,-0.5+3j")
    p.add_argument("--vector", action="append", metavar="CSV")
    p.add_argument("--diag", metavar="CSV")
    p.add_argument("--matrix", metavar="PATH")
    p.add_argument("--expect-unitary", action="store_true")
    p.add_argument("--config", metavar="PATH", help="key=value lines with flag names as keys")
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="kreinflow", description="Krein-space verification pipelines.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("classify", "classify vectors as positive, negative or neutral"),
        ("theta", "test scaled unitarity of an operator"),
        ("extend", "extend an operator from the positive cone"),
        ("flow", "normalize a semigroup and scan its evolved symmetries"),
        ("example", "run a named fixture's checks"),
    ):
        sub.add_parser(name, parents=[common], help=helptext)
    return parser


def _read_config(path, parser, argv):
    """Apply ``key=value`` lines as defaults; explicit flags still win."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    defaults = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {raw!r} is not key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        defaults[k.replace("-", "_")] = v
    probe = build_parser()
    known = vars(probe.parse_args(argv))
    for k in defaults:
        if k not in known or k in ("config", "command"):
            raise UsageError(f"unknown config key {k!r}")
    # re-parse with config values injected ahead of the explicit flags
    injected = []
    for k, v in defaults.items():
        flag = "--" + k.replace("_", "-")
        if k == "input":
            flag = "--in"
        if k == "expect_unitary":
            if v.lower() in ("1", "true", "yes"):
                injected.append(flag)
            continue
        if k == "vector":
            for vec in v.split(";"):
                injected += [flag, vec]
            continue
        injected += [flag, v]
    return parser.parse_args(argv[:1] + injected + argv[1:])


def _resolve_tol(args):
    if args.tol is not None:
        tol = args.tol
    elif os.environ.get("KREIN_TOL"):
        try:
            tol = float(os.environ["KREIN_TOL"])
        except ValueError as exc:
            raise UsageError(f"KREIN_TOL={os.environ['KREIN_TOL']!r} is not a number") from exc
    else:
        tol = DEFAULT_TOL
    if not (np.isfinite(tol) and tol > 0):
        raise UsageError("tolerance must be positive")
    return tol


def _config_echo(args):
    skip = {"out", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            try:
                args = _read_config(args.config, parser, argv)
            except SystemExit as exc:
                return int(exc.code or 0)
        args.tol = _resolve_tol(args)
        report = Report(args.command, _config_echo(args))
        result = COMMANDS[args.command](args, report)
    except (UsageError, InputError) as exc:
        print(f"kreinflow: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "csv":
        text = flow_report_csv(result) if args.command == "flow" and result is not None else report.to_csv()
    else:
        text = report.to_json()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"kreinflow: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
