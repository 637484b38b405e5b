"""``g2calc``: batch verification of exterior-calculus identities from the shell.

Every subcommand prints a report and exits with

    0  the verdict is true (the identity holds, the form is closed, ...)
    1  the verdict is false; the defect is printed
    2  usage or parse error
    3  a precondition failed (for example a 1-form that is not Rochesterian)

Text reports are ``key: value`` lines; differential forms with more than
one term are printed one term per line in canonical order. With ``--json``
each report line becomes one JSON object ``{"command", "key", "value"}``
whose value is the canonical text, and the last line is
``{"command", "verdict", "exit"}``.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import selftest as selftest_module
from .errors import G2CalcError, NotRochesterian
from .exterior import (
    DifferentialForm,
    PolynomialMap,
    exterior_derivative,
    is_top_degree,
    pullback,
    vector_bracket,
)
from .g2 import (
    G2Structure,
    cross_product,
    cross_product_field,
    graph_criterion,
    hodge_star,
    is_g2_morphism,
    is_g2_vector_field,
    jacobi_defect,
    metric_from_phi,
    rochesterian_bracket,
    rochesterian_field_of,
    split_two_form,
)
from .numeric import DEFAULT_TOLERANCES, integrate_flow
from .parser import ParseError, parse_field, parse_form, parse_function, parse_map
from .presets import get_preset
from .symplectic import (
    SymplecticStructure,
    hamiltonian_field,
    poisson_bracket,
    poisson_jacobi_check,
)

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(Exception):
    """Bad command line; maps to exit code 2."""


class Report:
    """Ordered report lines for one command."""

    def __init__(self, command):
        self.command = command
        self.lines = []

    def add(self, key, value):
        self.lines.append((key, value))

    def render(self, as_json, verdict, code):
        out = []
        for key, value in self.lines:
            if as_json:
                out.append(json.dumps({"command": self.command, "key": key, "value": _text(value)}))
            elif isinstance(value, DifferentialForm) and len(value.terms) > 1:
                out.append(f"{key}:")
                out.extend("  " + term for term in _terms(value))
            else:
                out.append(f"{key}: {_text(value)}")
        if as_json:
            out.append(json.dumps({"command": self.command, "verdict": verdict, "exit": code}))
        elif verdict is not None:
            out.append(f"verdict: {'true' if verdict else 'false'}")
        return out


def _text(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if hasattr(value, "to_text"):
        return value.to_text()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_text(v) for v in value) + "]"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _terms(form):
    """Canonical text split into its '+ (c) dx[..]' pieces."""
    return [f"+ ({c}) dx[{','.join(map(str, idx))}]" for idx, c in form.items()]


# --- argument helpers -------------------------------------------------------------

def _point(text, dim):
    if text is None:
        return None
    try:
        values = [Fraction(v.strip()) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from None
    if len(values) != dim:
        raise UsageError(f"point needs {dim} coordinates, got {len(values)}")
    return values


def _structure(args, default="phi0", attr="preset"):
    name = getattr(args, attr) or default
    try:
        return get_preset(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _g2(args, attr="preset"):
    s = _structure(args, attr=attr)
    if not isinstance(s, G2Structure):
        raise UsageError(f"command needs a G2 preset (phi0 or cst), got {getattr(args, attr)!r}")
    return s


def _symplectic(args):
    default = f"symplectic_std:{(args.dim or 4) // 2}"
    s = _structure(args, default=default)
    if not isinstance(s, SymplecticStructure):
        raise UsageError(f"command needs a symplectic preset, got {args.preset!r}")
    return s


def _chart_dim(args):
    if args.dim is not None:
        return args.dim
    if args.preset:
        s = _structure(args)
        return s.phi.dim if isinstance(s, G2Structure) else s.omega.dim if isinstance(s, SymplecticStructure) else s.dim
    return 7


def _map_with_inverse(text, inverse_text, dim):
    mapping = parse_map(text, dim)
    if inverse_text:
        return mapping.with_inverse(parse_map(inverse_text, mapping.target_dim))
    if mapping.is_affine() and mapping.source_dim == mapping.target_dim:
        jac = mapping.jacobian()
        matrix = [[c.constant_term for c in row] for row in jac]
        offset = [c.constant_term for c in mapping.components]
        try:
            return PolynomialMap.affine(matrix, offset)
        except ZeroDivisionError:
            pass
    return mapping


# --- subcommands ------------------------------------------------------------------

def cmd_check_closed(args, report):
    a = parse_form(args.form, _chart_dim(args))
    if is_top_degree(a):
        report.add("note", "top-degree forms are closed")
        return True
    da = exterior_derivative(a)
    report.add("d", da)
    return da.is_zero()


def cmd_is_g2_field(args, report):
    g2 = _g2(args)
    X = parse_field(args.field, g2.chart_dim)
    result = is_g2_vector_field(g2, X)
    report.add("field", X)
    report.add("d(X _| phi)", result.certificate)
    return result.holds


def cmd_rochesterian(args, report):
    g2 = _g2(args)
    alpha = parse_form(args.alpha, g2.chart_dim)
    report.add("d(alpha)", exterior_derivative(alpha))
    try:
        X = rochesterian_field_of(g2, alpha)
    except NotRochesterian as exc:
        report.add("omega14 residual", exc.residual)
        return False
    report.add("X_alpha", X)
    return True


def cmd_bracket(args, report):
    g2 = _g2(args)
    alpha = parse_form(args.alpha, g2.chart_dim)
    beta = parse_form(args.beta, g2.chart_dim)
    xa, xb = rochesterian_field_of(g2, alpha), rochesterian_field_of(g2, beta)
    report.add("X_alpha", xa)
    report.add("X_beta", xb)
    report.add("bracket", rochesterian_bracket(g2, alpha, beta))
    report.add("X_bracket", vector_bracket(xb, xa))
    return True


def cmd_jacobi_defect(args, report):
    g2 = _g2(args)
    forms = [parse_form(t, g2.chart_dim) for t in (args.alpha, args.beta, args.gamma)]
    defect = jacobi_defect(g2, *forms)
    report.add("lhs", defect.lhs)
    report.add("rhs", defect.rhs)
    report.add("jacobi sum is zero", defect.lhs.is_zero())
    return defect.holds


def cmd_split2(args, report):
    g2 = _g2(args)
    a = parse_form(args.form, g2.chart_dim)
    split = split_two_form(g2, a)
    report.add("omega7", split.omega7)
    report.add("omega14", split.omega14)
    report.add("witness", split.witness_field)
    return True


def cmd_metric(args, report):
    g2 = _g2(args)
    result = metric_from_phi(g2, _point(args.point, g2.chart_dim))
    report.add("exact", result.exact)
    for i, row in enumerate(result.gram_matrix, start=1):
        report.add(f"g[{i}]", list(row))
    report.add("volume", result.volume_form_coefficient)
    return True


def cmd_cross(args, report):
    g2 = _g2(args)
    X = parse_field(args.x, g2.chart_dim)
    Y = parse_field(args.y, g2.chart_dim)
    point = _point(args.point, g2.chart_dim)
    if point is None:
        report.add("cross", cross_product_field(g2, X, Y))
    else:
        report.add("cross", cross_product(g2, X, Y, point))
    return True


def cmd_star(args, report):
    g2 = _g2(args)
    a = parse_form(args.form, g2.chart_dim)
    result = hodge_star(g2, a, _point(args.point, g2.chart_dim))
    if isinstance(result, dict):
        result = {k: v for k, v in sorted(result.items()) if v != 0.0}
        for idx, value in result.items():
            report.add(f"star dx[{','.join(map(str, idx))}]", value)
    else:
        report.add("star", result)
    return True


def cmd_morphism(args, report):
    src = _structure(args)
    dst = _structure(args, default=args.preset or "phi0", attr="target_preset")
    if type(src) is not type(dst):
        raise UsageError("source and target presets must be of the same kind")
    form_src = src.phi if isinstance(src, G2Structure) else src.omega
    mapping = _map_with_inverse(args.map, args.inverse, form_src.dim)
    report.add("certified inverse", mapping.inverse is not None)
    if isinstance(src, G2Structure):
        result = is_g2_morphism(src, dst, mapping)
        report.add("pullback defect", result.defect)
        return result.holds
    defect = pullback(mapping, dst.omega) - src.omega
    report.add("pullback defect", defect)
    return defect.is_zero()


def cmd_graph_test(args, report):
    g1 = _g2(args)
    g2 = _g2(args, attr="target_preset") if args.target_preset else g1
    mapping = parse_map(args.map, g1.chart_dim)
    result = graph_criterion(g1, g2, mapping)
    report.add("restricted", result.restricted)
    return result.vanishes


def cmd_poisson(args, report):
    s = _symplectic(args)
    f = parse_function(args.f, s.dim)
    g = parse_function(args.g, s.dim)
    report.add("X_f", hamiltonian_field(s, f))
    report.add("X_g", hamiltonian_field(s, g))
    report.add("bracket", poisson_bracket(s, f, g))
    return True


def cmd_poisson_jacobi(args, report):
    s = _symplectic(args)
    f, g, h = (parse_function(t, s.dim) for t in (args.f, args.g, args.h))
    total = poisson_jacobi_check(s, f, g, h)
    report.add("jacobi sum", total)
    return total.is_zero()


def cmd_flow(args, report):
    s = _structure(args)
    form = s.phi if isinstance(s, G2Structure) else s.omega if isinstance(s, SymplecticStructure) else s
    X = parse_field(args.field, form.dim)
    start = _point(args.start, form.dim) or [0] * form.dim
    steps = args.steps or DEFAULT_TOLERANCES.flow_steps
    tol = args.tol if args.tol is not None else DEFAULT_TOLERANCES.g2_drift
    result = integrate_flow(X, [float(v) for v in start], float(args.t_end), steps, phi=form)
    t, x = result.trajectory[-1]
    report.add("steps", steps)
    report.add("t", t)
    report.add("end point", [float(v) for v in x])
    report.add("finite", result.finite)
    report.add("max drift", result.max_drift)
    report.add("tolerance", tol)
    return result.finite and result.max_drift <= tol


def cmd_selftest(args, report):
    if args.list:
        for line in selftest_module.listing():
            report.add("trace", line)
        report.add("note", selftest_module.closed_manifold_statement())
        return None
    outcomes = selftest_module.run_checks()
    for o in outcomes:
        report.add("PASS" if o.passed else "FAIL", f"{o.name} ({o.detail})")
    report.add("note", selftest_module.closed_manifold_statement())
    report.add("documentation", selftest_module.DOC_NOTE)
    return all(o.passed for o in outcomes)


# --- parser construction ------------------------------------------------------------

def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="line-delimited JSON report")
    common.add_argument("--dim", type=int, default=argparse.SUPPRESS, help="chart dimension")
    common.add_argument("--preset", default=argparse.SUPPRESS,
                        help="phi0, star_phi0, cst or symplectic_std:n")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="numeric tolerance")
    common.add_argument("--steps", type=int, default=argparse.SUPPRESS, help="RK4 steps")
    common.add_argument("--point", default=argparse.SUPPRESS, help="comma-separated rational point")
    return common


COMMANDS = {
    "check-closed": (cmd_check_closed, ["form"], "is d(form) zero?"),
    "is-g2-field": (cmd_is_g2_field, ["field"], "does the flow of the field preserve phi?"),
    "rochesterian": (cmd_rochesterian, ["alpha"], "solve X _| phi = d(alpha)"),
    "bracket": (cmd_bracket, ["alpha", "beta"], "the bracket phi(X_alpha, X_beta, .)"),
    "jacobi-defect": (cmd_jacobi_defect, ["alpha", "beta", "gamma"], "Jacobi sum against its exact defect"),
    "split2": (cmd_split2, ["form"], "7 + 14 splitting of a 2-form"),
    "metric": (cmd_metric, [], "metric and volume induced by phi"),
    "cross": (cmd_cross, ["x", "y"], "cross product of two fields"),
    "star": (cmd_star, ["form"], "Hodge star for the induced metric"),
    "morphism": (cmd_morphism, ["map"], "does the map pull the target form back to the source form?"),
    "graph-test": (cmd_graph_test, ["map"], "restriction of the product form to the graph"),
    "poisson": (cmd_poisson, ["f", "g"], "Hamiltonian fields and Poisson bracket"),
    "poisson-jacobi": (cmd_poisson_jacobi, ["f", "g", "h"], "Poisson Jacobi sum"),
    "flow": (cmd_flow, ["field"], "RK4 flow and drift of the preset form"),
    "selftest": (cmd_selftest, [], "run the invariant suite"),
}


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="g2calc", parents=[common],
                                     description="Exact exterior calculus for G2 and symplectic structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, positionals, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        for pos in positionals:
            p.add_argument(pos)
        if name in ("morphism", "graph-test"):
            p.add_argument("--target-preset", default=None)
        if name == "morphism":
            p.add_argument("--inverse", default=None, help="inverse map, certified exactly")
        if name == "flow":
            p.add_argument("--start", default=None)
            p.add_argument("--t-end", default="1")
        if name == "selftest":
            p.add_argument("--list", action="store_true")
    return parser


def _protect_negatives(argv):
    """Expressions such as ``-x1*dx[3]`` start with '-' but are not flags.

    argparse treats any argument containing a space as positional, so such
    tokens get a leading space that is stripped again after parsing.
    """
    out = []
    for tok in argv:
        if len(tok) > 1 and tok[0] == "-" and tok[1] != "-" and tok != "-h":
            tok = " " + tok
        out.append(tok)
    return out


def _parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(_protect_negatives(list(argv)))
    for name in COMMANDS[args.command][1]:
        setattr(args, name, getattr(args, name).strip())
    for key, default in (("json", False), ("dim", None), ("preset", None), ("tol", None),
                         ("steps", None), ("point", None)):
        if not hasattr(args, key):
            setattr(args, key, default)
    return args


def run_command(argv):
    """Run one command; returns (exit code, report lines). Never raises for user errors."""
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return (EXIT_TRUE if exc.code == 0 else EXIT_USAGE), []
    report = Report(args.command)
    handler = COMMANDS[args.command][0]
    try:
        if args.dim is not None and not 1 <= args.dim <= 14:
            raise UsageError("--dim must be between 1 and 14")
        if args.steps is not None and args.steps < 1:
            raise UsageError("--steps must be >= 1")
        verdict = handler(args, report)
    except (ParseError, UsageError) as exc:
        return EXIT_USAGE, [f"error: {exc}"]
    except G2CalcError as exc:
        report.add("precondition", f"{type(exc).__name__}: {exc}")
        return EXIT_PRECONDITION, report.render(args.json, None, EXIT_PRECONDITION)
    code = EXIT_TRUE if verdict or verdict is None else EXIT_FALSE
    return code, report.render(args.json, verdict, code)


def main(argv=None):
    code, lines = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == EXIT_USAGE else sys.stdout
    for line in lines:
        print(line, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
