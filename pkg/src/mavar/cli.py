"""Command-line interface.

Exit codes: 0 success, 2 parse or validation error, 3 reducible kernel,
4 degenerate kernel (Poisson equation unsolvable), 5 route or identity
disagreement, 6 stationary-distribution mismatch, 7 unexplained fixture
deviation.  The MAVAR_TOL environment variable overrides the default
verification tolerance; an explicit --tol flag wins over both.
"""

import json
import os
import sys

import click
import numpy as np

from . import catalog
from .errors import (
    AlphaOutOfRangeError,
    BadInitialError,
    DegenerateKernelError,
    MavarError,
    NotCenteredError,
    NumericalFailureError,
    ReducibleError,
    StationaryMismatchError,
    TrajectoryTooShortError,
    ZeroVarianceError,
)
from .kernel import (
    DEFAULT_TOL,
    StationaryDist,
    adjoint,
    as_observable,
    centered,
    is_irreducible,
    is_reversible,
    pi_inner,
    spectral_radius_mean_zero,
    stationary_distribution,
    validate_kernel,
)
from .montecarlo import batch_means_avar, simulate as run_chain
from .ordering import (
    dirichlet_order,
    fk_order,
    peskun_order,
    uniform_variance_domination,
)
from .perturb import apply_drift, family_alpha, validate_drift, validate_vorticity
from .poisson import (
    avar_spectral,
    avar_via_factored_operator,
    is_infinite,
    resolvent_curve,
    solve_dual_pair,
)
from .variational import (
    dirichlet_form,
    factored_operator_inf,
    inner_sup,
    project_to_constraint,
    reversible_inf,
    saddle_point,
)

EXIT_PARSE = 2
EXIT_REDUCIBLE = 3
EXIT_DEGENERATE = 4
EXIT_ROUTES = 5
EXIT_STATIONARY = 6
EXIT_FIXTURE = 7

ROUTE_AGREEMENT = 1e-9


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _fmt_vec(values) -> str:
    return " ".join(_fmt(v) for v in np.asarray(values, dtype=float))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _resolve_tol(tol):
    if tol is not None:
        return tol
    env = os.environ.get("MAVAR_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError:
            _fail(EXIT_PARSE, f"MAVAR_TOL = {env!r} is not a number")
    return DEFAULT_TOL


def _read_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        _fail(EXIT_PARSE, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(EXIT_PARSE, f"{path} is not valid JSON: {exc}")


def _load_kernel_file(path, tol):
    """Returns (kernel, embedded stationary or None, labels or None)."""
    payload = _read_json(path)
    if not isinstance(payload, dict) or "rows" not in payload:
        _fail(EXIT_PARSE, f"{path}: expected an object with a 'rows' matrix")
    rows = payload["rows"]
    if "n" in payload and (not isinstance(rows, list) or len(rows) != payload["n"]):
        _fail(EXIT_PARSE, f"{path}: 'n' does not match the matrix size")
    try:
        kernel = validate_kernel(np.array(rows, dtype=float), tol)
    except (MavarError, ValueError) as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")
    embedded = None
    if payload.get("pi") is not None:
        pi = np.asarray(payload["pi"], dtype=float)
        if pi.shape != (kernel.n,) or pi.min() <= 0 or abs(pi.sum() - 1.0) > tol:
            _fail(EXIT_PARSE, f"{path}: embedded pi is not a probability vector")
        if np.max(np.abs(pi @ kernel.rows - pi)) > max(tol, 1e-9):
            _fail(EXIT_PARSE, f"{path}: embedded pi is not stationary")
        embedded = StationaryDist(pi)
    return kernel, embedded, payload.get("labels")


def _load_observable_file(path, n):
    if str(path).endswith(".json"):
        payload = _read_json(path)
        if not isinstance(payload, list):
            _fail(EXIT_PARSE, f"{path}: expected a JSON array of numbers")
        values = payload
    else:
        try:
            with open(path) as handle:
                values = [float(line) for line in handle if line.strip()]
        except OSError as exc:
            _fail(EXIT_PARSE, f"cannot read {path}: {exc}")
        except ValueError as exc:
            _fail(EXIT_PARSE, f"{path}: {exc}")
    try:
        f = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")
    if f.ndim != 1 or f.shape[0] != n:
        _fail(EXIT_PARSE, f"{path}: expected {n} values, got shape {f.shape}")
    return f


def _resolve_pi(kernel, embedded):
    if embedded is not None:
        return embedded
    if not is_irreducible(kernel):
        _fail(EXIT_REDUCIBLE, "kernel is reducible and no stationary law was supplied")
    try:
        return stationary_distribution(kernel)
    except NumericalFailureError as exc:
        # an irreducible kernel whose stationary solve still fails is, for all
        # practical purposes, numerically decoupled
        _fail(EXIT_DEGENERATE, f"stationary solve failed: {exc}")


def _resolve_observable(f, pi, tol, center):
    obs = as_observable(f, pi)
    scale = max(1.0, float(np.max(np.abs(obs.values), initial=0.0)))
    if abs(obs.pi_mean) <= tol * scale:
        # sub-tolerance mean is treated as noise and removed quietly
        return centered(obs.values, pi).values, False
    if center:
        click.echo(f"note: centering observable (pi-mean was {_fmt(obs.pi_mean)})",
                   err=True)
        return centered(obs.values, pi).values, True
    _fail(EXIT_PARSE,
          f"observable has pi-mean {obs.pi_mean}; pass --center to subtract it")


@click.group()
@click.version_option(package_name="mavar")
def main():
    """Asymptotic variance of finite-state Markov chains."""


@main.command()
@click.argument("kernel_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=None, help="validation tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def validate(kernel_file, tol, as_json):
    """Check stochasticity and irreducibility of a kernel file."""
    tol = _resolve_tol(tol)
    kernel, embedded, _ = _load_kernel_file(kernel_file, tol)
    irreducible = is_irreducible(kernel)
    info = {"n": kernel.n, "valid": True, "irreducible": irreducible}
    if irreducible:
        pi = _resolve_pi(kernel, embedded)
        info["pi"] = pi.weights.tolist()
        info["reversible"] = is_reversible(kernel, pi, 1e-10)
    if as_json:
        click.echo(json.dumps(info))
    else:
        click.echo(f"states: {kernel.n}")
        click.echo("row sums: within tolerance")
        click.echo(f"irreducible: {'yes' if irreducible else 'no'}")
        if irreducible:
            click.echo(f"pi: {_fmt_vec(info['pi'])}")
            click.echo(f"reversible: {'yes' if info['reversible'] else 'no'}")
    if not irreducible:
        sys.exit(EXIT_REDUCIBLE)


@main.command()
@click.argument("kernel_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("observable_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--center", is_flag=True, help="subtract the pi-mean first")
@click.option("--tol", type=float, default=None, help="verification tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def analyze(kernel_file, observable_file, center, tol, as_json):
    """Solve the Poisson equation and report the variance by every route."""
    tol = _resolve_tol(tol)
    kernel, embedded, _ = _load_kernel_file(kernel_file, tol)
    if not is_irreducible(kernel):
        _fail(EXIT_REDUCIBLE, "kernel is reducible")
    pi = _resolve_pi(kernel, embedded)
    raw = _load_observable_file(observable_file, kernel.n)
    f, was_centered = _resolve_observable(raw, pi, tol, center)
    try:
        sol = solve_dual_pair(kernel, pi, f, tol)
    except DegenerateKernelError as exc:
        _fail(EXIT_DEGENERATE, str(exc))
    except NotCenteredError as exc:
        _fail(EXIT_PARSE, str(exc))
    routes = {"dual-pair": sol.sigma2}
    try:
        routes["factored-operator"] = avar_via_factored_operator(kernel, pi, f, tol)
    except NumericalFailureError as exc:
        _fail(EXIT_ROUTES, str(exc))
    reversible = is_reversible(kernel, pi, 1e-10)
    if reversible:
        spectral = avar_spectral(kernel, pi, f, tol)
        if is_infinite(spectral):
            _fail(EXIT_ROUTES,
                  "spectral route reports infinite variance, other routes do not")
        routes["spectral"] = float(spectral)
    spread = max(routes.values()) - min(routes.values())
    agree = spread <= ROUTE_AGREEMENT * max(1.0, abs(sol.sigma2))
    radius = spectral_radius_mean_zero(kernel, pi)
    report = {
        "n": kernel.n,
        "reversible": reversible,
        "spectral_radius_mean_zero": radius,
        "pi": pi.weights.tolist(),
        "centered_applied": was_centered,
        "phi": sol.phi.values.tolist(),
        "phi_star": sol.phi_star.values.tolist(),
        "sigma2": sol.sigma2,
        "avar": sol.avar,
        "routes": routes,
        "routes_agree": agree,
    }
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"states: {kernel.n}")
        click.echo(f"reversible: {'yes' if reversible else 'no'}")
        click.echo(f"spectral radius (mean-zero): {_fmt(radius)}")
        click.echo(f"pi: {_fmt_vec(pi.weights)}")
        click.echo(f"phi: {_fmt_vec(sol.phi.values)}")
        click.echo(f"phi*: {_fmt_vec(sol.phi_star.values)}")
        click.echo(f"sigma^2: {_fmt(sol.sigma2)}")
        click.echo(f"avar: {_fmt(sol.avar)}")
        for name, value in routes.items():
            click.echo(f"route {name}: {_fmt(value)}")
        click.echo(f"routes agree within {ROUTE_AGREEMENT:g}: {'yes' if agree else 'no'}")
    if not agree:
        _fail(EXIT_ROUTES,
              f"variance routes disagree by {spread} (values {routes})")


def _order_line(label, report):
    state = "holds" if report.holds else "fails"
    line = f"{label}: {state} (margin {_fmt(report.margin)})"
    witness = report.witness
    if witness is not None:
        if hasattr(witness, "values"):
            line += f" witness f = {_fmt_vec(witness.values)}"
        else:
            line += f" witness entry {witness}"
    return line


@main.command()
@click.argument("kernel_file_1", type=click.Path(exists=True, dir_okay=False))
@click.argument("kernel_file_2", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=None, help="verification tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def compare(kernel_file_1, kernel_file_2, tol, as_json):
    """Report every kernel order plus uniform variance domination."""
    tol = _resolve_tol(tol)
    k1, pi1, _ = _load_kernel_file(kernel_file_1, tol)
    k2, pi2, _ = _load_kernel_file(kernel_file_2, tol)
    if k1.n != k2.n:
        _fail(EXIT_PARSE, f"kernels have {k1.n} and {k2.n} states")
    embedded = pi1 if pi1 is not None else pi2
    try:
        pi = _resolve_pi(k1, embedded)
        for label, kern in (("first", k1), ("second", k2)):
            resid = np.max(np.abs(pi.weights @ kern.rows - pi.weights))
            if resid > max(tol, 1e-9):
                raise StationaryMismatchError(
                    f"{label} kernel moves the shared pi by {resid}")
        orders = {
            "peskun": (peskun_order(k1, k2, pi), peskun_order(k2, k1, pi)),
            "dirichlet": (dirichlet_order(k1, k2, pi), dirichlet_order(k2, k1, pi)),
            "fill_kahn": (fk_order(k1, k2, pi), fk_order(k2, k1, pi)),
        }
        dom_fwd = uniform_variance_domination(k1, k2, pi)
        dom_rev = uniform_variance_domination(k2, k1, pi)
    except StationaryMismatchError as exc:
        _fail(EXIT_STATIONARY, str(exc))
    except ReducibleError as exc:
        _fail(EXIT_REDUCIBLE, str(exc))
    def _dom_payload(result):
        holds, witness = result
        payload = {"holds": holds}
        if witness is not None:
            payload["witness"] = witness.values.tolist()
        return payload

    if as_json:
        report = {
            name: {"forward": fwd.as_dict(), "reverse": rev.as_dict()}
            for name, (fwd, rev) in orders.items()
        }
        report["domination"] = {
            "forward": _dom_payload(dom_fwd),
            "reverse": _dom_payload(dom_rev),
        }
        report["pi"] = pi.weights.tolist()
        click.echo(json.dumps(report))
        return
    click.echo(f"shared pi: {_fmt_vec(pi.weights)}")
    for name, (fwd, rev) in orders.items():
        click.echo(_order_line(f"{name} 1->2", fwd))
        click.echo(_order_line(f"{name} 2->1", rev))
    for label, (holds, witness) in (("domination 1->2", dom_fwd),
                                    ("domination 2->1", dom_rev)):
        if holds:
            click.echo(f"{label}: holds (second argument never worse)")
        else:
            click.echo(f"{label}: fails, witness f = {_fmt_vec(witness.values)}")


@main.command()
@click.argument("kernel_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--gamma", "gamma_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="vorticity perturbation file")
@click.option("--lambda", "lam_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="drift perturbation file")
@click.option("--alpha", type=float, default=1.0,
              help="vorticity interpolation parameter in [-1, 1]")
@click.option("--tol", type=float, default=None, help="validation tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit the kernel as JSON")
def perturb(kernel_file, gamma_path, lam_path, alpha, tol, as_json):
    """Apply a vorticity or drift perturbation to a reversible kernel."""
    tol = _resolve_tol(tol)
    if (gamma_path is None) == (lam_path is None):
        _fail(EXIT_PARSE, "pass exactly one of --gamma or --lambda")
    kernel, embedded, _ = _load_kernel_file(kernel_file, tol)
    pi = _resolve_pi(kernel, embedded)
    path = gamma_path or lam_path
    payload = _read_json(path)
    if not isinstance(payload, dict) or "kind" not in payload or "matrix" not in payload:
        _fail(EXIT_PARSE, f"{path}: expected an object with 'kind' and 'matrix'")
    want = "vorticity" if gamma_path else "drift"
    if payload["kind"] != want:
        _fail(EXIT_PARSE,
              f"{path}: kind {payload['kind']!r} does not match the flag ({want})")
    matrix = np.array(payload["matrix"], dtype=float)
    diagnostics = {}
    try:
        if want == "vorticity":
            spec = validate_vorticity(kernel, pi, matrix, tol)
            result = family_alpha(kernel, pi, spec, alpha)
            diagnostics["max_density"] = float(np.max(np.abs(alpha * spec.h)))
            diagnostics["alpha"] = alpha
        else:
            if alpha != 1.0:
                _fail(EXIT_PARSE, "--alpha applies only to vorticity perturbations")
            spec = validate_drift(kernel, pi, matrix, tol)
            result = apply_drift(kernel, pi, spec)
            diagnostics["peskun_margin"] = peskun_order(kernel, result, pi).margin
    except AlphaOutOfRangeError as exc:
        _fail(EXIT_PARSE, str(exc))
    except MavarError as exc:
        _fail(EXIT_PARSE, str(exc))
    diagnostics["stationary_residual"] = float(
        np.max(np.abs(pi.weights @ result.rows - pi.weights)))
    if as_json:
        click.echo(json.dumps({
            "n": result.n,
            "rows": result.rows.tolist(),
            "pi": pi.weights.tolist(),
            "diagnostics": diagnostics,
        }))
    else:
        click.echo(f"perturbed kernel ({want}, {kernel.n} states):")
        for row in result.rows:
            click.echo("  " + _fmt_vec(row))
        for key, value in diagnostics.items():
            click.echo(f"{key}: {_fmt(value)}")


@main.command()
@click.argument("kernel_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("observable_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--center", is_flag=True, help="subtract the pi-mean first")
@click.option("--seed", type=int, default=0, help="seed for random test functions")
@click.option("--trials", type=int, default=20, help="random test functions per check")
@click.option("--tol", type=float, default=None, help="verification tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def verify(kernel_file, observable_file, center, seed, trials, tol, as_json):
    """Run the variational identity battery for one kernel and observable."""
    tol = _resolve_tol(tol)
    kernel, embedded, _ = _load_kernel_file(kernel_file, tol)
    if not is_irreducible(kernel):
        _fail(EXIT_REDUCIBLE, "kernel is reducible")
    pi = _resolve_pi(kernel, embedded)
    raw = _load_observable_file(observable_file, kernel.n)
    f, _ = _resolve_observable(raw, pi, tol, center)
    checks = []

    def record(name, residual, bound):
        checks.append({"name": name, "residual": float(residual),
                       "bound": float(bound), "passed": bool(residual <= bound)})

    try:
        sol = solve_dual_pair(kernel, pi, f, tol)
        saddle = saddle_point(kernel, pi, f)
    except DegenerateKernelError as exc:
        _fail(EXIT_DEGENERATE, str(exc))
    except ZeroVarianceError as exc:
        _fail(EXIT_PARSE, f"observable too close to zero: {exc}")
    w = pi.weights
    fscale = max(1.0, float(np.max(np.abs(f))))
    resid_primal = np.max(np.abs(
        sol.phi.values - kernel.rows @ sol.phi.values - f))
    record("poisson residual (primal)", resid_primal, 1e-10 * fscale)
    star = sol.phi_star.values
    Pstar = adjoint(kernel, pi)
    record("poisson residual (dual)",
           np.max(np.abs(star - Pstar.rows @ star - f)), 1e-10 * fscale)
    record("pairing equality <phi,f> vs <f,phi*>",
           abs(pi_inner(sol.phi, f, w) - pi_inner(f, sol.phi_star, w)),
           1e-10 * max(1.0, abs(sol.sigma2)))
    try:
        t_route = avar_via_factored_operator(kernel, pi, f, tol)
        record("factored-operator route", abs(t_route - sol.sigma2),
               ROUTE_AGREEMENT * max(1.0, abs(sol.sigma2)))
    except NumericalFailureError:
        record("factored-operator route", np.inf, ROUTE_AGREEMENT)
    reversible = is_reversible(kernel, pi, 1e-10)
    if reversible:
        spectral = avar_spectral(kernel, pi, f, tol)
        record("spectral route", abs(spectral - sol.sigma2),
               ROUTE_AGREEMENT * max(1.0, abs(sol.sigma2)))
    betas = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    curve = resolvent_curve(kernel, pi, f, betas, tol)
    phi_norm = max(1.0, pi_inner(sol.phi, sol.phi, w))
    record("resolvent tail", abs(curve.values[-1] - sol.sigma2),
           10.0 * betas[-1] * phi_norm)
    value = saddle.value
    record("saddle value vs 1/sigma^2", abs(value * sol.sigma2 - 1.0), ROUTE_AGREEMENT)
    record("constraint pi(f xi*) = 1",
           abs(pi_inner(f, saddle.xi_star, w) - 1.0), 1e-10)
    record("constraint pi(f eta*) = 0",
           abs(pi_inner(f, saddle.eta_star, w)), 1e-10)
    combined = saddle.xi_star.values + saddle.eta_star.values
    record("xi* + eta* = phi / sigma^2",
           np.max(np.abs(combined - sol.phi.values / sol.sigma2)),
           ROUTE_AGREEMENT * max(1.0, np.max(np.abs(combined))))
    record("saddle Dirichlet identity",
           abs(dirichlet_form(kernel, pi,
                              saddle.xi_star.values + saddle.eta_star.values,
                              saddle.xi_star.values - saddle.eta_star.values)
               - value),
           ROUTE_AGREEMENT * max(1.0, value))
    _, sup_at_star = inner_sup(kernel, pi, f, saddle.xi_star, tol)
    record("inner sup at xi*", abs(sup_at_star - value),
           ROUTE_AGREEMENT * max(1.0, value))
    rng = np.random.default_rng(seed)
    worst_inf = np.inf
    for _ in range(trials):
        shift = project_to_constraint(rng.standard_normal(kernel.n), f, w, 0.0)
        xi = saddle.xi_star.values + shift
        _, sup_val = inner_sup(kernel, pi, f, xi, tol)
        worst_inf = min(worst_inf, sup_val)
    record("inf side: min over random xi of sup >= 1/sigma^2",
           max(0.0, value - worst_inf), ROUTE_AGREEMENT * max(1.0, value))
    worst_sup = -np.inf
    for _ in range(trials):
        eta = project_to_constraint(rng.standard_normal(kernel.n), f, w, 0.0)
        probe = dirichlet_form(kernel, pi,
                               saddle.xi_star.values + eta,
                               saddle.xi_star.values - eta)
        worst_sup = max(worst_sup, probe)
    record("sup side: max over random eta <= 1/sigma^2",
           max(0.0, worst_sup - value), ROUTE_AGREEMENT * max(1.0, value))
    _, t_inf = factored_operator_inf(kernel, pi, f)
    record("factored-operator minimum", abs(t_inf - value),
           ROUTE_AGREEMENT * max(1.0, value))
    worst_orth = 0.0
    for _ in range(trials):
        probe = project_to_constraint(rng.standard_normal(kernel.n), f, w, 0.0)
        worst_orth = max(
            worst_orth,
            abs(dirichlet_form(kernel, pi, sol.phi, probe)),
            abs(dirichlet_form(kernel, pi, probe, sol.phi_star)),
        )
    record("orthogonality of phi against pi(f .) = 0", worst_orth,
           1e-10 * max(1.0, abs(sol.sigma2)) * max(1.0, float(np.max(np.abs(f)))) * 10)
    if reversible:
        xi_min, inf_val = reversible_inf(kernel, pi, f)
        record("reversible minimum", abs(inf_val - value),
               ROUTE_AGREEMENT * max(1.0, value))
        record("eta* vanishes (reversible)",
               np.max(np.abs(saddle.eta_star.values)), 1e-9)
    all_pass = all(c["passed"] for c in checks)
    if as_json:
        click.echo(json.dumps({"checks": checks, "all_pass": all_pass,
                               "sigma2": sol.sigma2, "seed": seed}))
    else:
        for c in checks:
            mark = "PASS" if c["passed"] else "FAIL"
            click.echo(f"{mark} {c['name']} (residual {_fmt(c['residual'])}"
                       f" <= {_fmt(c['bound'])})")
        click.echo(f"sigma^2: {_fmt(sol.sigma2)}")
    if not all_pass:
        _fail(EXIT_ROUTES, "at least one variational identity failed")


@main.command()
@click.argument("kernel_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("observable_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n_steps", type=int, required=True, help="number of transitions")
@click.option("--seed", type=int, default=0, help="RNG seed")
@click.option("--batch-len", type=int, default=None, help="batch length")
@click.option("--initial", type=int, default=0, help="initial state")
@click.option("--tol", type=float, default=None, help="validation tolerance")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def simulate(kernel_file, observable_file, n_steps, seed, batch_len, initial,
             tol, as_json):
    """Estimate the asymptotic variance from a simulated trajectory."""
    tol = _resolve_tol(tol)
    kernel, embedded, _ = _load_kernel_file(kernel_file, tol)
    f = _load_observable_file(observable_file, kernel.n)
    try:
        trajectory = run_chain(kernel, n_steps, seed, initial)
        estimate = batch_means_avar(trajectory, f, batch_len)
    except (BadInitialError, TrajectoryTooShortError) as exc:
        _fail(EXIT_PARSE, str(exc))
    report = {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "n_batches": estimate.n_batches,
        "batch_len": estimate.batch_len,
        "seed": trajectory.seed,
    }
    if is_irreducible(kernel):
        pi = _resolve_pi(kernel, embedded)
        try:
            sol = solve_dual_pair(kernel, pi, centered(f, pi).values, tol)
            report["analytic_avar"] = sol.avar
            if estimate.std_error > 0:
                report["deviation_sigmas"] = (
                    abs(estimate.value - sol.avar) / estimate.std_error)
        except DegenerateKernelError:
            pass
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"estimate: {_fmt(estimate.value)}")
        click.echo(f"std error: {_fmt(estimate.std_error)}")
        click.echo(f"batches: {estimate.n_batches} x {estimate.batch_len}")
        click.echo(f"seed: {trajectory.seed}")
        if "analytic_avar" in report:
            click.echo(f"analytic avar: {_fmt(report['analytic_avar'])}")
        if "deviation_sigmas" in report:
            click.echo(f"deviation: {_fmt(report['deviation_sigmas'])} std errors")


@main.command("reproduce-examples")
@click.option("--only", default=None, help="filter rows by name or group")
@click.option("--dump-fixtures", "dump_dir",
              type=click.Path(file_okay=False), default=None,
              help="write fixture input files to this directory")
@click.option("--tol", type=float, default=None, help="pass/fail threshold")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def reproduce_examples(only, dump_dir, tol, as_json):
    """Recompute every bundled reference value and report deviations."""
    if tol is None:
        env = os.environ.get("MAVAR_TOL")
        tol = float(env) if env else 1e-9
    if dump_dir is not None:
        written = catalog.dump_fixtures(dump_dir)
        if not as_json:
            click.echo(f"wrote {len(written)} fixture files under {dump_dir}")
    results = catalog.run_all(tol, only)
    if not results:
        _fail(EXIT_PARSE, f"no fixture rows match {only!r}")
    failures = [r for r in results if r.verdict == catalog.FAIL]
    if as_json:
        rows = []
        for r in results:
            computed = r.computed
            if isinstance(computed, np.ndarray):
                computed = computed.tolist()
            rows.append({
                "name": r.row.name,
                "group": r.row.group,
                "stated": catalog.rational_repr(r.row.stated),
                "stated_ratio": catalog.rational_pairs(r.row.stated),
                "expected": catalog.rational_repr(r.row.expected),
                "computed": computed,
                "abs_diff": r.delta_stated,
                "abs_diff_derived": r.delta_expected,
                "verdict": r.verdict,
                "note": r.row.note,
            })
        click.echo(json.dumps({"rows": rows, "all_pass": not failures}))
    else:
        width = max(len(r.row.name) for r in results)
        for r in results:
            if isinstance(r.computed, np.ndarray):
                computed = "(" + ", ".join(_fmt(v) for v in np.ravel(r.computed)) + ")"
            else:
                computed = _fmt(r.computed)
            stated = catalog.rational_repr(r.row.stated)
            click.echo(f"{r.row.name.ljust(width)}  stated {stated}  "
                       f"computed {computed}  |delta| {_fmt(r.delta_stated)}  "
                       f"{r.verdict}")
            if r.row.note:
                click.echo(f"{''.ljust(width)}  note: {r.row.note}")
        click.echo(f"{len(results)} rows, "
                   f"{sum(1 for r in results if r.verdict != catalog.FAIL)} acceptable")
    if failures:
        _fail(EXIT_FIXTURE,
              f"{len(failures)} fixture rows deviate beyond {tol:g}")


if __name__ == "__main__":
    main()
