"""Scenario parsing, verification pipelines, and report emission.

A scenario is a JSON object selecting one of six pipeline kinds plus map
descriptors and numeric parameters.  Parsing is strict: unknown keys are
rejected and out-of-range values raise ValidationError.  Reports are
deterministic (fixed seeds, fixed summation orders), so two runs of the same
scenario produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .assembly import assemble_mass, assemble_stiffness
from .eig import generalized_eigs
from .errors import InvalidParameter, LabError, ParseError, ValidationError
from .functionals import (
    StabilityReport,
    b_q2_disc,
    bound_main,
    bound_two_weight,
    d_s_distance,
    pair_regularity,
    phi_beta,
    poincare_upper,
    q_of_beta,
    s_of_beta,
    sqrt_jacobian_l2,
)
from .maps import (
    beltrami_from_matrix,
    compose_maps,
    identity_field,
    invert_map,
    make_affine_stretch,
    make_mobius,
    make_radial_power,
    matrix_field_of_map,
    matrix_from_beltrami,
    weight_of_map,
)
from .mesh import build_disc_mesh, pushforward_mesh

KINDS = ("roundtrip", "eig", "transfer", "isospectral", "stability", "functionals")
SPECTRAL_KINDS = ("eig", "transfer", "isospectral", "stability")
SPECTRAL_COLUMNS = [
    "mode_index",
    "mu_domain",
    "mu_disc_weighted",
    "abs_diff",
    "rel_diff",
    "rhs_sharp",
    "rhs_coarse",
    "rhs_main",
    "pass",
]
BATTERY_COLUMNS = ["check", "value", "bound", "pass"]

DEFAULT_MESH = (32, 128)
DEFAULT_MODES = 6
DEFAULT_BETA = 2.0
DEFAULT_TOL = 1e-8
DEFAULT_REL_TOL = 0.015

_SCENARIO_KEYS = {
    "kind", "map", "maps", "mesh", "modes", "beta", "tol", "rel_tol",
    "out", "format", "seed",
}
_MAP_KEYS = {
    "affine_stretch": {"kind", "a", "theta"},
    "radial_power": {"kind", "gamma"},
    "mobius": {"kind", "b"},
    "inverse": {"kind", "of"},
    "composition": {"kind", "maps"},
}


@dataclass(frozen=True)
class Scenario:
    kind: str
    map_descriptors: tuple = ()
    mesh: tuple = DEFAULT_MESH
    modes: int = DEFAULT_MODES
    beta: float = DEFAULT_BETA
    tol: float = DEFAULT_TOL
    rel_tol: float = DEFAULT_REL_TOL
    out: str | None = None
    format: str = "csv"
    seed: int = 0

    def echo(self):
        """JSON-serializable record of the parsed scenario."""
        return {
            "kind": self.kind,
            "maps": [json.loads(json.dumps(d)) for d in self.map_descriptors],
            "mesh": list(self.mesh),
            "modes": self.modes,
            "beta": self.beta,
            "tol": self.tol,
            "rel_tol": self.rel_tol,
            "seed": self.seed,
        }


@dataclass
class Report:
    kind: str
    scenario: dict
    columns: list
    rows: list
    summary: dict
    payload: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(bool(r.get("pass", True)) for r in self.rows)

    def to_json(self):
        doc = {
            "kind": self.kind,
            "scenario": self.scenario,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
            "payload": self.payload,
        }
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(
            kind=doc["kind"],
            scenario=doc["scenario"],
            columns=doc["columns"],
            rows=doc["rows"],
            summary=doc["summary"],
            payload=doc.get("payload", {}),
        )


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def build_map(desc):
    """Instantiate a map from its descriptor dictionary."""
    if not isinstance(desc, dict):
        raise ParseError(f"map descriptor must be an object, got {type(desc).__name__}")
    kind = desc.get("kind")
    if kind not in _MAP_KEYS:
        raise ParseError(f"unknown map kind {kind!r}")
    extra = set(desc) - _MAP_KEYS[kind]
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)} in {kind} descriptor")
    try:
        if kind == "affine_stretch":
            return make_affine_stretch(float(desc.get("a", 1.0)), float(desc.get("theta", 0.0)))
        if kind == "radial_power":
            if "gamma" not in desc:
                raise ParseError("radial_power descriptor requires 'gamma'")
            return make_radial_power(float(desc["gamma"]))
        if kind == "mobius":
            b = desc.get("b", 0.0)
            if isinstance(b, (list, tuple)):
                b = complex(float(b[0]), float(b[1]))
            else:
                b = complex(float(b), 0.0)
            return make_mobius(b)
        if kind == "inverse":
            return invert_map(build_map(desc["of"]))
        parts = desc.get("maps", [])
        if len(parts) < 2:
            raise ParseError("composition descriptor needs at least two maps")
        built = build_map(parts[0])
        for part in parts[1:]:
            built = compose_maps(built, build_map(part))
        return built
    except InvalidParameter as exc:
        raise ValidationError(f"invalid {kind} parameters: {exc}") from exc


def _identity_descriptor():
    return {"kind": "affine_stretch", "a": 1.0, "theta": 0.0}


def parse_scenario(obj, kind=None):
    """Validate a decoded JSON object into a Scenario."""
    if not isinstance(obj, dict):
        raise ParseError("scenario must be a JSON object")
    extra = set(obj) - _SCENARIO_KEYS
    if extra:
        raise ParseError(f"unknown scenario keys: {sorted(extra)}")
    file_kind = obj.get("kind")
    if kind is not None and file_kind is not None and file_kind != kind:
        raise ParseError(f"scenario kind {file_kind!r} conflicts with requested {kind!r}")
    kind = file_kind if file_kind is not None else kind
    if kind is None:
        raise ParseError("scenario kind missing (give it in the file or on the command line)")
    if kind not in KINDS:
        raise ParseError(f"unknown scenario kind {kind!r}")

    if "map" in obj and "maps" in obj:
        raise ParseError("give either 'map' or 'maps', not both")
    if "maps" in obj:
        descriptors = list(obj["maps"])
    elif "map" in obj:
        descriptors = [obj["map"]]
    else:
        descriptors = []
    if kind in ("stability", "functionals"):
        if len(descriptors) != 2:
            raise ValidationError(f"{kind} scenarios need exactly two maps")
    elif kind in ("eig", "transfer", "isospectral"):
        if len(descriptors) > 1:
            raise ValidationError(f"{kind} scenarios take a single map")
        if not descriptors:
            descriptors = [_identity_descriptor()]

    mesh = obj.get("mesh", list(DEFAULT_MESH))
    if not (isinstance(mesh, (list, tuple)) and len(mesh) == 2):
        raise ParseError("mesh must be a pair [n_r, n_theta]")
    n_r, n_theta = int(mesh[0]), int(mesh[1])
    if n_r < 1 or n_theta < 3:
        raise ValidationError("mesh needs n_r >= 1 and n_theta >= 3")

    modes = int(obj.get("modes", DEFAULT_MODES))
    if kind in SPECTRAL_KINDS and modes < 2:
        raise ValidationError("spectral scenarios need modes >= 2")
    if modes >= 1 + n_r * n_theta:
        raise ValidationError("modes must be below the mesh dimension")

    beta = float(obj.get("beta", DEFAULT_BETA))
    if beta <= 1.0:
        raise ValidationError("beta must exceed 1")
    tol = float(obj.get("tol", DEFAULT_TOL))
    if not 0.0 < tol < 1.0:
        raise ValidationError("tol must lie in (0, 1)")
    rel_tol = float(obj.get("rel_tol", DEFAULT_REL_TOL))
    if not 0.0 < rel_tol < 1.0:
        raise ValidationError("rel_tol must lie in (0, 1)")
    fmt = obj.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ParseError(f"unknown output format {fmt!r}")

    scenario = Scenario(
        kind=kind,
        map_descriptors=tuple(descriptors),
        mesh=(n_r, n_theta),
        modes=modes,
        beta=beta,
        tol=tol,
        rel_tol=rel_tol,
        out=obj.get("out"),
        format=fmt,
        seed=int(obj.get("seed", 0)),
    )
    # descriptors must instantiate cleanly
    for desc in scenario.map_descriptors:
        build_map(desc)
    return scenario


def parse_config(path, kind=None):
    """Parse a scenario file; strict keys, defaults filled."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return parse_scenario(obj, kind=kind)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------

def _rel_scale(reference):
    """Denominator floor so the zero mode compares cleanly."""
    ref2 = reference[1] if len(reference) > 1 else 1.0
    return max(1e-6 * ref2, 1e-300)


def _compare_rows(mu_a, mu_b, rel_tol):
    # the zero mode is identically zero on both sides; rows start at mode 2
    rows = []
    floor = _rel_scale(mu_b)
    for n in range(1, len(mu_b)):
        a = float(mu_a[n])
        b = float(mu_b[n])
        diff = abs(a - b)
        rel = diff / max(abs(b), floor)
        rows.append({
            "mode_index": n + 1,
            "mu_domain": a,
            "mu_disc_weighted": b,
            "abs_diff": diff,
            "rel_diff": rel,
            "rhs_sharp": None,
            "rhs_coarse": None,
            "rhs_main": None,
            "pass": bool(rel <= rel_tol),
        })
    return rows


def _summary_from_rows(rows, margins):
    rels = [r["rel_diff"] for r in rows if isinstance(r.get("rel_diff"), float)]
    return {
        "max_rel_diff": max(rels) if rels else 0.0,
        "min_margin": min(margins) if margins else 0.0,
        "all_pass": all(bool(r.get("pass", True)) for r in rows),
    }


def _solve_weighted_disc(scenario, weight, level=1.0):
    n_r = max(int(round(scenario.mesh[0] * level)), 2)
    n_t = max(int(round(scenario.mesh[1] * level)), 8)
    mesh = build_disc_mesh(n_r, n_t, inner_refine=weight.singular)
    stiff = assemble_stiffness(mesh, identity_field())
    mass = assemble_mass(mesh, weight)
    return generalized_eigs(stiff, mass, scenario.modes, scenario.tol, scenario.seed)


def _single_map(scenario):
    if scenario.map_descriptors:
        return build_map(scenario.map_descriptors[0])
    return build_map(_identity_descriptor())


def _run_transfer(scenario):
    phi = _single_map(scenario)
    weight = weight_of_map(phi)
    mesh = build_disc_mesh(*scenario.mesh, inner_refine=weight.singular)
    omega = pushforward_mesh(mesh, invert_map(phi))
    stiff_omega = assemble_stiffness(omega, matrix_field_of_map(phi))
    mass_omega = assemble_mass(omega)
    stiff_disc = assemble_stiffness(mesh, identity_field())
    mass_disc = assemble_mass(mesh, weight)
    spec_omega = generalized_eigs(stiff_omega, mass_omega, scenario.modes, scenario.tol, scenario.seed)
    spec_disc = generalized_eigs(stiff_disc, mass_disc, scenario.modes, scenario.tol, scenario.seed)
    rows = _compare_rows(spec_omega.eigenvalues, spec_disc.eigenvalues, scenario.rel_tol)
    margins = [scenario.rel_tol - r["rel_diff"] for r in rows]
    return Report("transfer", scenario.echo(), SPECTRAL_COLUMNS, rows,
                  _summary_from_rows(rows, margins))


def _run_isospectral(scenario):
    phi = _single_map(scenario)
    samples = phi.domain.sample_points()
    if float(np.max(np.abs(np.asarray(phi.jac_forward(samples)) - 1.0))) > 1e-10:
        raise ValidationError("isospectral scenarios need a unit-Jacobian map")
    mesh = build_disc_mesh(*scenario.mesh)
    omega = pushforward_mesh(mesh, invert_map(phi))
    stiff_omega = assemble_stiffness(omega, matrix_field_of_map(phi))
    mass_omega = assemble_mass(omega)
    stiff_disc = assemble_stiffness(mesh, identity_field())
    mass_disc = assemble_mass(mesh)
    spec_omega = generalized_eigs(stiff_omega, mass_omega, scenario.modes, scenario.tol, scenario.seed)
    spec_disc = generalized_eigs(stiff_disc, mass_disc, scenario.modes, scenario.tol, scenario.seed)
    rows = _compare_rows(spec_omega.eigenvalues, spec_disc.eigenvalues, scenario.rel_tol)
    margins = [scenario.rel_tol - r["rel_diff"] for r in rows]
    return Report("isospectral", scenario.echo(), SPECTRAL_COLUMNS, rows,
                  _summary_from_rows(rows, margins))


def _run_eig(scenario):
    phi = _single_map(scenario)
    weight = weight_of_map(phi)
    spec = _solve_weighted_disc(scenario, weight)
    floor = _rel_scale(spec.eigenvalues)
    rows = []
    for n in range(scenario.modes):
        mu = float(spec.eigenvalues[n])
        res = float(spec.residuals[n])
        ok = res <= scenario.tol
        if n == 0:
            ok = ok and mu <= floor
        rows.append({
            "mode_index": n + 1,
            "mu_domain": None,
            "mu_disc_weighted": mu,
            "abs_diff": None,
            "rel_diff": res,
            "rhs_sharp": None,
            "rhs_coarse": None,
            "rhs_main": None,
            "pass": bool(ok),
        })
    margins = [scenario.tol - r["rel_diff"] for r in rows]
    report = Report("eig", scenario.echo(), SPECTRAL_COLUMNS, rows,
                    _summary_from_rows(rows, margins))
    report.payload["v_star"] = spec.v_star
    return report


def _run_stability(scenario):
    map1 = build_map(scenario.map_descriptors[0])
    map2 = build_map(scenario.map_descriptors[1])
    h1 = weight_of_map(map1)
    h2 = weight_of_map(map2)
    beta = scenario.beta
    s = s_of_beta(beta)
    q = q_of_beta(beta)

    pres = phi_beta(map1, map2, beta, scenario.tol)
    dres = d_s_distance(h1, h2, s, scenario.tol)
    lres = sqrt_jacobian_l2(h1, h2, scenario.tol)
    for res, name in ((pres, "phi_beta"), (dres, "d_s"), (lres, "l2 distance")):
        if res.divergent:
            raise ValidationError(f"{name} diverged: the pair is not beta-regular")
    big_b = poincare_upper(beta, h1, h2, max(map1.qc_coefficient, map2.qc_coefficient), scenario.tol)
    lemma_b = big_b * big_b * dres.value

    fine1 = _solve_weighted_disc(scenario, h1)
    fine2 = _solve_weighted_disc(scenario, h2)
    coarse1 = _solve_weighted_disc(scenario, h1, level=0.5)
    coarse2 = _solve_weighted_disc(scenario, h2, level=0.5)

    report = StabilityReport(
        beta=beta, s=s, q=q, d_s=dres.value, phi_beta=pres.value,
        l2_root_jac=lres.value, b_q2=b_q2_disc(q), poincare_B=big_b,
    )
    rows = []
    margins = []
    floor = _rel_scale(fine2.eigenvalues)
    # the zero mode is identically zero on both sides; bounds start at mode 2
    for n in range(2, scenario.modes + 1):
        lhs, rhs_main, c_n = bound_main(fine1, fine2, n, beta, pres.value, lres.value, big_b)
        sharp, coarse = bound_two_weight(lemma_b, c_n)
        # two-level estimate of the discretization error of the eigenvalue
        # gap itself; the per-problem errors largely cancel on a shared mesh
        gap_fine = float(fine1.eigenvalues[n - 1]) - float(fine2.eigenvalues[n - 1])
        gap_coarse = float(coarse1.eigenvalues[n - 1]) - float(coarse2.eigenvalues[n - 1])
        err = abs(gap_fine - gap_coarse)
        lhs_upper = lhs + err
        ok = lhs_upper <= rhs_main
        report.modes.append(n)
        report.mu_1.append(float(fine1.eigenvalues[n - 1]))
        report.mu_2.append(float(fine2.eigenvalues[n - 1]))
        report.c_n.append(c_n)
        report.c_tilde_n.append(c_n)
        report.lhs_n.append(lhs)
        report.disc_err_n.append(err)
        report.lhs_upper_n.append(lhs_upper)
        report.rhs_sharp_n.append(sharp)
        report.rhs_coarse_n.append(coarse)
        report.rhs_main_n.append(rhs_main)
        report.pass_n.append(bool(ok))
        mu2 = float(fine2.eigenvalues[n - 1])
        rows.append({
            "mode_index": n,
            "mu_domain": float(fine1.eigenvalues[n - 1]),
            "mu_disc_weighted": mu2,
            "abs_diff": lhs,
            "rel_diff": lhs / max(abs(mu2), floor),
            "rhs_sharp": sharp,
            "rhs_coarse": coarse,
            "rhs_main": rhs_main,
            "pass": bool(ok),
        })
        margins.append(rhs_main - lhs_upper)
    out = Report("stability", scenario.echo(), SPECTRAL_COLUMNS, rows,
                 _summary_from_rows(rows, margins))
    out.payload["stability"] = asdict(report)
    return out


def _battery_row(check, value, bound, ok):
    return {"check": check, "value": float(value), "bound": bound, "pass": bool(ok)}


def _default_roundtrip_maps():
    return (
        {"kind": "affine_stretch", "a": 2.0**0.5, "theta": 0.3},
        {"kind": "inverse", "of": {"kind": "radial_power", "gamma": 1.5}},
        {"kind": "mobius", "b": [0.4, 0.2]},
    )


def _map_battery_rows(name, m):
    rows = []
    pts = 0.9 * m.domain.sample_points(4, 8)
    inv_err = float(np.max(np.abs(m.inverse(m.forward(pts)) - pts)))
    rows.append(_battery_row(f"{name}_inverse_identity", inv_err, 1e-12, inv_err <= 1e-12))
    jac_err = float(np.max(np.abs(
        np.asarray(m.jac_forward(pts)) * np.asarray(m.jac_inverse(m.forward(pts))) - 1.0
    )))
    rows.append(_battery_row(f"{name}_jacobian_identity", jac_err, 1e-10, jac_err <= 1e-10))
    # differential against central finite differences
    step = 1e-6
    d = np.asarray(m.differential(pts))
    fd_x = (np.asarray(m.forward(pts + step)) - np.asarray(m.forward(pts - step))) / (2 * step)
    fd_y = (np.asarray(m.forward(pts + 1j * step)) - np.asarray(m.forward(pts - 1j * step))) / (2 * step)
    fd_err = max(
        float(np.max(np.abs(d[..., 0, 0] - fd_x.real))),
        float(np.max(np.abs(d[..., 1, 0] - fd_x.imag))),
        float(np.max(np.abs(d[..., 0, 1] - fd_y.real))),
        float(np.max(np.abs(d[..., 1, 1] - fd_y.imag))),
    )
    rows.append(_battery_row(f"{name}_differential_fd", fd_err, 1e-6, fd_err <= 1e-6))
    # quasiconformal distortion: operator norm squared vs K * Jacobian
    svals = np.linalg.svd(d, compute_uv=False)
    excess = float(np.max(
        svals[..., 0] ** 2 / (m.qc_coefficient * np.asarray(m.jac_forward(pts))) - 1.0
    ))
    rows.append(_battery_row(f"{name}_distortion_bound", excess, 1e-9, excess <= 1e-9))
    return rows


def _run_roundtrip(scenario):
    rng = np.random.default_rng(scenario.seed)
    count = 1000
    lam = np.exp(rng.uniform(-2.0, 2.0, count))
    ang = rng.uniform(0.0, np.pi, count)
    c, sn = np.cos(ang), np.sin(ang)
    a11 = lam * c * c + sn * sn / lam
    a12 = c * sn * (lam - 1.0 / lam)
    a22 = lam * sn * sn + c * c / lam
    mu = beltrami_from_matrix((a11, a12, a22))
    back = matrix_from_beltrami(mu)
    err = max(
        float(np.max(np.abs(back[0] - a11))),
        float(np.max(np.abs(back[1] - a12))),
        float(np.max(np.abs(back[2] - a22))),
    )
    rows = [_battery_row("beltrami_matrix_roundtrip", err, 1e-12, err <= 1e-12)]
    descriptors = scenario.map_descriptors or _default_roundtrip_maps()
    for i, desc in enumerate(descriptors):
        m = build_map(desc)
        rows.extend(_map_battery_rows(f"map{i}_{m.kind}", m))
    summary = {
        "max_rel_diff": 0.0,
        "min_margin": min(r["bound"] - r["value"] for r in rows),
        "all_pass": all(r["pass"] for r in rows),
    }
    return Report("roundtrip", scenario.echo(), BATTERY_COLUMNS, rows, summary)


def _run_functionals(scenario):
    map1 = build_map(scenario.map_descriptors[0])
    map2 = build_map(scenario.map_descriptors[1])
    h1 = weight_of_map(map1)
    h2 = weight_of_map(map2)
    beta = scenario.beta
    s = s_of_beta(beta)
    tol = scenario.tol

    pres = phi_beta(map1, map2, beta, tol)
    d12 = d_s_distance(h1, h2, s, tol)
    d21 = d_s_distance(h2, h1, s, tol)
    lres = sqrt_jacobian_l2(h1, h2, tol)
    int12, int21 = pair_regularity(map1, map2, beta, tol)
    big_b = poincare_upper(beta, h1, h2, max(map1.qc_coefficient, map2.qc_coefficient), tol)

    rows = []
    # divergence is the failure mode; the error estimate quantifies accuracy
    rows.append(_battery_row("phi_beta", pres.value, pres.error_estimate, not pres.divergent))
    rows.append(_battery_row("d_s", d12.value, d12.error_estimate, not d12.divergent))
    rows.append(_battery_row("l2_root_jac", lres.value, lres.error_estimate, not lres.divergent))
    bound = 2.0 * pres.value * lres.value
    rows.append(_battery_row("lemma_d_s_vs_bound", d12.value, bound,
                             d12.value <= bound * (1.0 + 1e-8)))
    sym = abs(d12.value - d21.value)
    rows.append(_battery_row("d_s_symmetry", sym, 1e-10, sym <= 1e-10))
    phi_pow = pres.value ** (2.0 * beta)
    gap_hi = max(int12.value, int21.value) - phi_pow
    rows.append(_battery_row("pair_max_le_phi_power", gap_hi, 1e-8,
                             gap_hi <= 1e-8 * max(1.0, phi_pow)))
    gap_lo = phi_pow - (int12.value + int21.value)
    rows.append(_battery_row("phi_power_le_pair_sum", gap_lo, 1e-8,
                             gap_lo <= 1e-8 * max(1.0, phi_pow)))
    rows.append(_battery_row("b_q2_disc", b_q2_disc(q_of_beta(beta)), None, True))
    rows.append(_battery_row("poincare_upper", big_b, None, True))
    summary = {
        "max_rel_diff": 0.0,
        "min_margin": 0.0,
        "all_pass": all(r["pass"] for r in rows),
    }
    return Report("functionals", scenario.echo(), BATTERY_COLUMNS, rows, summary)


_PIPELINES = {
    "transfer": _run_transfer,
    "isospectral": _run_isospectral,
    "eig": _run_eig,
    "stability": _run_stability,
    "roundtrip": _run_roundtrip,
    "functionals": _run_functionals,
}


def run_scenario(scenario):
    """Run the pipeline selected by the scenario kind and return its report."""
    try:
        return _PIPELINES[scenario.kind](scenario)
    except LabError:
        raise
    except KeyError as exc:
        raise ValidationError(f"unknown scenario kind {scenario.kind!r}") from exc


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_report(report, fmt, path):
    """Write a report as CSV (tabular, with a trailing summary line) or JSON."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as f:
            f.write(report.to_json())
        return
    if fmt != "csv":
        raise ValidationError(f"unknown output format {fmt!r}")
    lines = [",".join(report.columns)]
    for row in report.rows:
        lines.append(",".join(_csv_cell(row.get(c)) for c in report.columns))
    summary = report.summary
    lines.append(
        "summary,max_rel_diff=" + _csv_cell(float(summary.get("max_rel_diff", 0.0)))
        + ",min_margin=" + _csv_cell(float(summary.get("min_margin", 0.0)))
        + ",all_pass=" + _csv_cell(bool(summary.get("all_pass", report.passed)))
    )
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
