"""End-to-end assembly of the average-value identity.

The spectral side sums L(1/2, f) L(1/2, f x chi) / <f, f> over newforms of
each admissible prime level, binned by the normalized Hecke eigenvalue at
the auxiliary prime.  The geometric side is the split/inert measure mass of
the bin times twice the leading constant times L(1, chi).

Two versions of the leading constant are carried everywhere: the printed
combinatorial one (see arch_local.leading_constant) and the constant
assembled from the verified local integrals,

    c_assembled = 4 |I_upper(0, 0)| / Gamma_C(k/2),

where Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s) is the archimedean factor that
the source bookkeeping leaves implicit.  The report records both together
with the observed ratios, so no normalization dispute is hidden.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

from . import arch_local, measures, padic_local, reg_tail
from .arith import (
    admissible_levels,
    dim_cusp_forms,
    dirichlet_l,
    is_fundamental_discriminant,
    kronecker,
    load_eigenforms,
)
from .errors import InvariantViolation
from .lvalues import central_value, fricke_sign, petersson_norm
from .numerics import QuadratureSpec, integrate, interval

__all__ = [
    "ExperimentConfig",
    "AverageReport",
    "default_data_path",
    "measure_mass",
    "spectral_sum",
    "geometric_prediction",
    "assembled_constant",
    "proportionality_test",
    "geometric_side_audit",
    "run_experiment",
]


def default_data_path() -> str:
    here = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(here, "data", "eigenforms_k4.jsonl")


@dataclass
class ExperimentConfig:
    discriminant: int
    weight: int
    aux_prime: int
    interval: tuple = (-2.0, 2.0)
    levels: list | None = None  # None selects all admissible small levels
    data_path: str | None = None
    bins: int = 4
    level_bound: int = 60
    max_dim: int = 2
    output_dir: str | None = None

    def __post_init__(self):
        D, p = self.discriminant, self.aux_prime
        if not (D < 0 and is_fundamental_discriminant(D)):
            raise InvariantViolation(f"D = {D} is not a negative fundamental discriminant")
        if self.weight % 2 or self.weight < 4:
            raise InvariantViolation("weight must be even and >= 4")
        if kronecker(D, p) not in (+1, -1):
            raise InvariantViolation("auxiliary prime must not divide D")
        lo, hi = self.interval
        if not (-2.0 <= lo <= hi <= 2.0):
            raise InvariantViolation("interval must be a subinterval of [-2, 2]")
        if self.levels is None:
            self.levels = admissible_levels(D, p, self.level_bound,
                                            max_dim=self.max_dim, k=self.weight)
        for N in self.levels:
            if kronecker(D, -N) != 1:
                raise InvariantViolation(f"level {N} fails chi(-N) = 1")
            if p % N == 0 or D % N == 0:
                raise InvariantViolation(f"level {N} divides the auxiliary data")
        if self.data_path is None:
            self.data_path = default_data_path()

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {"discriminant", "weight", "aux_prime", "interval", "levels",
                 "data_path", "bins", "level_bound", "max_dim", "output_dir"}
        bad = set(raw) - known
        if bad:
            raise InvariantViolation(f"unknown config fields {sorted(bad)}")
        if "interval" in raw:
            raw["interval"] = tuple(raw["interval"])
        return cls(**raw)

    @property
    def measure(self) -> measures.SatakeMeasure:
        return measures.SatakeMeasure(p=self.aux_prime,
                                      sign=kronecker(self.discriminant, self.aux_prime))


# ---------------------------------------------------------------------------
# measure masses and the two leading constants
# ---------------------------------------------------------------------------

def measure_mass(cfg: ExperimentConfig, lo: float, hi: float) -> float:
    """Mass of the split/inert measure on [lo, hi], by quadrature in the
    angle coordinate."""
    m = cfg.measure
    lo, hi = max(lo, -2.0), min(hi, 2.0)
    if lo >= hi:
        return 0.0
    th_lo, th_hi = math.acos(hi / 2.0), math.acos(lo / 2.0)
    spec = QuadratureSpec(domain=interval(th_lo, th_hi), rel_tol=1e-12,
                          abs_tol=1e-14)
    res = integrate(
        lambda th: measures.density(m, 2.0 * math.cos(th)) * 2.0 * math.sin(th),
        spec,
    )
    return res.require().real


def gamma_c(s: float) -> float:
    """Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s)."""
    return 2.0 * (2.0 * math.pi) ** (-s) * math.gamma(s)


def assembled_constant(k: int) -> float:
    """Leading constant assembled from the verified local integrals,
    including the implicit archimedean factor."""
    upper = arch_local.singular_upper_closed(k, 0.0, 0.0)
    return 4.0 * abs(upper) / gamma_c(k / 2.0)


def geometric_prediction(cfg: ExperimentConfig, lo: float, hi: float,
                         constant: str = "printed") -> float:
    """2 * mass * c_k * L(1, chi) with the printed or assembled constant."""
    k = cfg.weight
    if constant == "printed":
        c_k = arch_local.leading_constant(k, arch_local.default_formal_degree(k))
    elif constant == "assembled":
        c_k = assembled_constant(k)
    else:
        raise ValueError("constant must be 'printed' or 'assembled'")
    mass = measure_mass(cfg, lo, hi)
    return 2.0 * mass * c_k * dirichlet_l(cfg.discriminant, 1)


# ---------------------------------------------------------------------------
# spectral side
# ---------------------------------------------------------------------------

_FORM_CACHE: dict = {}


def _level_rows(cfg: ExperimentConfig, N: int) -> list:
    """Per-newform data at level N: eigenvalue, values, norm, weight."""
    key = (cfg.data_path, N, cfg.weight, cfg.discriminant, cfg.aux_prime)
    if key in _FORM_CACHE:
        return _FORM_CACHE[key]
    forms = [f for f in load_eigenforms(cfg.data_path)
             if f.level == N and f.weight == cfg.weight]
    expected = dim_cusp_forms(N, cfg.weight)
    if len(forms) != expected:
        raise InvariantViolation(
            f"data file holds {len(forms)} forms at level {N}, expected {expected}"
        )
    rows = []
    for f in sorted(forms, key=lambda g: g.label):
        cv = central_value(f)
        cvt = central_value(f, twist=cfg.discriminant)
        nrm = petersson_norm(f)
        rows.append({
            "label": f.label,
            "a_p": f.a(cfg.aux_prime),
            "central": cv.value,
            "central_twisted": cvt.value,
            "eps": cv.eps,
            "eps_twisted": cvt.eps,
            "fricke": fricke_sign(f),
            "norm": nrm,
            "contribution": cv.value * cvt.value / nrm,
        })
    _FORM_CACHE[key] = rows
    return rows


def spectral_sum(cfg: ExperimentConfig, N: int, lo: float, hi: float) -> dict:
    """Sum of weighted central products over newforms with a_p in [lo, hi]."""
    rows = _level_rows(cfg, N)
    chosen = [r for r in rows if lo <= r["a_p"] <= hi]
    return {
        "level": N,
        "interval": (lo, hi),
        "value": math.fsum(r["contribution"] for r in chosen),
        "count": len(chosen),
        "rows": chosen,
    }


def _bin_edges(bins: int) -> list:
    return [-2.0 + 4.0 * i / bins for i in range(bins + 1)]


def proportionality_test(cfg: ExperimentConfig) -> dict:
    """Bin-share vectors of the spectral mass against the measure masses.

    Binning is exhaustive and exclusive (last bin closed).  Levels with an
    empty or zero full-interval sum are flagged degenerate.
    """
    if len(cfg.levels) < 3:
        raise InvariantViolation("need at least 3 levels")
    edges = _bin_edges(cfg.bins)
    masses = []
    for i in range(cfg.bins):
        masses.append(measure_mass(cfg, edges[i], edges[i + 1]))
    out = {"edges": edges, "measure_masses": masses, "levels": {}}
    for N in cfg.levels:
        rows = _level_rows(cfg, N)
        full = math.fsum(r["contribution"] for r in rows)
        if not rows or full == 0.0:
            out["levels"][N] = {"degenerate": True, "full": full}
            continue
        shares = []
        for i in range(cfg.bins):
            lo, hi = edges[i], edges[i + 1]
            inc = [r for r in rows
                   if (lo <= r["a_p"] < hi) or (i == cfg.bins - 1 and r["a_p"] == hi)]
            shares.append(math.fsum(r["contribution"] for r in inc) / full)
        l1 = sum(abs(s - m) for s, m in zip(shares, masses))
        out["levels"][N] = {"degenerate": False, "full": full,
                            "shares": shares, "l1_distance": l1}
    return out


# ---------------------------------------------------------------------------
# geometric audit
# ---------------------------------------------------------------------------

def geometric_side_audit(cfg: ExperimentConfig, N: int, window: int = 10) -> dict:
    """Itemized singular-orbit table at level N with the basic auxiliary
    test function, plus the truncated regular-tail bound."""
    D, k = cfg.discriminant, cfg.weight
    d_formal = arch_local.default_formal_degree(k)
    gauss = padic_local.gauss_sum(D)
    l_zero = dirichlet_l(D, 0)
    upper_arch = arch_local.singular_upper_closed(k, 0.0, 0.0, d_formal)
    vol_inv = N + 1  # 1 / V_N

    # swapped singular orbits vanish at the level place: verified by sweep
    place = padic_local.PlaceSpec(q=N, kind="level", chi_q=kronecker(D, N))
    swap_cells = 0
    for kind in ("swap_upper", "swap_lower"):
        res = padic_local.brute_force_integral(
            place, padic_local.OrbitDatum(kind=kind), window
        )
        swap_cells += len(res.cells)

    upper_val = (upper_arch / gauss).real * vol_inv * 1.0 * l_zero
    chi_n = kronecker(D, N)
    lower_val = ((-upper_arch) / gauss).real * chi_n * vol_inv * 1.0 * l_zero

    tail = reg_tail.tail_envelope(N, abs(D), k, n_max=200 * N)
    rows = [
        {"orbit": "identity", "value": 0.0, "status": "axiom (nontrivial character)"},
        {"orbit": "swap", "value": 0.0, "status": "axiom (nontrivial character)"},
        {"orbit": "swap_upper", "value": 0.0,
         "status": f"verified-by-oracle ({swap_cells} cells in window {window})"},
        {"orbit": "swap_lower", "value": 0.0,
         "status": f"verified-by-oracle ({swap_cells} cells in window {window})"},
        {"orbit": "upper", "value": upper_val, "status": "evaluated"},
        {"orbit": "lower", "value": lower_val, "status": "evaluated"},
    ]
    if swap_cells:
        raise InvariantViolation("swapped singular orbits have support at the level place")
    return {
        "level": N,
        "rows": rows,
        "upper_lower_gap": abs(upper_val - lower_val) / max(abs(upper_val), 1e-30),
        "regular_tail_bound": tail,
    }


# ---------------------------------------------------------------------------
# the full experiment
# ---------------------------------------------------------------------------

@dataclass
class AverageReport:
    config: dict
    constants: dict
    levels: list
    proportionality: dict
    envelope: dict
    normalization_ledger: list

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "constants": self.constants,
            "levels": self.levels,
            "proportionality": self.proportionality,
            "envelope": self.envelope,
            "normalization_ledger": self.normalization_ledger,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _envelope_fit(deviations: dict, decay: float = 1.9, slack: float = 10.0) -> dict:
    """Fit C on the smallest level and test the others against the envelope."""
    levels = sorted(N for N, d in deviations.items() if d is not None)
    if not levels:
        return {"fitted_on": None, "violations": [], "ok": True, "decay": decay}
    n0 = levels[0]
    c_fit = deviations[n0] * n0 ** decay
    rows, violations = {}, []
    for N in levels:
        env = c_fit * N ** (-decay)
        ratio = deviations[N] / env if env > 0 else math.inf
        rows[N] = {"deviation": deviations[N], "envelope": env, "ratio": ratio}
        if ratio > slack:
            violations.append(N)
    return {"fitted_on": n0, "constant": c_fit, "rows": rows,
            "violations": violations, "ok": not violations, "decay": decay}


def run_experiment(cfg: ExperimentConfig) -> AverageReport:
    D, k, p = cfg.discriminant, cfg.weight, cfg.aux_prime
    lo, hi = cfg.interval
    l_one = dirichlet_l(D, 1)
    c_printed = arch_local.leading_constant(k, arch_local.default_formal_degree(k))
    c_asm = assembled_constant(k)
    mass_j = measure_mass(cfg, lo, hi)

    level_reports = []
    deviations_printed, deviations_assembled = {}, {}
    for N in cfg.levels:
        rows = _level_rows(cfg, N)
        s_full = math.fsum(r["contribution"] for r in rows)
        s_j = spectral_sum(cfg, N, lo, hi)["value"]
        g_printed = 2.0 * mass_j * c_printed * l_one
        g_asm = 2.0 * mass_j * c_asm * l_one
        g_full_printed = 2.0 * c_printed * l_one
        g_full_asm = 2.0 * c_asm * l_one
        audit = geometric_side_audit(cfg, N)
        level_reports.append({
            "level": N,
            "forms": rows,
            "spectral_full": s_full,
            "spectral_interval": s_j,
            "interval_share": (s_j / s_full) if s_full else None,
            "interval_mass": mass_j,
            "prediction_printed": g_printed,
            "prediction_assembled": g_asm,
            "ratio_printed": (s_j / g_printed) if g_printed else None,
            "ratio_assembled": (s_j / g_asm) if g_asm else None,
            "audit": audit,
        })
        if rows:
            deviations_printed[N] = abs(s_full - g_full_printed)
            deviations_assembled[N] = abs(s_full - g_full_asm)

    prop = proportionality_test(cfg) if len(cfg.levels) >= 3 else {}
    envelope = {
        "printed": _envelope_fit(deviations_printed, decay=k / 2.0 - 0.1),
        "assembled": _envelope_fit(deviations_assembled, decay=k / 2.0 - 0.1),
    }
    ledger = [
        "local volumes: vol(unit-group) = 1 at every finite place; "
        f"level volume V_N = 1/(N+1), carried as the factor N+1 = 1/V_N",
        "level closed forms carry the 1/V_N prefactor (the displayed sums do "
        "not); the enumeration oracle fixed this choice",
        "spectral comparison uses finite L-values in the analytic "
        "normalization and the classical Petersson norm",
        f"printed constant c_k = {c_printed!r} (combinatorial closed form)",
        f"assembled constant = 4 |I_upper(0,0)| / Gamma_C(k/2) = {c_asm!r}; "
        "the 1/(4 pi) of the kernel identity and the V_N of the adelic "
        "pairing cancel in this assembly, leaving one archimedean factor "
        f"Gamma_C(k/2) = {gamma_c(k / 2.0)!r}",
        "observed full-interval ratios against both constants are in the "
        "per-level rows; the bin-share proportionality test is "
        "normalization-free",
    ]
    report = AverageReport(
        config={
            "discriminant": D, "weight": k, "aux_prime": p,
            "interval": [lo, hi], "levels": list(cfg.levels),
            "bins": cfg.bins, "data_path": os.path.basename(cfg.data_path),
        },
        constants={
            "L1": l_one, "c_printed": c_printed, "c_assembled": c_asm,
            "measure_sign": kronecker(D, p), "interval_mass": mass_j,
        },
        levels=level_reports,
        proportionality=prop,
        envelope=envelope,
        normalization_ledger=ledger,
    )
    if cfg.output_dir:
        _write_outputs(cfg, report)
    return report


def _write_outputs(cfg: ExperimentConfig, report: AverageReport) -> None:
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, "report.json"), "w",
              encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
    with open(os.path.join(cfg.output_dir, "forms.csv"), "w",
              encoding="utf-8") as fh:
        fh.write("level,label,a_p,central,central_twisted,norm,contribution\n")
        for lvl in report.levels:
            for r in lvl["forms"]:
                fh.write(
                    f"{lvl['level']},{r['label']},{r['a_p']!r},{r['central']!r},"
                    f"{r['central_twisted']!r},{r['norm']!r},{r['contribution']!r}\n"
                )
    with open(os.path.join(cfg.output_dir, "density.csv"), "w",
              encoding="utf-8") as fh:
        fh.write("x,split,inert,sato_tate\n")
        split = measures.SatakeMeasure(p=cfg.aux_prime, sign=+1)
        inert = measures.SatakeMeasure(p=cfg.aux_prime, sign=-1)
        for i in range(401):
            x = -2.0 + 4.0 * i / 400
            fh.write(f"{x!r},{measures.density(split, x)!r},"
                     f"{measures.density(inert, x)!r},"
                     f"{measures.sato_tate_density(x)!r}\n")
