"""Experiment drivers behind the command line: built-in example, sweeps, oracles, verification."""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import kernels, prob_core
from .errors import ConfigError, EpsilonOutOfRange, FairGeomError, InvalidReconstruction
from .examples import EXAMPLE_EPSILONS, EXAMPLE_P_S_GIVEN_T, EXAMPLE_P_T_GIVEN_X, EXAMPLE_P_X, EXAMPLE_RATE, example_prior
from .geometry import compute_w_matrices, singular_triples
from .oracle import OracleQuery, enumerate_geometric, grid_search_chi2, grid_search_eo
from .prob_core import PriorInstance
from .random_instances import random_channel, random_prior
from .solver import approximation_errors, design_bound, markov_consistency_check, select_direction, solve
from .svgplot import line_chart

CSV_HEADER = [
    "epsilon",
    "p2_bound",
    "exact_utility_of_design",
    "oracle_chi2",
    "oracle_eo",
    "k_constant",
    "within_validity",
]

# Reported values of the binary worked example.
REPORTED_P_T = [0.3625, 0.6375]
REPORTED_P_S = [0.3088, 0.6913]
REPORTED_W_TY = [[2.4610, -0.9206], [-1.1599, 1.7355]]
REPORTED_W_XY = [[-16.7931, 11.8246], [-10.3371, -5.8669]]
REPORTED_SIGMA_TY = [3.2034, 1.0]
REPORTED_SIGMA_XY = [23.7087, 1.0]
REPORTED_RIGHT_TY = [[-0.8314, 0.5557], [0.5557, 0.8314]]
REPORTED_RIGHT_XY = [[0.8314, -0.5557], [0.5557, 0.8314]]
REPORTED_DIRECTION = [-0.8314, 0.5557]


def full(x: float) -> str:
    return format(float(x), ".17g")


def short(x: float) -> str:
    return format(float(x), ".6g")


# ---------------------------------------------------------------- config


@dataclass
class ExperimentConfig:
    p_s_given_t: list[list[float]]
    p_t_given_x: list[list[float]]
    p_x: list[float]
    epsilon_values: list[float]
    rate_budget: float
    grid_points: int = 201
    y_cardinality: int = 2
    oracle_chi2: bool = True
    oracle_eo: bool = True
    oracle_geometric: bool = True
    out_dir: str = "results"
    output_format: str = "both"
    seed: int = 42
    verify_priors: int = 200
    verify_sizes: list[int] = field(default_factory=lambda: [2, 3, 4])

    def prior(self) -> PriorInstance:
        try:
            return prob_core.validate_prior(self.p_s_given_t, self.p_t_given_x, self.p_x)
        except FairGeomError as exc:
            raise ConfigError("prior", str(exc)) from exc

    def disable_oracles(self) -> None:
        self.oracle_chi2 = self.oracle_eo = self.oracle_geometric = False

    def to_json(self) -> dict:
        return {
            "prior": {
                "size": len(self.p_x),
                "p_s_given_t": self.p_s_given_t,
                "p_t_given_x": self.p_t_given_x,
                "p_x": self.p_x,
            },
            "epsilon_values": self.epsilon_values,
            "rate_budget": self.rate_budget,
            "oracle": {
                "grid_points": self.grid_points,
                "y_cardinality": self.y_cardinality,
                "chi2": self.oracle_chi2,
                "eo": self.oracle_eo,
                "geometric": self.oracle_geometric,
            },
            "output": {"dir": self.out_dir, "format": self.output_format},
            "seed": self.seed,
            "verify": {"n_priors": self.verify_priors, "sizes": self.verify_sizes},
        }

    @classmethod
    def example(cls) -> "ExperimentConfig":
        return cls(
            p_s_given_t=[list(r) for r in EXAMPLE_P_S_GIVEN_T],
            p_t_given_x=[list(r) for r in EXAMPLE_P_T_GIVEN_X],
            p_x=list(EXAMPLE_P_X),
            epsilon_values=list(EXAMPLE_EPSILONS),
            rate_budget=EXAMPLE_RATE,
        )

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        prior = _require(doc, "prior", dict)
        n = _require(prior, "size", int, "prior.size")
        if n < 2:
            raise ConfigError("prior.size", "must be >= 2")
        cfg = cls(
            p_s_given_t=_matrix(prior, "p_s_given_t", n),
            p_t_given_x=_matrix(prior, "p_t_given_x", n),
            p_x=_vector(prior, "p_x", n),
            epsilon_values=_epsilons(doc),
            rate_budget=_positive(doc, "rate_budget"),
        )
        oracle = doc.get("oracle", {})
        if not isinstance(oracle, dict):
            raise ConfigError("oracle", "must be an object")
        cfg.grid_points = _int_field(oracle, "grid_points", cfg.grid_points, "oracle.grid_points")
        cfg.y_cardinality = _int_field(oracle, "y_cardinality", cfg.y_cardinality, "oracle.y_cardinality")
        if cfg.grid_points < 2:
            raise ConfigError("oracle.grid_points", "must be >= 2")
        if cfg.y_cardinality < 2:
            raise ConfigError("oracle.y_cardinality", "must be >= 2")
        for key, attr in (("chi2", "oracle_chi2"), ("eo", "oracle_eo"), ("geometric", "oracle_geometric")):
            val = oracle.get(key, True)
            if not isinstance(val, bool):
                raise ConfigError(f"oracle.{key}", "must be true or false")
            setattr(cfg, attr, val)
        output = doc.get("output", {})
        if not isinstance(output, dict):
            raise ConfigError("output", "must be an object")
        cfg.out_dir = str(output.get("dir", cfg.out_dir))
        cfg.output_format = str(output.get("format", cfg.output_format))
        if cfg.output_format not in ("csv", "json", "both"):
            raise ConfigError("output.format", "must be csv, json or both")
        seed = doc.get("seed", cfg.seed)
        if not isinstance(seed, int) or seed < 0:
            raise ConfigError("seed", "must be a non-negative integer")
        cfg.seed = seed
        verify = doc.get("verify", {})
        if not isinstance(verify, dict):
            raise ConfigError("verify", "must be an object")
        cfg.verify_priors = _int_field(verify, "n_priors", cfg.verify_priors, "verify.n_priors")
        sizes = verify.get("sizes", cfg.verify_sizes)
        if not isinstance(sizes, list) or not sizes or not all(isinstance(v, int) and v >= 2 for v in sizes):
            raise ConfigError("verify.sizes", "must be a non-empty list of integers >= 2")
        cfg.verify_sizes = sizes
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError("--config", f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from exc
        return cls.from_json(doc)


def _require(doc: dict, key: str, kind: type, name: str | None = None):
    name = name or key
    if key not in doc:
        raise ConfigError(name, "missing")
    val = doc[key]
    if kind is int and isinstance(val, bool) or not isinstance(val, kind):
        raise ConfigError(name, f"expected {getattr(kind, '__name__', 'number')}")
    return val


def _int_field(doc: dict, key: str, default: int, name: str) -> int:
    val = doc.get(key, default)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError(name, "must be an integer")
    return val


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _vector(doc: dict, key: str, n: int) -> list[float]:
    v = _require(doc, key, list, f"prior.{key}")
    if len(v) != n or not all(_is_number(e) for e in v):
        raise ConfigError(f"prior.{key}", f"expected {n} numbers")
    return [float(e) for e in v]


def _matrix(doc: dict, key: str, n: int) -> list[list[float]]:
    m = _require(doc, key, list, f"prior.{key}")
    if len(m) != n or not all(isinstance(r, list) and len(r) == n and all(_is_number(e) for e in r) for r in m):
        raise ConfigError(f"prior.{key}", f"expected a {n}x{n} row-major matrix of numbers")
    return [[float(e) for e in r] for r in m]


def _epsilons(doc: dict) -> list[float]:
    eps = _require(doc, "epsilon_values", list)
    if not eps:
        raise ConfigError("epsilon_values", "must be non-empty")
    if not all(_is_number(e) and e > 0 for e in eps):
        raise ConfigError("epsilon_values", "must be strictly positive numbers")
    if any(b <= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("epsilon_values", "must be sorted ascending without repeats")
    return [float(e) for e in eps]


def _positive(doc: dict, key: str) -> float:
    val = _require(doc, key, (int, float))
    if not _is_number(val) or val <= 0:
        raise ConfigError(key, "must be a positive number")
    return float(val)


# ---------------------------------------------------------------- example


@dataclass
class Check:
    quantity: str
    value: float
    expected: float
    tol: float
    relative: bool = False

    @property
    def deviation(self) -> float:
        d = abs(self.value - self.expected)
        return d / abs(self.expected) if self.relative else d

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol


@dataclass
class ExampleReport:
    lines: list[str]
    checks: list[Check]

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _sign_align(v: np.ndarray, ref) -> np.ndarray:
    return v if float(np.dot(v, ref)) >= 0 else -v


def run_example() -> ExampleReport:
    prior = example_prior()
    w = compute_w_matrices(prior)
    ty = singular_triples(w.w_ty)
    xy = singular_triples(w.w_xy)
    direction, used_second = select_direction(w)
    checks: list[Check] = []
    lines = ["Built-in binary example (|S| = |T| = |X| = 2)", ""]

    def vec(name: str, values, expected, tol):
        lines.append(f"{name} = [{', '.join(short(v) for v in values)}]")
        for i, (v, e) in enumerate(zip(values, expected)):
            checks.append(Check(f"{name}[{i}]", float(v), e, tol))

    def mat(name: str, m, expected, tol):
        lines.append(f"{name} =")
        for i, row in enumerate(m):
            lines.append("    [" + ", ".join(short(v) for v in row) + "]")
            for j, v in enumerate(row):
                checks.append(Check(f"{name}[{i},{j}]", float(v), expected[i][j], tol))

    vec("P_T", prior.p_t, REPORTED_P_T, 1e-4)
    vec("P_S", prior.p_s, REPORTED_P_S, 1e-4)
    mat("W_TY", w.w_ty, REPORTED_W_TY, 1e-3)
    mat("W_XY", w.w_xy, REPORTED_W_XY, 1e-3)
    for name, triples, sig, rights in (
        ("W_TY", ty, REPORTED_SIGMA_TY, REPORTED_RIGHT_TY),
        ("W_XY", xy, REPORTED_SIGMA_XY, REPORTED_RIGHT_XY),
    ):
        for k, t in enumerate(triples):
            right = _sign_align(t.right, rights[k])
            lines.append(f"{name} singular {k}: sigma = {short(t.sigma)}, right = [{', '.join(short(v) for v in right)}]")
            checks.append(Check(f"sigma({name})[{k}]", t.sigma, sig[k], 1e-3))
            for i in range(2):
                checks.append(Check(f"right({name})[{k}][{i}]", float(right[i]), rights[k][i], 1e-3))
    aligned = _sign_align(direction, REPORTED_DIRECTION)
    lines.append(f"direction = [{', '.join(short(v) for v in aligned)}] (second singular: {used_second})")
    for i in range(2):
        checks.append(Check(f"direction[{i}]", float(aligned[i]), REPORTED_DIRECTION[i], 1e-3))
    b = w.bounds
    lines.append(f"c1 = {short(b.c1)}, c2 = {short(b.c2)}, min = {short(b.valid_epsilon_sup)}")
    lines.append("")
    lines.append(f"{'epsilon':>8}  {'K':>10}  {'P2':>12}  within")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EpsilonOutOfRange)
        for eps in EXAMPLE_EPSILONS:
            bd = design_bound(prior, eps, EXAMPLE_RATE, w)
            lines.append(f"{eps:>8g}  {short(bd.k_constant):>10}  {short(bd.p2_value):>12}  {bd.within_validity}")
            if eps == 0.005:
                checks.append(Check("K(eps=0.005)", bd.k_constant, 1.0, 0.0))
                checks.append(Check("P2(eps=0.005)", bd.p2_value, 0.5 * eps**2 * 3.2034**2, 1e-6, relative=True))
    lines.append("")
    report = ExampleReport(lines, checks)
    for c in report.failures:
        lines.append(
            f"DEVIATION {c.quantity}: computed {short(c.value)}, reported {short(c.expected)}, "
            f"{'relative ' if c.relative else ''}deviation {c.deviation:.3g} > {c.tol:g}"
        )
    lines.append(f"{len(checks) - len(report.failures)}/{len(checks)} reported values reproduced")
    return report


# ---------------------------------------------------------------- sweep


@dataclass
class SweepRow:
    epsilon: float
    p2_bound: float
    exact_utility_of_design: float | None
    oracle_chi2: float | None
    oracle_eo: float | None
    k_constant: float
    within_validity: bool
    design_realizable: bool = True
    exact_i_xy_of_design: float | None = None
    geometric_max: float | None = None
    geometric_step: float | None = None

    def csv_cells(self) -> list[str]:
        def cell(v):
            return "" if v is None else full(v)

        return [
            full(self.epsilon),
            full(self.p2_bound),
            cell(self.exact_utility_of_design),
            cell(self.oracle_chi2),
            cell(self.oracle_eo),
            full(self.k_constant),
            "true" if self.within_validity else "false",
        ]


@dataclass
class SweepResult:
    config: ExperimentConfig
    c1: float
    c2: float
    rows: list[SweepRow]

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_cells())
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "config": self.config.to_json(),
            "c1": self.c1,
            "c2": self.c2,
            "valid_epsilon_sup": min(self.c1, self.c2),
            "kernel_backend": kernels.BACKEND,
            "rows": [asdict(r) for r in self.rows],
        }

    def svg_text(self) -> str:
        xs = [r.epsilon for r in self.rows]
        series = {}
        for col in ("p2_bound", "exact_utility_of_design", "oracle_chi2", "oracle_eo"):
            ys = [getattr(r, col) for r in self.rows]
            if any(v is not None for v in ys):
                series[col] = ys
        return line_chart(xs, series, "Utility I(T;Y) vs epsilon", "epsilon", "nats")

    def report_text(self) -> str:
        lines = [
            f"c1 = {short(self.c1)}, c2 = {short(self.c2)}, rate budget r = {short(self.config.rate_budget)}",
            f"kernel backend: {kernels.BACKEND}",
            "",
            "  ".join(f"{h:>23}" for h in CSV_HEADER),
        ]
        for r in self.rows:
            cells = [r.epsilon, r.p2_bound, r.exact_utility_of_design, r.oracle_chi2, r.oracle_eo, r.k_constant]
            text = ["" if v is None else short(v) for v in cells] + [str(r.within_validity).lower()]
            lines.append("  ".join(f"{c:>23}" for c in text))
        unrealized = [short(r.epsilon) for r in self.rows if not r.design_realizable]
        if unrealized:
            lines.append("")
            lines.append("closed-form design not realizable (reconstruction leaves the simplex) at epsilon = " + ", ".join(unrealized))
        return "\n".join(lines) + "\n"


def run_sweep(config: ExperimentConfig) -> SweepResult:
    prior = config.prior()
    w = compute_w_matrices(prior)
    eo_value = None
    if config.oracle_eo:
        # the equalized-odds-only problem does not depend on epsilon
        eo_value = grid_search_eo(
            OracleQuery(prior, config.epsilon_values[0], config.rate_budget, config.y_cardinality, config.grid_points)
        ).best_utility
    rows = []
    for eps in config.epsilon_values:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EpsilonOutOfRange)
            bound = design_bound(prior, eps, config.rate_budget, w)
            try:
                design = solve(prior, eps, config.rate_budget)
            except InvalidReconstruction:
                design = None
        q = OracleQuery(prior, eps, config.rate_budget, config.y_cardinality, config.grid_points)
        geo = None
        if config.oracle_geometric and prior.size == 2 and config.y_cardinality == 2:
            geo = enumerate_geometric(q, w)
        rows.append(
            SweepRow(
                epsilon=eps,
                p2_bound=bound.p2_value,
                exact_utility_of_design=None if design is None else design.exact.i_ty,
                oracle_chi2=grid_search_chi2(q).best_utility if config.oracle_chi2 else None,
                oracle_eo=eo_value,
                k_constant=bound.k_constant,
                within_validity=bound.within_validity,
                design_realizable=design is not None,
                exact_i_xy_of_design=None if design is None else design.exact.i_xy,
                geometric_max=None if geo is None else geo.best_objective,
                geometric_step=None if geo is None else geo.objective_step,
            )
        )
    return SweepResult(config, w.bounds.c1, w.bounds.c2, rows)


def write_sweep(result: SweepResult, out_dir: str | Path, fmt: str = "both") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("csv", "both"):
        (out / "sweep.csv").write_text(result.csv_text())
        (out / "sweep.svg").write_text(result.svg_text())
        written += [out / "sweep.csv", out / "sweep.svg"]
    if fmt in ("json", "both"):
        (out / "summary.json").write_text(json.dumps(result.summary(), indent=2, default=_json_default) + "\n")
        written.append(out / "summary.json")
    (out / "report.txt").write_text(result.report_text())
    written.append(out / "report.txt")
    return written


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


# ---------------------------------------------------------------- verify


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0
    worst: float = 0.0

    def record(self, ok: bool, value: float) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
        self.worst = max(self.worst, float(value))


@dataclass
class VerifyReport:
    seed: int
    n_priors: int
    tallies: dict[str, CheckTally]

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def text(self) -> str:
        lines = [f"seed {self.seed}, {self.n_priors} random priors"]
        for name, t in self.tallies.items():
            status = "PASS" if t.failed == 0 else "FAIL"
            lines.append(f"{status}  {name:<32} passed={t.passed:<5} failed={t.failed:<5} worst={t.worst:.3e}")
        return "\n".join(lines) + "\n"


DECAY_EPSILONS = (0.04, 0.02, 0.01, 0.005)
DECAY_SCALE = 0.5


def decay_profile(prior: PriorInstance) -> tuple[list[float], list[float]]:
    """err/eps^2 for I(T;Y) and I(X;Y) with the solver's direction held fixed at norm 0.5."""
    d, _ = select_direction(compute_w_matrices(prior))
    rows = approximation_errors(prior, [0.5, 0.5], np.stack([DECAY_SCALE * d, -DECAY_SCALE * d]), DECAY_EPSILONS)
    ty = [abs(ex - ap) / e**2 for e, ex, ap, _, _ in rows]
    xy = [abs(ex - ap) / e**2 for e, _, _, ex, ap in rows]
    return ty, xy


def strictly_decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def run_verify(config: ExperimentConfig) -> VerifyReport:
    rng = np.random.default_rng(config.seed)
    tallies = {
        name: CheckTally()
        for name in (
            "equalized_odds_for_free",
            "unit_singular_pair",
            "markov_consistency",
            "chi2_postcondition",
            "data_processing",
            "sandwich",
            "o_eps2_decay",
        )
    }
    sandwich_grid = min(config.grid_points, 41)
    for i in range(config.verify_priors):
        n = config.verify_sizes[i % len(config.verify_sizes)]
        prior = random_prior(rng, n)
        ny = int(rng.integers(2, 5))
        joint = prob_core.build_joint(prior, random_channel(rng, ny, n))
        cmi = prob_core.conditional_mutual_information(joint)
        tallies["equalized_odds_for_free"].record(cmi < 1e-12, abs(cmi))
        slack = max(
            prob_core.mutual_information(joint, "T", "Y") - prob_core.mutual_information(joint, "T", "X"),
            prob_core.mutual_information(joint, "S", "Y") - prob_core.mutual_information(joint, "S", "T"),
        )
        tallies["data_processing"].record(slack <= 1e-10, max(slack, 0.0))

        w = compute_w_matrices(prior)
        res = max(
            np.linalg.norm(w.w_ty @ w.sqrt_p_s - w.sqrt_p_t),
            np.linalg.norm(w.w_xy @ w.sqrt_p_s - w.sqrt_p_x),
        )
        tallies["unit_singular_pair"].record(res < 1e-9, res)

        eps = 0.5 * w.bounds.valid_epsilon_sup
        design = solve(prior, eps, config.rate_budget)
        markov = markov_consistency_check(prior, design)
        tallies["markov_consistency"].record(markov.passed, float(markov.residuals.max()))
        excess = design.exact.max_chi2 - eps**2
        tallies["chi2_postcondition"].record(excess <= 1e-10, max(excess, 0.0))

        if n == 2:
            q = OracleQuery(prior, eps, config.rate_budget, grid_points=sandwich_grid)
            gap = grid_search_chi2(q).best_utility - grid_search_eo(q).best_utility
            tallies["sandwich"].record(gap <= 1e-12, max(gap, 0.0))

    ty, xy = decay_profile(config.prior())
    tallies["o_eps2_decay"].record(strictly_decreasing(ty) and strictly_decreasing(xy), ty[-1])
    return VerifyReport(config.seed, config.verify_priors, tallies)


# ---------------------------------------------------------------- solve / oracle listings


def solve_listing(config: ExperimentConfig) -> tuple[str, list[dict], bool]:
    """Human-readable designs per epsilon; returns (text, records, all_realizable)."""
    prior = config.prior()
    lines, records, ok = [], [], True
    for eps in config.epsilon_values:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EpsilonOutOfRange)
            try:
                d = solve(prior, eps, config.rate_budget)
            except InvalidReconstruction as exc:
                ok = False
                lines.append(f"epsilon={short(eps)}: not realizable ({exc})")
                records.append({"epsilon": eps, "error": str(exc)})
                continue
        m = markov_consistency_check(prior, d)
        lines.append(
            f"epsilon={short(eps)}  K={short(d.k_constant)}  P2={short(d.p2_value)}  "
            f"exact I(T;Y)={short(d.exact.i_ty)}  I(X;Y)={short(d.exact.i_xy)}  "
            f"I(Y;S|T)={d.exact.i_ys_given_t:.3g}  max chi2/eps^2={short(d.exact.max_chi2 / eps**2)}  "
            f"markov residual={m.residuals.max():.3g}  within={d.within_validity}"
        )
        lines.append("    P_{Y|X} = " + json.dumps([[float(short(v)) for v in row] for row in d.mechanism]))
        records.append(
            {
                "epsilon": eps,
                "direction": d.direction,
                "used_second_singular": d.used_second_singular,
                "k_constant": d.k_constant,
                "p2_value": d.p2_value,
                "mechanism": d.mechanism,
                "exact": asdict(d.exact),
                "markov_residuals": m.residuals,
                "within_validity": d.within_validity,
            }
        )
    return "\n".join(lines) + "\n", records, ok


def oracle_listing(config: ExperimentConfig) -> tuple[str, list[dict]]:
    prior = config.prior()
    lines = [f"{'epsilon':>10}  {'chi2 oracle':>14}  {'eo oracle':>14}  feasible(chi2)  evaluated"]
    records = []
    for eps in config.epsilon_values:
        q = OracleQuery(prior, eps, config.rate_budget, config.y_cardinality, config.grid_points)
        rc = grid_search_chi2(q) if config.oracle_chi2 else None
        re = grid_search_eo(q) if config.oracle_eo else None
        lines.append(
            f"{short(eps):>10}  {'' if rc is None else short(rc.best_utility):>14}  "
            f"{'' if re is None else short(re.best_utility):>14}  "
            f"{'' if rc is None else rc.feasible_count:>14}  {(rc or re).evaluated_count if (rc or re) else '':>9}"
        )
        rec = {"epsilon": eps}
        for key, res in (("chi2", rc), ("eo", re)):
            if res is not None:
                rec[key] = {
                    "best_utility": res.best_utility,
                    "best_mechanism": res.best_mechanism,
                    "feasible_count": res.feasible_count,
                    "evaluated_count": res.evaluated_count,
                    "constraint_values_at_best": res.constraint_values_at_best,
                    "no_feasible_point": res.no_feasible_point,
                }
        records.append(rec)
    return "\n".join(lines) + "\n", records


def dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, default=_json_default) + "\n")
