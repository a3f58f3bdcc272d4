"""Experiment runner: flat key = value configs in named sections, subcommands
for each experiment kind, CSV/JSON artifacts.

Reruns with the same config and seed produce byte-identical files; the
wall-clock column required by the CSV schema is therefore written as 0 in
artifacts (timings go to stderr) so that determinism holds at the byte level.
"""

import argparse
import configparser
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .groups import group_from_config
from .measures import (
    ProductMeasure,
    SignedCylinderMeasure,
    entropy_cell,
    pressure_domination_check,
    variational_gap,
    variational_objective,
    variational_search,
)
from .pressure import (
    DEFAULT_BUDGET,
    MapSpaceQuery,
    NEG_INF,
    Schedule,
    ScheduleCell,
    count_map_space,
    enumerate_map_space,
    evaluate_cell,
    good_index_set,
    log_partition_sum,
    summarize_schedule,
    transfer_cell,
    amenable_pressure,
)
from .shiftspace import (
    Alphabet,
    CoordinateMetric,
    Labeling,
    Observable,
    Subshift,
    WeightedWordMetric,
    rho2,
    rho_inf,
)
from .sofic import (
    cyclic_approximation,
    defect_report,
    quasi_tile,
    random_approximation,
    torus_approximation,
)
from . import transfer

KINDS = ("pressure", "entropy", "classical", "variational", "properties",
         "tile", "sofic-check", "membership")

PRESSURE_HEADER = "d,F_radius,delta,eps,mode,map_size,sep_size,log_sum,normalized,wall_ms"
MEASURE_HEADER = "mu_id,f_id,integral,pressure,margin,passed"


class ConfigError(ValueError):
    """Validation failure, naming the offending section and field."""

    def __init__(self, section, key, message):
        super().__init__(f"[{section}] {key}: {message}")
        self.section = section
        self.key = key


def fmt(x):
    """Decimal text with 12 significant digits; -inf keeps its literal."""
    if isinstance(x, float):
        if x == NEG_INF:
            return "-inf"
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def _round12(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == NEG_INF:
            return "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    return x


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

_SECTION_ORDER = ("group", "sofic", "subshift", "observable", "metric",
                  "schedule", "measure", "run", "output")


@dataclass
class ExperimentConfig:
    raw: dict                  # section -> {key: canonical text}
    group: object
    subshift: object
    observable: object
    metric: object
    kind: str
    seed: int

    def canonical_text(self):
        return serialize_config(self.raw)

    def config_hash(self):
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def serialize_config(raw):
    lines = []
    for section in _SECTION_ORDER:
        if section not in raw or not raw[section]:
            continue
        lines.append(f"[{section}]")
        for key in sorted(raw[section]):
            lines.append(f"{key} = {raw[section][key]}")
        lines.append("")
    return "\n".join(lines)


def _parse_ini(text):
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string(text)
    raw = {}
    for section in parser.sections():
        if section not in _SECTION_ORDER:
            raise ConfigError(section, "-", "unknown section")
        raw[section] = {k: " ".join(v.split()) for k, v in parser[section].items()}
    return raw


def _get(raw, section, key, default=None, required=False):
    value = raw.get(section, {}).get(key)
    if value is None:
        if required:
            raise ConfigError(section, key, "missing required field")
        return default
    return value


def _get_int(raw, section, key, default=None, required=False, minimum=None):
    text = _get(raw, section, key, None, required)
    if text is None:
        return default
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(section, key, f"not an integer: {text!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(section, key, f"must be >= {minimum}")
    return value


def _get_float(raw, section, key, default=None, required=False):
    text = _get(raw, section, key, None, required)
    if text is None:
        return default
    try:
        return float(text)
    except ValueError:
        raise ConfigError(section, key, f"not a number: {text!r}") from None


def _get_list(raw, section, key, cast, default=None, required=False):
    text = _get(raw, section, key, None, required)
    if text is None:
        return default
    try:
        return [cast(tok) for tok in text.split()]
    except ValueError:
        raise ConfigError(section, key, f"bad list: {text!r}") from None


def _parse_forbidden(group, text, section="subshift", key="forbidden"):
    patterns = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ConfigError(section, key, "pattern needs offsets : symbols")
        offs_text, syms_text = chunk.split(":", 1)
        try:
            shape = [group.parse_element(tok) for tok in offs_text.split()]
            symbols = [int(tok) for tok in syms_text.split()]
        except ValueError as exc:
            raise ConfigError(section, key, str(exc)) from None
        patterns.append((shape, symbols))
    return patterns


def load_config(path=None, text=None, kind=None, seed_override=None):
    """Parse and validate an experiment config, building the domain objects."""
    if text is None:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    raw = _parse_ini(text)

    gkind = _get(raw, "group", "kind", required=True)
    rank = _get_int(raw, "group", "rank")
    table = None
    table_text = _get(raw, "group", "table")
    if table_text is not None:
        table = [[int(tok) for tok in row.split()]
                 for row in table_text.split(";")]
    try:
        group = group_from_config(gkind, rank=rank, table=table)
    except ValueError as exc:
        raise ConfigError("group", "kind", str(exc)) from None

    k = _get_int(raw, "subshift", "alphabet", default=2, minimum=1)
    forbidden_text = _get(raw, "subshift", "forbidden", default="")
    forbidden = _parse_forbidden(group, forbidden_text) if forbidden_text else []
    try:
        subshift = Subshift(group, Alphabet(k), forbidden)
    except ValueError as exc:
        raise ConfigError("subshift", "forbidden", str(exc)) from None

    window_text = _get(raw, "observable", "window", default=None)
    table_vals = _get_list(raw, "observable", "table", float, default=None)
    if window_text is None and table_vals is None:
        observable = Observable.single_site(group, [0.0] * k)
    else:
        if window_text is None or table_vals is None:
            raise ConfigError("observable", "window",
                              "window and table must be given together")
        try:
            window = [group.parse_element(tok) for tok in window_text.split()]
            observable = Observable(group, Alphabet(k), window, table_vals)
        except ValueError as exc:
            raise ConfigError("observable", "table", str(exc)) from None

    mkind = _get(raw, "metric", "kind", default="coordinate-e")
    if mkind == "coordinate-e":
        metric = CoordinateMetric()
    elif mkind == "weighted-word":
        depth = _get_int(raw, "metric", "depth", default=3, minimum=1)
        metric = WeightedWordMetric(group, depth)
    else:
        raise ConfigError("metric", "kind", f"unknown metric {mkind!r}")

    run_kind = _get(raw, "run", "kind", default=kind)
    if run_kind is None:
        raise ConfigError("run", "kind", "missing required field")
    if kind is not None and run_kind != kind:
        raise ConfigError("run", "kind",
                          f"config says {run_kind!r}, subcommand is {kind!r}")
    if run_kind not in KINDS:
        raise ConfigError("run", "kind", f"unknown kind {run_kind!r}")
    if run_kind == "classical" and not group.amenable:
        raise ConfigError("run", "kind", "classical requires an amenable group")

    seed = seed_override if seed_override is not None \
        else _get_int(raw, "run", "seed", default=0)
    return ExperimentConfig(raw=raw, group=group, subshift=subshift,
                            observable=observable, metric=metric,
                            kind=run_kind, seed=seed)


# ---------------------------------------------------------------------------
# sofic family and schedule construction
# ---------------------------------------------------------------------------

def _sigma_factory(config):
    raw = config.raw
    family = _get(raw, "sofic", "family", default="cyclic")
    group = config.group
    if family == "cyclic":
        if group.kind != "integer-line":
            raise ConfigError("sofic", "family", "cyclic requires integer-line")
        return lambda d, radius: cyclic_approximation(group, d, radius)
    if family == "torus":
        if group.kind != "integer-lattice":
            raise ConfigError("sofic", "family", "torus requires a lattice")

        def factory(d, radius):
            side = round(d ** (1.0 / group.rank))
            if side ** group.rank != d:
                raise ConfigError("sofic", "d_list",
                                  f"d={d} is not side^rank")
            return torus_approximation(group, side, radius)
        return factory
    if family == "random":
        if group.kind != "free":
            raise ConfigError("sofic", "family", "random requires a free group")
        return lambda d, radius: random_approximation(group, d, radius,
                                                      config.seed)
    raise ConfigError("sofic", "family", f"unknown family {family!r}")


def _build_schedule(config):
    raw = config.raw
    d_list = _get_list(raw, "sofic", "d_list", int, required=True)
    domain_radius = _get_int(raw, "sofic", "domain_radius", default=2, minimum=0)
    f_radii = _get_list(raw, "schedule", "f_radii", int, default=[1])
    deltas = _get_list(raw, "schedule", "deltas", float, default=[0.5])
    epsilons = _get_list(raw, "schedule", "epsilons", float, default=[0.5])
    tail = _get_float(raw, "schedule", "tail_fraction", default=0.5)
    for name, values in (("d_list", d_list), ("f_radii", f_radii),
                         ("deltas", deltas), ("epsilons", epsilons)):
        if not values:
            raise ConfigError("schedule", name, "list must be nonempty")
    for eps in epsilons:
        if eps <= 0:
            raise ConfigError("schedule", "epsilons", "eps must be > 0")
    for delta in deltas:
        if delta <= 0:
            raise ConfigError("schedule", "deltas", "delta must be > 0")
    cells = []
    for radius in f_radii:
        for delta in deltas:
            for eps in epsilons:
                for d in sorted(d_list):
                    cells.append(ScheduleCell(d=d, domain_radius=domain_radius,
                                              f_radius=radius, delta=delta,
                                              eps=eps))
    return Schedule(cells=tuple(cells), tail_fraction=tail)


def _sft_rule(config):
    text = _get(config.raw, "schedule", "sft_tolerance", default="delta-squared")
    if text == "delta-squared":
        return lambda delta: delta * delta
    try:
        fixed = float(text)
    except ValueError:
        raise ConfigError("schedule", "sft_tolerance",
                          f"expected delta-squared or a number: {text!r}") from None
    if not 0 <= fixed <= 1:
        raise ConfigError("schedule", "sft_tolerance", "must lie in [0, 1]")
    return lambda delta: fixed


def _budget(config):
    return _get_int(config.raw, "run", "budget", default=DEFAULT_BUDGET,
                    minimum=1)


# ---------------------------------------------------------------------------
# experiment bodies; each returns (rows, summary, ok)
# ---------------------------------------------------------------------------

def _estimate_row(est):
    return {
        "d": est.d, "F_radius": est.f_radius, "delta": est.delta,
        "eps": est.eps, "mode": est.mode, "map_size": est.map_size,
        "sep_size": est.separated_size, "log_sum": est.log_partition_sum,
        "normalized": est.normalized, "wall_ms": 0.0,
    }


def _run_cells_parallel(cells, evaluate, workers):
    if workers <= 1:
        return [evaluate(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(evaluate, cell) for cell in cells]
        return [f.result() for f in futures]


def _select_engine(config):
    engine = _get(config.raw, "schedule", "engine", default="auto")
    if engine not in ("auto", "enumerate", "transfer"):
        raise ConfigError("schedule", "engine", f"unknown engine {engine!r}")
    return engine


def _cell_engine(config, cell, engine, sft_rule):
    """Pick enumerate vs transfer per cell under the auto policy."""
    if engine != "auto":
        return engine
    k = config.subshift.alphabet.size
    cyclic = _get(config.raw, "sofic", "family", default="cyclic") == "cyclic"
    exactable = (cyclic and isinstance(config.metric, CoordinateMetric)
                 and sft_rule(cell.delta) == 0.0 and 0 < cell.eps <= 1)
    too_big = k ** cell.d > _budget(config)
    return "transfer" if (exactable and too_big) else "enumerate"


def run_pressure(config, workers):
    schedule = _build_schedule(config)
    sft_rule = _sft_rule(config)
    engine = _select_engine(config)
    factory = _sigma_factory(config)
    group = config.group
    budget = _budget(config)

    membership_mode = "model" if isinstance(config.metric, CoordinateMetric) \
        else "generic"

    def evaluate(cell):
        mode = _cell_engine(config, cell, engine, sft_rule)
        if mode == "transfer":
            return transfer_cell(config.subshift, config.observable, cell.d,
                                 cell.f_radius, cell.delta, cell.eps)
        sigma = factory(cell.d, cell.domain_radius)
        query = MapSpaceQuery(
            F=group.ball(cell.f_radius), delta=cell.delta, eps=cell.eps,
            sigma=sigma, metric=config.metric, mode=membership_mode,
            sft_tolerance=sft_rule(cell.delta))
        return evaluate_cell(query, config.subshift, config.observable,
                             budget=budget)

    estimates = _run_cells_parallel(schedule.cells, evaluate, workers)
    summary = summarize_schedule(schedule, estimates)
    rows = [_estimate_row(est) for est in estimates]
    ok = all(est.separated_size <= est.map_size for est in estimates)
    return rows, {"summary": _round12(summary["summary"]),
                  "rule": summary["rule"]}, ok


def _measure_observables(config):
    """The default test family: every single-site indicator plus the
    configured potential."""
    k = config.subshift.alphabet.size
    group = config.group
    obs = []
    for symbol in range(k):
        table = [1.0 if s == symbol else 0.0 for s in range(k)]
        obs.append(Observable(group, Alphabet(k), (group.identity,), table))
    obs.append(config.observable)
    return obs


def _parse_products(config):
    text = _get(config.raw, "measure", "product", default="")
    out = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if chunk:
            out.append(ProductMeasure([float(tok) for tok in chunk.split()]))
    return out


def run_entropy(config, workers):
    products = _parse_products(config)
    if not products:
        raise ConfigError("measure", "product", "entropy needs a measure")
    mu = products[0]
    delta_text = _get(config.raw, "measure", "entropy_delta", default="0.05")
    schedule = _build_schedule(config)
    sft_rule = _sft_rule(config)
    factory = _sigma_factory(config)
    group = config.group
    budget = _budget(config)
    observables = _measure_observables(config)

    def evaluate(cell):
        sigma = factory(cell.d, cell.domain_radius)
        return entropy_cell(mu, config.subshift, group.ball(cell.f_radius),
                            observables, delta_text, cell.eps, sigma,
                            config.metric,
                            sft_tolerance=sft_rule(float(delta_text)),
                            budget=budget)

    estimates = _run_cells_parallel(schedule.cells, evaluate, workers)
    rows = []
    for est in estimates:
        rows.append({
            "d": est.d, "F_radius": est.f_radius, "delta": est.delta,
            "eps": est.eps, "mode": "model", "map_size": est.count,
            "sep_size": est.count,
            "log_sum": NEG_INF if est.count == 0 else math.log(est.count),
            "normalized": est.normalized, "wall_ms": 0.0,
        })
    best = max((e.normalized for e in estimates), default=NEG_INF)
    return rows, {"summary": _round12(best)}, True


def run_classical(config, workers):
    n_max = _get_int(config.raw, "run", "n_max", default=10, minimum=1)
    result = amenable_pressure(config.subshift, config.observable, n_max,
                               budget=_budget(config))
    rows = []
    for n, value in result.curve:
        F = config.group.folner(n)
        rows.append({"n": n, "F_size": len(F),
                     "log_sum": value * len(F), "normalized": value})
    summary = {"exact": _round12(result.exact) if not math.isnan(result.exact)
               else "nan"}
    if result.curve:
        summary["final"] = _round12(result.curve[-1][1])
    return rows, summary, True


def _pressure_oracle(config):
    """Pressure callback for variational and membership experiments."""
    if config.group.kind == "integer-line":
        def oracle(obs):
            system = transfer.build_transfer_system(config.subshift, obs)
            return transfer.log_perron(system.weighted)
        return oracle
    raise ConfigError("run", "kind",
                      "variational/membership oracle needs the integer line")


def run_variational(config, workers):
    families = _get(config.raw, "measure", "families",
                    default="product").split()
    budget = _get_int(config.raw, "measure", "grids", default=200, minimum=1)
    oracle = _pressure_oracle(config)
    pressure = oracle(config.observable)
    rows = []
    ok = True
    best_overall = NEG_INF
    for family in families:
        mu, value = variational_search(config.subshift, config.observable,
                                       family, budget)
        gap = variational_gap(pressure, value)
        passed = gap.gap >= -5e-3
        ok = ok and passed
        best_overall = max(best_overall, value)
        rows.append({"mu_id": f"best-{family}", "f_id": "f",
                     "integral": value, "pressure": pressure,
                     "margin": gap.gap, "passed": passed})
    for idx, mu in enumerate(_parse_products(config)):
        value = variational_objective(mu, config.observable) \
            if mu.supported_on(config.subshift) else NEG_INF
        margin = pressure - value
        passed = margin >= -5e-3
        ok = ok and passed
        rows.append({"mu_id": f"product-{idx}", "f_id": "f",
                     "integral": value, "pressure": pressure,
                     "margin": margin, "passed": passed})
    return rows, {"pressure": _round12(pressure),
                  "best": _round12(best_overall),
                  "gap": _round12(pressure - best_overall)}, ok


def run_tile(config, workers):
    raw = config.raw
    d_list = _get_list(raw, "sofic", "d_list", int, required=True)
    domain_radius = _get_int(raw, "sofic", "domain_radius", default=2, minimum=0)
    factory = _sigma_factory(config)
    shapes_text = _get(raw, "run", "shapes", required=True)
    group = config.group
    shapes = []
    for chunk in shapes_text.split("|"):
        chunk = chunk.strip()
        if chunk:
            shapes.append(tuple(group.parse_element(tok)
                                for tok in chunk.split()))
    tau = _get_float(raw, "run", "tile_tau", default=0.0)
    eta = _get_float(raw, "run", "tile_eta", default=0.2)
    rows = []
    ok = True
    for d in d_list:
        sigma = factory(d, domain_radius)
        tiling = quasi_tile(sigma, shapes, range(d), tau, eta)
        bound = (1 - tau - eta) * d
        meets = len(tiling.covered) >= bound
        for k, (shape, centers) in enumerate(zip(tiling.shapes,
                                                 tiling.centers)):
            rows.append({"d": d, "shape_index": k, "shape_size": len(shape),
                         "centers": len(centers),
                         "coverage": tiling.coverage,
                         "meets_bound": meets})
        ok = ok and meets
    return rows, {"tau": tau, "eta": eta}, ok


def run_sofic_check(config, workers):
    raw = config.raw
    d_list = _get_list(raw, "sofic", "d_list", int, required=True)
    domain_radius = _get_int(raw, "sofic", "domain_radius", default=2, minimum=0)
    radius = _get_int(raw, "run", "check_radius", default=1, minimum=0)
    threshold = _get_float(raw, "run", "defect_threshold", default=0.05)
    factory = _sigma_factory(config)
    rows = []
    ok = True
    for d in d_list:
        sigma = factory(d, domain_radius)
        report = defect_report(sigma, config.group.ball(radius))
        passed = report.max_defect() <= threshold
        ok = ok and passed
        rows.append({"d": d, "radius": radius, "seed": config.seed,
                     "mult_defect": report.multiplicativity_defect,
                     "free_defect": report.freeness_defect,
                     "identity_defect": report.identity_defect,
                     "passed": passed})
    return rows, {"threshold": threshold}, ok


def run_membership(config, workers):
    raw = config.raw
    oracle = _pressure_oracle(config)
    group = config.group
    k = config.subshift.alphabet.size
    window_text = _get(raw, "measure", "cylinder_window", default=None)
    window = [group.parse_element(tok) for tok in window_text.split()] \
        if window_text else group.ball(1)
    measures = []
    for idx, mu in enumerate(_parse_products(config)):
        measures.append((f"product-{idx}",
                         SignedCylinderMeasure.from_product(group, window, mu)))
    weights_text = _get(raw, "measure", "cylinder_weights", default=None)
    if weights_text:
        weights = [float(tok) for tok in weights_text.split()]
        measures.append(("cylinder",
                         SignedCylinderMeasure(group, Alphabet(k), window,
                                               weights)))
    if not measures:
        raise ConfigError("measure", "product", "membership needs measures")
    tests = _measure_observables(config) + \
        [Observable.constant(group, Alphabet(k), 1.0)]
    rows = []
    ok = True
    for mu_id, mu in measures:
        report = pressure_domination_check(mu, tests, oracle)
        ok = ok and report.passed
        for r in report.rows:
            rows.append({"mu_id": mu_id, "f_id": f"{r.f_id}*{fmt(r.scale)}",
                         "integral": r.integral, "pressure": r.pressure,
                         "margin": r.margin, "passed": r.passed})
        rows.append({"mu_id": mu_id, "f_id": "diagnostics",
                     "integral": report.total_mass,
                     "pressure": report.invariance_defect,
                     "margin": report.min_atom, "passed": report.passed})
    return rows, {"measures": len(measures)}, ok


def observable_oscillation(g, metric, radius):
    """Largest table spread within a radius-ball class of the pseudometric:
    patterns agreeing on every coordinate whose single-site disagreement
    already costs at least `radius`."""
    group = g.group
    if isinstance(metric, CoordinateMetric):
        constrained = {group.identity} if radius <= 1 else set()
    else:
        constrained = set()
        for n, s in enumerate(metric.elements):
            if 2.0 ** -(n + 1) >= radius:
                constrained.add(group.inverse(s))
    positions = [j for j, w in enumerate(g.window) if w in constrained]
    k = g.alphabet.size
    classes = {}
    m = len(g.window)
    for flat in range(k ** m):
        digits = []
        rest = flat
        for _ in range(m):
            digits.append(rest % k)
            rest //= k
        digits.reverse()
        key = tuple(digits[p] for p in positions)
        lo, hi = classes.get(key, (math.inf, -math.inf))
        value = float(g.table[flat])
        classes[key] = (min(lo, value), max(hi, value))
    return max((hi - lo for lo, hi in classes.values()), default=0.0)


def run_properties(config, workers):
    """Cell-level property battery on a shared separated set."""
    raw = config.raw
    d_list = _get_list(raw, "sofic", "d_list", int, required=True)
    domain_radius = _get_int(raw, "sofic", "domain_radius", default=2, minimum=0)
    delta = _get_list(raw, "schedule", "deltas", float, default=[0.5])[0]
    factory = _sigma_factory(config)
    group = config.group
    budget = _budget(config)
    f = config.observable
    k = config.subshift.alphabet.size
    g_table = [1.0 if s == min(1, k - 1) else 0.0 for s in range(k)]
    g = Observable(group, Alphabet(k), (group.identity,), g_table)
    rows = []

    def record(name, d, lhs, rhs, passed):
        rows.append({"property": name, "d": d, "lhs": lhs, "rhs": rhs,
                     "passed": bool(passed)})

    for d in d_list:
        sigma = factory(d, domain_radius)
        F = group.ball(1)
        query = MapSpaceQuery(F=F, delta=delta, eps=0.5, sigma=sigma,
                              metric=config.metric, mode="model"
                              if isinstance(config.metric, CoordinateMetric)
                              else "generic", sft_tolerance=0.0)
        members = list(enumerate_map_space(query, config.subshift,
                                           budget=budget))
        if not members:
            record("nonempty", d, 0, 1, False)
            continue
        E = members
        base = log_partition_sum(E, f)

        # (i) zero potential reduces to the separated-count entropy
        zero = Observable(group, Alphabet(k), (group.identity,), [0.0] * k)
        lps_zero = log_partition_sum(E, zero)
        record("zero-potential-entropy", d, lps_zero, math.log(len(E)),
               abs(lps_zero - math.log(len(E))) <= 1e-12)

        # (ii) constant shift, exact
        c = 0.7
        shifted = log_partition_sum(E, f.plus_constant(c))
        record("constant-shift", d, abs((shifted - base) / d - c), 1e-12,
               abs((shifted - base) / d - c) <= 1e-12)

        # (iv) monotone in the potential
        bigger = Observable(group, Alphabet(k), f.window,
                            f.table + np.linspace(0.0, 0.5, f.table.size))
        record("monotone", d, base, log_partition_sum(E, bigger),
               base <= log_partition_sum(E, bigger) + 1e-12)

        # (iii) subadditivity
        lps_g0 = log_partition_sum(E, g)
        lps_sum = log_partition_sum(E, f.combine(g, 1.0, 1.0))
        record("subadditive", d, lps_sum, base + lps_g0,
               lps_sum <= base + lps_g0 + 1e-9)

        # (vi) sup-norm Lipschitz at cell level
        diff_norm = f.combine(g, 1.0, -1.0).sup_norm
        lhs_vi = abs(base - lps_g0) / d
        record("sup-norm-lipschitz", d, lhs_vi, diff_norm,
               lhs_vi <= diff_norm + 1e-12)

        # (vii) Holder convexity over the p grid
        holder_ok = True
        lps_f = base
        lps_g = log_partition_sum(E, g)
        worst = -math.inf
        for p in [x / 10 for x in range(1, 10)]:
            mix = log_partition_sum(E, f.combine(g, p, 1 - p))
            gap = mix - (p * lps_f + (1 - p) * lps_g)
            worst = max(worst, gap)
            holder_ok = holder_ok and gap <= 1e-9
        record("holder-convexity", d, worst, 1e-9, holder_ok)

        # (ix) scaling inequalities
        scale_ok = True
        for cscale in (0.5, 2.0, 3.0):
            lhs = log_partition_sum(E, f.scaled(cscale))
            rhs = cscale * lps_f
            good = lhs <= rhs + 1e-9 if cscale >= 1 else lhs >= rhs - 1e-9
            scale_ok = scale_ok and good
        record("scaling", d, 0.0, 1e-9, scale_ok)

        # (x) |cell(f)| <= cell(|f|)
        record("abs-bound", d, abs(base), log_partition_sum(E, f.abs()) + 1e-12,
               abs(base) <= log_partition_sum(E, f.abs()) + 1e-12)

        # (viii) cocycle comparison at schedule scale
        s = group.generators()[0]
        cocycle = f.combine(g.shifted(s).combine(g, 1.0, -1.0), 1.0, 1.0)
        lhs = abs(log_partition_sum(E, cocycle) - base) / d
        osc = observable_oscillation(g, config.metric, math.sqrt(delta))
        bound = 2 * osc + 2 * g.sup_norm * len(F) * delta
        record("cocycle-bound", d, lhs, bound, lhs <= bound + 1e-12)

        # inclusion and inequality diagnostics
        tighter = MapSpaceQuery(F=F, delta=delta / 2, eps=0.5, sigma=sigma,
                                metric=config.metric, mode=query.mode,
                                sft_tolerance=0.0)
        n_tight = count_map_space(tighter, config.subshift, budget=budget)
        record("monotone-delta", d, n_tight, len(E), n_tight <= len(E))
        widerF = MapSpaceQuery(F=group.ball(2), delta=delta, eps=0.5,
                               sigma=sigma, metric=config.metric,
                               mode=query.mode, sft_tolerance=0.0)
        n_widerF = count_map_space(widerF, config.subshift, budget=budget)
        record("monotone-F", d, n_widerF, len(E), n_widerF <= len(E))
        lam = good_index_set(members[0], F, delta, config.metric)
        record("good-index-bound", d, (1 - len(F) * delta) * d, len(lam),
               len(lam) >= (1 - len(F) * delta) * d - 1e-9)
        rng = np.random.default_rng(config.seed)
        pair_ok = True
        for _ in range(8):
            b1 = Labeling(sigma, rng.integers(0, k, size=d))
            b2 = Labeling(sigma, rng.integers(0, k, size=d))
            r2, ri = rho2(b1, b2, config.metric), rho_inf(b1, b2, config.metric)
            pair_ok = pair_ok and (r2 <= ri + 1e-12 <= 1 + 2e-12)
        record("rho2-le-rhoinf", d, 0.0, 1.0, pair_ok)

    ok = all(r["passed"] for r in rows)
    return rows, {"checks": len(rows)}, ok


_RUNNERS = {
    "pressure": run_pressure,
    "entropy": run_entropy,
    "classical": run_classical,
    "variational": run_variational,
    "properties": run_properties,
    "tile": run_tile,
    "sofic-check": run_sofic_check,
    "membership": run_membership,
}


@dataclass
class ResultBundle:
    kind: str
    rows: list
    summary: dict
    provenance: dict
    ok: bool


def run(config, workers=1):
    """Dispatch the configured experiment; returns a ResultBundle."""
    rows, summary, ok = _RUNNERS[config.kind](config, workers)
    provenance = {"config_hash": config.config_hash(), "seed": config.seed,
                  "version": __version__, "kind": config.kind}
    return ResultBundle(kind=config.kind, rows=rows, summary=summary,
                        provenance=provenance, ok=bool(ok))


def _csv_text(rows, kind):
    if kind in ("pressure", "entropy"):
        header = PRESSURE_HEADER
    elif kind in ("variational", "membership"):
        header = MEASURE_HEADER
    elif rows:
        header = ",".join(rows[0].keys())
    else:
        header = ""
    lines = [header]
    columns = header.split(",") if header else []
    for row in rows:
        lines.append(",".join(fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def emit(bundle, out_dir, fmt_kind="csv"):
    """Write the bundle's artifacts; byte-identical across reruns."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if fmt_kind == "csv":
        path = os.path.join(out_dir, f"{bundle.kind}_cells.csv")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(_csv_text(bundle.rows, bundle.kind))
        paths.append(path)
    report = {
        "provenance": bundle.provenance,
        "summary": {key: _round12(v) for key, v in bundle.summary.items()},
        "ok": bool(bundle.ok),
        "cells": [{key: _round12(v) for key, v in row.items()}
                  for row in bundle.rows],
    }
    path = os.path.join(out_dir, f"{bundle.kind}_report.json")
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")
    paths.append(path)
    return paths


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sofic-pressure",
        description="pressure, entropy, and variational experiments on "
                    "subshifts under sofic approximations")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default="out")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    args = parser.parse_args(argv)
    try:
        config = load_config(path=args.config, kind=args.kind,
                             seed_override=args.seed)
        bundle = run(config, workers=args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    paths = emit(bundle, args.out, args.format)
    for path in paths:
        print(path, file=sys.stderr)
    print(json.dumps({"summary": bundle.summary, "ok": bundle.ok},
                     sort_keys=True))
    return 0 if bundle.ok else 1


if __name__ == "__main__":
    sys.exit(main())
