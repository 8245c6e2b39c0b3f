"""Seeded replicate loops for the simulation studies, CSV output and summaries.

Replicate ``r`` of a run with seed ``s`` always draws from the stream
``replicate_rng(s, r)``, so results do not depend on how replicates are
scheduled across worker processes.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import bandits, clustering, core, regression, samplers, sets, topology

EXPERIMENTS = ("core-check", "kmeans", "bandits", "regression", "sets", "tda")

DEFAULTS = {
    "core-check": {"n": 2400, "delta": 0.05, "df": 3.0, "mu": 5.0},
    "kmeans": {"n": 1000, "k": 3, "k_groups": 10, "max_iter": 100, "tol": 1e-6},
    "bandits": {"arm_means": (7.0, 8.0), "df": 3.0, "horizon": 750, "warmup": 40, "record_every": 1},
    "regression": {"n": 1000, "sigma": 9.0, "xi": 1.0, "nu": 3.0, "kappa": 0.0,
                   "bandwidth": 0.2, "k_groups": 12, "grid_size": 501, "domain": (0.0, 5.0)},
    "sets": {"n": 2000, "lambda": 0.01, "k_groups": 20},
    "tda": {"n": 600, "k_groups": 6, "threshold": 2.2},
}

CSV_COLUMNS = ("experiment", "replicate", "method", "metric", "value")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


@dataclass(frozen=True)
class ReplicateRecord:
    experiment: str
    replicate: int
    method: str
    metric: str
    value: float


@dataclass
class ExperimentConfig:
    experiment: str
    replicates: int = 100
    seed: int = 0
    parallelism: int = 1
    params: dict = field(default_factory=dict)
    out: str | None = None
    plot: str | None = None

    def resolved(self) -> dict:
        """Built-in defaults overridden by ``params``, validated."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown {self.experiment!r}, expected one of {', '.join(EXPERIMENTS)}")
        unknown = set(self.params) - set(DEFAULTS[self.experiment])
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: not a parameter of {self.experiment}")
        if self.replicates < 1:
            raise ConfigError("replicates: must be >= 1")
        if self.parallelism < 1:
            raise ConfigError("parallelism: must be >= 1")
        p = {**DEFAULTS[self.experiment], **self.params}
        _validate(self.experiment, p)
        return p


def _require(ok: bool, name: str, message: str):
    if not ok:
        raise ConfigError(f"{name}: {message}")


def _validate(experiment: str, p: dict) -> None:
    if "k_groups" in p:
        _require(int(p["k_groups"]) >= 1, "k_groups", "must be >= 1")
        _require(int(p["k_groups"]) <= int(p["n"]), "k_groups", "must not exceed n")
    if experiment == "core-check":
        _require(0 < p["delta"] < 1, "delta", "must lie in (0, 1)")
        _require(p["df"] > 2, "df", "must exceed 2 (finite variance)")
        _require(p["n"] >= core.choose_k(p["delta"]), "n", "must be at least the number of groups")
    elif experiment == "kmeans":
        _require(1 <= p["k"] <= min(6, p["n"]), "k", "must lie in 1..min(6, n)")
    elif experiment == "bandits":
        _require(len(p["arm_means"]) >= 1, "arm_means", "need at least one arm")
        _require(p["horizon"] >= p["warmup"] >= len(p["arm_means"]), "warmup",
                 "need horizon >= warmup >= number of arms")
        _require(p["df"] > 2, "df", "must exceed 2 (finite variance)")
        _require(p["record_every"] >= 1, "record_every", "must be >= 1")
    elif experiment == "regression":
        _require(p["sigma"] > 0, "sigma", "must be positive")
        _require(p["xi"] > 0, "xi", "must be positive")
        _require(p["nu"] > 1, "nu", "must exceed 1")
        _require(p["bandwidth"] > 0, "bandwidth", "must be positive")
        _require(p["grid_size"] >= 2, "grid_size", "must be >= 2")
    elif experiment == "sets":
        _require(0 <= p["lambda"] <= 1, "lambda", "must lie in [0, 1]")
    elif experiment == "tda":
        _require(p["threshold"] > 0, "threshold", "must be positive")
        # n above the Rips cap is a resource error raised by the topology module


# ---------------------------------------------------------------------------
# One replicate per experiment. Each returns (method, metric, value) triples.


def _core_check(rng, p):
    n, K = int(p["n"]), core.choose_k(p["delta"])
    x = samplers.sample_student_rewards(p["mu"], p["df"], n, rng)
    groups = core.partition_indices(n, K, rng)
    means = np.array([x[g].mean() for g in groups])
    # E d^2(mu_1, mu) for a group mean of n // K Student draws
    scale = math.sqrt(p["df"] / (p["df"] - 2) / (n // K))
    selected = means[core.select_index(core.CandidatePool(means, core.absolute)).selected_index]
    exact, _ = core.minimize_on_line(means)
    err_sel, err_exact = abs(selected - p["mu"]), abs(exact - p["mu"])
    return [
        ("gros_exact", "abs_error", err_exact),
        ("gros_exact", "exceeds_4sd", float(err_exact > 4 * scale)),
        ("gros_selected", "abs_error", err_sel),
        ("gros_selected", "exceeds_6sd", float(err_sel > 6 * scale)),
        ("mean", "abs_error", abs(x.mean() - p["mu"])),
    ]


def _kmeans(rng, p):
    X, labels = samplers.sample_student_mixture(int(p["n"]), rng)
    init = clustering.initial_centers(X, int(p["k"]), rng)
    plain = clustering.kmeans(X, int(p["k"]), init, int(p["max_iter"]), p["tol"], rng)
    robust = clustering.robust_kmeans(X, int(p["k"]), int(p["k_groups"]), init, int(p["max_iter"]), p["tol"], rng)
    return [
        ("kmeans", "error", clustering.classification_error(labels, plain.assignments, int(p["k"]))),
        ("robustkm", "error", clustering.classification_error(labels, robust.assignments, int(p["k"]))),
    ]


def _bandits(rng, p):
    env = bandits.BanditEnv.student(p["arm_means"], p["df"])
    T, every = int(p["horizon"]), int(p["record_every"])
    steps = sorted(set(range(every, T + 1, every)) | {T})
    out = []
    for policy in ("ucb", "rucb"):
        run = bandits.simulate_run(env, policy, T, int(p["warmup"]), rng)
        for t in steps:
            out.append((policy, f"cumulative_reward@{t}", run.cumulative_reward[t - 1]))
            out.append((policy, f"pseudo_regret@{t}", run.pseudo_regret[t - 1]))
    return out


def _regression(rng, p):
    n = int(p["n"])
    noise = samplers.SkewTParams(p["sigma"], p["nu"], p["xi"], p["kappa"])
    a, b = p["domain"]
    nodes = regression.uniform_grid(a, b, int(p["grid_size"]))
    x = rng.uniform(a, b, n)
    y = regression.regression_function(x) + samplers.sample_skew_t_noise(n, noise, rng)
    nw = regression.nw_estimate(x, y, p["bandwidth"], nodes)
    fit = regression.ranw_fit(x, y, int(p["k_groups"]), p["bandwidth"], nodes, rng)
    return [
        ("nw", "d2_error", regression.d2_error(nw)),
        ("ranw_global", "d2_error", regression.d2_error(fit.global_estimate)),
        ("ranw_pointwise", "d2_error", regression.d2_error(fit.pointwise)),
    ]


def _sets(rng, p):
    X, _ = samplers.sample_ring_mixture(int(p["n"]), p["lambda"], rng)
    fit = sets.rchull_fit(X, int(p["k_groups"]), rng)
    return [
        ("chull", "hausdorff", sets.hausdorff_to_unit_disk(fit.full.polygon)),
        ("rchull", "hausdorff", sets.hausdorff_to_unit_disk(fit.selected.polygon)),
    ]


def _tda(rng, p):
    S = samplers.sample_circle_scenarios(rng, n=int(p["n"]))
    thr = p["threshold"]
    base = topology.rips_persistence(S.baseline, thr)
    out = []
    for s, X in ((1, S.scenario1), (2, S.scenario2)):
        plain = topology.rips_persistence(X, thr)
        robust = topology.robust_diagram(X, int(p["k_groups"]), thr, rng)
        out.append((f"plain_s{s}", "w1_to_baseline", topology.diagram_distance(plain, base)))
        out.append((f"robust_s{s}", "w1_to_baseline", topology.diagram_distance(robust.selected, base)))
    return out


_DRIVERS = {"core-check": _core_check, "kmeans": _kmeans, "bandits": _bandits,
            "regression": _regression, "sets": _sets, "tda": _tda}


def run_replicate(experiment: str, params: dict, seed: int, replicate: int) -> list[ReplicateRecord]:
    rng = samplers.replicate_rng(seed, replicate)
    return [ReplicateRecord(experiment, replicate, m, k, float(v))
            for m, k, v in _DRIVERS[experiment](rng, params)]


def _run_chunk(args):
    experiment, params, seed, reps = args
    return [rec for r in reps for rec in run_replicate(experiment, params, seed, r)]


def run_experiment(config: ExperimentConfig) -> list[ReplicateRecord]:
    """All records of a run, sorted by (replicate, method) with a stable sort."""
    params = config.resolved()
    reps = list(range(config.replicates))
    if config.parallelism == 1:
        records = _run_chunk((config.experiment, params, config.seed, reps))
    else:
        chunks = [(config.experiment, params, config.seed, reps[i::config.parallelism])
                  for i in range(config.parallelism)]
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            records = [rec for part in pool.map(_run_chunk, chunks) for rec in part]
    # stable sort on (replicate, method) keeps each driver's metric order
    records.sort(key=lambda r: (r.replicate, r.method))
    return records


def records_to_csv(records, path=None) -> str:
    """CSV text with fixed column order, shortest round-trip floats and LF endings."""
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r.experiment, r.replicate, r.method, r.metric, repr(float(r.value))])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def records_from_csv(source) -> list[ReplicateRecord]:
    text = Path(source).read_text() if not isinstance(source, str) or "\n" not in source else source
    return [ReplicateRecord(r["experiment"], int(r["replicate"]), r["method"], r["metric"], float(r["value"]))
            for r in csv.DictReader(io.StringIO(text))]


# ---------------------------------------------------------------------------
# Summaries


@dataclass(frozen=True)
class SummaryRow:
    method: str
    metric: str
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float


def _grouped(records) -> dict[tuple[str, str], np.ndarray]:
    groups: dict[tuple[str, str], list[float]] = {}
    for r in records:
        groups.setdefault((r.method, r.metric), []).append(r.value)
    return {k: np.array(v) for k, v in groups.items()}


def summarize(records, plot: str | Path | None = None) -> list[SummaryRow]:
    """Five-number summary and mean per (method, metric).

    Quartiles interpolate linearly between order statistics. With ``plot``,
    an SVG is written: box plots per method, or mean reward curves for the
    bandit experiment.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    rows = []
    for (method, metric), v in _grouped(records).items():
        q = np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
        rows.append(SummaryRow(method, metric, len(v), *map(float, q), float(v.mean())))
    if plot is not None:
        if records[0].experiment == "bandits":
            plot_bandit_curves(records, plot)
        else:
            plot_boxes(records, plot)
    return rows


def format_summary(rows) -> str:
    header = f"{'method':<16}{'metric':<24}{'n':>6}{'min':>11}{'q1':>11}{'median':>11}{'q3':>11}{'max':>11}{'mean':>11}"
    lines = [header]
    for r in rows:
        lines.append(f"{r.method:<16}{r.metric:<24}{r.count:>6}" + "".join(
            f"{x:>11.4g}" for x in (r.min, r.q1, r.median, r.q3, r.max, r.mean)))
    return "\n".join(lines)


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "gros"
    plt.rcParams["svg.fonttype"] = "path"
    return plt


def plot_boxes(records, path):
    """One panel per metric, one box per method, methods in first-seen order."""
    plt = _figure()
    data = _grouped(records)
    metrics = list(dict.fromkeys(m for _, m in data))
    fig, axes = plt.subplots(1, len(metrics), figsize=(4.5 * len(metrics), 4), squeeze=False)
    boxes = []
    for ax, metric in zip(axes[0], metrics):
        methods = [m for m, k in data if k == metric]
        bp = ax.boxplot([data[(m, metric)] for m in methods], whis=1.5)
        ax.set_xticks(range(1, len(methods) + 1), methods)
        ax.set_ylabel(metric)
        boxes.extend(bp["boxes"])
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return len(boxes)


def plot_bandit_curves(records, path):
    """Mean reward per round (cumulative reward / t) for each policy."""
    plt = _figure()
    curves: dict[str, dict[int, list[float]]] = {}
    for r in records:
        name, _, step = r.metric.partition("@")
        if name == "cumulative_reward":
            curves.setdefault(r.method, {}).setdefault(int(step), []).append(r.value)
    fig, ax = plt.subplots(figsize=(7, 4))
    for method, by_t in curves.items():
        t = np.array(sorted(by_t))
        ax.plot(t, [np.mean(by_t[s]) / s for s in t], "--", label=method.upper())
    ax.set_xlabel("t")
    ax.set_ylabel("mean reward per round")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------------------
# Flat key = value config files


def _parse_value(text: str):
    text = text.strip()
    if "," in text:
        return tuple(_parse_value(t) for t in text.split(",") if t.strip())
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def preset_names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("gros.presets").iterdir() if p.name.endswith(".cfg"))


def read_config_file(source) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. ``source`` is a path or preset name."""
    path = Path(source)
    if not path.exists():
        preset = resources.files("gros.presets") / f"{source}.cfg"
        if not preset.is_file():
            raise ConfigError(f"config: no file or preset named {source!r}")
        text = preset.read_text()
    else:
        text = path.read_text()
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {lineno}: expected key = value")
        values[key.strip().replace("-", "_")] = _parse_value(value)
    return values
