"""Sweep runner: generate a point set per size, run every enabled check, write reports.

Output layout under ``out_dir``::

    report.csv          one row per check, fixed columns (CSV_FIELDS)
    size_<n>.json       full per-size bundle (config digest, code version, reports)
    points_<n>.json     the generated point set
    scaling.json        log-log fits of the measured series

All outputs are deterministic for a fixed config; the ``seconds`` column is
left blank unless ``timings`` is switched on.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb, isqrt
from pathlib import Path

import numpy as np

from . import __version__
from .census import (
    align_line_to_x_axis,
    census as run_census,
    cs_bound_report,
    translate_line_to_origin,
)
from .constructions import grid, line_plus_bulk, random_set, unbalanced_lattice
from .energy import (
    HOLDS,
    MEASURED,
    UNDECIDED,
    VIOLATED,
    ConvexFn,
    convex_curve_family,
    difference_set,
    dyadic_decomposition_check,
    holder_chain_check,
    li_inequality_check,
    lr_ratio_report,
    pseudoline_check,
    rich_containment_check,
)
from .exact import CanonicalLine, PointSet, metric_name, scalar, scalar_str
from .hyperbolas import (
    build_family,
    coincidence_structure,
    incidence_bound,
    incidences,
    max_multiplicity_class,
    pseudoparabola_check,
)
from .intervals import DEFAULT_PRECISION, PRECISION_CAP, IntervalValue
from .stats import bipartite_distinct, distinct_distances, max_line_richness, product_set_count

log = logging.getLogger(__name__)

CSV_FIELDS = ["check_name", "metric", "n", "m", "lhs", "rhs_lo", "rhs_hi", "verdict", "seconds"]
SKIPPED = "SKIPPED"
GENERATORS = ("grid", "unbalanced", "random", "line_plus_bulk")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    generator: dict = field(default_factory=lambda: {"name": "grid"})
    metric: str = "euclidean"
    kappa: str | None = None
    sizes: list = field(default_factory=lambda: [9, 16, 25, 36])
    seed: int = 0
    checks: dict = field(default_factory=lambda: {"stats": True, "census": True, "family": True, "energy": True})
    out_dir: str = "out"
    precision_bits: int = DEFAULT_PRECISION
    precision_cap: int = PRECISION_CAP
    census_max_n: int = 200
    stats_max_n: int = 5000
    pseudo_sample: int = 500
    rich_max_curves: int = 300
    timings: bool = False
    jobs: int = 1

    def __post_init__(self):
        self.metric = metric_name(self.metric)
        name = self.generator.get("name")
        if name not in GENERATORS:
            raise ConfigError(f"unknown generator {name!r}; expected one of {GENERATORS}")
        if not self.sizes or any(int(s) < 1 for s in self.sizes):
            raise ConfigError("sizes must be positive")
        self.sizes = [int(s) for s in self.sizes]
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ConfigError("sizes must be strictly increasing")
        if self.metric == "rectangular":
            if self.kappa is None or scalar(self.kappa) == 0:
                raise ConfigError("rectangular metric needs a nonzero kappa")
        if self.metric == "minkowski" and any(self.checks.get(c) for c in ("census", "family")):
            raise ConfigError("census and family checks exist only for euclidean and rectangular metrics")
        if self.precision_bits < 2 or self.precision_cap < self.precision_bits:
            raise ConfigError("need 2 <= precision_bits <= precision_cap")
        if self.kappa is not None:
            self.kappa = scalar_str(scalar(self.kappa))
        for key in ("stats", "census", "family", "energy"):
            self.checks.setdefault(key, True)

    @property
    def kappa_value(self):
        return None if self.kappa is None else scalar(self.kappa)

    def digest(self) -> str:
        """Digest of everything that affects results (not out_dir, jobs)."""
        data = asdict(self)
        for key in ("out_dir", "jobs"):
            data.pop(key)
        blob = json.dumps(data, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_mapping(cls, data: dict, **overrides) -> "ExperimentConfig":
        data = dict(data)
        for k, v in overrides.items():
            if v is not None:
                data[k] = v
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path, **overrides) -> "ExperimentConfig":
        path = Path(path)
        text = path.read_text()
        if path.suffix == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:  # Python < 3.11
                import tomli as tomllib
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
        return cls.from_mapping(data, **overrides)


# -- generation -----------------------------------------------------------------

def generate(config: ExperimentConfig, n: int) -> PointSet:
    gen = config.generator
    name = gen["name"]
    seed = config.seed + n
    if name == "grid":
        a = isqrt(n)
        return grid(a, max(1, n // a))
    if name == "unbalanced":
        return unbalanced_lattice(n, Fraction(gen.get("eps", "1/6")))
    if name == "random":
        bound = int(gen.get("coord_bound", max(2, isqrt(4 * n))))
        return random_set(n, bound, seed)
    # line_plus_bulk
    bound = int(gen.get("coord_bound", max(4, isqrt(4 * n))))
    if config.metric == "rectangular":
        kap = Fraction(config.kappa_value)
        line = CanonicalLine.of(kap, -1, 0)
    else:
        line = CanonicalLine.of(0, 1, 0)
    if "m" in gen:
        m = int(gen["m"])
    else:
        m = max(2, round(n * Fraction(gen.get("m_fraction", "1/3"))))
    return line_plus_bulk(line, min(m, n), n, seed, bound)


# -- rows ------------------------------------------------------------------------

def _row(name, metric, n, m, lhs, rhs, verdict, seconds=None) -> dict:
    if isinstance(rhs, IntervalValue):
        lo, hi = rhs.as_strs(12)
    elif isinstance(rhs, (list, tuple)):
        lo, hi = rhs
    elif rhs is None:
        lo = hi = ""
    else:
        lo = hi = str(rhs)
    if isinstance(lhs, IntervalValue):
        lhs = lhs.as_strs(12)[0] if lhs.is_exact else "[{}, {}]".format(*lhs.as_strs(12))
    return {
        "check_name": name,
        "metric": metric,
        "n": n,
        "m": m,
        "lhs": "" if lhs is None else str(lhs),
        "rhs_lo": lo,
        "rhs_hi": hi,
        "verdict": verdict,
        "seconds": "" if seconds is None else f"{seconds:.3f}",
    }


def _verdict(ok: bool) -> str:
    return HOLDS if ok else VIOLATED


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.t = time.perf_counter()

    def lap(self):
        if not self.enabled:
            return None
        now = time.perf_counter()
        out, self.t = now - self.t, now
        return out


def _derived_sets(family, A0, metric, kappa):
    """U, V, B-side coordinates and f for the restricted sum-product problem.

    Taken from the class of largest multiplicity.  Euclidean: its q lie on
    x = k2; shift so that line is the y-axis, then U = A0 - k2, V = {q_y^2},
    f = x^2.  Rectangular: its q lie on y = -kappa x + k2; U = A0,
    B0 = {q_x}, f = kappa x^2 - k2 x and V = -f(B0).
    """
    key, pairs = max_multiplicity_class(family)
    if key is None:
        return None
    qs = sorted({q for _, q in pairs})
    if metric == "euclidean":
        U = [a - key.k2 for a in A0]
        b_coords = [q.y for q in qs]
        f = ConvexFn.square()
        V = sorted({y * y for y in b_coords})
    else:
        U = list(A0)
        b_coords = [q.x for q in qs]
        f = ConvexFn.quad(kappa, key.k2)
        V = sorted({-f(b) for b in b_coords})
    return {"U": U, "V": V, "B": b_coords, "f": f, "k": len(pairs)}


def run_size(config: ExperimentConfig, n: int) -> dict:
    """Full pipeline for one size; returns {"rows": [...], "bundle": {...}}."""
    metric = config.metric
    clock = _Clock(config.timings)
    rows: list[dict] = []
    bundle: dict = {
        "config_digest": config.digest(),
        "code_version": __version__,
        "n_requested": n,
    }
    P = generate(config, n)
    n_actual = len(P)
    bundle["n"] = n_actual
    bundle["generator_meta"] = P.meta
    bundle["points"] = P.to_json()
    reports: list[dict] = []

    if n_actual < 2:
        rows.append(_row("generate", metric, n_actual, 0, n_actual, 2, SKIPPED, clock.lap()))
        bundle["reports"] = reports
        return {"rows": rows, "bundle": bundle}

    line, m = max_line_richness(P, exclude_axis_parallel=(metric == "rectangular"))
    bound_exp = IntervalValue.exact(n_actual, config.precision_bits).rational_power(Fraction(43, 52))
    rows.append(_row("line_richness", metric, n_actual, m, m, bound_exp, MEASURED, clock.lap()))
    bundle["rich_line"] = None if line is None else [line.a, line.b, line.c]
    bundle["m"] = m

    if config.checks["stats"] and n_actual <= config.stats_max_n:
        prof = distinct_distances(P, metric)
        rows.append(_row("distinct_distances", metric, n_actual, m, prof.distinct_count,
                         comb(n_actual, 2), _verdict(prof.distinct_count <= comb(n_actual, 2)), clock.lap()))
        bundle["profile"] = {"distinct_count": prof.distinct_count, "max_multiplicity": prof.max_multiplicity}
        if config.generator["name"] == "unbalanced":
            wide, tall = P.meta["dims"]
            ps = product_set_count(wide, tall)
            rows.append(_row("product_set", metric, n_actual, m, ps, n_actual, MEASURED, clock.lap()))

    want_census = config.checks["census"] or config.checks["family"] or config.checks["energy"]
    if not want_census or line is None or m < 2 or n_actual > config.census_max_n:
        bundle["reports"] = reports
        return {"rows": rows, "bundle": bundle}

    if metric == "euclidean":
        Pn = align_line_to_x_axis(P, line)
        kappa = None
        A = PointSet(p for p in Pn if p.y == 0)
    else:
        Pn, kappa = translate_line_to_origin(P, line)
        A = PointSet(p for p in Pn if p.y == kappa * p.x)
    bundle["kappa"] = None if kappa is None else scalar_str(kappa)
    A0 = [a.x for a in A]

    cen = run_census(A, Pn, metric, kappa)
    bprof = bipartite_distinct(A, Pn, metric)
    cs = cs_bound_report(cen, bprof)
    bundle["census"] = cen.to_json()
    bundle["cs_report"] = cs
    mi_sq = sum(v * v for v in bprof.histogram.values())
    if config.checks["census"]:
        rows.append(_row("census_identity", metric, n_actual, m, cen.q_total, mi_sq,
                         _verdict(cen.q_total == mi_sq), clock.lap()))
        rows.append(_row("cauchy_schwarz", metric, n_actual, m, cs["cs_lhs"], cs["cs_rhs"],
                         _verdict(cs["cs_holds"]), clock.lap()))
        rows.append(_row("q1_bound", metric, n_actual, m, cen.q1, cs["q1_bound"], _verdict(cs["q1_holds"]), clock.lap()))
        if cs["q2_holds"] is not None:
            rows.append(_row("q2_bound", metric, n_actual, m, cen.q2, cs["q2_lower_bound"],
                             _verdict(cs["q2_holds"]), clock.lap()))

    family = build_family(Pn, metric, kappa)
    bundle["family"] = family.to_json()
    if config.checks["family"]:
        inc = incidences(A, family)
        rows.append(_row("census_incidence", metric, n_actual, m, inc, cen.q2, _verdict(inc == cen.q2), clock.lap()))
        co = coincidence_structure(family)
        reports.append({"check": "coincidence_structure", **co})
        rows.append(_row("coincidence_structure", metric, n_actual, m, co["partner_max"], 2,
                         _verdict(co["holds"] and co["b_side_ok"]), clock.lap()))
        pp = pseudoparabola_check(family, config.pseudo_sample, config.seed)
        reports.append({"check": "pseudoparabola", **pp})
        rows.append(_row("pseudoparabola", metric, n_actual, m, pp["max_intersections"], 2,
                         _verdict(pp["holds"]), clock.lap()))
        if family.size:
            bound = incidence_bound(family.k_max, m * m, family.size, config.precision_bits)
            rows.append(_row("incidence_ratio", metric, n_actual, m, inc, bound, MEASURED, clock.lap()))

    derived = _derived_sets(family, A0, metric, kappa) if config.checks["energy"] else None
    if derived is not None:
        U, V, Bc, f = derived["U"], derived["V"], derived["B"], derived["f"]
        prec, cap = config.precision_bits, config.precision_cap
        hc = holder_chain_check(U, prec, cap)
        reports.append(hc)
        rows.append(_row("holder_chain", metric, n_actual, m, hc["lhs"][0], hc["rhs"], hc["verdict"], clock.lap()))
        li = li_inequality_check(U, Bc, prec, cap)
        reports.append(li)
        rows.append(_row("li_inequality", metric, n_actual, m, "[{}, {}]".format(*li["lhs"]), li["rhs"],
                         li["verdict"], clock.lap()))
        if len(U) >= 2:
            lr = lr_ratio_report(f, U, V, prec)
            reports.append(lr)
            rows.append(_row("lr_ratio", metric, n_actual, m, lr["lhs"][0], lr["rhs"], MEASURED, clock.lap()))
        dy = dyadic_decomposition_check(U, difference_set(U), f=f, C=V, precision=prec)
        reports.append(dy)
        rows.append(_row("dyadic_decomposition", metric, n_actual, m, dy["e3"], sum(dy["e3_bands"]),
                         dy["verdict"], clock.lap()))
        L = convex_curve_family(f, U, U, V)
        pl = pseudoline_check(L, config.pseudo_sample, config.seed)
        reports.append(pl)
        rows.append(_row("pseudoline", metric, n_actual, m, pl["max_intersections"], 1, pl["verdict"], clock.lap()))
        if len(U) >= 2 and L.size <= config.rich_max_curves:
            rc = rich_containment_check(f, U, U, V, 2)
            reports.append(rc)
            rows.append(_row("rich_containment", metric, n_actual, m, rc["lhs"][0], rc["rhs"], rc["verdict"], clock.lap()))
        else:
            rows.append(_row("rich_containment", metric, n_actual, m, None, None, SKIPPED, clock.lap()))

    bundle["reports"] = reports
    return {"rows": rows, "bundle": bundle}


# -- writing ---------------------------------------------------------------------

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def scaling_fit(series) -> tuple[float, float]:
    """Least-squares slope of log(value) against log(n), and the max abs residual."""
    series = list(series)
    if len(series) < 3:
        raise ValueError("scaling fit needs at least three points")
    ns = np.array([float(n) for n, _ in series])
    vs = np.array([float(v) for _, v in series])
    if np.any(ns <= 0) or np.any(vs <= 0):
        raise ValueError("scaling fit needs positive sizes and values")
    if np.unique(ns).size < 2:
        raise ValueError("degenerate series: all sizes equal")
    x, y = np.log(ns), np.log(vs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), resid


def _series(rows, name):
    out = []
    for r in rows:
        if r["check_name"] == name and r["lhs"] not in ("", None):
            try:
                v = float(Fraction(r["lhs"]))
            except (ValueError, ZeroDivisionError):
                continue
            if v > 0:
                out.append((int(r["n"]), v))
    return out


def _fits(rows) -> dict:
    fits = {}
    for name in ("line_richness", "distinct_distances", "product_set", "census_incidence"):
        s = _series(rows, name)
        if len(s) >= 3 and len({n for n, _ in s}) >= 2:
            slope, resid = scaling_fit(s)
            fits[name] = {"exponent": round(slope, 12), "max_residual": round(resid, 12), "points": len(s)}
    return fits


def run_experiment(config: ExperimentConfig, write: bool = True) -> dict:
    """Run every size, then write CSV, per-size JSON bundles and scaling fits."""
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(run_size, [config] * len(config.sizes), config.sizes))
    else:
        results = [run_size(config, n) for n in config.sizes]
    rows = [r for res in results for r in res["rows"]]
    fits = _fits(rows)
    verdicts = [r["verdict"] for r in rows]
    summary = {
        "config_digest": config.digest(),
        "code_version": __version__,
        "rows": len(rows),
        "violations": verdicts.count(VIOLATED),
        "undecided": verdicts.count(UNDECIDED),
        "scaling": fits,
    }
    if write:
        out = Path(config.out_dir)
        for n, res in zip(config.sizes, results):
            bundle = res["bundle"]
            pts = bundle.pop("points")
            _atomic_write(out / f"points_{n}.json", json.dumps(pts) + "\n")
            bundle["rows"] = res["rows"]
            _atomic_write(out / f"size_{n}.json", json.dumps(bundle, indent=1, sort_keys=True, default=str) + "\n")
        _atomic_write(out / "report.csv", rows_to_csv(rows))
        _atomic_write(out / "scaling.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return {"rows": rows, "summary": summary, "bundles": [r["bundle"] for r in results]}
