"""Grid experiments over the counting problems and their proof chains.

Each experiment cell is evaluated independently (optionally in a process
pool) and emits :class:`BoundReport` rows.  The harness only composes
library calls and takes ratios; every row can be re-derived by hand from
the ``counting``, ``expsum`` and ``divisor_bounds`` functions.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import counting as ct
from . import divisor_bounds as db
from . import expsum as es
from .ratmath import format_rat, parse_rat

CSV_COLUMNS = (
    "instance_id", "alpha", "beta", "gamma", "a", "b", "delta",
    "H", "quantity", "computed", "envelope", "ratio", "pass",
)

# relative slack for float-evaluated bounds; equality cases otherwise flip on rounding
FLOAT_SLACK = 1e-12


class ConfigError(ValueError):
    pass


@dataclass
class BoundReport:
    instance_id: str
    quantity: str
    computed: float
    envelope: float
    passed: bool
    H: int | None = None
    delta: Fraction | None = None
    inst: ct.CountingInstance | None = None

    @property
    def ratio(self) -> float:
        return self.computed / self.envelope if self.envelope > 0 else math.inf

    def row(self) -> list[str]:
        p = self.inst.parabola if self.inst else None
        rat = lambda v: "" if v is None else format_rat(v)  # noqa: E731
        return [
            self.instance_id,
            rat(p and p.alpha), rat(p and p.beta), rat(p and p.gamma),
            rat(self.inst and self.inst.a), rat(self.inst and self.inst.b),
            rat(self.delta),
            "" if self.H is None else str(self.H),
            self.quantity,
            _num(self.computed), _num(self.envelope), _num(self.ratio),
            "true" if self.passed else "false",
        ]


def _num(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ExperimentSpec:
    parabola: ct.Parabola = ct.P0
    a_grid: list[Fraction] = field(default_factory=list)
    b_rule: tuple = ("factor", Fraction(1))
    delta_grid: list[Fraction] = field(default_factory=list)
    H_rule: tuple = ("auto",)
    epsilon: float = 0.05
    seed: int = 0
    relaxed: bool = False
    random_cells: int = 0
    random_a_max: int = 1000
    random_b_max: int = 1000
    envelope_C: float | None = None
    ibound_C: float | None = None
    a_min: int = 16
    a_max: int = 16
    top_k: int | None = None

    def b_for(self, a: Fraction) -> Fraction:
        kind, val = self.b_rule
        return val if kind == "fixed" else val * a

    def H_values(self, inst: ct.CountingInstance) -> list[int]:
        kind = self.H_rule[0]
        if kind == "auto":
            return [db.proof_parameters(inst).H]
        if kind == "fixed":
            return [self.H_rule[1]]
        return list(range(self.H_rule[1], self.H_rule[2] + 1))

    def instances(self) -> list[ct.CountingInstance]:
        out = [ct.CountingInstance(self.parabola, a, self.b_for(a), self.relaxed) for a in self.a_grid]
        out += random_instances(self.seed, self.random_cells, self.random_a_max, self.random_b_max)
        return out


def _random_rat(rng: random.Random, lo: int, hi: int, max_den: int = 100) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_instances(seed: int, n: int, a_max: int = 1000, b_max: int = 10_000,
                     coeff: int = 10, max_den: int = 100) -> list[ct.CountingInstance]:
    """Seeded instances: coefficients in ``[-coeff, coeff]``, ``a in (1, a_max]``, ``b in (1, b_max]``."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        alpha = Fraction(0)
        while alpha == 0:
            alpha = _random_rat(rng, -coeff, coeff, max_den)
        beta = _random_rat(rng, -coeff, coeff, max_den)
        gamma = _random_rat(rng, -coeff, coeff, max_den)
        den = rng.randint(1, max_den)
        a = Fraction(rng.randint(den + 1, a_max * den), den)
        den = rng.randint(1, max_den)
        b = Fraction(rng.randint(den + 1, b_max * den), den)
        out.append(ct.CountingInstance(ct.Parabola(alpha, beta, gamma), a, b))
    return out


# -- cells --------------------------------------------------------------------------


def _envelope_pass(ratio: float, threshold: float | None) -> bool:
    if not math.isfinite(ratio):
        return False
    return threshold is None or ratio <= threshold


def error_cell(cid: str, inst: ct.CountingInstance, H: int, epsilon: float,
               envelope_C: float | None = None, ibound_C: float | None = None) -> list[BoundReport]:
    """Theorem 1 error against its envelope, plus five links of the proof chain."""
    rows = []
    R = lambda q, c, e, ok: rows.append(BoundReport(cid, q, c, e, ok, H, None, inst))  # noqa: E731
    params = db.EnvelopeParams(epsilon)
    _, err = ct.error_term(inst)
    env = db.theorem1_envelope(inst, params)
    R("theorem1_error", float(err), env, _envelope_pass(float(err) / env, envelope_C))

    Hc = max(H, 1)
    series = es.exp_sum_series(inst, Hc)
    psi_abs = abs(ct.psi_sum(inst))
    vb = es.vaaler_bound(inst, Hc, series)
    R("vaaler", float(psi_abs), vb, float(psi_abs) <= vb * (1 + FLOAT_SLACK))

    w = es.weighted_abs_sum(inst, Hc, series)
    cs = es.cauchy_schwarz_rhs(inst, Hc, series)
    R("cauchy_schwarz", w, cs, w <= cs * (1 + FLOAT_SLACK))

    lhs = es.second_moment_lhs(inst, Hc, series)
    weyl, imag = es.second_moment_weyl(inst, Hc, return_imag=True)
    R("second_moment_identity", weyl, lhs, es.identity_holds(lhs, weyl, imag))

    sb = db.secondsum_bound(inst, Hc)
    R("secondsum_bound", lhs, sb, lhs <= sb * (1 + FLOAT_SLACK))

    if H < 1 or db.trivial_case(inst):
        triv = inst.x_max / 2
        R("trivial_bound", float(err), triv, float(err) <= triv)
    else:
        I = db.I_sum(inst, H)
        ienv = db.I_envelope(inst, H, epsilon)
        R("I_bound", I, ienv, _envelope_pass(I / ienv if ienv > 0 else math.inf, ibound_C))
    return rows


def near_cell(cid: str, inst: ct.CountingInstance, H: int, deltas: list[Fraction],
              epsilon: float, envelope_C: float | None = None) -> list[BoundReport]:
    rows = []
    params = db.EnvelopeParams(epsilon)
    env = db.theorem1_envelope(inst, params)
    Hc = max(H, 1)
    series = es.exp_sum_series(inst, Hc)
    et = es.erdos_turan_bound(inst, Hc, series)
    counts = []
    for delta in deltas:
        R = lambda q, c, e, ok: rows.append(BoundReport(cid, q, c, e, ok, H, delta, inst))  # noqa: E731
        n = ct.near_count(inst, delta)
        counts.append(n)
        R("near_count", n, inst.x_max, n <= inst.x_max)
        err = abs(ct.near_count_error(inst, delta))
        R("near_error", float(err), env, _envelope_pass(float(err) / env, envelope_C))
        disc = abs(es.discrepancy(inst, es.DiscrepancyWindow(-delta, delta)))
        R("erdos_turan", float(disc), et, float(disc) <= et * (1 + FLOAT_SLACK))
        z = es.window_count(inst, es.DiscrepancyWindow(-delta, delta))
        R("window_match", abs(z - n), inst.x_max, z == n)
    if len(deltas) > 1:
        order = sorted(range(len(deltas)), key=lambda i: deltas[i])
        held = sum(counts[i] <= counts[j] for i, j in zip(order, order[1:]))
        pairs = len(deltas) - 1
        rows.append(BoundReport(cid, "delta_monotone", held, pairs, held == pairs, H, None, inst))
    return rows


def _error_task(args):
    return error_cell(*args)


def _near_task(args):
    return near_cell(*args)


def _run(task, jobs, threads: int) -> list[BoundReport]:
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(task, jobs))
    else:
        parts = [task(j) for j in jobs]
    return [r for part in parts for r in part]


def _canonical(rows: list[BoundReport]) -> list[BoundReport]:
    # stable sort: emission order inside a cell is itself canonical
    return sorted(rows, key=lambda r: r.instance_id)


def run_error_grid(spec: ExperimentSpec, threads: int = 1) -> list[BoundReport]:
    jobs = []
    for i, inst in enumerate(spec.instances()):
        for H in spec.H_values(inst):
            jobs.append((f"c{i:05d}", inst, H, spec.epsilon, spec.envelope_C, spec.ibound_C))
    return _canonical(_run(_error_task, jobs, threads))


def run_near_grid(spec: ExperimentSpec, threads: int = 1) -> list[BoundReport]:
    if not spec.delta_grid:
        raise ConfigError("near grid needs a nonempty delta_grid")
    jobs = []
    for i, inst in enumerate(spec.instances()):
        for H in spec.H_values(inst):
            jobs.append((f"c{i:05d}", inst, H, list(spec.delta_grid), spec.epsilon, spec.envelope_C))
    return _canonical(_run(_near_task, jobs, threads))


def extremal_errors(a_min: int, a_max: int) -> list[tuple[int, Fraction]]:
    """``(a, E(a, a))`` for the standard parabola and every integer ``a`` in range."""
    return [(a, ct.error_term(ct.CountingInstance(ct.P0, a, a))[0]) for a in range(a_min, a_max + 1)]


def _extremal_task(args):
    return extremal_errors(*args)


def extremal_search(a_min: int, a_max: int, spec: ExperimentSpec | None = None,
                    threads: int = 1) -> list[BoundReport]:
    """Rank ``|E(a, a)| / sqrt(a)`` over integer ``a``, largest first.

    Two informational rows per ``a``: the error against ``sqrt(a)`` and
    against the Chamizo-Pastor lower-bound shape.
    """
    if not 16 <= a_min <= a_max:
        raise ValueError("need 16 <= a_min <= a_max")
    spec = spec or ExperimentSpec()
    params = db.EnvelopeParams(spec.epsilon)
    step = max(1, (a_max - a_min + 1) // (8 * max(threads, 1)) + 1)
    chunks = [(lo, min(lo + step - 1, a_max)) for lo in range(a_min, a_max + 1, step)]
    if threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            found = [e for part in pool.map(_extremal_task, chunks) for e in part]
    else:
        found = [e for c in chunks for e in extremal_errors(*c)]
    scored = sorted(found, key=lambda t: (-float(abs(t[1])) / math.sqrt(t[0]), t[0]))
    if spec.top_k is not None:
        scored = scored[: spec.top_k]
    rows = []
    for a, err in scored:
        inst = ct.CountingInstance(ct.P0, a, a)
        cid = f"a{a:07d}"
        rows.append(BoundReport(cid, "extremal_sqrt", float(abs(err)), math.sqrt(a), True, None, None, inst))
        rows.append(BoundReport(cid, "extremal_cp", float(abs(err)), db.chamizo_pastor_floor(a, params),
                                True, None, None, inst))
    return rows


def prove_chain(inst: ct.CountingInstance, epsilon: float = 0.05, H: int | None = None) -> dict:
    """Every intermediate quantity of the Theorem 1 argument for one cell."""
    pp = db.proof_parameters(inst)
    H = pp.H if H is None else H
    Hc = max(H, 1)
    series = es.exp_sum_series(inst, Hc)
    signed, err = ct.error_term(inst)
    weyl, imag = es.second_moment_weyl(inst, Hc, return_imag=True)
    lhs = es.second_moment_lhs(inst, Hc, series)
    out = {
        "alpha": format_rat(inst.parabola.alpha),
        "beta": format_rat(inst.parabola.beta),
        "gamma": format_rat(inst.parabola.gamma),
        "a": format_rat(inst.a),
        "b": format_rat(inst.b),
        "x_max": inst.x_max,
        "floor_sum": ct.floor_sum(inst),
        "main_term": format_rat(ct.main_term(inst)),
        "psi_sum": format_rat(ct.psi_sum(inst)),
        "error_signed": format_rat(signed),
        "error_abs": format_rat(err),
        "q": format_rat(pp.q),
        "H": H,
        "Delta": pp.Delta,
        "trivial_case": db.trivial_case(inst),
        "exp_sums": series.to_json(),
        "weighted_abs_sum": es.weighted_abs_sum(inst, Hc, series),
        "vaaler_bound": es.vaaler_bound(inst, Hc, series),
        "erdos_turan_bound": es.erdos_turan_bound(inst, Hc, series),
        "cauchy_schwarz_rhs": es.cauchy_schwarz_rhs(inst, Hc, series),
        "second_moment_lhs": lhs,
        "second_moment_weyl": weyl,
        "second_moment_weyl_imag": imag,
        "secondsum_bound": db.secondsum_bound(inst, Hc),
        "theorem1_envelope": db.theorem1_envelope(inst, db.EnvelopeParams(epsilon)),
    }
    if H >= 1:
        I = db.I_sum(inst, H)
        low, high = db.I_split(inst, H)
        out.update({
            "I": I,
            "I_below_b": low,
            "I_above_b": high,
            "I1": db.I1_sum(inst),
            "I2": db.I2_sum(inst, H),
            "I_envelope": db.I_envelope(inst, H, epsilon),
            "I1_envelope": db.I1_envelope(inst),
            "I2_envelope": db.I2_envelope(inst, H),
            "e22_shape": inst.x_max / H + math.sqrt(inst.x_max) * math.log(H) + math.sqrt(I * math.log(H)),
        })
    return out


def fitted_constants(rows: list[BoundReport]) -> dict[str, float]:
    """Largest observed ratio per quantity: the empirical constant behind each ``<<``."""
    out: dict[str, float] = {}
    for r in rows:
        if math.isfinite(r.ratio):
            out[r.quantity] = max(out.get(r.quantity, 0.0), r.ratio)
    return out


# -- output ----------------------------------------------------------------------


def to_csv(rows: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(rows: list[BoundReport]) -> str:
    records = [dict(zip(CSV_COLUMNS, r.row())) for r in rows]
    doc = {"fitted_constants": fitted_constants(rows), "rows": records}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- config ----------------------------------------------------------------------


def read_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {n}: empty key")
        out[key] = val
    return out


def _rats(val: str) -> list[Fraction]:
    return [parse_rat(v) for v in val.split(",") if v.strip()]


def _int_range(val: str) -> tuple[int, int]:
    lo, hi = val.split("..")
    return int(lo), int(hi)


def spec_from_config(cfg: dict[str, str]) -> ExperimentSpec:
    known = {
        "alpha", "beta", "gamma", "a", "a_grid", "a_range", "b", "b_factor",
        "delta", "delta_grid", "H", "epsilon", "seed", "relaxed", "random_cells",
        "random_a_max", "random_b_max", "envelope_C", "ibound_C", "a_min", "a_max", "top_k",
    }
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        par = ct.Parabola(
            parse_rat(cfg.get("alpha", "1")),
            parse_rat(cfg.get("beta", "0")),
            parse_rat(cfg.get("gamma", "0")),
        )
        a_grid = []
        if "a" in cfg:
            a_grid += _rats(cfg["a"])
        if "a_grid" in cfg:
            a_grid += _rats(cfg["a_grid"])
        if "a_range" in cfg:
            lo, hi = _int_range(cfg["a_range"])
            a_grid += [Fraction(k) for k in range(lo, hi + 1)]
        if "b" in cfg and "b_factor" in cfg:
            raise ConfigError("give either b or b_factor, not both")
        b_rule = ("fixed", parse_rat(cfg["b"])) if "b" in cfg else ("factor", parse_rat(cfg.get("b_factor", "1")))
        deltas = _rats(cfg.get("delta", "")) + _rats(cfg.get("delta_grid", ""))
        for d in deltas:
            if not 0 < d < Fraction(1, 2):
                raise ConfigError(f"delta {d} outside (0, 1/2)")
        h = cfg.get("H", "auto")
        if h == "auto":
            H_rule = ("auto",)
        elif ".." in h:
            H_rule = ("sweep", *_int_range(h))
        else:
            H_rule = ("fixed", int(h))
        if H_rule[0] != "auto" and min(H_rule[1:]) < 1:
            raise ConfigError("H must be positive")
        spec = ExperimentSpec(
            parabola=par, a_grid=a_grid, b_rule=b_rule, delta_grid=deltas, H_rule=H_rule,
            epsilon=float(cfg.get("epsilon", "0.05")),
            seed=int(cfg.get("seed", "0")),
            relaxed=cfg.get("relaxed", "false").lower() in ("1", "true", "yes"),
            random_cells=int(cfg.get("random_cells", "0")),
            random_a_max=int(cfg.get("random_a_max", "1000")),
            random_b_max=int(cfg.get("random_b_max", "1000")),
            envelope_C=float(cfg["envelope_C"]) if "envelope_C" in cfg else None,
            ibound_C=float(cfg["ibound_C"]) if "ibound_C" in cfg else None,
            a_min=int(cfg.get("a_min", "16")),
            a_max=int(cfg.get("a_max", cfg.get("a_min", "16"))),
            top_k=int(cfg["top_k"]) if "top_k" in cfg else None,
        )
        spec.instances()  # validates every grid cell up front
    except ConfigError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    if spec.epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    return spec


def load_spec(path: str) -> ExperimentSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    return spec_from_config(read_config(text))

