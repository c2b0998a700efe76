"""Run configurations, check execution, and canonical report emission.

A Report is fully determined by (RunConfig, seed): all sampling goes through
seeded rngs and wall-clock timing is kept off the canonical payload, so two
runs with the same configuration emit byte-identical JSON.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field

from . import algebra, bruteforce, monodromy, zhsolver
from .errors import (
    ConfigError,
    DegenerateParameter,
    DegenerateSample,
    IoError,
    TooLarge,
)
from .fieldcore import (
    Model,
    make_context,
    rand_distinct_ints,
    rand_rational,
    rat,
    rat_str,
)
from .weights import check_ybe


class Command(enum.Enum):
    VERIFY_YBE = "verify-ybe"
    VERIFY_ALGEBRA = "verify-algebra"
    VERIFY_STRUCTURE = "verify-structure"
    COMPUTE = "compute"
    SOLVE = "solve"
    TABLES = "tables"

    @classmethod
    def parse(cls, s):
        try:
            return cls(s)
        except ValueError:
            raise ConfigError("unknown command %r" % s)


@dataclass
class RunConfig:
    command: Command
    model: Model = Model.IK
    p: object = rat(2)
    mu: tuple = ()
    L: int = 1
    samples: int = None
    seed: int = 0
    backend: str = None
    output: str = "-"
    target: str = None  # compute: z | f | fbar
    points: tuple = ()  # compute: explicit spectral values
    q_samples: int = None  # tables
    threads: int = None  # resolved from V19_THREADS when unset


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    config: RunConfig
    results: list
    backend_stats: dict = field(default_factory=dict)
    timing_s: float = 0.0  # informational only, not serialized

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def canonical_dict(self):
        return {
            "config": _canonical(dataclasses.asdict(self.config)),
            "results": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in self.results
            ],
            "backend_stats": _canonical(self.backend_stats),
            "passed": self.passed,
        }


def _canonical(obj):
    """Recursively rewrite a value into JSON-safe, deterministic form."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return rat_str(obj)
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if isinstance(k, tuple):
                k = ",".join(str(x) for x in k)
            elif not isinstance(k, str):
                k = str(k)
            out[k] = _canonical(v)
        return out
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, float):
        raise ConfigError("floats are not allowed in canonical reports")
    return str(obj)


def emit(report, path="-"):
    """Serialize a report as canonical JSON (sorted keys, no whitespace).

    path '-' writes to stdout.  Returns the emitted text.
    """
    text = json.dumps(report.canonical_dict(), sort_keys=True, separators=(",", ":")) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError("cannot write %s: %s" % (path, exc))
    return text


# ---------------------------------------------------------------------------
# Command handlers


def _join(values):
    return ",".join(rat_str(x) for x in values)


def _resolve_threads(config):
    if config.threads is not None:
        return max(1, config.threads)
    raw = os.environ.get("V19_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError("V19_THREADS must be an integer, got %r" % raw)


def _context(config, length=None):
    L = length if length is not None else config.L
    mu = tuple(config.mu) if config.mu else (rat(1),) * L
    if len(mu) != L:
        raise ConfigError("expected %d inhomogeneities, got %d" % (L, len(mu)))
    try:
        return make_context(config.model, config.p, mu)
    except DegenerateParameter as exc:
        raise ConfigError(str(exc))


def _run_verify_ybe(config, results, stats):
    samples = config.samples or 20
    rng = random.Random(config.seed)
    retries = 0
    for i in range(samples):
        for _ in range(50):
            p = rand_rational(rng, 2, 9)
            x12 = rand_rational(rng, 2, 19)
            x13 = rand_rational(rng, 2, 19)
            if x12 == x13:
                retries += 1
                continue
            try:
                ctx = make_context(config.model, p, (rat(1),))
            except DegenerateParameter:
                retries += 1
                continue
            ok = check_ybe(ctx, x12, x13)
            results.append(
                CheckResult(
                    "ybe[%d]" % i,
                    ok,
                    "p=%s x12=%s x13=%s" % (rat_str(p), rat_str(x12), rat_str(x13)),
                )
            )
            break
        else:
            raise ConfigError("could not draw a nondegenerate YBE sample")
    stats["retries"] = retries


def _run_verify_algebra(config, results, stats):
    ctx = _context(config)
    L = config.L
    samples = config.samples or 5
    rng = random.Random(config.seed)
    for rel in algebra.NINE_RELATIONS + algebra.HIGHER_RELATIONS:
        for i in range(samples):
            res = algebra.sample_relation(ctx, rel, L, rng)
            results.append(
                CheckResult(
                    "%s[%d]" % (rel.value, i),
                    res.operator_norm_zero,
                    "sample=%s %s" % (_join(res.sample), res.note),
                )
            )
    if L <= 3:
        for i in range(samples):
            for res in algebra.sample_phi_lemmas(ctx, L, rng):
                results.append(
                    CheckResult(
                        "%s.%s[%d]" % (res.relation.value, res.note, i),
                        res.operator_norm_zero,
                        "sample=%s" % _join(res.sample),
                    )
                )


def _run_verify_structure(config, results, stats):
    ctx = _context(config)
    rep = monodromy.verify_structure(ctx)
    for item in rep.items:
        results.append(CheckResult(item.name, item.passed, item.detail))
    rng = random.Random(config.seed)
    x = rand_rational(rng, 2, 19)
    sing = monodromy.singular_weights_report(ctx, x)
    results.append(
        CheckResult(
            "singular_weights",
            sing.passed,
            "x=%s annihilators=%s" % (rat_str(x), sorted(sing.top_annihilators)),
        )
    )


def _run_compute(config, results, stats):
    ctx = _context(config)
    L = config.L
    target = config.target or "z"
    if target not in ("z", "f", "fbar"):
        raise ConfigError("compute target must be z, f or fbar")
    need = L if target == "z" else L + 1
    if config.points:
        pts = [rat(x) for x in config.points]
        if len(pts) != need:
            raise ConfigError("%s at L=%d needs %d spectral values, got %d" % (target, L, need, len(pts)))
    else:
        pts = rand_distinct_ints(random.Random(config.seed), need)
    if target == "z":
        val = monodromy.compute_Z(ctx, pts)
        bnd = bruteforce.dwbc_boundary(L)
        row_x = pts
    elif target == "f":
        val = monodromy.compute_F(ctx, pts[2:], pts[0], pts[1])
        bnd = bruteforce.f_boundary(L)
        row_x = pts
    else:
        val = monodromy.compute_Fbar(ctx, pts[0], pts[1], pts[2:])
        bnd = bruteforce.fbar_boundary(L)
        row_x = pts[2:] + pts[:2]
    detail = "%s(%s)=%s" % (target, ",".join(rat_str(x) for x in pts), rat_str(val))
    try:
        brute = bruteforce.partition_bruteforce(ctx, bnd, row_x)
        agree = brute == val
        results.append(CheckResult("engines_agree", agree, detail))
    except TooLarge:
        results.append(CheckResult("transfer_row_only", True, detail + " (enumeration skipped)"))


def _run_solve(config, results, stats):
    ctx = _context(config)
    L = config.L
    sol = zhsolver.solve_zh(
        ctx, L, backend=config.backend, seed=config.seed, n_samples=config.samples
    )
    results.append(
        CheckResult("kernel_dim_one", True, "backend=%s" % sol.backend)
    )
    results.append(
        CheckResult(
            "normalized_by_constant",
            sol.normalized_by == tuple([0] * (L + 1)),
            "normalized_by=%s" % (sol.normalized_by,),
        )
    )
    rng = random.Random(config.seed + 13)
    agree = 0
    tries = 0
    while agree < 10 and tries < 200:
        tries += 1
        pts = rand_distinct_ints(rng, L)
        try:
            zr = zhsolver.reconstruct_z(ctx, sol, pts)
        except DegenerateSample:
            continue
        zd = monodromy.compute_Z(ctx, pts)
        if zr != zd:
            results.append(
                CheckResult(
                    "z_reconstruction",
                    False,
                    "mismatch at (%s)" % ",".join(rat_str(x) for x in pts),
                )
            )
            break
        agree += 1
    else:
        results.append(
            CheckResult("z_reconstruction", agree == 10, "%d fresh points agree" % agree)
        )
    meta = sol.meta.get("system", {})
    stats["retries"] = meta.get("resample_retries", 0)
    stats["max_int_bit_length"] = meta.get("max_row_bits", 0)
    stats.update({"modular": meta.get("modular")} if meta.get("modular") else {})
    if L <= 2:
        stats["phi"] = {k: sol.phi[k] for k in sorted(sol.phi)}
        stats["phibar"] = {k: sol.phibar[k] for k in sorted(sol.phibar)}
    stats["kappa"] = sol.kappa
    if L == 2 and all(mj == 1 for mj in ctx.m):
        rep = zhsolver.compare_tables(ctx, sol)
        results.append(
            CheckResult(
                "reference_tables",
                rep.passed,
                "%d/%d entries match" % (len(rep.entries) - len(rep.mismatches), len(rep.entries)),
            )
        )


_TABLE_P_POOL = (
    rat(2),
    rat(3),
    rat(3, 2),
    rat(5, 2),
    rat(4, 3),
    rat(5),
    rat(7, 2),
    rat(5, 3),
    rat(7, 3),
    rat(6),
)


def _run_tables(config, results, stats):
    n = config.q_samples or 5
    if n > len(_TABLE_P_POOL):
        raise ConfigError("at most %d q samples supported" % len(_TABLE_P_POOL))
    for p in _TABLE_P_POOL[:n]:
        ctx = make_context(config.model, p, (rat(1), rat(1)))
        sol = zhsolver.solve_zh(ctx, 2, seed=config.seed)
        rep = zhsolver.compare_tables(ctx, sol)
        results.append(
            CheckResult(
                "tables[q=%s]" % rat_str(ctx.q),
                rep.passed,
                "%d/%d entries match" % (len(rep.entries) - len(rep.mismatches), len(rep.entries)),
            )
        )


_HANDLERS = {
    Command.VERIFY_YBE: _run_verify_ybe,
    Command.VERIFY_ALGEBRA: _run_verify_algebra,
    Command.VERIFY_STRUCTURE: _run_verify_structure,
    Command.COMPUTE: _run_compute,
    Command.SOLVE: _run_solve,
    Command.TABLES: _run_tables,
}


def run(config):
    """Execute a configured command and return its Report."""
    t0 = time.perf_counter()
    if not isinstance(config.command, Command):
        config.command = Command.parse(config.command)
    if not isinstance(config.model, Model):
        config.model = Model.parse(config.model)
    config.p = rat(config.p)
    config.mu = tuple(rat(x) for x in config.mu) if config.mu else ()
    config.threads = _resolve_threads(config)
    if config.command == Command.SOLVE and config.L not in (1, 2, 3):
        raise ConfigError("solve supports L in {1, 2, 3}")
    if config.L < 1 or config.L > 4:
        raise ConfigError("L must be between 1 and 4")
    if config.samples is not None and config.samples <= 0:
        raise ConfigError("samples must be positive")
    if config.backend is not None and config.backend not in ("rational", "modular"):
        raise ConfigError("backend must be rational or modular")
    results = []
    stats = {"retries": 0, "max_int_bit_length": 0}
    _HANDLERS[config.command](config, results, stats)
    return Report(
        config=config,
        results=results,
        backend_stats=stats,
        timing_s=time.perf_counter() - t0,
    )
