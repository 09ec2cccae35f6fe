"""``hyperoct-gap``: spectral-gap computations and verification sweeps."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import (
    ClassAWeights,
    WeightsFileError,
    expand,
    load_weights,
    random_class_a,
)
from .group import RankError, SignedPermutation, enumerate_group, max_rank
from .reduction import (
    CounterexampleError,
    counterexample,
    default_counterexample,
    octopus_margin,
    rank_one_discrepancy,
    rank_one_identity_check,
)
from .reps import (
    REP_BUILDERS,
    defining_s,
    pn_block_deviation,
    permutation_p,
    regular_rep,
)
from .spectral import INFINITE, cayley_gap, gaps_agree, scale_of, spectral_gap

log = logging.getLogger("hyperoct")

COMMANDS = ("gap", "verify-main", "verify-aldous", "octopus", "counterexample", "decompose")


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    trials: int = 1
    seed: int = 0
    density: float = 0.7
    tolerance: float = 1e-8
    epsilon: float = 1e-3
    rep: str = "pn"
    weights: str | None = None
    family: str = "a"
    output: str = "json"
    allow_large: bool = False
    transpositions_only: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.n is not None and self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.trials < 1:
            raise ValueError("--trials must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("--tol must be positive")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("--density must lie in [0, 1]")
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")


@dataclass
class RunReport:
    command: str
    config: dict
    trials: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(t["passed"] for t in self.trials)

    def finalize(self, wall: float) -> RunReport:
        devs = [t["deviation"] for t in self.trials if t.get("deviation") is not None]
        self.summary = {
            "trials": len(self.trials),
            "passed": sum(bool(t["passed"]) for t in self.trials),
            "failed": sum(not t["passed"] for t in self.trials),
            "max_deviation": max(devs) if devs else None,
            "wall_time": wall,
        }
        return self


def _num(x):
    if x is INFINITE:
        return "inf"
    if x is None:
        return None
    return float(x)


def _group(cfg: RunConfig, n: int, signs: bool = True):
    return enumerate_group(n, signs=signs, max_n=10**6 if cfg.allow_large else None)


def _sample(cfg: RunConfig, trial: int) -> ClassAWeights:
    if cfg.weights:
        return load_weights(cfg.weights)
    return random_class_a(cfg.n, cfg.density, [cfg.seed, trial])


def _trial_count(cfg: RunConfig) -> int:
    return 1 if cfg.weights else cfg.trials


def _resolve_n(cfg: RunConfig) -> int:
    if cfg.weights:
        n = load_weights(cfg.weights).n
        if cfg.n is not None and cfg.n != n:
            raise ValueError(f"--n {cfg.n} disagrees with n={n} in {cfg.weights}")
        cfg.n = n
    if cfg.n is None:
        raise ValueError("--n is required without --weights")
    return cfg.n


def _timed(fn, trial):
    t0 = time.perf_counter()
    rec = fn(trial)
    rec["trial"] = trial
    rec["wall_time"] = time.perf_counter() - t0
    return rec


def _run_trials(cfg: RunConfig, fn, count: int) -> list[dict]:
    if cfg.workers == 1 or count == 1:
        return [_timed(fn, k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        recs = list(pool.map(lambda k: _timed(fn, k), range(count)))
    return sorted(recs, key=lambda r: r["trial"])


def cmd_gap(cfg: RunConfig) -> RunReport:
    n = _resolve_n(cfg)
    idx = _group(cfg, n)
    if cfg.rep == "regular":
        rep = regular_rep(idx)
    elif cfg.rep in ("pn", "dn", "d0n", "jn"):
        rep = REP_BUILDERS[cfg.rep](n)
    else:
        raise ValueError(f"unknown representation {cfg.rep!r}")

    def one(trial):
        caw = _sample(cfg, trial)
        rep_ = spectral_gap(expand(caw), rep, idx)
        return {
            "weights_digest": caw.digest(),
            "rep": cfg.rep,
            "gap": _num(rep_.gap),
            "trivial_multiplicity": rep_.trivial_multiplicity,
            "spectrum": [float(x) for x in rep_.spectrum.eigenvalues[: min(16, rep_.spectrum.dim)]],
            "passed": True,
        }

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, _trial_count(cfg)))


def cmd_verify_main(cfg: RunConfig) -> RunReport:
    n = _resolve_n(cfg)
    if n < 2:
        raise ValueError("verify-main needs n >= 2")
    idx = _group(cfg, n)
    pn = permutation_p(n)

    def one(trial):
        caw = _sample(cfg, trial)
        w = expand(caw)
        a = cayley_gap(w, idx).gap
        b = spectral_gap(w, pn, idx).gap
        dev = abs(a - b)
        return {
            "weights_digest": caw.digest(),
            "gaps": {"cayley": _num(a), "pn": _num(b)},
            "deviation": dev,
            "margin": cfg.tolerance * scale_of(a, b) - dev,
            "passed": dev <= cfg.tolerance * scale_of(a, b),
        }

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, _trial_count(cfg)))


def cmd_verify_aldous(cfg: RunConfig) -> RunReport:
    n = _resolve_n(cfg)
    idx = _group(cfg, n, signs=False)
    d0 = defining_s(n)

    def one(trial):
        caw = _sample(cfg, trial).transposition_part()
        w = expand(caw)
        a = cayley_gap(w, idx).gap
        b = spectral_gap(w, d0, idx).gap
        agree = gaps_agree(a, b, cfg.tolerance)
        dev = 0.0 if a is INFINITE and b is INFINITE else abs(a - b)
        return {
            "weights_digest": caw.digest(),
            "gaps": {"cayley_sn": _num(a), "d0": _num(b)},
            "deviation": dev,
            "passed": agree,
        }

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, _trial_count(cfg)))


def cmd_octopus(cfg: RunConfig) -> RunReport:
    n = _resolve_n(cfg)
    if n < 2:
        raise ValueError("octopus needs n >= 2")
    idx = _group(cfg, n, signs=not cfg.transpositions_only)

    def one(trial):
        caw = _sample(cfg, trial)
        if cfg.transpositions_only:
            caw = caw.transposition_part()
        margin = octopus_margin(caw, idx)
        r1 = rank_one_discrepancy(caw)
        psd = margin >= -1e-9
        r1_ok = rank_one_identity_check(caw)
        return {
            "weights_digest": caw.digest(),
            "lambda_min_scaled": margin,
            "psd": psd,
            "rank_one": r1,
            "rank_one_ok": r1_ok,
            "deviation": r1["entry_deviation"],
            "passed": psd and r1_ok,
        }

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, _trial_count(cfg)))


def cmd_counterexample(cfg: RunConfig) -> RunReport:
    n = cfg.n = cfg.n or 2
    spec = default_counterexample(cfg.family, n, cfg.epsilon)
    idx = _group(cfg, n)

    def one(trial):
        rep = counterexample(spec, idx, cfg.tolerance)
        rep["gaps"] = {k: _num(v) for k, v in rep["gaps"].items()}
        return rep

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, 1))


def cmd_decompose(cfg: RunConfig) -> RunReport:
    n = cfg.n = cfg.n or 2
    if n <= 3:
        elements = list(_group(cfg, n))
    else:
        rng = np.random.default_rng(cfg.seed)
        elements = [
            SignedPermutation(tuple(int(x) for x in rng.integers(0, 2, n)),
                              tuple(int(x) + 1 for x in rng.permutation(n)))
            for _ in range(cfg.trials)
        ]

    def one(trial):
        off, dev = 0.0, 0.0
        for g in elements:
            o, d = pn_block_deviation(n, g)
            off, dev = max(off, o), max(dev, d)
        return {
            "elements": len(elements),
            "max_off_block": off,
            "deviation": dev,
            "passed": off < 1e-12 and dev < 1e-12,
        }

    return RunReport(cfg.command, asdict(cfg), _run_trials(cfg, one, 1))


HANDLERS = {
    "gap": cmd_gap,
    "verify-main": cmd_verify_main,
    "verify-aldous": cmd_verify_aldous,
    "octopus": cmd_octopus,
    "counterexample": cmd_counterexample,
    "decompose": cmd_decompose,
}


def _flatten(prefix: str, obj, out: dict) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj)
    else:
        out[prefix] = obj


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(asdict(report), indent=2, sort_keys=True)
    rows = []
    for t in report.trials:
        flat: dict = {}
        _flatten("", t, flat)
        rows.append(flat)
    fields = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--density", type=float, default=0.7)
    common.add_argument("--tol", dest="tolerance", type=float, default=1e-8)
    common.add_argument("--epsilon", type=float, default=1e-3)
    common.add_argument("--rep", choices=["regular", "pn", "dn", "d0n", "jn"], default="pn")
    common.add_argument("--weights", default=None, help="JSON weights file")
    common.add_argument("--family", choices=["a", "b", "c"], default="a")
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--allow-large", action="store_true",
                        help=f"lift the enumeration limit (currently n <= {max_rank()})")
    common.add_argument("--transpositions-only", action="store_true",
                        help="octopus: restrict to transposition weights on S_n")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hyperoct-gap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    opts = vars(args)
    opts.pop("verbose")
    cfg = RunConfig(**opts)
    try:
        cfg.validate()
        t0 = time.perf_counter()
        report = HANDLERS[cfg.command](cfg)
        report.finalize(time.perf_counter() - t0)
    except (WeightsFileError, CounterexampleError, RankError, ValueError, OSError) as exc:
        print(f"hyperoct-gap {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    print(render(report, cfg.output))
    log.info("%d/%d trials passed", report.summary["passed"], report.summary["trials"])
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
