"""``whittle-kf`` command line.

Exit codes: 0 success, 1 domain error (structured JSON on stderr), 2 usage error.
Every output starts with the fully resolved configuration.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bandit, index, io, moebius, threshold, verify, words
from .errors import InvalidArgument, WhittleKFError

THREADS_ENV = "WHITTLE_KF_THREADS"


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgument(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise InvalidArgument(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _params(ns) -> moebius.ArmParams:
    return moebius.ArmParams(ns.a, ns.b, ns.w, ns.h, ns.beta)


def _config(ns, **extra) -> dict:
    cfg = {k: v for k, v in vars(ns).items() if k != "func" and not callable(v)}
    cfg.update(extra)
    return cfg


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _enc(v):
    return "inf" if isinstance(v, float) and v == float("inf") else v


# --- subcommands ------------------------------------------------------------

def cmd_word(ns) -> int:
    cls = threshold.classify(ns.x, _params(ns), ns.max_depth)
    _emit(io.dumps({"config": _config(ns), "result": cls.to_json()}), ns.out)
    return 0


def cmd_index(ns) -> int:
    pt = index.whittle_index(ns.x, _params(ns), ns.tol, ns.method, ns.max_depth)
    _emit(io.dumps({"config": _config(ns), "result": pt.to_json()}), ns.out)
    return 0


def _closed_chunk(args):
    xs, params, tol = args
    return [index.whittle_index(x, params, tol, "closed") for x in xs]


def cmd_curve(ns) -> int:
    if ns.reemit:
        cfg, pts = io.read_curve_csv(Path(ns.reemit).read_text())
        _emit(io.write_curve_csv(pts, cfg), ns.out)
        return 0
    params = _params(ns)
    grid = [float(g) for g in index.curve_grid(params, ns.n, ns.cap)]
    threads = _threads()
    if ns.method == "closed" and threads > 1:
        size = -(-len(grid) // threads)
        chunks = [(grid[i:i + size], params, ns.tol) for i in range(0, len(grid), size)]
        with ProcessPoolExecutor(threads) as ex:
            pts = [p for part in ex.map(_closed_chunk, chunks) for p in part]
    else:
        pts = index.index_curve(params, grid, ns.tol, ns.method).points
    _emit(io.write_curve_csv(pts, _config(ns)), ns.out)
    return 0


def cmd_fixed_point(ns) -> int:
    fp = moebius.fixed_point(words.check_word(ns.word), _params(ns))
    _emit(io.dumps({"config": _config(ns), "result": fp.to_json()}), ns.out)
    return 0


def cmd_tree(ns) -> int:
    seq = words.enumerate_tree(ns.depth)
    if ns.format == "json":
        _emit(io.dumps({"config": _config(ns), "words": seq}), ns.out)
    else:
        _emit(f"# config: {json.dumps(_config(ns), sort_keys=True)}\n" + "\n".join(seq) + "\n", ns.out)
    return 0


def cmd_verify(ns) -> int:
    rep = verify.certify(ns.suite, max_pal_len=ns.max_pal_len, seed=ns.seed)
    _emit(io.dumps({"config": _config(ns), "report": rep.to_json()}), ns.out)
    return 0 if rep.passed else 1


def cmd_simulate(ns) -> int:
    inst = bandit.BanditInstance.load(ns.instance)
    res = bandit.simulate_policy(inst, bandit.make_policy(ns.policy, ns.seed))
    cfg = _config(ns, resolved_instance=inst.to_dict())
    if ns.format == "csv":
        _emit(f"# config: {json.dumps(cfg, sort_keys=True)}\n" + res.to_csv(), ns.out)
        return 0
    doc = {"config": cfg, "result": res.to_json()}
    if ns.oracle:
        opt = bandit.brute_force_optimal(inst)
        doc["oracle"] = opt.to_json()
        doc["excess_over_optimal"] = res.discounted_cost / opt.discounted_cost - 1
    _emit(io.dumps(doc), ns.out)
    return 0


def cmd_trace(ns) -> int:
    inst = bandit.BanditInstance.load(ns.instance)
    tr = bandit.kalman_trace(inst, bandit.make_policy(ns.policy, ns.seed), ns.seed)
    _emit(io.dumps({"config": _config(ns, resolved_instance=inst.to_dict()), "result": tr.to_json()}),
          ns.out)
    return 0


# --- parser -----------------------------------------------------------------

def _nonneg(s: str) -> float:
    v = float(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _arm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, default=0.2, help="cheap observation precision")
    p.add_argument("--b", type=float, default=1.0, help="expensive observation precision")
    p.add_argument("--w", type=float, default=1.0, help="variance weight")
    p.add_argument("--h", type=float, default=0.0, help="expensive observation cost")
    p.add_argument("--beta", type=float, default=0.5, help="discount factor")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="whittle-kf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, arms=True):
        p = sub.add_parser(name, help=helptext)
        if arms:
            _arm_flags(p)
        p.add_argument("--out", default=None, help="write to this path instead of stdout")
        p.set_defaults(func=func)
        return p

    for name, func, helptext in (("word", cmd_word, "classify a threshold"),
                                 ("index", cmd_index, "Whittle index at a variance")):
        p = add(name, func, helptext)
        p.add_argument("x", nargs="?", type=_nonneg, default=None)
        p.add_argument("--x", dest="x_flag", type=_nonneg, default=None)
        p.add_argument("--max-depth", type=int, default=threshold.DEFAULT_MAX_DEPTH)
        if name == "index":
            p.add_argument("--tol", type=float, default=index.DEFAULT_TOL)
            p.add_argument("--method", choices=("closed", "series"), default="closed")

    p = add("curve", cmd_curve, "index curve on a grid (CSV)")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--cap", type=float, default=100.0)
    p.add_argument("--tol", type=float, default=index.DEFAULT_TOL)
    p.add_argument("--method", choices=("closed", "series"), default="series")
    p.add_argument("--reemit", default=None, help="read a curve CSV and write it back")

    p = add("fixed-point", cmd_fixed_point, "fixed point y_w of a word")
    p.add_argument("word")

    p = add("tree", cmd_tree, "Christoffel tree level t_depth", arms=False)
    p.add_argument("depth", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("verify", cmd_verify, "certify structural identities", arms=False)
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--max-pal-len", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)

    p = add("simulate", cmd_simulate, "simulate a scheduling policy", arms=False)
    p.add_argument("instance")
    p.add_argument("--policy", choices=sorted(bandit.POLICIES), default="whittle")
    p.add_argument("--oracle", action="store_true", help="also run the brute-force optimum")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("trace", cmd_trace, "sample a stochastic Kalman-filter trace", arms=False)
    p.add_argument("instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--policy", choices=sorted(bandit.POLICIES), default="whittle")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if hasattr(ns, "x_flag"):
        if (ns.x is None) == (ns.x_flag is None):
            ap.error("give x either positionally or via --x")
        ns.x = ns.x if ns.x is not None else ns.x_flag
        del ns.x_flag
    try:
        return ns.func(ns)
    except (WhittleKFError, OSError, json.JSONDecodeError, ValueError, ZeroDivisionError,
            ArithmeticError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


def main() -> None:
    sys.exit(run())
