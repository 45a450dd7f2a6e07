"""Command-line front end: bound tables, verification reports and the self-test.

    gentransform bound --thm 1 --alpha 1 2 --gamma 0 --delta 1 --weight bernardi:c=0 --xi 0
    gentransform verify sharpness --thm 2 --weight bernardi:c=0 --xi 0
    gentransform selftest

Options may also come from a flat ``key = value`` file given with
``--config``; command-line values win.  Output is JSON (default), CSV or
plain text, with floats written to 17 significant digits.  The thread count
for row sweeps is read from GENTRANSFORM_THREADS.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields
import io
import itertools
import json
import math
import os
import sys

import numpy as np

from . import __version__, bounds, goldens, series, verify, weights
from .exceptions import ConvergenceError, DegenerateBoundError, ParameterError
from .params import ClassParams, HohlovParams, TargetParams

THREADS_ENV = "GENTRANSFORM_THREADS"
IDENTITY_TOL = 1e-10
CLOSED_AGREEMENT = 1e-6

_LIST_KEYS = ("alpha", "gamma", "delta", "xi", "beta", "beta1", "a", "b", "c")
_ROW_ERRORS = (ParameterError, DegenerateBoundError, ConvergenceError, ArithmeticError, ValueError)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    check: str | None = None
    thm: int = 1
    alpha: list = field(default_factory=lambda: [1.0])
    gamma: list = field(default_factory=lambda: [0.0])
    delta: list = field(default_factory=lambda: [1.0])
    xi: list = field(default_factory=lambda: [0.0])
    beta: list = field(default_factory=lambda: [0.0])
    beta1: list = field(default_factory=lambda: [0.0])
    a: list | None = None
    b: list | None = None
    c: list | None = None
    weight: str = "bernardi:c=0"
    method: str = "quadrature"
    f: str | None = None
    seed: int = 0
    expect: str = "member"
    r_max: float = 0.995
    theta: int = verify.DEFAULT_THETA
    phi: int = verify.DEFAULT_PHI
    format: str = "json"
    tol: float | None = None
    order: int | None = None

    def __post_init__(self):
        for key in _LIST_KEYS:
            value = getattr(self, key)
            if value is not None and len(value) == 0:
                raise ConfigError(f"parameter list '{key}' is empty")
        if self.format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.thm not in (1, 2, 3):
            raise ConfigError(f"--thm must be 1, 2 or 3 (got {self.thm})")
        if not 0 < self.r_max < 1:
            raise ConfigError("--r-max must lie in (0, 1)")

    def hohlov_lists(self):
        if self.a is None or self.b is None or self.c is None:
            raise ConfigError("Hohlov parameters need --a, --b and --c")
        return self.a, self.b, self.c


# ------------------------------------------------------------------ output


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    return x


def _num(x: float) -> str:
    if math.isfinite(x):
        return format(x, ".17g")
    return json.dumps(str(x))


def _json(x, indent=0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_json(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if not x:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in x):
            return "[" + ", ".join(_json(v) for v in x) + "]"
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in x) + "\n" + pad + "]"
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return _num(x)
    return json.dumps(x)


def _cell(x):
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (list, dict)):
        return _json(x).replace("\n", "").replace("  ", "")
    return "" if x is None else str(x)


def render(doc: dict, fmt: str) -> str:
    doc = _plain(doc)
    if fmt == "json":
        return _json(doc) + "\n"
    rows = doc["rows"]
    flat = []
    for row in rows:
        d = {f"inputs.{k}": v for k, v in row["inputs"].items()}
        d.update({f"outputs.{k}": v for k, v in row["outputs"].items()})
        d["error"] = f"{row['error']['code']}: {row['error']['message']}" if "error" in row else None
        flat.append(d)
    if fmt == "csv":
        columns = list(dict.fromkeys(k for d in flat for k in d))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for d in flat:
            writer.writerow([_cell(d.get(k)) for k in columns])
        return buf.getvalue()
    lines = [f"# gentransform {doc['meta']['version']} {doc['meta']['config']['command']}"]
    for d in flat:
        lines.append("  ".join(f"{k.split('.', 1)[-1]}={_cell(v)}" for k, v in d.items()
                               if v is not None))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ rows


def _row(inputs: dict, compute) -> dict:
    try:
        outputs, diagnostics = compute()
    except _ROW_ERRORS as exc:
        return {"inputs": inputs, "outputs": {}, "diagnostics": {},
                "error": {"code": type(exc).__name__, "message": str(exc)}}
    return {"inputs": inputs, "outputs": outputs, "diagnostics": diagnostics}


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer (got {raw!r})") from None
    return max(1, n)


def _sweep(func, items):
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [func(*it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda it: func(*it), items))


def _weight(cfg: RunConfig):
    try:
        return weights.parse_weight(cfg.weight)
    except (ParameterError, OSError) as exc:
        raise ConfigError(f"bad weight descriptor {cfg.weight!r}: {exc}") from None


def _passed(row) -> bool:
    return "error" not in row and bool(row["outputs"].get("pass", False))


# ------------------------------------------------------------------ bound


def cmd_bound(cfg: RunConfig) -> list:
    """One row per parameter tuple with the computed beta."""
    if cfg.thm == 3:
        return _bound_thm3(cfg)
    w = _weight(cfg)
    if cfg.thm == 2:
        def one(xi):
            def compute():
                res = bounds.beta_thm2(w, TargetParams(xi), tol=cfg.tol or bounds.THM2_TOL)
                out = {"beta": res.beta, "method": res.method, "error_estimate": res.error_estimate}
                if cfg.method in ("closed", "both"):
                    closed = bounds.beta_thm2_bernardi_closed(_bernardi_c(w), TargetParams(xi))
                    out.update(_closed_outputs(res, closed, cfg.method))
                return out, res.diagnostics
            return _row({"thm": 2, "weight": w.describe(), "xi": xi}, compute)
        return _sweep(one, ((xi,) for xi in cfg.xi))

    def one(alpha, gamma, delta, xi):
        def compute():
            p = ClassParams(alpha, gamma, delta)
            t = TargetParams(xi)
            res = bounds.beta_thm1(p, w, t, tol=cfg.tol or bounds.THM1_TOL)
            out = {"beta": res.beta, "method": res.method, "error_estimate": res.error_estimate}
            if cfg.method in ("closed", "both"):
                closed = bounds.beta_thm1_bernardi_closed(p, _bernardi_c(w), t)
                out.update(_closed_outputs(res, closed, cfg.method))
            return out, res.diagnostics
        inputs = {"thm": 1, "alpha": alpha, "gamma": gamma, "delta": delta,
                  "weight": w.describe(), "xi": xi}
        return _row(inputs, compute)
    return _sweep(one, itertools.product(cfg.alpha, cfg.gamma, cfg.delta, cfg.xi))


def _bernardi_c(w):
    if not isinstance(w, weights.Bernardi):
        raise ParameterError("closed forms exist only for Bernardi weights")
    return w.c


def _closed_outputs(quad, closed, method):
    if method == "closed":
        return {"beta": closed.beta, "method": closed.method, "error_estimate": closed.error_estimate}
    diff = abs(quad.beta - closed.beta)
    return {"beta_closed": closed.beta, "difference": diff, "agree": diff <= CLOSED_AGREEMENT}


def _bound_thm3(cfg):
    a_list, b_list, c_list = cfg.hohlov_lists()

    def one(alpha, gamma, delta, a, b, c, beta1):
        def compute():
            p = ClassParams(alpha, gamma, delta)
            res = bounds.beta_thm3(HohlovParams(a, b, c, beta1), p)
            return ({"beta": res.beta, "beta2": res.diagnostics["beta2"], "method": res.method,
                     "error_estimate": res.error_estimate}, res.diagnostics)
        inputs = {"thm": 3, "alpha": alpha, "gamma": gamma, "delta": delta,
                  "a": a, "b": b, "c": c, "beta1": beta1}
        return _row(inputs, compute)
    return _sweep(one, itertools.product(cfg.alpha, cfg.gamma, cfg.delta,
                                         a_list, b_list, c_list, cfg.beta1))


# ------------------------------------------------------------------ verify


def cmd_verify(cfg: RunConfig) -> list:
    """Rows with a ``pass`` output for every requested check."""
    check = {"sharpness": _verify_sharpness, "identity": _verify_identity,
             "membership": _verify_membership, "hohlov": _verify_hohlov}.get(cfg.check)
    if check is None:
        raise ConfigError(f"unknown check {cfg.check!r}")
    return check(cfg)


def _sharpness_outputs(rep, tol):
    ok = rep.verdict if tol is None else abs(rep.achieved - rep.target) <= max(tol, 10 * rep.tail_estimate)
    return ({"beta": rep.beta, "target": rep.target, "achieved": rep.achieved,
             "deviation": abs(rep.achieved - rep.target), "tail_estimate": rep.tail_estimate,
             "pass": ok}, rep.diagnostics)


def _verify_sharpness(cfg):
    w = _weight(cfg)
    order = cfg.order or series.DEFAULT_ORDER
    if cfg.thm == 2:
        def one(xi):
            return _row({"check": "sharpness", "thm": 2, "weight": w.describe(), "xi": xi},
                        lambda: _sharpness_outputs(verify.sharpness_thm2(w, TargetParams(xi), order=order),
                                                   cfg.tol))
        return _sweep(one, ((xi,) for xi in cfg.xi))
    if cfg.thm == 3:
        raise ConfigError("sharpness checks exist for --thm 1 and --thm 2")

    def one(alpha, gamma, delta, xi):
        inputs = {"check": "sharpness", "thm": 1, "alpha": alpha, "gamma": gamma,
                  "delta": delta, "weight": w.describe(), "xi": xi}
        return _row(inputs, lambda: _sharpness_outputs(
            verify.sharpness_thm1(ClassParams(alpha, gamma, delta), w, TargetParams(xi), order), cfg.tol))
    return _sweep(one, itertools.product(cfg.alpha, cfg.gamma, cfg.delta, cfg.xi))


def _identity_input(cfg, delta):
    kind = cfg.f or "random"
    order = cfg.order or 64
    if kind == "identity":
        return series.PowerSeries.identity(order)
    if kind == "extremal":
        return series.extremal_series(0.2, delta, 0.0, 1.0, order)
    if kind == "random":
        return random_polynomial(cfg.seed, 32, order)
    raise ConfigError(f"identity check input must be identity, extremal or random (got {kind!r})")


def random_polynomial(seed: int, degree: int = 32, order: int = 64) -> series.PowerSeries:
    """Normalized polynomial with coefficient n uniform in (-1/n, 1/n), n >= 2."""
    rng = np.random.default_rng(seed)
    c = np.zeros(order + 1)
    c[1] = 1.0
    deg = min(degree, order)
    c[2:deg + 1] = rng.uniform(-1.0, 1.0, deg - 1) / np.arange(2, deg + 1)
    return series.PowerSeries(c)


def _verify_identity(cfg):
    w = _weight(cfg)
    tol = IDENTITY_TOL if cfg.tol is None else cfg.tol

    def one(delta):
        def compute():
            dev = verify.transform_identity_check(_identity_input(cfg, delta), w, delta)
            return {"deviation": dev, "tolerance": tol, "pass": dev <= tol}, {}
        return _row({"check": "identity", "f": cfg.f or "random", "weight": w.describe(),
                     "delta": delta, "seed": cfg.seed}, compute)
    return _sweep(one, ((d,) for d in cfg.delta))


def _verify_membership(cfg):
    kind = cfg.f or "identity"
    if kind not in ("identity", "extremal", "transformed"):
        raise ConfigError(f"membership input must be identity, extremal or transformed (got {kind!r})")
    radii = np.linspace(0.1, cfg.r_max, 20)
    order = cfg.order or verify.series_order_for(cfg.r_max)
    w = _weight(cfg) if kind == "transformed" else None
    levels = cfg.xi if kind == "transformed" else cfg.beta

    def one(alpha, gamma, delta, level):
        def compute():
            src = ClassParams(alpha, gamma, delta)
            if kind == "identity":
                rep = verify.membership_test(series.PowerSeries.identity(cfg.order or 64),
                                             src.with_beta(level), radii, cfg.theta, cfg.phi)
                return _membership_outputs(rep, cfg.expect)
            if kind == "extremal":
                P = series.extremal_power(level, delta, src.mu, src.nu, order + 1)
                target = src.with_beta(level)
            else:
                beta = bounds.beta_thm1(src, w, level).beta
                P = verify.transformed_extremal_power(src, beta, w, order)
                target = ClassParams(1.0, 0.0, delta, level)
            rep = verify.membership_from_power(P, target, radii, cfg.theta, cfg.phi)
            return _membership_outputs(rep, cfg.expect)
        inputs = {"check": "membership", "f": kind, "alpha": alpha, "gamma": gamma, "delta": delta}
        inputs["xi" if kind == "transformed" else "beta"] = level
        if w is not None:
            inputs["weight"] = w.describe()
        return _row(inputs, compute)
    return _sweep(one, itertools.product(cfg.alpha, cfg.gamma, cfg.delta, levels))


def _membership_outputs(rep, expect):
    return ({"is_member": rep.is_member, "margin": rep.margin, "best_phi": rep.best_phi,
             "expect": expect, "pass": rep.is_member == (expect == "member")},
            {"grid": rep.grid, "excluded_points": rep.excluded_points})


def _verify_hohlov(cfg):
    a_list, b_list, c_list = cfg.hohlov_lists()

    def one(alpha, gamma, delta, a, b, c, beta1):
        def compute():
            h, p = HohlovParams(a, b, c, beta1), ClassParams(alpha, gamma, delta)
            val = bounds.validate_hohlov(h, p)
            ker = verify.hohlov_kernel_check(h, p, np.linspace(0.1, cfg.r_max, 20), cfg.theta)
            ok = val.valid and ker.passed and ker.combiner_ok
            out = {"beta": ker.beta, "beta2": ker.n3_at_minus_one, "min_re_n3": ker.min_real,
                   "hypotheses_hold": val.valid, "kernel_ok": ker.passed, "pass": ok}
            diag = {"first_violation": val.first_violation, "ranges": val.ranges, "e1": val.e1,
                    "e2": val.e2, "e3_min": float(np.min(val.e3)), "n4_min": val.n4_min,
                    "argmin_n3": ker.argmin, "reduction_deviation": ker.reduction_deviation}
            return out, diag
        inputs = {"check": "hohlov", "alpha": alpha, "gamma": gamma, "delta": delta,
                  "a": a, "b": b, "c": c, "beta1": beta1}
        return _row(inputs, compute)
    return _sweep(one, itertools.product(cfg.alpha, cfg.gamma, cfg.delta,
                                         a_list, b_list, c_list, cfg.beta1))


# ------------------------------------------------------------------ selftest


def cmd_selftest(cfg: RunConfig) -> list:
    rows = []
    for g in goldens.run_selftest(cfg.tol):
        value = g.value
        out = {"value": value, "expected": g.expected, "tol": g.tol, "pass": g.passed}
        rows.append({"inputs": {"name": g.name}, "outputs": out, "diagnostics": {}})
    return rows


# ------------------------------------------------------------------ parsing


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--config", metavar="PATH", help="flat key = value file")
    common.add_argument("--tol", type=float, help="replace the default tolerance of every check")
    common.add_argument("--order", type=int, help="series truncation order")
    common.add_argument("--output", "-o", metavar="PATH", help="write here instead of stdout")

    params = argparse.ArgumentParser(add_help=False)
    for name in ("alpha", "gamma", "delta", "xi", "beta", "beta1", "a", "b", "c"):
        params.add_argument(f"--{name}", type=float, nargs="+")
    params.add_argument("--thm", type=int, choices=(1, 2, 3))
    params.add_argument("--weight", help="bernardi:c=.. | hohlov:a=..,b=..,c=.. | "
                                         "carlson-shaffer:b=..,c=.. | file:PATH")

    top = argparse.ArgumentParser(prog="gentransform", description=__doc__.split("\n")[0])
    top.add_argument("--version", action="version", version=f"gentransform {__version__}")
    sub = top.add_subparsers(dest="command", required=True)
    b = sub.add_parser("bound", parents=[common, params], help="tables of sharp beta values")
    b.add_argument("--method", choices=("quadrature", "closed", "both"))
    v = sub.add_parser("verify", parents=[common, params], help="numerical verification reports")
    v.add_argument("check", choices=("sharpness", "identity", "membership", "hohlov"))
    v.add_argument("--f", help="test function: identity | extremal | transformed | random")
    v.add_argument("--seed", type=int)
    v.add_argument("--expect", choices=("member", "nonmember"))
    v.add_argument("--r-max", dest="r_max", type=float)
    v.add_argument("--theta", type=int)
    v.add_argument("--phi", type=int)
    sub.add_parser("selftest", parents=[common], help="golden-value suite")
    return top


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment.  Lists are
    comma- or space-separated."""
    types = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types or key in ("command", "check"):
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _convert(key, value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def _convert(key, value):
    if key in _LIST_KEYS:
        return [float(v) for v in value.replace(",", " ").split()]
    if key in ("thm", "seed", "theta", "phi", "order"):
        return int(value)
    if key in ("tol", "r_max"):
        return float(value)
    return value


def build_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(ns, "config", None):
        try:
            values.update(read_config_file(ns.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    for key, value in vars(ns).items():
        if key in known and value is not None:
            values[key] = value
    return RunConfig(**values)


def main(argv=None) -> int:
    parser = _parser()
    ns = parser.parse_args(argv)
    try:
        cfg = build_config(ns)
        if cfg.command == "bound":
            rows = cmd_bound(cfg)
            ok = True
        elif cfg.command == "verify":
            rows = cmd_verify(cfg)
            ok = all(_passed(r) for r in rows)
        else:
            rows = cmd_selftest(cfg)
            ok = all(_passed(r) for r in rows)
    except ConfigError as exc:
        parser.exit(2, f"gentransform: error: {exc}\n")
    meta_cfg = {k: v for k, v in asdict(cfg).items() if v is not None}
    text = render({"meta": {"version": __version__, "config": meta_cfg}, "rows": rows}, cfg.format)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "selftest":
        npass = sum(_passed(r) for r in rows)
        print(f"selftest: {npass}/{len(rows)} goldens passed", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
