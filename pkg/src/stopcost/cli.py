"""Command-line front end.

Subcommands wrap the library: `convert` rewrites a Markov model file in
mean-shifted coordinates, `rce`/`drce` run the finite-horizon estimators,
`rce-inf` and `drce-geom` the unbounded-horizon ones, `scenario` reproduces
the packaged queue/epidemic studies, and `bench` times the two cost-sequence
algorithms and the two powering representations.

Model files are JSON with fields kind ("markov" or "gas"), n, matrix
(row-major), optional cost/x0 vectors, and for gas models the optional
projection operators and cost_offset produced by `convert`. Nominal
distributions are two-column CSV (t, probability) with an optional header.
All results are written as CSV with 12-significant-digit reals, buffered so
failures produce no partial output. Exit codes: 0 success, 1 computational
failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .finite_horizon import CostSequence, cost_sequence_naive, cost_sequence_strided, rce_finite
from .infinite_horizon import decompose, geometric_drce, rce_infinite
from .markov_gas import MarkovChain, build_ab, project_state, to_gas, transfer_cost
from .matrix_core import mat_pow
from .scenarios import CsocParams, HealthParams, build_csoc_overtime, \
    build_health_chain, compare_report, sample_horizons
from .wasserstein import AmbiguitySet, drce_finite


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class ModelFile:
    kind: str
    n: int
    matrix: np.ndarray
    cost: np.ndarray | None
    x0: np.ndarray | None
    cost_offset: float


def load_model(path: str) -> ModelFile:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: model file must be a JSON object")
    kind = data.get("kind")
    if kind not in ("markov", "gas"):
        raise ValueError(f"{path}: kind must be 'markov' or 'gas', got {kind!r}")
    if "n" not in data or "matrix" not in data:
        raise ValueError(f"{path}: model file needs 'n' and 'matrix' fields")
    n = int(data["n"])
    if n < 1:
        raise ValueError(f"{path}: n must be >= 1")
    matrix = np.asarray(data["matrix"], dtype=float)
    if matrix.size != n * n:
        raise ValueError(f"{path}: matrix has {matrix.size} entries, expected n*n = {n * n}")
    matrix = matrix.reshape(n, n)

    def vector(name: str) -> np.ndarray | None:
        if name not in data or data[name] is None:
            return None
        v = np.asarray(data[name], dtype=float)
        if v.shape != (n,):
            raise ValueError(f"{path}: {name} must have {n} entries")
        return v

    return ModelFile(kind, n, matrix, vector("cost"), vector("x0"),
                     float(data.get("cost_offset", 0.0)))


def _require(model: ModelFile, name: str) -> np.ndarray:
    value = getattr(model, name)
    if value is None:
        raise ValueError(f"model file lacks a '{name}' vector")
    return value


def load_nominal(path: str) -> np.ndarray:
    """Two-column CSV (t, probability) -> dense nominal vector on 1..max t."""
    entries: dict[int, float] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                t = int(row[0])
            except ValueError:
                continue            # header line
            if len(row) < 2:
                raise ValueError(f"{path}: row for t={t} lacks a probability column")
            if t < 1:
                raise ValueError(f"{path}: stopping times must be >= 1, got {t}")
            if t in entries:
                raise ValueError(f"{path}: duplicate row for t={t}")
            entries[t] = float(row[1])
    if not entries:
        raise ValueError(f"{path}: no (t, probability) rows found")
    horizon = max(entries)
    nominal = np.zeros(horizon)
    for t, prob in entries.items():
        nominal[t - 1] = prob
    return nominal


def _cost_sequence(model: ModelFile, horizon: int, algo: str) -> CostSequence:
    fn = cost_sequence_naive if algo == "naive" else cost_sequence_strided
    if model.kind == "markov":
        MarkovChain.from_transition(model.matrix)    # validates the file
    seq = fn(model.matrix, _require(model, "x0"), _require(model, "cost"), horizon)
    if model.cost_offset != 0.0:
        seq = CostSequence(horizon, seq.values + model.cost_offset)
    return seq


def cmd_convert(args) -> str:
    model = load_model(args.model)
    if model.kind != "markov":
        raise ValueError("convert expects a markov model file")
    chain = MarkovChain.from_transition(model.matrix)
    gas = to_gas(chain)
    a_op, b_op = build_ab(model.n)
    out = {
        "kind": "gas",
        "n": model.n - 1,
        "matrix": gas.m_bar.ravel().tolist(),
        "a_op": a_op.ravel().tolist(),
        "b_op": b_op.ravel().tolist(),
        "stationary": gas.stationary.tolist(),
    }
    if model.cost is not None:
        shifted_cost, offset = transfer_cost(gas, model.cost)
        out["cost"] = shifted_cost.tolist()
        out["cost_offset"] = offset
    if model.x0 is not None:
        out["x0"] = project_state(gas, model.x0).tolist()
    return json.dumps(out, indent=2) + "\n"


def cmd_rce(args) -> str:
    model = load_model(args.model)
    if args.horizon < 1:
        raise ValueError("--horizon must be >= 1")
    seq = _cost_sequence(model, args.horizon, args.algo)
    t_star, value = rce_finite(seq)
    return f"t_star,value\n{t_star},{_fmt(value)}\n"


def cmd_drce(args) -> str:
    model = load_model(args.model)
    nominal = load_nominal(args.nominal)
    seq = _cost_sequence(model, nominal.shape[0], args.algo)
    solution = drce_finite(seq, AmbiguitySet(nominal, args.radius))
    return f"value,case_used\n{_fmt(solution.value)},{solution.case_used}\n"


def _to_shifted(model: ModelFile) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Strictly stable (matrix, cost, x0, offset) for unbounded-horizon work."""
    if model.kind == "gas":
        return model.matrix, _require(model, "cost"), _require(model, "x0"), model.cost_offset
    chain = MarkovChain.from_transition(model.matrix)
    gas = to_gas(chain)
    shifted_cost, offset = transfer_cost(gas, _require(model, "cost"))
    v0 = project_state(gas, _require(model, "x0"))
    return gas.m_bar, shifted_cost, v0, offset


def cmd_rce_inf(args) -> str:
    matrix, cost, x0, offset = _to_shifted(load_model(args.model))
    result = rce_infinite(matrix, cost, x0)
    t_star = "" if result.t_star is None else str(result.t_star)
    return f"kind,t_star,value\n{result.kind},{t_star},{_fmt(result.value + offset)}\n"


def cmd_drce_geom(args) -> str:
    matrix, cost, x0, offset = _to_shifted(load_model(args.model))
    osum = decompose(matrix, cost, x0)
    rho_star, value, bound = geometric_drce(osum, args.rho, args.radius, args.eps)
    return ("rho_star,value,truncation_bound\n"
            f"{_fmt(rho_star)},{_fmt(value + offset)},{_fmt(bound)}\n")


def cmd_scenario(args) -> str:
    if args.name == "csoc":
        params = CsocParams()
        matrix, x0, cost = build_csoc_overtime(params)
        samples = sample_horizons(params.overtime_min, params.overtime_max,
                                  params.overtime_mean, args.samples, args.seed)
        report = compare_report(matrix, x0, cost, samples, args.xi, args.seed,
                                copies=params.analysts,
                                support_max=params.overtime_max)
    else:
        params = HealthParams(model=args.name)
        matrix, x0, cost = build_health_chain(params)
        samples = sample_horizons(params.horizon_min, params.horizon_max,
                                  params.horizon_mean, args.samples, args.seed)
        report = compare_report(matrix, x0, cost, samples, args.xi, args.seed,
                                support_max=params.horizon_max)
    return report.CSV_HEADER + "\n" + report.csv_row() + "\n"


def _bench_chain(n: int, rng: np.random.Generator) -> np.ndarray:
    raw = rng.random((n, n)) + 0.05
    return raw / raw.sum(axis=0)


def cmd_bench(args) -> str:
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"--sizes must be comma-separated integers: {exc}") from None
    if not sizes or any(n < 2 for n in sizes):
        raise ValueError("--sizes needs integers >= 2")
    if args.horizon < 4:
        raise ValueError("--horizon must be >= 4")
    rng = np.random.default_rng(20240817)
    lines = ["n,horizon,naive_seconds,sabs_seconds,markov_pow_seconds,gas_pow_seconds"]
    for n in sizes:
        transition = _bench_chain(n, rng)
        gas = to_gas(MarkovChain.from_transition(transition))
        x0 = np.zeros(n)
        x0[0] = 1.0
        cost = rng.random(n)
        shifted_cost, _ = transfer_cost(gas, cost)
        v0 = project_state(gas, x0)

        start = time.perf_counter()
        cost_sequence_naive(gas.m_bar, v0, shifted_cost, args.horizon)
        naive_s = time.perf_counter() - start
        start = time.perf_counter()
        cost_sequence_strided(gas.m_bar, v0, shifted_cost, args.horizon)
        sabs_s = time.perf_counter() - start
        start = time.perf_counter()
        mat_pow(transition.T, args.horizon)
        markov_s = time.perf_counter() - start
        start = time.perf_counter()
        mat_pow(gas.m_bar.T, args.horizon)
        gas_s = time.perf_counter() - start
        lines.append(f"{n},{args.horizon},{_fmt(naive_s)},{_fmt(sabs_s)},"
                     f"{_fmt(markov_s)},{_fmt(gas_s)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stopcost",
        description="Robust cost estimation for linear systems with uncertain stopping times.")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="rewrite a Markov model in mean-shifted coordinates")
    convert.add_argument("--model", required=True, help="input markov model JSON")
    convert.add_argument("--out", help="output path (default stdout)")
    convert.set_defaults(run=cmd_convert)

    rce = sub.add_parser("rce", help="best single stopping time over a finite horizon")
    rce.add_argument("--model", required=True)
    rce.add_argument("--horizon", type=int, required=True)
    rce.add_argument("--algo", choices=("naive", "sabs"), default="sabs")
    rce.add_argument("--out")
    rce.set_defaults(run=cmd_rce)

    drce = sub.add_parser("drce", help="worst horizon distribution near a nominal one")
    drce.add_argument("--model", required=True)
    drce.add_argument("--nominal", required=True, help="two-column CSV (t, probability)")
    drce.add_argument("--radius", type=float, required=True)
    drce.add_argument("--algo", choices=("naive", "sabs"), default="sabs")
    drce.add_argument("--out")
    drce.set_defaults(run=cmd_drce)

    rce_inf = sub.add_parser("rce-inf", help="supremum cost over an unbounded horizon")
    rce_inf.add_argument("--model", required=True)
    rce_inf.add_argument("--out")
    rce_inf.set_defaults(run=cmd_rce_inf)

    geom = sub.add_parser("drce-geom", help="worst geometric stopping law near a nominal rate")
    geom.add_argument("--model", required=True)
    geom.add_argument("--rho", type=float, required=True, help="nominal success rate")
    geom.add_argument("--radius", type=float, required=True)
    geom.add_argument("--eps", type=float, default=1e-9, help="truncation tolerance")
    geom.add_argument("--out")
    geom.set_defaults(run=cmd_drce_geom)

    scenario = sub.add_parser("scenario", help="packaged queue/epidemic comparison studies")
    scenario.add_argument("name", choices=("csoc", "sir", "svir"))
    scenario.add_argument("--samples", type=int, default=100)
    scenario.add_argument("--seed", type=int, default=0)
    scenario.add_argument("--xi", type=float, default=0.0)
    scenario.add_argument("--out")
    scenario.set_defaults(run=cmd_scenario)

    bench = sub.add_parser("bench", help="time the cost-sequence algorithms and powering forms")
    bench.add_argument("--sizes", default="16,32,64", help="comma-separated state counts")
    bench.add_argument("--horizon", type=int, default=1024)
    bench.add_argument("--out")
    bench.set_defaults(run=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.run(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
