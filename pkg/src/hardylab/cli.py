"""Command-line experiment runner.

    hfl <analysis> --spec FILE [--format csv|json] [--out PATH]
                   [--precision D] [--threads T] [--seed S]
    hfl builtins [--filter TEXT]

Analyses: condition, avg, multicorr, seminorm, equi, pattern, return-set,
probe.  Flags override descriptor fields.  The report payload is a pure
function of the descriptor (bit-reproducible across thread counts); wall
time and tool version live in the separate meta block.

Exit codes: 0 success, 2 schema error, 3 precondition violation,
4 uncertifiable rounding / precision exhausted, 5 unknown verdict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import catalog, kernels
from .conditions import check_condition_INF, check_condition_INT, check_property_P
from .correlate import multicorrelation, weighted_avg
from .descriptors import ANALYSES, Experiment, validate
from .errors import (
    HardyLabError,
    NoCompatibleWeightError,
    PreconditionError,
    PrecisionExhaustedError,
    SchemaError,
)
from .patterns import (
    banach_density_probe,
    cor_a4_probe,
    find_pattern,
    return_set,
    shifted_combination_value,
)
from .uniformity import (
    FiniteObservable,
    gowers_box_oracle,
    gowers_seminorm,
    joint_orbit_discrepancy,
    weyl_discrepancy,
)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_ROUNDING = 4
EXIT_UNKNOWN = 5


def run(desc):
    """Dispatch a descriptor; returns (payload, exit_code)."""
    exp = Experiment(desc)
    handler = _HANDLERS.get(exp.analysis)
    if handler is None:
        raise SchemaError("analysis", f"unhandled analysis {exp.analysis!r}")
    return handler(exp)


# ---------------------------------------------------------------------------
# analysis handlers


def _run_condition(exp):
    germs = exp.germs()
    inf = check_condition_INF(germs)
    bound = int(exp.params.get("modulus_bound", 10 ** 4))
    intv = check_condition_INT(germs, bound)
    try:
        w = exp.weight
        prop = check_property_P(germs, w)
        weight_name = w.name
    except NoCompatibleWeightError as e:
        prop = None
        weight_name = f"none ({e})"
    payload = {
        "integer_distance": inf.to_json(),
        "intersective_span": intv.to_json(),
        "weight": weight_name,
    }
    if prop is not None:
        payload["compatibility"] = prop.to_json()
    code = EXIT_UNKNOWN if (inf.kind == "unknown" and intv.kind == "unknown") else EXIT_OK
    return payload, code


def _sequence_values(exp, N):
    spec = exp.params.get("sequence", {"kind": "one"})
    kind = spec.get("kind", "one")
    n = np.arange(1, N + 1, dtype=np.float64)
    if kind == "one":
        return np.ones(N)
    if kind == "alternating":
        return np.where(np.arange(1, N + 1) % 2 == 0, 1.0, -1.0)
    if kind == "even_indicator":
        return (np.arange(1, N + 1) % 2 == 0).astype(np.float64)
    if kind in ("frac_germ", "e_germ"):
        fname = spec.get("function")
        fam = exp.family
        if fam is None or fname not in fam.functions:
            raise SchemaError("params.sequence.function", "unknown family function")
        f = fam.functions[fname]
        fr = np.array([f.frac_at(i) for i in range(1, N + 1)])
        if kind == "frac_germ":
            return fr
        return np.exp(2j * np.pi * fr)
    raise SchemaError("params.sequence.kind", f"unknown sequence kind {kind!r}")


def _run_avg(exp):
    N = exp.grid[-1]
    vals = _sequence_values(exp, N)
    rep = weighted_avg(vals, exp.weight, exp.grid, exp.threads,
                       mode=exp.mode.value)
    return {"report": rep.to_json(), "csv": rep.csv_rows()}, EXIT_OK


def _run_multicorr(exp):
    sys_ = exp.system
    if sys_ is None:
        raise SchemaError("system", "multicorr needs a system")
    if sys_.kind == "cyclic":
        A = exp.cyclic_subset()
    else:
        A = exp.box()
    rep = multicorrelation(
        sys_, A, exp.germs(), exp.mode, exp.weight, exp.grid,
        threads=exp.threads, samples=int(exp.params.get("samples", 4096)),
        seed=exp.seed, digits=exp.digits,
    )
    return {"report": rep.to_json(), "csv": rep.csv_rows()}, EXIT_OK


def _run_seminorm(exp):
    m = int(exp.params.get("m", 8))
    shift = int(exp.params.get("shift", 1))
    s_max = int(exp.params.get("s_max", 3))
    spec = exp.params.get("observable", {"kind": "indicator", "points": [0]})
    kind = spec.get("kind")
    if kind == "indicator":
        vals = np.zeros(m)
        for p in spec.get("points", [0]):
            vals[int(p) % m] = 1.0
    elif kind == "character":
        freq = int(spec.get("frequency", 1))
        vals = np.exp(2j * np.pi * freq * np.arange(m) / m)
    elif kind == "values":
        vals = np.asarray([complex(v[0], v[1]) if isinstance(v, list) else complex(v)
                           for v in spec["values"]])
        m = len(vals)
    else:
        raise SchemaError("params.observable.kind", f"unknown kind {kind!r}")
    h = FiniteObservable(vals, shift)
    sems = {}
    for s in range(s_max + 1):
        v = gowers_seminorm(h, s)
        sems[s] = {"re": v.real, "im": v.imag} if isinstance(v, complex) else v
    payload = {"m": m, "shift": shift, "seminorms": sems}
    if exp.params.get("oracle", False):
        payload["oracle"] = {
            s: gowers_box_oracle(h, s) for s in range(1, min(s_max, 3) + 1)
        }
    return payload, EXIT_OK


def _run_equi(exp):
    kind = exp.params.get("kind", "weyl")
    N = exp.grid[-1]
    if kind == "weyl":
        fname = exp.params.get("function")
        fam = exp.family
        if fam is None or fname not in fam.functions:
            raise SchemaError("params.function", "unknown family function")
        f = fam.functions[fname]
        phases = np.array([f.frac_at(n) for n in range(1, N + 1)])
        rep = weyl_discrepancy(phases, exp.weight, N,
                               int(exp.params.get("h_max", 10)), exp.threads)
        return {"report": rep.to_json(), "csv": rep.csv_rows()}, EXIT_OK
    if kind == "joint":
        rep = joint_orbit_discrepancy(
            exp.system, exp.germs(), exp.mode, exp.weight, N,
            max_level=int(exp.params.get("max_level", 4)), digits=exp.digits,
        )
        return {"report": rep.to_json(), "csv": rep.csv_rows()}, EXIT_OK
    raise SchemaError("params.kind", f"unknown equi kind {kind!r}")


def _run_pattern(exp):
    E = exp.build_set(exp.desc.get("set", {"type": "odds"}))
    res = find_pattern(
        E, exp.germs(), exp.mode,
        int(exp.params.get("n_max", 1000)),
        int(exp.params.get("a_max", 1000)),
        n_min=int(exp.params.get("n_min", 1)),
        digits=exp.digits,
    )
    return {"result": res.to_json(), "set": E.name}, EXIT_OK


def _run_return_set(exp):
    sys_ = exp.system
    if sys_ is None:
        raise SchemaError("system", "return-set needs a system")
    A = exp.cyclic_subset() if sys_.kind == "cyclic" else exp.box()
    N = int(exp.params.get("N", exp.grid[-1]))
    R = return_set(sys_, A, exp.germs(), exp.mode, N, exp.digits)
    windows = [int(w) for w in exp.params.get("window_lengths", [1000])]
    probe = banach_density_probe(R, windows)
    members = R.members()
    payload = {
        "N": N,
        "count": len(members),
        "members_head": members[:1000],
        "banach_probe": {str(k): v for k, v in probe.items()},
    }
    return payload, EXIT_OK


def _run_probe(exp):
    payload = {}
    combo = exp.params.get("combination")
    if combo == "example5":
        t = int(exp.params.get("t", 10 ** 4))
        val, err = shifted_combination_value(catalog.example5_combination(), t)
        payload["combination"] = {"t": t, "value": val, "error_bound": err}
    if exp.desc.get("set") is not None:
        E = exp.build_set(exp.desc["set"])
        res = cor_a4_probe(
            exp.germs(), int(exp.params.get("ell", 1)), E, exp.mode,
            int(exp.params.get("n_max", 1000)),
            int(exp.params.get("a_max", 1000)),
            n_min=int(exp.params.get("n_min", 1)),
            digits=exp.digits,
        )
        payload["search"] = res.to_json()
    if not payload:
        raise SchemaError("params", "probe needs a set and/or a combination")
    return payload, EXIT_OK


_HANDLERS = {
    "condition": _run_condition,
    "avg": _run_avg,
    "multicorr": _run_multicorr,
    "seminorm": _run_seminorm,
    "equi": _run_equi,
    "pattern": _run_pattern,
    "return-set": _run_return_set,
    "probe": _run_probe,
}


# ---------------------------------------------------------------------------
# report assembly and I/O


def run_report(desc):
    """Full run: returns (report dict, exit code); meta excluded from payload."""
    from .constants import precision_high_water_digits, reset_precision_high_water

    t0 = time.time()
    reset_precision_high_water()
    payload, code = run(desc)
    report = {
        "schema_version": 1,
        "analysis": desc["analysis"],
        "descriptor": desc,
        "payload": payload,
        "meta": {
            "version": catalog.TOOL_VERSION,
            "backend": kernels.BACKEND,
            "wall_time_s": round(time.time() - t0, 3),
            "precision_ceiling_digits": precision_high_water_digits(),
        },
    }
    return report, code


def payload_bytes(report):
    """Canonical bytes of the reproducible part of a report."""
    return json.dumps(report["payload"], sort_keys=True).encode()


def _emit(report, fmt, out):
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True, default=str)
    else:
        rows = report["payload"].get("csv")
        if rows is None:
            rows = [["key", "value"]] + [
                [k, json.dumps(v, sort_keys=True, default=str)]
                for k, v in sorted(report["payload"].items())
            ]
        buf = io.StringIO()
        csv.writer(buf).writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text + ("\n" if not text.endswith("\n") else ""))


def _parser():
    p = argparse.ArgumentParser(prog="hfl", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ANALYSES:
        sp = sub.add_parser(name, help=f"run a {name} analysis")
        sp.add_argument("--spec", required=True, help="descriptor JSON file")
        sp.add_argument("--format", choices=("csv", "json"), default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--precision", type=int, default=None, help="starting digits")
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
    bp = sub.add_parser("builtins", help="list named constants/families/systems")
    bp.add_argument("--filter", default="")
    bp.add_argument("--format", choices=("csv", "json"), default="json")
    bp.add_argument("--out", default=None)
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command == "builtins":
        payload = catalog.list_builtins(args.filter)
        report = {"payload": payload, "meta": {"version": catalog.TOOL_VERSION}}
        _emit(report, args.format, args.out)
        return EXIT_OK
    try:
        with open(args.spec) as fh:
            desc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        print(f"schema error: cannot read descriptor: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    desc.setdefault("analysis", args.command)
    if desc["analysis"] != args.command:
        print(
            f"schema error: analysis: descriptor says {desc['analysis']!r}, "
            f"command is {args.command!r}",
            file=sys.stderr,
        )
        return EXIT_SCHEMA
    for field in ("precision", "threads", "seed"):
        v = getattr(args, field)
        if v is not None:
            desc[field] = v
    try:
        validate(desc)
        report, code = run_report(desc)
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except PrecisionExhaustedError as e:
        print(f"uncertifiable rounding: {e}", file=sys.stderr)
        return EXIT_ROUNDING
    except (PreconditionError, NoCompatibleWeightError) as e:
        print(f"precondition violation: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except HardyLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
