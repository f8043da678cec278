"""Command-line front end.

Subcommands: group, folner, density, quasitile, marker, freq, entropy, verify.
Successful runs exit 0 and print (or write with --out) a JSON report that
embeds the resolved run configuration.  Usage and domain errors exit 2 with a
diagnostic on stderr; capacity errors exit 3 and name the violated cap.
Randomized subcommands accept --seed and are bit-reproducible for a fixed
seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .density import Window, e_core, lower_density_over_window
from .errors import CapacityError, DomainError
from .folner import FolnerFamily, folner_set, invariance_defect, find_invariant_index
from .groups import FiniteSubset, group_op, parse_group, set_inverse, set_product, translate
from .quasitiling import absorb_lower_tiles, disjointify, eps_disjoint_check
from .serialize import (
    configuration_from_json,
    json_dumps,
    read_configuration_binary,
    subset_from_json,
    tiling_from_json,
    tiling_to_json,
    window_from_json,
)
from .symbolic import (
    Distribution,
    Pattern,
    Alphabet,
    bernoulli_entropy_exact,
    conditional_entropy,
    empirical_entropy_rate,
    pattern_frequency,
    shannon_entropy,
)
from . import verify as verify_mod

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3


def _load_json_arg(text: str):
    """Inline JSON, or @path to read a JSON file."""
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    return json.loads(text)


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def _emit(report: dict, out: str | None) -> None:
    text = json_dumps(report)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_configuration(path: str):
    data = Path(path).read_bytes()
    if data[:8] == b"FOLNRGRD":
        return read_configuration_binary(data)
    return configuration_from_json(json.loads(data.decode()))


def _window_arg(group, text: str) -> Window:
    """Either a comma-separated box extent ("64" or "64,48") or JSON."""
    if text.lstrip().startswith(("{", "[", "@")):
        return window_from_json(group, _load_json_arg(text))
    extents = [int(x) for x in text.split(",")]
    if len(extents) == 1:
        extents = extents * group.dim
    if len(extents) != group.dim:
        raise DomainError(f"window box needs {group.dim} extents")
    return Window.box(group, (0,) * group.dim, extents)


def _shape_arg(group, text: str) -> FiniteSubset:
    if text.lstrip().startswith(("[", "@")):
        return subset_from_json(group, _load_json_arg(text))
    extents = [int(x) for x in text.split(",")]
    if len(extents) == 1:
        extents = extents * group.dim
    if len(extents) != group.dim:
        raise DomainError(f"shape box needs {group.dim} extents")
    return FiniteSubset.box(group, (0,) * group.dim, extents)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_group(args) -> dict:
    group = parse_group(args.group)
    cfg = {"command": "group", "group": group.label, "op": args.op}
    if args.op in ("mul", "inv", "identity"):
        g = json.loads(args.a) if args.a else None
        h = json.loads(args.b) if args.b else None
        result = group_op(group, args.op, g, h)
        return {"config": cfg, "result": list(result)}
    E = subset_from_json(group, _load_json_arg(args.e_set)) if args.e_set else None
    F = subset_from_json(group, _load_json_arg(args.f_set)) if args.f_set else None
    if args.op == "product":
        if E is None or F is None:
            raise DomainError("product needs --e-set and --f-set")
        return {"config": cfg, "result": set_product(E, F).to_json()}
    if args.op == "inverse":
        if E is None:
            raise DomainError("inverse needs --e-set")
        return {"config": cfg, "result": set_inverse(E).to_json()}
    if args.op == "translate":
        if F is None or args.a is None:
            raise DomainError("translate needs --f-set and --a")
        g = group.check_element(json.loads(args.a))
        cfg["side"] = args.side
        return {"config": cfg, "result": translate(F, g, args.side).to_json()}
    raise DomainError(f"unknown group op: {args.op!r}")


def _cmd_folner(args) -> dict | None:
    group = parse_group(args.group)
    family = FolnerFamily(group, style=args.style)
    cfg = {
        "command": f"folner {args.action}",
        "group": group.label,
        "style": args.style,
    }
    if args.action == "scan":
        E = subset_from_json(group, _load_json_arg(args.e_set))
        lines = ["n,size,defect"]
        for n in range(1, args.n_max + 1):
            F = folner_set(family, n)
            defect = invariance_defect(F, E)
            lines.append(f"{n},{len(F)},{defect.numerator}/{defect.denominator}")
        text = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return None
    if args.action == "set":
        F = folner_set(family, args.n)
        return {"config": {**cfg, "n": args.n}, "size": len(F), "set": F.to_json()}
    if args.action == "find":
        E = subset_from_json(group, _load_json_arg(args.e_set))
        delta = _fraction_arg(args.delta)
        n = find_invariant_index(family, E, delta, args.n_max)
        return {
            "config": {**cfg, "delta": args.delta, "n_max": args.n_max},
            "found": n,
        }
    raise DomainError(f"unknown folner action: {args.action!r}")


def _cmd_density(args) -> dict:
    group = parse_group(args.group)
    cfg = {"command": f"density {args.action}", "group": group.label}
    if args.action == "lower":
        H = subset_from_json(group, _load_json_arg(args.h_set))
        F = _shape_arg(group, args.shape)
        window = _window_arg(group, args.window)
        rep = lower_density_over_window(H, F, window)
        return {
            "config": cfg,
            "value_num": rep["value"].numerator,
            "value_den": rep["value"].denominator,
            "argmin": list(rep["argmin"]),
            "interior_size": rep["interior_size"],
        }
    if args.action == "core":
        F = subset_from_json(group, _load_json_arg(args.f_set))
        E = subset_from_json(group, _load_json_arg(args.e_set))
        core = e_core(F, E)
        return {"config": cfg, "size": len(core), "core": core.to_json()}
    raise DomainError(f"unknown density action: {args.action!r}")


def _cmd_quasitile(args) -> dict | None:
    cfg = {"command": f"quasitile {args.action}"}
    if args.action == "build":
        group = parse_group(args.group)
        window = _window_arg(group, args.window)
        if args.shapes.lstrip().startswith(("[", "@")):
            shapes = [subset_from_json(group, s) for s in _load_json_arg(args.shapes)]
        else:
            shapes = [
                FiniteSubset.box(group, (0,) * group.dim, (int(s),) * group.dim)
                for s in args.shapes.split(",")
            ]
        eps = _fraction_arg(args.eps)
        rep = verify_mod.quasitiling_build_report(window, shapes, eps)
        tiling = rep.pop("tiling")
        rep.pop("certificate")
        doc = tiling_to_json(tiling)
        doc["meta"]["report"] = {
            k: v for k, v in rep.items() if k not in ("suite",)
        }
        if args.out:
            Path(args.out).write_text(json_dumps(doc) + "\n")
            args.out = None  # the artifact owns the path; the report goes to stdout
        report = {"config": {**cfg, "group": group.label, "eps": args.eps,
                             "shapes": args.shapes, "window": args.window,
                             "out": args.out},
                  **{k: v for k, v in rep.items() if k != "suite"}}
        return report
    if args.action == "check":
        tiling = tiling_from_json(_load_json_arg(args.tiling))
        eps = _fraction_arg(args.eps)
        res = eps_disjoint_check(tiling, eps)
        out = {"config": {**cfg, "eps": args.eps}, "pass": res["pass"]}
        if res["pass"]:
            cert = res["certificate"]
            out["min_retained"] = min(cert["retained_fraction"], default=Fraction(1))
            out["tiles"] = len(cert["retained_fraction"])
        else:
            out["counterexample"] = res["counterexample"]
        return out
    if args.action == "disjointify":
        tiling = tiling_from_json(_load_json_arg(args.tiling))
        out_tiling, cert = disjointify(tiling, order=args.order)
        out_path = args.out
        if args.out:
            Path(args.out).write_text(json_dumps(tiling_to_json(out_tiling)) + "\n")
            args.out = None
        return {
            "config": {**cfg, "out": out_path, "order": args.order},
            "tiles": len(cert["tile_ids"]),
            "shapes_out": len(out_tiling.shapes),
            "min_retained": min(cert["retained_fraction"], default=Fraction(1)),
        }
    if args.action == "absorb":
        group = parse_group(args.group)
        s_tilde = subset_from_json(group, _load_json_arg(args.s_tilde))
        levels_doc = _load_json_arg(args.levels)
        levels = [
            (subset_from_json(group, lv["shape"]), subset_from_json(group, lv["centers"]))
            for lv in levels_doc
        ]
        result, rep = absorb_lower_tiles(s_tilde, levels)
        if args.out:
            Path(args.out).write_text(json_dumps({"set": result.to_json()}) + "\n")
            args.out = None
        return {"config": {**cfg, "group": group.label}, **rep}
    if args.action == "marker":
        return _cmd_marker(args)
    raise DomainError(f"unknown quasitile action: {args.action!r}")


def _cmd_marker(args) -> dict:
    group = parse_group(args.group)
    window = _window_arg(group, args.window)
    F = _shape_arg(group, args.shape)
    rep = verify_mod.marker_report(window, F)
    doc = {
        "config": {"command": "marker", "group": group.label,
                   "window": args.window, "shape": args.shape},
        "markers": rep["markers"],
        "interior": rep["interior"],
        "disjoint_ok": rep["disjoint_ok"],
        "covering_ok": rep["covering_ok"],
        "v": rep["v"].to_json(),
        "f_cov": rep["f_cov"].to_json(),
    }
    if getattr(args, "out", None):
        Path(args.out).write_text(json_dumps(doc) + "\n")
    return doc


def _cmd_freq(args) -> dict:
    cfg = {"command": "freq", "config_path": args.config, "row": args.row}
    y = _load_configuration(args.config)
    pat = _load_json_arg(args.pattern)
    group = y.group
    domain = subset_from_json(group, pat["domain"])
    alphabet = y.alphabets[args.row]
    values = dict(zip(domain.sorted_elements(), pat["values"])) \
        if isinstance(pat["values"], list) else {
            tuple(json.loads(k) if isinstance(k, str) else k): v
            for k, v in pat["values"].items()
        }
    Q = Pattern(alphabet, domain, values)
    P = Pattern(alphabet, y.window.region,
                {g: y.rows[args.row][g] for g in y.window.region})
    fr = pattern_frequency(P, Q)
    return {"config": cfg, "fr_num": fr.numerator, "fr_den": fr.denominator}


def _cmd_entropy(args) -> dict:
    cfg = {"command": f"entropy {args.action}"}
    if args.action == "shannon":
        weights = [float(x) for x in args.weights.split(",")]
        d = Distribution(list(range(len(weights))), weights)
        return {"config": {**cfg, "weights": args.weights}, "entropy": shannon_entropy(d)}
    if args.action == "conditional":
        doc = _load_json_arg(args.joint)
        d = Distribution([tuple(o) for o in doc["outcomes"]], doc["weights"])
        return {"config": cfg, "entropy": conditional_entropy(d)}
    if args.action == "exact":
        weights = [float(x) for x in args.weights.split(",")]
        d = Distribution(list(range(len(weights))), weights)
        group = parse_group(args.group)
        F = _shape_arg(group, args.shape)
        return {
            "config": {**cfg, "weights": args.weights, "group": group.label,
                       "shape": args.shape},
            "entropy_rate": bernoulli_entropy_exact(d, F),
        }
    if args.action == "empirical":
        y = _load_configuration(args.config)
        F = _shape_arg(y.group, args.shape)
        rep = empirical_entropy_rate(y, F)
        return {"config": {**cfg, "config_path": args.config, "shape": args.shape},
                **rep}
    raise DomainError(f"unknown entropy action: {args.action!r}")


_VERIFY_SUITES = {
    "folner-defect": lambda args: verify_mod.folner_defect_suite(args.n_max),
    "core-lemma": lambda args: verify_mod.core_lemma_suite(
        args.trials, args.seed, eps=_fraction_arg(args.eps) if args.eps else None
    ),
    "core-composition": lambda args: verify_mod.core_composition_suite(args.trials, args.seed),
    "quasitiling": lambda args: verify_mod.quasitiling_suite(args.trials, args.seed, args.group),
    "disjointify": lambda args: verify_mod.disjointify_suite(args.trials, args.seed, args.group),
    "marker": lambda args: verify_mod.marker_suite(args.trials, args.seed, args.group),
    "boundary-lemma": lambda args: verify_mod.boundary_suite(args.trials, args.seed),
    "large-core": lambda args: verify_mod.large_core_suite(args.trials, args.seed),
    "absorption": lambda args: verify_mod.absorption_suite(args.trials, args.seed),
    "entropy": lambda args: verify_mod.entropy_suite(args.seed, trials=args.trials),
    "frequency-lemma": lambda args: verify_mod.frequency_suite(args.trials, args.seed),
}


def _cmd_verify(args) -> dict:
    suite = _VERIFY_SUITES[args.suite](args)
    cfg = {
        "command": f"verify {args.suite}",
        "trials": args.trials,
        "seed": args.seed,
        "group": args.group,
        "eps": args.eps,
        "n_max": args.n_max,
    }
    return {"config": cfg, **suite}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folnerlab",
        description="Folner sets, windowed densities, quasitilings and block entropy",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="single-element and set-algebra operations")
    p.add_argument("--group", required=True)
    p.add_argument("--op", required=True,
                   choices=["mul", "inv", "identity", "product", "inverse", "translate"])
    p.add_argument("--a", help="element as JSON array")
    p.add_argument("--b", help="element as JSON array")
    p.add_argument("--e-set", dest="e_set", help="subset as JSON or @file")
    p.add_argument("--f-set", dest="f_set", help="subset as JSON or @file")
    p.add_argument("--side", default="left", choices=["left", "right"])
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_group)

    p = sub.add_parser("folner", help="Folner sets, defect scans, invariance search")
    p.add_argument("action", choices=["scan", "set", "find"])
    p.add_argument("--group", required=True)
    p.add_argument("--style", default="corner", choices=["corner", "centered"])
    p.add_argument("--e-set", dest="e_set", help="subset as JSON or @file")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--n-max", dest="n_max", type=int, default=50)
    p.add_argument("--delta", help="rational threshold, e.g. 0.1 or 1/10")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_folner)

    p = sub.add_parser("density", help="windowed lower density and E-cores")
    p.add_argument("action", choices=["lower", "core"])
    p.add_argument("--group", required=True)
    p.add_argument("--h-set", dest="h_set", help="subset as JSON or @file")
    p.add_argument("--e-set", dest="e_set")
    p.add_argument("--f-set", dest="f_set")
    p.add_argument("--shape", help="box extents or JSON subset")
    p.add_argument("--window", help="box extents or JSON window")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser("quasitile", help="build/check/disjointify/absorb/marker")
    p.add_argument("action", choices=["build", "check", "disjointify", "absorb", "marker"])
    p.add_argument("--group", default="z2")
    p.add_argument("--window", help="box extents or JSON window")
    p.add_argument("--shapes", help="nested box sides, e.g. 4,8 (smallest first)")
    p.add_argument("--shape", help="marker shape (box extents or JSON)")
    p.add_argument("--eps", help="rational in (0,1/2) for build, (0,1] for check")
    p.add_argument("--tiling", help="quasitiling JSON or @file")
    p.add_argument("--order", default="numbering", choices=["numbering", "insertion"],
                   help="contested-element assignment rule for disjointify")
    p.add_argument("--s-tilde", dest="s_tilde", help="subset as JSON or @file")
    p.add_argument("--levels", help="JSON list of {shape, centers}, largest level first")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_quasitile)

    p = sub.add_parser("marker", help="greedy maximal marker packing")
    p.add_argument("--group", required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--shape", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_marker)

    p = sub.add_parser("freq", help="block frequency in a stored configuration")
    p.add_argument("--config", required=True, help="configuration file (JSON or binary)")
    p.add_argument("--pattern", required=True, help="pattern JSON or @file")
    p.add_argument("--row", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_freq)

    p = sub.add_parser("entropy", help="entropy formulas and estimators")
    p.add_argument("action", choices=["shannon", "conditional", "exact", "empirical"])
    p.add_argument("--weights", help="comma-separated probabilities")
    p.add_argument("--joint", help="JSON {outcomes: [[a,b]...], weights: [...]}")
    p.add_argument("--group", default="z1")
    p.add_argument("--shape", help="box extents or JSON subset")
    p.add_argument("--config", help="configuration file (JSON or binary)")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("verify", help="randomized verification suites")
    p.add_argument("suite", choices=sorted(_VERIFY_SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--group", default="z2")
    p.add_argument("--eps", help="fix the instance eps instead of sampling it")
    p.add_argument("--n-max", dest="n_max", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, OverflowError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report is not None:
        _emit(report, getattr(args, "out", None))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
