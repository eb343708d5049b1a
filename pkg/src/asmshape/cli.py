"""Command-line entry point: ``asmshape <subcommand> [flags]``.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import metadata
from typing import List, Optional

import numpy as np

from . import arctic, efp, genfun, sampler, sixvertex
from .conventions import Case
from .svg import PALETTE, SvgCanvas

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _provenance(cfg: dict) -> dict:
    return {"tool": "asmshape", "version": _version(), "config": cfg, "seed": cfg.get("seed")}


def _comment_block(prov: dict, prefix: str = "# ") -> str:
    return "".join(prefix + line + "\n" for line in json.dumps(prov, sort_keys=True).splitlines())


def _json(prov: dict, body) -> str:
    return json.dumps({"provenance": prov, "result": body}, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- subcommands

def cmd_enumerate(cfg: dict):
    n, q = cfg["n"], Fraction(cfg["q"])
    body = {"n": n, "q": _frac(q), "count": str(sixvertex.weighted_count(n, q)),
            "minus_histogram": list(sixvertex.minus_histogram(n))}
    if cfg.get("list"):
        body["matrices"] = [m.to_list() for m in sixvertex.enumerate_asms(n)]
    return _json(_provenance(cfg), body), EXIT_OK


def cmd_efp(cfg: dict):
    n, q, method = cfg["n"], Fraction(cfg["q"]), cfg["method"]
    if method not in ("oracle", "residue", "both"):
        raise InputError(f"unknown method {method!r}")
    rs = [cfg["r"]] if cfg.get("r") is not None else range(1, n + 1)
    ss = [cfg["s"]] if cfg.get("s") is not None else range(1, n + 1)
    records, ok = [], True
    for r in rs:
        for s in ss:
            value = oracle = None
            if method in ("residue", "both"):
                value = efp.efp_residue(efp.EfpQuery.from_q(n, r, s, q))
            if method in ("oracle", "both"):
                oracle = sixvertex.efp_oracle(n, r, s, q)
            rec = efp.efp_record(n, r, s, q, value, oracle)
            if method != "both":
                rec["value"] = rec.pop("efp", rec.pop("oracle", None))
            ok &= rec.get("match", True)
            records.append(rec)
    if cfg["format"] == "csv":
        lines = ["n,r,s,q,value" + (",oracle,match" if method == "both" else "")]
        for rec in records:
            row = [rec["n"], rec["r"], rec["s"], rec["q"], rec.get("value", rec.get("efp"))]
            if method == "both":
                row += [rec["oracle"], rec["match"]]
            lines.append(",".join(str(v) for v in row))
        text = _comment_block(_provenance(cfg)) + "\n".join(lines) + "\n"
    else:
        text = _json(_provenance(cfg), records if len(records) > 1 else records[0])
    return text, EXIT_OK if ok else EXIT_MISMATCH


def _arctic_cases(cfg: dict) -> List[Case]:
    if cfg.get("all"):
        return list(Case)
    if cfg.get("case") is None:
        raise InputError("arctic needs --case or --all")
    return [Case.parse(cfg["case"])]


def cmd_arctic(cfg: dict):
    cases = _arctic_cases(cfg)
    m = cfg["samples"] or 201
    prov = _provenance(cfg)
    fmt = cfg["format"]
    if fmt == "svg":
        canvas = SvgCanvas(title="Arctic curves " + ", ".join(c.value for c in cases))
        canvas.frame()
        for c in cases:
            quarter = arctic.curve_sample(c, m)
            arcs = arctic.full_curve(quarter) if cfg.get("full") else [quarter]
            for arc in arcs:
                canvas.polyline(arc, colour=PALETTE[c.value], label=c.value)
        return _svg_with_provenance(canvas, prov), EXIT_OK
    if fmt == "csv":
        lines = []
        for c in cases:
            header, *rows = arctic.curve_csv(c, m).strip().split("\n")
            if not lines:
                lines.append("case," + header)
            lines.extend(f"{c.value},{row}" for row in rows)
        return _comment_block(prov) + "\n".join(lines) + "\n", EXIT_OK
    body = []
    for c in cases:
        pts = arctic.curve_sample(c, m)
        body.append({"case": c.value, "area": arctic.temperate_area(c),
                     "points": [[p.x, p.y] for p in pts],
                     "max_residual": max(abs(float(arctic.implicit_residual(c, p))) for p in pts)})
    return _json(prov, body if len(body) > 1 else body[0]), EXIT_OK


def _svg_with_provenance(canvas: SvgCanvas, prov: dict) -> str:
    text = canvas.render()
    head, rest = text.split("\n", 1)
    return head + "\n<!-- " + json.dumps(prov, sort_keys=True).replace("--", "- -") + " -->\n" + rest


def _chain_configs(cfg: dict) -> List[sampler.ChainConfig]:
    threads = max(1, cfg.get("threads") or 1)
    total = cfg["samples"] or 1000
    per = max(1, total // threads)
    return [sampler.ChainConfig(
        n=cfg["n"], q=Fraction(cfg["q"]), seed=cfg["seed"] + k,
        sweeps_burnin=cfg["burnin"], sweeps_between=cfg["between"], n_samples=per,
        batches=min(20, per), allow_large=bool(cfg.get("allow_large"))) for k in range(threads)]


def _chi_square(cfg: sampler.ChainConfig) -> dict:
    from scipy.stats import chisquare

    asms = list(sixvertex.enumerate_asms(cfg.n))
    index = {sampler.HeightState.from_asm(m).key(): i for i, m in enumerate(asms)}
    weights = np.array([float(cfg.q) ** m.minus_count() for m in asms])
    counts = np.bincount([index[k] for k in sampler.sample_states(cfg)], minlength=len(asms))
    res = chisquare(counts, weights / weights.sum() * counts.sum())
    return {"states": len(asms), "statistic": float(res.statistic), "p_value": float(res.pvalue)}


def cmd_sample(cfg: dict):
    if cfg.get("seed") is None:
        raise InputError("sample needs --seed")
    chains = _chain_configs(cfg)
    fld = sampler.run_chains(chains, threads=len(chains))
    prov = _provenance(cfg)
    fmt = cfg["format"]
    q = Fraction(cfg["q"])
    case = Case.parse(q) if q in (1, 2, 3) else None
    if fmt == "csv":
        return _comment_block(prov) + sampler.density_csv(fld), EXIT_OK
    if fmt == "svg":
        canvas = SvgCanvas(title=f"c-density n={fld.n} q={_frac(q)}")
        canvas.heatmap(fld.c_density)
        canvas.frame()
        if case is not None:
            for arc in arctic.full_curve(arctic.curve_sample(case, 201)):
                canvas.polyline(arc, colour=PALETTE[case.value])
        return _svg_with_provenance(canvas, prov), EXIT_OK
    body = {"n": fld.n, "q": _frac(q), "samples": fld.samples,
            "symmetry_deviation": fld.symmetry_deviation(),
            "trace_head": fld.trace[:5], "trace_tail": fld.trace[-5:]}
    if case is not None and fld.n >= 8:
        b = sampler.empirical_boundary(fld)
        body["boundary"] = {"points": len(b.points), "skipped_rows": b.skipped_rows,
                            "mean_distance": sampler.mean_curve_distance(b.points, case)}
    if fld.n <= 5:
        body["chi_square"] = _chi_square(chains[0])
    return _json(prov, body), EXIT_OK


def cmd_genfun(cfg: dict):
    case = Case.parse(cfg["case"] if cfg.get("case") is not None else cfg["q"])
    h = genfun.h_poly(cfg["n"], case)
    body = {"n": cfg["n"], "case": case.value, "coefficients": [_frac(c) for c in h.coeffs]}
    return _json(_provenance(cfg), body), EXIT_OK


COMMANDS = {"enumerate": cmd_enumerate, "efp": cmd_efp, "arctic": cmd_arctic,
            "sample": cmd_sample, "genfun": cmd_genfun}


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asmshape", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file whose keys override the flags")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=["json", "csv", "svg"], default="json")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int, default=1)
        return sp

    e = common(sub.add_parser("enumerate", help="weighted ASM counts"))
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--q", default="1")
    e.add_argument("--list", action="store_true", help="include every matrix")

    f = common(sub.add_parser("efp", help="emptiness formation probability"))
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--r", type=int)
    f.add_argument("--s", type=int)
    f.add_argument("--q", default="1")
    f.add_argument("--method", default="both")

    a = common(sub.add_parser("arctic", help="limit-shape curves"))
    a.add_argument("--case")
    a.add_argument("--all", action="store_true")
    a.add_argument("--samples", type=int)
    a.add_argument("--full", action="store_true", help="draw all four arcs")

    s = common(sub.add_parser("sample", help="Metropolis density field"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", default="1")
    s.add_argument("--samples", type=int)
    s.add_argument("--burnin", type=int, default=1000)
    s.add_argument("--between", type=int, default=10)
    s.add_argument("--allow-large", dest="allow_large", action="store_true")

    g = common(sub.add_parser("genfun", help="boundary generating function coefficients"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--case")
    g.add_argument("--q", default="1")
    return p


def resolve_config(argv: Optional[List[str]]) -> dict:
    args = build_parser().parse_args(argv)
    cfg = vars(args)
    path = cfg.pop("config", None)
    if path:
        with open(path) as fh:
            override = json.load(fh)
        if not isinstance(override, dict):
            raise InputError("config file must hold a JSON object")
        cfg.update(override)
    if "q" in cfg:
        try:
            q = Fraction(str(cfg["q"]))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"invalid q {cfg['q']!r}") from None
        cfg["q"] = _frac(q) if q.denominator != 1 else str(q.numerator)
    if cfg["subcommand"] in ("enumerate", "efp") and cfg["format"] == "svg":
        raise InputError(f"{cfg['subcommand']} has no svg output")
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = resolve_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INPUT
    except (InputError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        text, code = COMMANDS[cfg["subcommand"]](cfg)
    except (InputError, ValueError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort reporting
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_MISMATCH:
        print("error: residue and oracle values disagree", file=sys.stderr)
    return code
