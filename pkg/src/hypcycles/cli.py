"""Batch driver: every verification suite and experiment as a subcommand.

Outputs are byte-reproducible: fixed seeds, fixed summation order, floats
rendered with repr.  Exit codes: 0 all checks pass, 1 a check failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds, cycles, decompose, lorentz, orbits, transform

DEFAULT_TOLERANCES = {
    "group": 1e-9,
    "roundtrip": 1e-9,
    "dist": 1e-10,
    "gr": 1e-7,
    "transform": 1e-6,
    "geom": 1e-6,
    "coset": 1e-8,
    "quant": 1e-9,
    "quad": 1e-9,
}

SEED = 20211130


@dataclass(frozen=True)
class RunConfig:
    d: int = 3
    n: int = 2
    mu_list: tuple = (1.0,)
    nu: complex = 0.0
    u: tuple = ()
    generators_path: str = None
    max_word_length: int = 6
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: str = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if not (2 <= self.n <= self.d - 1):
            raise ValueError("need 2 <= n <= d-1")
        if any(t <= 0 for t in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    @property
    def cfg(self):
        return lorentz.CycleConfig(self.d, self.n)

    def tol(self, name):
        return self.tolerances[name]


class ConfigError(Exception):
    pass


def _build_parser():
    p = argparse.ArgumentParser(
        prog="hypcycles",
        description="verification suites and experiments for hyperbolic cycle numerics",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("verify", "run the cross-check suites (decompositions, identities, transform, distances)"),
        ("delta", "delta table of a generator-set experiment"),
        ("count", "counting function and growth fit of a generator-set experiment"),
        ("transform", "spherical-transform values, closed form vs quadrature"),
        ("asymptote", "rescaled large-mu main term with its error envelope"),
    ]:
        q = sub.add_parser(name, help=doc)
        q.add_argument("--d", type=int, default=None)
        q.add_argument("--n", type=int, default=None)
        q.add_argument("--mu", type=str, default=None, help="comma-separated list")
        q.add_argument("--nu-re", type=float, default=None)
        q.add_argument("--nu-im", type=float, default=None)
        q.add_argument("--u", type=str, default=None, help="comma-separated direction")
        q.add_argument("--gens", type=str, default=None, help="generator JSON file")
        q.add_argument("--max-len", type=int, default=None)
        q.add_argument("--tol", action="append", default=[], metavar="NAME=VAL")
        q.add_argument("--out", type=str, default=None)
        q.add_argument("--format", type=str, default=None, choices=["csv", "json"])
        q.add_argument("--workers", type=int, default=None)
        q.add_argument("--config", type=str, default=None, help="JSON config file")
    return p


def _config_from_args(args):
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}")
    merged = {
        "d": 3, "n": 2, "mu_list": [1.0], "nu_re": 0.0, "nu_im": 0.0, "u": [],
        "generators_path": None, "max_word_length": 6,
        "tolerances": dict(DEFAULT_TOLERANCES), "output_path": None,
        "format": "csv", "workers": 1,
    }
    for key in merged:
        if key in base:
            if key == "tolerances":
                merged["tolerances"].update(base[key])
            else:
                merged[key] = base[key]
    if args.d is not None:
        merged["d"] = args.d
    if args.n is not None:
        merged["n"] = args.n
    if args.mu is not None:
        merged["mu_list"] = [float(x) for x in args.mu.split(",") if x]
    if args.nu_re is not None:
        merged["nu_re"] = args.nu_re
    if args.nu_im is not None:
        merged["nu_im"] = args.nu_im
    if args.u is not None:
        merged["u"] = [float(x) for x in args.u.split(",") if x]
    if args.gens is not None:
        merged["generators_path"] = args.gens
    if args.max_len is not None:
        merged["max_word_length"] = args.max_len
    if args.out is not None:
        merged["output_path"] = args.out
    if args.format is not None:
        merged["format"] = args.format
    if args.workers is not None:
        merged["workers"] = args.workers
    for item in args.tol:
        if "=" not in item:
            raise ConfigError(f"bad --tol {item!r}, expected NAME=VAL")
        name, val = item.split("=", 1)
        try:
            merged["tolerances"][name] = float(val)
        except ValueError:
            raise ConfigError(f"bad --tol value {val!r}")
    try:
        return RunConfig(
            d=merged["d"], n=merged["n"], mu_list=tuple(merged["mu_list"]),
            nu=complex(merged["nu_re"], merged["nu_im"]), u=tuple(merged["u"]),
            generators_path=merged["generators_path"],
            max_word_length=merged["max_word_length"],
            tolerances=merged["tolerances"], output_path=merged["output_path"],
            format=merged["format"], workers=merged["workers"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _load_generators(config):
    if config.generators_path is None:
        raise ConfigError("this command needs --gens FILE")
    try:
        return orbits.GeneratorSet.from_json(config.generators_path)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load generators: {exc}")
    except ValueError as exc:
        raise ConfigError(f"invalid generators: {exc}")


def _emit(config, text):
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tol_header(config, names):
    items = " ".join(f"{k}={config.tol(k)!r}" for k in names)
    return f"# tolerances: {items}\n"


# ---------------------------------------------------------------------------
# verify


def cmd_verify(config):
    rng = np.random.default_rng(SEED)
    checks = []

    def record(name, max_err, tol, count):
        checks.append({"check": name, "max_err": float(max_err), "tol": float(tol),
                       "n": int(count), "status": "pass" if max_err <= tol else "fail"})

    d = config.d
    err = 0.0
    for _ in range(200):
        err = max(err, lorentz.group_residual(lorentz.random_lorentz(rng, d)))
    record("constructor_group_residual", err, config.tol("group"), 200)

    errs = {"nak": 0.0, "ank": 0.0, "kak": 0.0}
    for _ in range(200):
        g = lorentz.random_lorentz(rng, d)
        errs["nak"] = max(errs["nak"], float(np.max(np.abs(decompose.nak(g).product() - g))))
        errs["ank"] = max(errs["ank"], float(np.max(np.abs(decompose.ank(g).product() - g))))
        errs["kak"] = max(errs["kak"], float(np.max(np.abs(decompose.kak(g).product() - g))))
    for name, e in errs.items():
        record(f"roundtrip_{name}", e, config.tol("roundtrip"), 200)

    err = 0.0
    for _ in range(200):
        u, r = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
        v, t = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
        a = decompose.dist(decompose.from_horospherical(u, r),
                           decompose.from_horospherical(v, t))
        b = decompose.dist_horospherical(u, r, v, t)
        err = max(err, abs(a - b))
    record("distance_duality", err, config.tol("dist"), 200)

    err = 0.0
    for _ in range(10):
        al, be = rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)
        nu = rng.uniform(-2, 2) if rng.uniform() < 0.5 else 1j * rng.uniform(0, 2)
        err = max(err, transform.gr_identity_3_471_9(al, be, nu)[2])
    record("gr_3_471_9", err, config.tol("gr"), 10)
    err = 0.0
    for _ in range(10):
        a, b = rng.uniform(0.4, 2.5), rng.uniform(0.4, 2.5)
        c = rng.uniform(0.0, 2.0)
        nu = rng.uniform(-1.5, 1.5)
        err = max(err, transform.gr_identity_6_726_4(a, b, c, nu, (-1) ** int(rng.integers(2)))[2])
    record("gr_6_726_4", err, config.tol("gr"), 10)
    err = 0.0
    for _ in range(10):
        a, b, c = rng.uniform(0.4, 2.5), rng.uniform(-2, 2), rng.uniform(0.5, 2.5)
        err = max(err, transform.gr_identity_6_592_12(a, b, c)[2])
    record("gr_6_592_12", err, config.tol("gr"), 10)

    err = 0.0
    for dd in (3, 4):
        for mu in config.mu_list:
            for nu in (0.0, 1j):
                hc = transform.selberg_transform_closed(dd, mu, nu)
                hq = transform.selberg_transform_quadrature(dd, mu, nu)
                err = max(err, abs(hc - hq) / max(abs(hc), 1e-300))
    record("transform_agreement", err, config.tol("transform"), 2 * len(config.mu_list) * 2)

    gens = orbits.picard_generators() if config.generators_path is None \
        else _load_generators(config)
    if gens.d != config.d:
        raise ConfigError(f"generator dimension {gens.d} does not match --d {config.d}")
    cfg = config.cfg
    ball = orbits.ball_enumerate(gens, min(3, config.max_word_length),
                                 quant=config.tol("quant"))
    err = 0.0
    count = 0
    for _, g in ball[1:13]:
        u = rng.uniform(-1.5, 1.5, size=cfg.n - 1)
        r = float(np.exp(rng.uniform(-1, 1)))
        _, _, gap = cycles.verify_f_geometric(g, u, r, cfg)
        err = max(err, gap)
        count += 1
    record("cycle_distance_oracle", err, config.tol("geom"), count)

    lines = ["check,status,max_err,tol,n\n"]
    for c in checks:
        lines.append(f"{c['check']},{c['status']},{c['max_err']!r},{c['tol']!r},{c['n']}\n")
    header = _tol_header(config, ["group", "roundtrip", "dist", "gr", "transform", "geom"])
    if config.format == "json":
        text = json.dumps({"tolerances": {k: config.tol(k) for k in sorted(config.tolerances)},
                           "checks": checks}, indent=2, sort_keys=True) + "\n"
    else:
        text = header + "".join(lines)
    _emit(config, text)
    return 0 if all(c["status"] == "pass" for c in checks) else 1


# ---------------------------------------------------------------------------
# delta / count


def _experiment_table(config):
    gens = _load_generators(config)
    if gens.d != config.d:
        raise ConfigError(f"generator dimension {gens.d} does not match --d {config.d}")
    cfg = config.cfg
    ball = orbits.ball_enumerate(gens, config.max_word_length, quant=config.tol("quant"))
    table = orbits.coset_reduce(ball, cfg, mode="double", tol=config.tol("coset"),
                                quant=config.tol("quant"))
    u = np.asarray(config.u if config.u else np.zeros(cfg.n - 1))
    spec = orbits.delta_spectrum(table, u, cfg, workers=config.workers)
    return spec


def cmd_delta(config):
    spec = _experiment_table(config)
    if not spec.entries:
        sys.stderr.write("no nontrivial classes\n")
        return 1
    out = io.StringIO()
    out.write(_tol_header(config, ["coset", "quant"]))
    out.write(f"# d={config.d} n={config.n} max_len={config.max_word_length} "
              f"u={list(config.u)!r} mode=double gamma0_max_len={spec.gamma0_max_len}\n")
    if config.format == "json":
        rows = [{"word": e.word, "word_length": e.word_length, "M": e.M, "N_u": e.N_u,
                 "Q_u": e.Q_u, "delta_u": e.delta,
                 "dist": float(np.arccosh(max(np.sqrt(e.delta), 1.0)))}
                for e in spec.entries]
        _emit(config, json.dumps(rows, indent=2, sort_keys=True) + "\n")
        return 0
    out.write("word,word_length,M,N_u,Q_u,delta_u,dist\n")
    for e in spec.entries:
        dist = float(np.arccosh(max(np.sqrt(e.delta), 1.0)))
        out.write(f"{e.word},{e.word_length},{e.M!r},{e.N_u!r},{e.Q_u!r},{e.delta!r},{dist!r}\n")
    _emit(config, out.getvalue())
    return 0


def cmd_count(config):
    spec = _experiment_table(config)
    if not spec.entries:
        sys.stderr.write("no nontrivial classes\n")
        return 1
    deltas = [e.delta for e in spec.entries]
    grid = np.geomspace(1.0, max(deltas) * 1.05, 60)
    pts, slope = orbits.counting_function(spec, grid)
    stat_min, _ = orbits.ordering_statistic(spec, config.cfg)
    if config.format == "json":
        _emit(config, json.dumps({
            "slope": slope, "ordering_stat_min": stat_min,
            "classes": len(spec.entries),
            "points": [{"x": x, "count": c} for x, c in pts],
        }, indent=2, sort_keys=True) + "\n")
        return 0
    out = io.StringIO()
    out.write(_tol_header(config, ["coset", "quant"]))
    out.write(f"# d={config.d} n={config.n} max_len={config.max_word_length} "
              f"classes={len(spec.entries)}\n")
    out.write(f"# slope={slope!r}\n")
    out.write(f"# ordering_stat_min={stat_min!r}\n")
    out.write("x,count\n")
    for x, c in pts:
        out.write(f"{x!r},{c}\n")
    _emit(config, out.getvalue())
    return 0


# ---------------------------------------------------------------------------
# transform / asymptote


def cmd_transform(config):
    records = []
    worst = 0.0
    for mu in config.mu_list:
        hc = transform.selberg_transform_closed(config.d, mu, config.nu)
        hq = transform.selberg_transform_quadrature(config.d, mu, config.nu)
        rel = abs(hc - hq) / max(abs(hc), 1e-300)
        worst = max(worst, rel)
        records.append({
            "d": config.d, "mu": mu,
            "nu_re": float(complex(config.nu).real), "nu_im": float(complex(config.nu).imag),
            "h_closed": float(np.real(hc)), "h_quad": float(np.real(hq)),
            "rel_err": float(rel),
        })
    if config.format == "json":
        text = json.dumps({"tolerances": {"transform": config.tol("transform")},
                           "records": records}, indent=2, sort_keys=True) + "\n"
    else:
        out = io.StringIO()
        out.write(_tol_header(config, ["transform", "quad"]))
        out.write("d,mu,nu_re,nu_im,h_closed,h_quad,rel_err\n")
        for r in records:
            out.write(f"{r['d']},{r['mu']!r},{r['nu_re']!r},{r['nu_im']!r},"
                      f"{r['h_closed']!r},{r['h_quad']!r},{r['rel_err']!r}\n")
        text = out.getvalue()
    _emit(config, text)
    return 0 if worst <= config.tol("transform") else 1


def cmd_asymptote(config):
    cfg = config.cfg
    box = bounds.BoxDomain(v_bounds=tuple((0.0, 1.0) for _ in range(cfg.n - 1)),
                           r_bounds=(1.0, 2.0))
    mu_grid = sorted(set(list(config.mu_list) + [40.0, 60.0]))
    if mu_grid[-1] > 60.0:
        raise ConfigError("asymptote sweep is capped at mu = 60")
    rows = bounds.rescaled_limit_shape(cfg, mu_grid, config.nu, box)
    gap = bounds.plateau_gap(rows, 40.0, 60.0)
    env_frac = bounds.envelope_fraction(rows[-1])
    props = {
        "plateau_gap_40_60": gap,
        "plateau_within_1pct": bool(gap < 1e-2),
        "envelope_fraction_at_max": env_frac,
        "envelope_below_1pct_of_main": bool(env_frac < 1e-2),
        "envelope_decreasing": bool(rows[-1].envelope_log < rows[0].envelope_log),
    }
    if config.format == "json":
        text = json.dumps({
            "rows": [{"mu": r.mu, "value_log": r.value_log, "sign": r.sign,
                      "envelope_log": r.envelope_log} for r in rows],
            "properties": props,
        }, indent=2, sort_keys=True) + "\n"
    else:
        out = io.StringIO()
        out.write(f"# d={config.d} n={config.n} nu={config.nu!r} box=[0,1]^(n-1)x[1,2]\n")
        for k in sorted(props):
            out.write(f"# {k}={props[k]!r}\n")
        out.write("mu,value_log,sign,envelope_log\n")
        for r in rows:
            out.write(f"{r.mu!r},{r.value_log!r},{r.sign},{r.envelope_log!r}\n")
        text = out.getvalue()
    _emit(config, text)
    return 0 if props["plateau_within_1pct"] and props["envelope_below_1pct_of_main"] else 1


COMMANDS = {
    "verify": cmd_verify,
    "delta": cmd_delta,
    "count": cmd_count,
    "transform": cmd_transform,
    "asymptote": cmd_asymptote,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
