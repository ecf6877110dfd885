"""Command-line front-end: ``hopfkit {verify,ground,compare,oracle}``.

A model is described by a JSON config::

    {
      "schema": 1,
      "groups":  {"e": {...}, "g": {...}, "x": {...}, "y": {...}},
      "actions": {"g_on_x": {...}, "g_on_y": {...}, "g_on_e": {...}},
      "homs":    {"f": {...}, "boundary": {...}},
      "surface": {"kind": "torus_grid", "m": 2, "n": 2},
      "scalar_mode": "rational",
      "flags":   {"force_large": false, "sample_count": null, "seed": 0}
    }

Group descriptors: ``{"kind": "cyclic"|"symmetric"|"dihedral", "n": k}``,
``{"kind": "trivial"}`` or ``{"kind": "explicit", "table": [[...], ...]}``.
Action descriptors: ``trivial``, ``inversion`` (optionally ``"sign": [...]``),
``conjugation`` or ``{"kind": "perms", "perms": [[...], ...]}``.
Homomorphisms: ``trivial``, ``identity`` or ``{"kind": "map", "map": [...]}``.
Omitted entries default to the trivial group, action or map.

Exit codes: 0 success, 1 a suite failed (or counts disagree), 2 bad config,
3 the instance is too large and ``--force`` was not given.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import lattice, oracle
from .fingroup import (FiniteGroup, GroupAction, GroupHom, build_group, conjugation_action,
                       identity_hom, inversion_action, make_action, make_hom, trivial_action,
                       trivial_group, trivial_hom)
from .hopf import verify_hopf_axioms
from .report import HopfkitError, TooLarge
from .scalars import mode_from_name
from .surface import CellComplex, build_standard_complex
from .xmod import GexyData, build_gexy, make_gexy, verify_hopf_crossed_module

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_TOO_LARGE = 0, 1, 2, 3


class ConfigError(HopfkitError):
    """The configuration is malformed or describes invalid algebraic data."""


# ---------------------------------------------------------------------------
# config parsing


def _group(desc: dict | None) -> FiniteGroup:
    if desc is None:
        return trivial_group()
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError(f"group descriptor needs a 'kind': {desc!r}")
    return build_group(desc["kind"], desc.get("n"), desc.get("table"))


def _action(desc: dict | None, group: FiniteGroup, acted: FiniteGroup) -> GroupAction:
    if desc is None:
        return trivial_action(group, acted)
    kind = desc.get("kind") if isinstance(desc, dict) else None
    if kind == "trivial":
        return trivial_action(group, acted)
    if kind == "inversion":
        return inversion_action(group, acted, desc.get("sign"))
    if kind == "conjugation":
        if group != acted:
            raise ConfigError("conjugation action needs the acting and acted groups to coincide")
        return conjugation_action(group)
    if kind == "perms":
        return make_action(group, desc["perms"], acted)
    raise ConfigError(f"unknown action descriptor {desc!r}")


def _hom(desc: dict | None, source: FiniteGroup, target: FiniteGroup) -> GroupHom:
    if desc is None:
        return trivial_hom(source, target)
    kind = desc.get("kind") if isinstance(desc, dict) else None
    if kind == "trivial":
        return trivial_hom(source, target)
    if kind == "identity":
        if source != target:
            raise ConfigError("identity map needs equal source and target groups")
        return identity_hom(source)
    if kind == "map":
        return make_hom(source, target, desc["map"])
    raise ConfigError(f"unknown homomorphism descriptor {desc!r}")


@dataclass
class ModelConfig:
    """A parsed config: the four-group data, a surface and run flags."""

    raw: dict
    data: GexyData
    surface: CellComplex
    scalar_mode: str = "rational"
    force_large: bool = False
    sample_count: int | None = None
    seed: int = 0
    extras: dict = field(default_factory=dict)


def parse_config(raw: dict) -> ModelConfig:
    """Validate and build the objects described by a config dict."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if raw.get("schema", SCHEMA) != SCHEMA:
        raise ConfigError(f"unsupported schema {raw.get('schema')!r}")
    groups = raw.get("groups", {})
    actions = raw.get("actions", {})
    homs = raw.get("homs", {})
    unknown = set(groups) - {"e", "g", "x", "y"}
    if unknown:
        raise ConfigError(f"unknown group names {sorted(unknown)}")
    try:
        E, G, X, Y = (_group(groups.get(k)) for k in "egxy")
        data = make_gexy(
            E, G, X, Y,
            boundary=_hom(homs.get("boundary"), E, G),
            g_on_e=_action(actions.get("g_on_e"), G, E),
            g_on_x=_action(actions.get("g_on_x"), G, X),
            g_on_y=_action(actions.get("g_on_y"), G, Y),
            f=_hom(homs.get("f"), Y, X),
        )
        surf = dict(raw.get("surface", {"kind": "sphere_theta"}))
        kind = surf.pop("kind", "sphere_theta")
        surface = build_standard_complex(kind, **surf)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    # surfaces the algebraic errors (NotEquivariant, ...) at parse time
    build_gexy(data)
    flags = raw.get("flags", {})
    mode = raw.get("scalar_mode", "rational")
    if mode not in ("rational", "float"):
        raise ConfigError(f"unknown scalar_mode {mode!r}")
    return ModelConfig(raw, data, surface, mode, bool(flags.get("force_large", False)),
                       flags.get("sample_count"), int(flags.get("seed", 0)))


def load_config(path: str) -> ModelConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw)


# ---------------------------------------------------------------------------
# reports


def dumps(report: dict) -> str:
    """Canonical serialisation: parsing and re-serialising is byte-identical."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _new_report(command: str, configs: Sequence[ModelConfig]) -> dict:
    echo: Any = configs[0].raw if len(configs) == 1 else [c.raw for c in configs]
    return {"schema": SCHEMA, "command": command, "config": echo, "suites": [],
            "dims": {}, "verdicts": {}, "notes": [], "timing_ms": {}}


def _suite(report: dict, rep) -> bool:
    d = rep.to_dict()
    report["suites"].append({"name": d["subject"], "ok": d["ok"], "checked": d["checked"],
                             "failures": d["failures"][:50]})
    return rep.ok


class _Timer:
    def __init__(self, report: dict, key: str) -> None:
        self.report, self.key = report, key

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.report["timing_ms"][self.key] = round(1000 * (time.perf_counter() - self.t0), 3)
        return False


def _instance(cfg: ModelConfig, scalar: str | None) -> lattice.ModelInstance:
    mode = mode_from_name(scalar or cfg.scalar_mode)
    return lattice.ModelInstance(build_gexy(cfg.data, mode), cfg.surface)


def _oracle_counts(cfg: ModelConfig, dims: dict) -> None:
    d, c = cfg.data, cfg.surface
    if d.is_goxo:
        dims["oracle_goxo"] = oracle.goxo_ground_count(c, d.G, d.X, d.act_x)
    if d.is_ooxy:
        dims["oracle_ooxy"] = oracle.ooxy_ground_count(c, d.f)


def cmd_verify(cfg: ModelConfig, args) -> tuple[dict, int]:
    report = _new_report("verify", [cfg])
    m = _instance(cfg, args.scalar)
    ok = True
    with _Timer(report, "algebra"):
        ok &= _suite(report, verify_hopf_axioms(m.H))
        ok &= _suite(report, verify_hopf_axioms(m.A))
        ok &= _suite(report, verify_hopf_crossed_module(m.xmod))
    samples = args.samples if args.samples is not None else cfg.sample_count
    with _Timer(report, "commutation"):
        rep = lattice.commutation_report(m, lattice.default_sample_count(m, samples),
                                         seed=args.seed if args.seed is not None else cfg.seed)
        ok &= _suite(report, rep)
    report["dims"]["total"] = m.total_dim
    report["verdicts"]["all_suites_pass"] = bool(ok)
    return report, EXIT_OK if ok else EXIT_FAIL


def _ground(cfg: ModelConfig, args, report: dict, key: str = "") -> tuple[int | None, int]:
    m = _instance(cfg, args.scalar)
    dims = report["dims"] if not key else report["dims"].setdefault(key, {})
    dims["total"] = m.total_dim
    force = args.force or cfg.force_large
    code = EXIT_OK
    with _Timer(report, f"ground{key}"):
        try:
            dims["ground"] = lattice.ground_dim(m, force=force)
        except TooLarge as exc:
            report["notes"].append(f"ground_dim skipped{(' for ' + key) if key else ''}: TooLarge: {exc}")
            code = EXIT_TOO_LARGE
    return dims.get("ground"), code


def cmd_ground(cfg: ModelConfig, args) -> tuple[dict, int]:
    report = _new_report("ground", [cfg])
    ground, code = _ground(cfg, args, report)
    with _Timer(report, "oracle"):
        _oracle_counts(cfg, report["dims"])
    dims = report["dims"]
    if ground is not None:
        for k in ("oracle_goxo", "oracle_ooxy"):
            if k in dims:
                report["verdicts"][f"ground_equals_{k}"] = dims[k] == ground
        if not all(report["verdicts"].values()):
            report["verdicts"]["mismatch"] = True
            code = EXIT_FAIL
    return report, code


def cmd_compare(cfgs: Sequence[ModelConfig], args) -> tuple[dict, int]:
    a, b = cfgs
    if a.surface.genus != b.surface.genus:
        raise ConfigError(f"surfaces have different genus ({a.surface.genus} vs {b.surface.genus})")
    report = _new_report("compare", cfgs)
    ga, ca = _ground(a, args, report, "a")
    gb, cb = _ground(b, args, report, "b")
    if ca or cb:
        return report, EXIT_TOO_LARGE
    report["verdicts"]["equal"] = ga == gb
    return report, EXIT_OK if ga == gb else EXIT_FAIL


def cmd_oracle(cfg: ModelConfig, args) -> tuple[dict, int]:
    report = _new_report("oracle", [cfg])
    report["dims"]["total"] = lattice.total_dim(build_gexy(cfg.data), cfg.surface)
    with _Timer(report, "oracle"):
        try:
            _oracle_counts(cfg, report["dims"])
        except TooLarge as exc:
            report["notes"].append(f"oracle skipped: TooLarge: {exc}")
            return report, EXIT_TOO_LARGE
    if not cfg.data.is_goxo and not cfg.data.is_ooxy:
        report["notes"].append("no oracle for this family (needs E=Y=1 or E=G=1)")
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopfkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("verify", "check algebra axioms and the operator algebra"),
                           ("ground", "ground-state dimension with oracle cross-check"),
                           ("compare", "ground-state dimensions of two configs"),
                           ("oracle", "oracle counts only")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", action="append", required=True,
                       help="JSON model config (give two for compare)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--scalar", choices=("rational", "float"), help="override the scalar mode")
        p.add_argument("--force", action="store_true", help="ignore the state-space size limit")
        p.add_argument("--seed", type=int, help="seed for sampled relation checks")
        p.add_argument("--samples", type=int, help="number of sampled basis tuples per relation")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfgs = [load_config(p) for p in args.config]
        if args.command == "compare":
            if len(cfgs) != 2:
                raise ConfigError("compare needs exactly two --config arguments")
            report, code = cmd_compare(cfgs, args)
        else:
            if len(cfgs) != 1:
                raise ConfigError(f"{args.command} takes exactly one --config")
            handler = {"verify": cmd_verify, "ground": cmd_ground, "oracle": cmd_oracle}[args.command]
            report, code = handler(cfgs[0], args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except HopfkitError as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
