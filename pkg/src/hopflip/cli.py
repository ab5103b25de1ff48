"""Command-line front end: ``hopflip {hopf-invariant,lipschitz,verify}``.

Every run is driven by a resolved configuration (flags, optionally merged
over a JSON config file).  Reports are JSON with sorted keys and embed that
configuration, so a rerun with the same configuration writes identical bytes.

Exit codes: 0 pass, 1 failure or oracle disagreement, 2 search budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields

from . import __version__
from .fibers import TracingError, write_fiber_csv
from .linking import LinkingError, OracleDisagreement, compute_hopf_invariant
from .lipschitz import lipschitz_report
from .maps import HopfVectorField, MapDescriptor, builtin_map, map_from_dict
from .verify import (
    CHECKS,
    VerificationReport,
    build_profile,
    theorem_c_checks,
    theorem_d_checks,
    verify_great_circle_fibers,
    verify_key_lemma,
    verify_lemma_f,
    verify_parallel_fibers,
    verify_sasaki_lengths,
    verify_torus,
    jsonable,
)

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2
COMMANDS = ("hopf-invariant", "lipschitz", "verify")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    map: str | dict | None = None
    seed: int = 0
    samples: int | None = None
    tol: float | None = None
    step: float | None = None
    out: str | None = None
    check: str | None = None

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if self.samples is not None and (not isinstance(self.samples, int) or self.samples < 2):
            raise ConfigError("samples must be an integer >= 2")
        if self.tol is not None and not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise ConfigError("tol must be a positive number")
        if self.step is not None and not (isinstance(self.step, (int, float)) and 1e-4 <= self.step <= 1e-1):
            raise ConfigError("step must lie in [1e-4, 1e-1]")
        if self.map is not None and not isinstance(self.map, (str, dict)):
            raise ConfigError("map must be a builtin name, a JSON string or an object")
        if self.command == "verify":
            if self.check not in CHECKS:
                raise ConfigError(f"--check must be one of {', '.join(CHECKS)}")
        elif self.check is not None:
            raise ConfigError("--check only applies to verify")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        if "command" not in data:
            raise ConfigError("config needs a command")
        return cls(**data).validate()

    def to_dict(self) -> dict:
        return asdict(self)


def resolve_map(source) -> MapDescriptor:
    if isinstance(source, dict):
        return map_from_dict(source)
    text = source.strip()
    if text.startswith("{"):
        return map_from_dict(json.loads(text))
    if text.endswith(".json") and os.path.exists(text):
        with open(text) as fh:
            return map_from_dict(json.load(fh))
    return builtin_map(text)


def dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, payload: dict, name: str) -> None:
    text = dump(payload)
    sys.stdout.write(text)
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, name), "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_hopf_invariant(cfg: RunConfig) -> int:
    m = resolve_map(cfg.map or "hopf")
    kwargs = {"seed": cfg.seed}
    if cfg.step is not None:
        kwargs["step"] = cfg.step
    payload = {"config": cfg.to_dict(), "map": m.to_dict()}
    try:
        res = compute_hopf_invariant(m, **kwargs)
    except OracleDisagreement as exc:
        payload.update(status="fail", error=f"oracle disagreement: {exc}")
        _emit(cfg, payload, "hopf_invariant.json")
        return EXIT_FAIL
    except (LinkingError, TracingError) as exc:
        payload.update(status="fail", error=f"{type(exc).__name__}: {exc}")
        _emit(cfg, payload, "hopf_invariant.json")
        return EXIT_FAIL
    body = res.to_dict()
    files = []
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        for tag, curves in (("y", res.fibers), ("y_other", res.fibers_other)):
            for i, c in enumerate(curves):
                name = f"fiber_{tag}_{i}.csv"
                write_fiber_csv(c, os.path.join(cfg.out, name))
                files.append(name)
    body["fiber_files"] = files
    payload.update(status="pass", result=body)
    _emit(cfg, payload, "hopf_invariant.json")
    return EXIT_PASS


def cmd_lipschitz(cfg: RunConfig) -> int:
    m = resolve_map(cfg.map or "hopf")
    rep = lipschitz_report(m, cfg.samples or 10_000, cfg.seed)
    _emit(cfg, {"config": cfg.to_dict(), "map": m.to_dict(), "status": "pass", "result": rep.to_dict()},
          "lipschitz.json")
    return EXIT_PASS


def _run_check(cfg: RunConfig) -> VerificationReport:
    seed, tol = cfg.seed, cfg.tol
    extra = {} if cfg.step is None else {"step": cfg.step}
    name = cfg.check
    if name in ("great-circles", "parallel", "torus"):
        m = resolve_map(cfg.map or "hopf")
        fn = {"great-circles": verify_great_circle_fibers, "parallel": verify_parallel_fibers,
              "torus": verify_torus}[name]
        return fn(m, tol=tol or 1e-6, seed=seed, **extra)
    if name == "key-lemma":
        return verify_key_lemma(seed=seed, tol=tol or 1e-6)
    if name == "lemma-f":
        return verify_lemma_f(seed=seed)
    if name == "theorem-c":
        m = resolve_map(cfg.map or "hopf-vf")
        if not isinstance(m, HopfVectorField):
            raise ConfigError("theorem-c needs a hopf-vf map")
        return theorem_c_checks(m.J, samples=cfg.samples or 1000, seed=seed)
    if name == "theorem-d":
        return theorem_d_checks(seed=seed, samples=cfg.samples or 1000)
    if name == "sasaki-lengths":
        return verify_sasaki_lengths(tol=tol or 1e-6)
    raise ConfigError(f"unknown check {name!r}")


def cmd_verify(cfg: RunConfig) -> int:
    rep = _run_check(cfg)
    payload = {"config": cfg.to_dict(), "report": rep.to_dict()}
    if cfg.check == "lemma-f":
        payload["profile"] = build_profile().to_dict()
    _emit(cfg, payload, f"verify_{cfg.check}.json")
    if rep.passed:
        return EXIT_PASS
    return EXIT_BUDGET if rep.inconclusive else EXIT_FAIL


HANDLERS = {"hopf-invariant": cmd_hopf_invariant, "lipschitz": cmd_lipschitz, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 so that 2 keeps meaning an exhausted search budget."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hopflip", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        p.add_argument("--map", help="builtin name such as hopf, power(2), bump(0.1,0.5), or a JSON descriptor")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--step", type=float, help="fibre tracing step in radians")
        p.add_argument("--out", help="directory for JSON reports and fibre CSVs")
        if name == "verify":
            p.add_argument("--check", required=False, choices=CHECKS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        if data.get("command", args.command) != args.command:
            raise ConfigError("config command does not match the subcommand")
    data["command"] = args.command
    for key in ("map", "seed", "samples", "tol", "step", "out", "check"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        return HANDLERS[cfg.command](cfg)
    except (ConfigError, ValueError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
