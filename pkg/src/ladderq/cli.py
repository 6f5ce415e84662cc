"""Command-line front end.

Every subcommand is driven by a :class:`RunConfig`; ``--dump-config`` writes
the resolved config as JSON and ``--config`` reads one back, so a run can be
replayed exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import spectral
from .encoding import (
    Binary,
    Unary,
    binary_creation,
    encode_hamiltonian,
    flip_pattern_census,
    naive_string_count,
    redundant_string_count,
)
from .errors import ConfigError, NumericalAssertionError
from .ladder import XPPoly
from .matrices import dump_matrix
from .models import DEFAULT_LENGTH, DEFAULT_OMEGA, ModelSpec, Preset, make_model
from .pauli import LABEL_ORDERS, QUBIT1_FIRST

COMMANDS = ("encode", "spectrum", "sweep", "norm", "weights", "census")
MODEL_CHOICES = ("h0", "dwell-left", "dwell-center", "dwell", "custom")
_ORIGIN_PRESET = {"left": Preset.DWELL_LEFT, "barrier": Preset.DWELL_CENTER}


@dataclass
class RunConfig:
    command: str = "spectrum"
    model: str = "dwell-left"
    length: str = str(DEFAULT_LENGTH)  # kept as text so rationals survive JSON
    omega: float = DEFAULT_OMEGA
    origin: str | None = None
    poly: list | None = None  # XPPoly JSON for --model custom
    M: int | None = None
    K: int | None = None
    M_range: str | None = None
    ordering: str = "normal"
    encoding: str = "none"
    unit: str = "cm-1"
    format: str | None = None
    label_order: str = QUBIT1_FIRST
    precision: int | None = None
    states: int | None = None
    out: str | None = None
    dump_matrix: str | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


# ---------------------------------------------------------------------------
# config resolution
# ---------------------------------------------------------------------------


def _preset(cfg: RunConfig) -> Preset:
    if cfg.model not in MODEL_CHOICES:
        raise ConfigError(f"unknown model {cfg.model!r}; choose from {', '.join(MODEL_CHOICES)}")
    if cfg.model == "dwell":
        if cfg.origin not in _ORIGIN_PRESET:
            raise ConfigError("--model dwell needs --origin left or --origin barrier")
        return _ORIGIN_PRESET[cfg.origin]
    preset = Preset(cfg.model)
    if cfg.origin is not None and preset in _ORIGIN_PRESET.values() and _ORIGIN_PRESET.get(cfg.origin) is not preset:
        raise ConfigError(f"--origin {cfg.origin} contradicts --model {cfg.model}")
    return preset


def build_model(cfg: RunConfig) -> ModelSpec:
    preset = _preset(cfg)
    try:
        length = Fraction(cfg.length)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"--l must be a number, got {cfg.length!r}") from None
    poly = None
    if preset is Preset.CUSTOM:
        if cfg.poly is None:
            raise ConfigError("--model custom needs --poly (JSON list of {coeff, word})")
        poly = XPPoly.from_json_obj(cfg.poly)
    return make_model(preset, length, cfg.omega, poly)


def parse_range(text: str) -> list[int]:
    """``a:b[:step]`` inclusive of both ends."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ConfigError(f"range must look like a:b or a:b:step, got {text!r}")
    try:
        a, b, *rest = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"range bounds must be integers, got {text!r}") from None
    step = rest[0] if rest else 1
    if a < 1 or b < a or step < 1:
        raise ConfigError(f"need 1 <= a <= b and step >= 1, got {text!r}")
    return list(range(a, b + 1, step))


def _sizes(cfg: RunConfig) -> list[int]:
    if cfg.M_range:
        return parse_range(cfg.M_range)
    if cfg.M is not None:
        return [cfg.M]
    raise ConfigError("give --M-range a:b[:step] (or --M)")


def _single_M(cfg: RunConfig) -> int:
    if cfg.M is not None:
        M = cfg.M
    elif cfg.K is not None:
        M = 1 << cfg.K
    else:
        raise ConfigError("give --M (or --K)")
    if M < 1:
        raise ConfigError(f"--M must be positive, got {M}")
    if cfg.encoding == "binary" and M != 1 << (M.bit_length() - 1):
        K = Binary.for_basis_size(M).K
        warnings.warn(f"binary encoding: M={M} rounded up to 2**{K} = {1 << K}", stacklevel=2)
        M = 1 << K
    return M


def _encoding(cfg: RunConfig):
    kind = cfg.encoding if cfg.encoding != "none" else "binary"
    if kind == "binary":
        if cfg.K is not None:
            if cfg.M is not None and cfg.M != 1 << cfg.K:
                raise ConfigError(f"--M {cfg.M} conflicts with --K {cfg.K} (binary needs M = 2**K)")
            return Binary(cfg.K)
        if cfg.M is None:
            raise ConfigError("binary encoding needs --K or --M")
        enc = Binary.for_basis_size(cfg.M)
        if enc.dim != cfg.M:
            warnings.warn(f"binary encoding: M={cfg.M} rounded up to 2**{enc.K} = {enc.dim}", stacklevel=2)
        return enc
    if kind == "unary":
        if cfg.M is None:
            raise ConfigError("unary encoding needs --M")
        return Unary(cfg.M)
    raise ConfigError(f"unknown encoding {cfg.encoding!r}")


def _scale(model: ModelSpec, unit: str) -> float:
    if unit == "cm-1":
        return model.omega
    if unit == "dimensionless":
        return 1.0
    raise ConfigError(f"--unit must be cm-1 or dimensionless, got {unit!r}")


def _fmt(v: float, precision: int) -> str:
    return f"{v:.{precision}f}"


# ---------------------------------------------------------------------------
# pipelines (each returns the text that goes to --out / stdout)
# ---------------------------------------------------------------------------


def _run_encode(cfg: RunConfig, model: ModelSpec) -> str:
    enc = _encoding(cfg)
    pauli = encode_hamiltonian(model.ladder(cfg.ordering), enc)
    scale = _scale(model, cfg.unit)
    fmt = cfg.format or "text"
    if fmt == "text":
        return pauli.to_text(order=cfg.label_order, scale=scale, precision=cfg.precision)
    if fmt == "json":
        return json.dumps(pauli.to_json_obj(order=cfg.label_order, scale=scale), indent=1) + "\n"
    if fmt == "csv":
        precision = 10 if cfg.precision is None else cfg.precision
        lines = ["letters,coeff_re,coeff_im"]
        for label, c in sorted(pauli.terms(cfg.label_order).items()):
            lines.append(f"{label},{_fmt(c.real * scale, precision)},{_fmt(c.imag * scale, precision)}")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def _run_spectrum(cfg: RunConfig, model: ModelSpec) -> str:
    M = _single_M(cfg)
    rep = spectral.spectrum(model, M, cfg.ordering, unit=cfg.unit, with_vectors=False)
    if cfg.dump_matrix:
        h = spectral.hamiltonian_matrix(model, M, cfg.ordering) * _scale(model, cfg.unit)
        Path(cfg.dump_matrix).write_text(dump_matrix(h))
    precision = 4 if cfg.precision is None else cfg.precision
    fmt = cfg.format or "csv"
    if fmt == "json":
        obj = {
            "M": rep.M,
            "ordering": rep.ordering,
            "origin": rep.origin_label,
            "unit": rep.unit,
            "energies": [round(float(e), precision) for e in rep.energies],
            "splitting01": None if math.isnan(rep.splitting_01) else round(rep.splitting_01, precision),
        }
        return json.dumps(obj, indent=1) + "\n"
    if fmt == "csv":
        return "n,E\n" + "".join(f"{n},{_fmt(e, precision)}\n" for n, e in enumerate(rep.energies))
    if fmt == "text":
        head = f"# M={rep.M} ordering={rep.ordering} origin={rep.origin_label} unit={rep.unit}\n"
        return head + "".join(f"{n:4d} {_fmt(e, precision)}\n" for n, e in enumerate(rep.energies))
    raise ConfigError(f"unknown format {fmt!r}")


def _run_sweep(cfg: RunConfig, model: ModelSpec) -> str:
    sizes = _sizes(cfg)
    table = spectral.convergence_sweep(model, cfg.ordering, sizes, unit=cfg.unit)
    precision = 4 if cfg.precision is None else cfg.precision
    fmt = cfg.format or "csv"
    if fmt == "csv":
        return table.to_csv(precision)
    if fmt == "json":
        obj = {
            "ordering": table.ordering,
            "origin": table.origin_label,
            "unit": table.unit,
            "reference_M": table.reference.M,
            "rows": [{"M": r.M, "energies": [round(float(e), precision) for e in r.energies]} for r in table.rows],
            "monotonicity_violations": table.monotonicity_violations,
            "below_reference": table.below_reference,
        }
        return json.dumps(obj, indent=1) + "\n"
    if fmt == "text":
        out = [table.to_csv(precision).replace(",", " ")]
        if table.below_reference:
            out.append(f"# E0 below the M={table.reference.M} value at M={table.below_reference}\n")
        return "".join(out)
    raise ConfigError(f"unknown format {fmt!r}")


def _run_norm(cfg: RunConfig, model: ModelSpec) -> str:
    sizes = _sizes(cfg) if (cfg.M_range or cfg.M) else list(spectral.DEFAULT_FIT_SIZES)
    sizes = [M for M in sizes if M >= 2 and M & (M - 1) == 0]
    fit = spectral.norm_scaling_fit(model, sizes, cfg.ordering)
    scale = _scale(model, cfg.unit)
    precision = 4 if cfg.precision is None else cfg.precision
    fmt = cfg.format or "csv"
    if fmt == "json":
        obj = {"slope": fit.slope, "sizes": fit.sizes, "one_norms": [n * scale for n in fit.norms], "unit": cfg.unit}
        return json.dumps(obj, indent=1) + "\n"
    if fmt in ("csv", "text"):
        sep = "," if fmt == "csv" else " "
        lines = [f"M{sep}one_norm"]
        lines += [f"{M}{sep}{_fmt(n * scale, precision)}" for M, n in zip(fit.sizes, fit.norms)]
        lines.append(f"# slope {fit.slope:.4f}")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def _run_weights(cfg: RunConfig, model: ModelSpec) -> str:
    M = _single_M(cfg)
    rep = spectral.spectrum(model, M, cfg.ordering, unit=cfg.unit)
    w = spectral.weights(rep)
    n_states = min(M, cfg.states if cfg.states is not None else 5)
    fmt = cfg.format or "csv"
    if fmt == "csv":
        return spectral.weights_csv(w, n_states, 12 if cfg.precision is None else cfg.precision)
    if fmt == "json":
        return json.dumps({"M": M, "weights": w[:n_states].tolist()}) + "\n"
    if fmt == "text":
        return "".join(" ".join(f"{v:.3e}" for v in row) + "\n" for row in w[:n_states])
    raise ConfigError(f"unknown format {fmt!r}")


def _run_census(cfg: RunConfig, model: ModelSpec) -> str:
    enc = _encoding(dataclasses.replace(cfg, encoding="binary"))
    K = enc.K
    groups = flip_pattern_census(K)
    pauli = encode_hamiltonian(model.ladder(cfg.ordering), enc)
    scale = _scale(model, cfg.unit)
    report = {
        "K": K,
        "M": enc.dim,
        "groups": [
            {"trailing_ones": g.trailing_ones, "flip_mask": g.flip_mask, "projectors": g.projector_count,
             "strings": g.string_budget}
            for g in groups
        ],
        "projectors": sum(g.projector_count for g in groups),
        "naive_strings": naive_string_count(K),
        "redundant_strings": redundant_string_count(K),
        "creation_terms": len(binary_creation(K)),
        "hamiltonian_terms": len(pauli),
        "one_norm": pauli.one_norm() * scale,
        "unit": cfg.unit,
    }
    if (cfg.format or "text") == "json":
        return json.dumps(report, indent=1) + "\n"
    lines = [f"K={K} M={enc.dim}"]
    for g in report["groups"]:
        lines.append(
            f"group t={g['trailing_ones']} flips={g['flip_mask']:0{K}b} projectors={g['projectors']} strings={g['strings']}"
        )
    for key in ("projectors", "naive_strings", "redundant_strings", "creation_terms", "hamiltonian_terms"):
        lines.append(f"{key} {report[key]}")
    lines.append(f"one_norm {report['one_norm']:.6f} {cfg.unit}")
    return "\n".join(lines) + "\n"


_PIPELINES = {
    "encode": _run_encode,
    "spectrum": _run_spectrum,
    "sweep": _run_sweep,
    "norm": _run_norm,
    "weights": _run_weights,
    "census": _run_census,
}


def run(cfg: RunConfig) -> str:
    """Execute a config; returns the output text (also written to ``cfg.out``)."""
    if cfg.command not in _PIPELINES:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.ordering not in ("normal", "unordered"):
        raise ConfigError(f"--ordering must be normal or unordered, got {cfg.ordering!r}")
    if cfg.label_order not in LABEL_ORDERS:
        raise ConfigError(f"--label-order must be one of {LABEL_ORDERS}")
    model = build_model(cfg)
    text = _PIPELINES[cfg.command](cfg, model)
    if cfg.out:
        Path(cfg.out).write_text(text)
    return text


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors are config errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="read a RunConfig JSON file; explicit flags override it")
    common.add_argument("--dump-config", help="write the resolved RunConfig JSON here")
    common.add_argument("--model", choices=MODEL_CHOICES)
    common.add_argument("--l", dest="length", help="double-well length parameter (default 4)")
    common.add_argument("--omega", type=float, help="energy scale in cm-1")
    common.add_argument("--origin", choices=("left", "barrier"))
    common.add_argument("--poly", help="custom x/p polynomial: JSON text or a path to a JSON file")
    common.add_argument("--M", type=str, help="basis size (sweep/norm also accept a:b[:step])")
    common.add_argument("--K", type=int, help="binary register size (M = 2**K)")
    common.add_argument("--M-range", dest="M_range")
    common.add_argument("--ordering", choices=("normal", "unordered"))
    common.add_argument("--encoding", choices=("unary", "binary", "none"))
    common.add_argument("--unit", choices=("cm-1", "dimensionless"))
    common.add_argument("--format", choices=("csv", "json", "text"))
    common.add_argument("--label-order", dest="label_order", choices=LABEL_ORDERS)
    common.add_argument("--precision", type=int)
    common.add_argument("--states", type=int, help="number of eigenstates in weights output")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--dump-matrix", dest="dump_matrix", help="spectrum: write the Hamiltonian matrix CSV")

    parser = _Parser(prog="ladderq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load_poly(text: str) -> list:
    path = Path(text)
    source = path.read_text() if not text.lstrip().startswith("[") and path.exists() else text
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--poly is neither a JSON list nor a readable JSON file: {exc}") from None


def config_from_args(argv: Sequence[str] | None = None) -> tuple[RunConfig, str | None]:
    args = _parser().parse_args(argv)
    cfg = RunConfig.from_json(Path(args.config).read_text()) if args.config else RunConfig()
    cfg.command = args.command
    overrides = {}
    for name in ("model", "length", "omega", "origin", "K", "M_range", "ordering", "encoding", "unit",
                 "format", "label_order", "precision", "states", "out", "dump_matrix"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.poly is not None:
        overrides["poly"] = _load_poly(args.poly)
    if args.M is not None:
        if ":" in args.M:
            overrides["M_range"] = args.M
            overrides["M"] = None
        else:
            try:
                overrides["M"] = int(args.M)
            except ValueError:
                raise ConfigError(f"--M must be an integer or a:b[:step], got {args.M!r}") from None
    cfg = dataclasses.replace(cfg, **overrides)
    return cfg, args.dump_config


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg, dump_path = config_from_args(argv)
        if dump_path:
            Path(dump_path).write_text(cfg.to_json())
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            text = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalAssertionError as exc:
        print(f"numerical assertion failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not cfg.out:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
