"""Command-line front end.

Subcommands ``dispersion``, ``dcs``, ``phases`` and ``sigma`` write one
table each, as CSV (``#`` metadata lines, then a header row) or JSON
(``{"meta": ..., "rows": [...]}``). Settings come from a ``key = value``
config file (``--config``), overridden by flags of the same name.

Exit codes: 0 success, 2 configuration error, 3 domain or validity error,
4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import ast
import dataclasses
import json
import math
import operator
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from . import __version__
from .born import dcs_table
from .context import (
    DeformationParams,
    Kinematics,
    PhysicalContext,
    green_prefactor,
    minimal_length,
)
from .errors import BornValidityError, ConvergenceError, DomainError
from .partial_waves import (
    PhaseShiftSet,
    angular_cross_section,
    born_phase_shift,
    born_sin_delta,
    forward_amplitude,
    optical_theorem_residual,
    select_lmax,
    self_consistent_phase_shift,
    total_cross_section,
)
from .potentials import RadialPotential

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CONSISTENCY = 4

SIGMA_AGREEMENT = 1e-8


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class ConsistencyError(RuntimeError):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    raise ValueError("not a number")


def parse_float(key, text):
    """Float or simple arithmetic in ``pi`` (e.g. ``pi/2``)."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return _eval_number(ast.parse(text, mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ConfigError(key, f"expected a number, got {text!r}") from None


def parse_float_list(key, text):
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(parse_float(key, part) for part in str(text).split(",") if part.strip())


def parse_int(key, text):
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


_CHOICES = {
    "potential": ("yukawa", "coulomb"),
    "sign": ("attractive", "repulsive"),
    "coulomb_mode": ("closed", "limit"),
    "kernel": ("riccati", "asymptotic"),
    "method": ("born", "self_consistent"),
    "format": ("csv", "json"),
}


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    mass: float = 1.0
    beta: float = 0.0
    beta_prime: float = 0.0
    potential: str = "yukawa"
    e2: float = 1.0
    lambda_: float = 1.0
    sign: str = "attractive"
    k: Optional[tuple] = None
    energy: Optional[tuple] = None
    theta_min: float = 0.1
    theta_max: float = math.pi
    n_angles: int = 32
    coulomb_mode: str = "closed"
    lambdas: tuple = (0.1, 0.05, 0.025, 0.0125)
    lmax: Optional[int] = None
    tail_tol: float = 1e-3
    kernel: str = "riccati"
    method: str = "born"
    phases: Optional[tuple] = None
    format: str = "csv"
    out: Optional[str] = None

    def validate(self):
        for key in ("hbar", "mass"):
            if not getattr(self, key) > 0:
                raise ConfigError(key, "must be positive")
        for key in ("beta", "beta_prime", "e2"):
            if not getattr(self, key) >= 0:
                raise ConfigError(key, "must be non-negative")
        for key, allowed in _CHOICES.items():
            if getattr(self, key) not in allowed:
                raise ConfigError(key, f"must be one of {', '.join(allowed)}")
        if (self.k is None) == (self.energy is None):
            raise ConfigError("k", "give exactly one of k or energy")
        given = "k" if self.k is not None else "energy"
        vals = getattr(self, given)
        if len(vals) == 0 or not all(v > 0 for v in vals):
            raise ConfigError(given, "values must be positive")
        if not self.lambda_ > 0:
            raise ConfigError("lambda", "must be positive")
        if not (0 < self.theta_min <= self.theta_max <= math.pi):
            raise ConfigError("theta_min", "angle grid must satisfy 0 < theta_min <= theta_max <= pi")
        if self.n_angles < 1:
            raise ConfigError("n_angles", "must be at least 1")
        if self.n_angles > 1 and self.theta_min == self.theta_max:
            raise ConfigError("n_angles", "several angles need theta_min < theta_max")
        if not self.tail_tol > 0:
            raise ConfigError("tail_tol", "must be positive")
        if self.lmax is not None and self.lmax < 0:
            raise ConfigError("lmax", "must be non-negative")
        return self

    @property
    def params(self):
        return DeformationParams(self.beta, self.beta_prime)

    @property
    def ctx(self):
        return PhysicalContext(self.hbar, self.mass, self.e2)

    def wave_numbers(self):
        if self.k is not None:
            return list(self.k)
        return [Kinematics.from_energy(e, self.params, self.ctx).k for e in self.energy]

    def single_k(self):
        ks = self.wave_numbers()
        if len(ks) != 1:
            raise ConfigError("k" if self.k is not None else "energy", "this command takes a single value")
        return ks[0]

    def potential_obj(self):
        if self.potential == "coulomb":
            return RadialPotential.coulomb(self.e2, self.sign)
        return RadialPotential.yukawa(self.e2, self.lambda_, self.sign)

    def thetas(self):
        return np.linspace(self.theta_min, self.theta_max, self.n_angles)

    def as_meta(self):
        """Config echoed as strings that parse back to the same values."""
        meta = {}
        for f in fields(self):
            meta[_key_of(f.name)] = _render_value(getattr(self, f.name))
        return meta


def _key_of(field_name):
    return "lambda" if field_name == "lambda_" else field_name


def _field_of(key):
    key = key.strip().replace("-", "_")
    return "lambda_" if key == "lambda" else key


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
_LIST_FIELDS = {"k", "energy", "lambdas", "phases"}
_INT_FIELDS = {"n_angles", "lmax"}
_STR_FIELDS = {"potential", "sign", "coulomb_mode", "kernel", "method", "format", "out"}


def _render_value(v):
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ",".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _coerce(name, raw):
    key = _key_of(name)
    if raw is None:
        return None
    if isinstance(raw, str) and raw.strip().lower() == "none":
        return None
    if name in _LIST_FIELDS:
        return parse_float_list(key, raw)
    if name in _INT_FIELDS:
        return parse_int(key, raw)
    if name in _STR_FIELDS:
        return str(raw).strip()
    return parse_float(key, raw)


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def config_from_mapping(values, base=None):
    cfg = base or RunConfig()
    updates = {}
    for key, raw in values.items():
        name = _field_of(key)
        if name not in _FIELD_TYPES:
            raise ConfigError(key, "unknown configuration key")
        updates[name] = _coerce(name, raw)
    return dataclasses.replace(cfg, **updates)


def config_from_output(text):
    """Recover the RunConfig echoed in a CSV or JSON output's metadata."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        meta = dict(json.loads(text)["meta"])
    else:
        meta = {}
        for line in text.splitlines():
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
    meta.pop("tool_version", None)
    meta.pop("command", None)
    return config_from_mapping(meta)


# --- serialization ---------------------------------------------------------

def format_number(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x) + 0.0
    if math.isnan(x):
        return "nan"
    return format(x, ".16e")


def render_csv(meta, columns, rows):
    lines = [f"# {key} = {value}" for key, value in meta.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_number(x):
    s = format_number(x)
    # JSON has no NaN literal.
    return "null" if s == "nan" else s


def render_json(meta, columns, rows):
    parts = ["{", '  "meta": ' + json.dumps(meta, indent=None) + ",", '  "rows": [']
    body = []
    for row in rows:
        items = ", ".join(f"{json.dumps(c)}: {_json_number(v)}" for c, v in zip(columns, row))
        body.append("    {" + items + "}")
    parts.append(",\n".join(body))
    parts.append("  ]")
    parts.append("}")
    return "\n".join(parts) + "\n"


def render(cfg, command, columns, rows):
    meta = {"tool_version": __version__, "command": command}
    meta.update(cfg.as_meta())
    if cfg.format == "json":
        return render_json(meta, columns, rows)
    return render_csv(meta, columns, rows)


# --- commands ----------------------------------------------------------------

DISPERSION_COLUMNS = ("k", "E", "P", "minimal_length", "green_prefactor")
DCS_COLUMNS = ("theta", "dcs", "validity_flag")
PHASE_COLUMNS = ("l", "delta_born", "delta_self_consistent", "sin_delta", "flag")
SIGMA_COLUMNS = ("sigma_phase_sum", "sigma_angular", "optical_residual", "im_f0", "l_max")

# phase-table flag values
FLAG_OK = 0
FLAG_BORN_INVALID = 1
FLAG_NOT_CONVERGED = 2


def cmd_dispersion(cfg):
    params, ctx = cfg.params, cfg.ctx
    ell = minimal_length(params, ctx)
    rows = []
    if cfg.k is not None:
        kins = [Kinematics.from_k(k, params, ctx) for k in cfg.k]
    else:
        kins = [Kinematics.from_energy(e, params, ctx) for e in cfg.energy]
    for kin in kins:
        rows.append((kin.k, kin.energy, kin.momentum, ell, green_prefactor(kin.k, params, ctx)))
    return DISPERSION_COLUMNS, rows


def cmd_dcs(cfg):
    k = cfg.single_k()
    table = dcs_table(k, cfg.thetas(), cfg.params, cfg.potential_obj(), cfg.ctx,
                      coulomb_mode=cfg.coulomb_mode, lambdas=cfg.lambdas)
    return DCS_COLUMNS, table.rows()


def _require_screened(cfg):
    if cfg.potential == "coulomb":
        raise DomainError("partial-wave commands need a screened (yukawa) potential")


def cmd_phases(cfg):
    _require_screened(cfg)
    k = cfg.single_k()
    pot, params, ctx = cfg.potential_obj(), cfg.params, cfg.ctx
    lmax = cfg.lmax if cfg.lmax is not None else select_lmax(pot, k, params, ctx, cfg.tail_tol, cfg.kernel)
    rows = []
    for l in range(lmax + 1):
        s = born_sin_delta(l, k, pot, params, ctx, cfg.kernel)
        if abs(s) > 1.0:
            rows.append((l, math.nan, math.nan, s, FLAG_BORN_INVALID))
            continue
        d_born = math.asin(s)
        try:
            d_sc = self_consistent_phase_shift(l, k, pot, params, ctx, kernel=cfg.kernel)
            flag = FLAG_OK
        except BornValidityError:
            d_sc, flag = math.nan, FLAG_BORN_INVALID
        except ConvergenceError:
            d_sc, flag = math.nan, FLAG_NOT_CONVERGED
        rows.append((l, d_born, d_sc, s, flag))
    return PHASE_COLUMNS, rows


def sigma_phase_set(cfg):
    if cfg.phases is not None:
        return PhaseShiftSet(cfg.single_k(), cfg.phases, "injected")
    _require_screened(cfg)
    k = cfg.single_k()
    pot, params, ctx = cfg.potential_obj(), cfg.params, cfg.ctx
    lmax = cfg.lmax if cfg.lmax is not None else select_lmax(pot, k, params, ctx, cfg.tail_tol, cfg.kernel)
    if cfg.method == "born":
        deltas = [born_phase_shift(l, k, pot, params, ctx, cfg.kernel) for l in range(lmax + 1)]
    else:
        deltas = [self_consistent_phase_shift(l, k, pot, params, ctx, kernel=cfg.kernel) for l in range(lmax + 1)]
    return PhaseShiftSet(k, tuple(deltas), cfg.method)


def cmd_sigma(cfg):
    phases = sigma_phase_set(cfg)
    sigma = total_cross_section(phases)
    sigma_ang = angular_cross_section(phases)
    scale = max(abs(sigma), abs(sigma_ang))
    if scale > 0 and abs(sigma - sigma_ang) > SIGMA_AGREEMENT * scale:
        raise ConsistencyError(
            f"phase-sum sigma {sigma!r} and angular-quadrature sigma {sigma_ang!r} disagree"
        )
    row = (sigma, sigma_ang, optical_theorem_residual(phases), forward_amplitude(phases).imag, phases.l_max)
    return SIGMA_COLUMNS, [row]


COMMANDS = {
    "dispersion": cmd_dispersion,
    "dcs": cmd_dcs,
    "phases": cmd_phases,
    "sigma": cmd_sigma,
}


# --- argument parsing --------------------------------------------------------

_FLAGS = [
    ("--hbar", "hbar"), ("--mass", "mass"),
    ("--beta", "beta"), ("--beta-prime", "beta_prime"),
    ("--potential", "potential"), ("--e2", "e2"), ("--lambda", "lambda"), ("--sign", "sign"),
    ("--k", "k"), ("--energy", "energy"),
    ("--theta-min", "theta_min"), ("--theta-max", "theta_max"), ("--n-angles", "n_angles"),
    ("--coulomb-mode", "coulomb_mode"), ("--lambdas", "lambdas"),
    ("--lmax", "lmax"), ("--tail-tol", "tail_tol"), ("--kernel", "kernel"), ("--method", "method"),
    ("--phases", "phases"),
    ("--format", "format"), ("--out", "out"),
]


def build_parser():
    parser = argparse.ArgumentParser(prog="minlen-scatter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    for flag, key in _FLAGS:
        common.add_argument(flag, dest=_field_of(key), default=None, metavar=key.upper())
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dispersion", parents=[common], help="deformed energy, momentum and Green's factor vs k")
    sub.add_parser("dcs", parents=[common], help="differential cross-section on an angle grid")
    sub.add_parser("phases", parents=[common], help="Born and self-consistent phase shifts")
    sub.add_parser("sigma", parents=[common], help="total cross-section and optical-theorem check")
    return parser


def load_config(args):
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
    for _, key in _FLAGS:
        v = getattr(args, _field_of(key))
        if v is not None:
            values[key] = v
    # A flag for one of k/energy overrides the other coming from the file.
    if getattr(args, "k") is not None:
        values.pop("energy", None)
    if getattr(args, "energy") is not None:
        values.pop("k", None)
    return config_from_mapping(values).validate()


def run(command, cfg):
    """Run a command on a validated config and return the rendered text."""
    columns, rows = COMMANDS[command](cfg)
    return render(cfg, command, columns, rows)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        text = run(args.command, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, BornValidityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
