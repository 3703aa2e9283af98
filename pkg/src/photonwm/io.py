"""Configuration, schema validation and file formats (CSV, state and
catalog JSON)."""

from __future__ import annotations

import copy
import hashlib
import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .fieldcore import KGrid3, UnitsPolicy, from_scalar_amplitude, scalar_amplitude
from .multiphoton import ModeBasis, TwoPhotonState
from .wavepackets import LongitudinalBasis, longitudinal_grid


class ConfigError(ValueError):
    """Invalid input file or configuration (CLI exit code 2)."""


DEFAULT_CONFIG = {
    "lambda_nm": 810.0,
    "tau_fs": 60.0,
    "rescale": 1.0,
    "modes": [0, 1, 2, 3],
    "dual_index": 2,
    "longitudinal": {"coverage": 12.0, "window": 10.0, "samples_per_period": 8, "n_t": None},
    "grid3d": {"n": 32, "dk": 0.5},
    "boost": {"eta": 0.5, "n": [24, 24, 512], "dk": [0.5, 0.5, 0.0625], "kbar": 10.0, "w": 1.0},
    "tolerances": {},
    "seed": 20240607,
    "out": "out",
    "suites": ["all"],
    "threads": None,
}


def load_schema(name: str) -> dict:
    text = resources.files("photonwm").joinpath("schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(instance, schema_name: str, source: str = "<input>"):
    """Validate against a shipped schema; raise ConfigError naming the field."""
    schema = load_schema(schema_name)
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for e in errors:
            where = "/".join(str(p) for p in e.absolute_path) or "(root)"
            lines.append(f"{source}: {where}: {e.message}")
        raise ConfigError("\n".join(lines))


def read_json(path) -> object:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path=None, overrides: dict | None = None) -> dict:
    user = {}
    if path is not None:
        user = read_json(path)
        validate(user, "run_config", str(path))
    cfg = _merge(DEFAULT_CONFIG, user)
    if overrides:
        cfg = _merge(cfg, overrides)
    validate(cfg, "run_config", "effective config")
    return cfg


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(cfg: dict) -> str:
    """sha256 of the canonical config; the output directory is left out."""
    body = {k: v for k, v in cfg.items() if k != "out"}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def effective_parameters(cfg: dict) -> tuple[float, float]:
    """(kbar, w) after the paired rescale tau -> S tau, lambda -> S lambda."""
    s = float(cfg.get("rescale", 1.0))
    kbar = UnitsPolicy.wavenumber_from_nm(cfg["lambda_nm"] * s)
    w = UnitsPolicy.length_from_fs(cfg["tau_fs"] * s)
    return kbar, w


def longitudinal_grid_from_config(cfg: dict):
    kbar, w = effective_parameters(cfg)
    lg = cfg["longitudinal"]
    return longitudinal_grid(
        kbar,
        w,
        coverage=lg["coverage"],
        window=lg["window"],
        samples_per_period=lg["samples_per_period"],
        n_t=lg.get("n_t"),
    )


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def format_number(x: float) -> str:
    return "%.17g" % x


def write_csv(path, t_fs, values, cfg_hash: str):
    """Columns t_R_fs, re, im; 17 significant digits; config hash comment."""
    lines = ["t_R_fs,re,im", f"# config_sha256={cfg_hash}"]
    for t, v in zip(np.asarray(t_fs, float), np.asarray(values, complex)):
        lines.append(f"{format_number(t)},{format_number(v.real)},{format_number(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> tuple[np.ndarray, np.ndarray]:
    rows = [ln for ln in Path(path).read_text().splitlines()[1:] if not ln.startswith("#")]
    arr = np.array([[float(v) for v in ln.split(",")] for ln in rows])
    return arr[:, 0], arr[:, 1] + 1j * arr[:, 2]


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# states and catalogs
# ---------------------------------------------------------------------------


def _parse_hg1d(ref: str) -> LongitudinalBasis:
    body = ref.split(":", 1)[1]
    params = {}
    for item in body.split(","):
        if not item:
            continue
        k, _, v = item.partition("=")
        params[k.strip()] = v.strip()
    try:
        lam = float(params.get("lambda_nm", 810.0))
        tau = float(params.get("tau_fs", 60.0))
        orders = tuple(int(v) for v in params.get("orders", "0;1").split(";"))
    except ValueError as exc:
        raise ConfigError(f"basis_ref {ref!r}: {exc}") from None
    kbar = UnitsPolicy.wavenumber_from_nm(lam)
    w = UnitsPolicy.length_from_fs(tau)
    return LongitudinalBasis(kbar, w, orders)


def resolve_basis(ref: str, base_dir: Path | None = None):
    """Builtin 'hg1d:...' reference or a path to a mode catalog."""
    if ref.startswith("hg1d:"):
        return _parse_hg1d(ref)
    path = Path(ref)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return load_catalog(path)


def save_state(path, state: TwoPhotonState, basis_ref: str):
    obj = {
        "basis_ref": basis_ref,
        "t": float(state.t),
        "C": {"re": state.C.real.tolist(), "im": state.C.imag.tolist()},
    }
    write_json(path, obj)


def load_state(path) -> tuple[TwoPhotonState, str]:
    path = Path(path)
    obj = read_json(path)
    validate(obj, "two_photon_state", str(path))
    basis = resolve_basis(obj["basis_ref"], path.parent)
    C = np.array(obj["C"]["re"], float) + 1j * np.array(obj["C"]["im"], float)
    n = len(basis)
    if C.shape != (n, n):
        raise ConfigError(f"{path}: C: expected a {n}x{n} matrix, got shape {C.shape}")
    return TwoPhotonState(basis, C, float(obj.get("t", 0.0))), obj["basis_ref"]


def interleave(z: np.ndarray) -> list[float]:
    z = np.asarray(z, complex).ravel()
    out = np.empty(2 * z.size)
    out[0::2], out[1::2] = z.real, z.imag
    return out.tolist()


def deinterleave(v) -> np.ndarray:
    v = np.asarray(v, float)
    return v[0::2] + 1j * v[1::2]


def catalog_from_longitudinal(basis: LongitudinalBasis) -> dict:
    g = basis.grid
    modes = []
    for j, m in enumerate(basis.orders):
        modes.append(
            {
                "label": f"hg{m}",
                "sigma": 1,
                "kbar": g.kbar,
                "widths": [g.w],
                "grid": {"kind": "longitudinal", "i_min": g.i_min, "i_max": g.i_max, "dk": g.dk},
                "coefficients": interleave(basis.spectra[j]),
            }
        )
    return {"modes": modes}


def catalog_from_basis(basis: ModeBasis, kbar: float = 0.0, widths=(1.0,)) -> dict:
    modes = []
    for label, a in zip(basis.labels, basis.amplitudes):
        alpha = scalar_amplitude(a)
        modes.append(
            {
                "label": label,
                "sigma": int(a.helicities[0]),
                "kbar": float(kbar),
                "widths": [float(w) for w in widths],
                "grid": {"kind": "kgrid3", "n": list(a.grid.n), "dk": list(a.grid.dk)},
                "coefficients": interleave(alpha),
            }
        )
    return {"modes": modes}


def load_catalog(path) -> ModeBasis:
    """Rebuild a 3D ModeBasis from a catalog of scalar helicity amplitudes."""
    path = Path(path)
    obj = read_json(path)
    validate(obj, "mode_catalog", str(path))
    amps, labels = [], []
    for i, m in enumerate(obj["modes"]):
        g = m["grid"]
        if g["kind"] != "kgrid3":
            raise ConfigError(f"{path}: modes/{i}/grid: only kgrid3 catalogs define a 3D basis")
        grid = KGrid3(tuple(g["n"]), tuple(g["dk"]))
        alpha = deinterleave(m["coefficients"])
        if alpha.size != grid.size:
            raise ConfigError(f"{path}: modes/{i}/coefficients: expected {2 * grid.size} numbers")
        amps.append(from_scalar_amplitude(grid, alpha.reshape(grid.shape), m["sigma"]))
        labels.append(m["label"])
    return ModeBasis(amps, labels)
