#  Helper functions shared by the backends, the CLI and the pipelines
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from scripts.utils.errors import ConfigurationError

PROJECT_ROOT = Path(__file__).parent.parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / 'config' / 'simulator_config.yaml'
CIRCUITS_DIR = PROJECT_ROOT / 'circuits'

REQUIRED_SECTIONS = ['project', 'physics', 'grid_presets', 'active_grid', 'fock',
                     'wigner', 'grover', 'deutsch_jozsa', 'output']


def load_config(path: Optional[Path] = None) -> Dict:
    """Load the YAML config and check that every section is present"""
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    if not config_path.exists():
        raise ConfigurationError(f"config file not found: {config_path}")

    with open(config_path, 'r') as f:
        config = yaml.safe_load(f)

    if not isinstance(config, dict):
        raise ConfigurationError(f"config file is not a mapping: {config_path}")
    missing = [s for s in REQUIRED_SECTIONS if s not in config]
    if missing:
        raise ConfigurationError(f"config missing sections: {', '.join(missing)}")
    if config['active_grid'] not in config['grid_presets']:
        raise ConfigurationError(f"unknown active_grid preset: {config['active_grid']}")
    if float(config['physics']['hbar']) <= 0:
        raise ConfigurationError("physics.hbar must be positive")
    return config


def grid_preset_for(config: Dict, name: Optional[str] = None) -> Dict:
    """Return the named grid preset, or the one selected by active_grid"""
    name = config['active_grid'] if name is None else name
    if name not in config['grid_presets']:
        raise ConfigurationError(f"unknown grid preset: {name}")
    return config['grid_presets'][name]


def output_dir(config: Dict) -> Path:
    """output.base_dir, relative paths taken from the project root"""
    base = Path(config['output']['base_dir'])
    return base if base.is_absolute() else PROJECT_ROOT / base



def configure_logging(verbose: bool = False) -> None:
    """Single stderr handler; stdout is reserved for command output"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def split_rng(rng: np.random.Generator, n: int) -> List[np.random.Generator]:
    """Spawn n independent child generators"""
    return rng.spawn(n)


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def print_banner(title: str, width: int = 60) -> None:
    """Section banner on stderr"""
    print("\n" + "=" * width, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * width, file=sys.stderr)


def print_run_summary(name: str, n_items: int, start_time: datetime, unit: str = "items") -> None:
    """Print summary of a command run"""
    elapsed = (datetime.now() - start_time).total_seconds()
    per_sec = n_items / elapsed if elapsed > 0 else 0

    print(f"\n✅ {name}", file=sys.stderr)
    print(f"   {unit.capitalize()}: {n_items:,}", file=sys.stderr)
    print(f"   Time: {elapsed:.2f}s ({per_sec:,.0f} {unit}/sec)", file=sys.stderr)


def dumps_json(payload: Dict) -> str:
    """Deterministic JSON text (sorted keys, full float precision)"""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(payload: Dict, path: Optional[Path]) -> None:
    """Write JSON to path, or to stdout when path is None"""
    text = dumps_json(payload)
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def write_csv(df: pd.DataFrame, path: Optional[Path]) -> None:
    """Write a DataFrame as CSV with 17 significant digits, to stdout when path is None"""
    if path is None:
        df.to_csv(sys.stdout, index=False, float_format='%.17g', lineterminator='\n')
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')


def complex_to_pairs(values: np.ndarray) -> list:
    """Flatten complex array to [[re, im], ...] for JSON"""
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_complex(pairs: list) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]
