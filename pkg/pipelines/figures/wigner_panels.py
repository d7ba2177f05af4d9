#!/usr/bin/env python3
"""
Wigner figure panels
Vacuum, displaced, squeezed and displaced-squeezed single-mode panels, plus
the answer register of the Deutsch-Jozsa listing, as CSV grids and PGM heatmaps
"""
import sys
from dataclasses import replace
from datetime import datetime
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from scripts import wigner  # noqa: E402
from scripts.circuit import executor, parser  # noqa: E402
from scripts.circuit.ir import Circuit, make_op  # noqa: E402
from scripts.utils.helpers import CIRCUITS_DIR, load_config, make_rng, output_dir  # noqa: E402

# preparations of the Deutsch-Jozsa panel
DJ_SQUEEZE_R = 1.0
DJ_SQUEEZE_PHI = 0.5


def dj_answer_register() -> Circuit:
    """The listing with both Squeezed preparations swapped for Squeezed(1.0, 0.5)"""
    listing = parser.parse_file(CIRCUITS_DIR / 'deutsch_jozsa.cvq')
    ops = tuple(
        make_op('Squeezed', DJ_SQUEEZE_R, DJ_SQUEEZE_PHI, targets=op.targets) if op.kind == 'Squeezed' else op
        for op in listing.ops
    )
    return replace(listing, ops=ops)


def write_panel(name, w, out_dir: Path):
    csv_path = out_dir / f"{name}.csv"
    pgm_path = out_dir / f"{name}.pgm"
    wigner.export(w, 'csv', csv_path)
    wigner.to_pgm(w, pgm_path)
    print(f"   • {name:22} min {w.values.min():+.5f}  norm {wigner.normalization_check(w):.6f}")


def main():
    print("=" * 80)
    print("WIGNER FIGURE PANELS")
    print("=" * 80)

    start = datetime.now()
    config = load_config()
    hbar = float(config['physics']['hbar'])
    seed = int(config['project']['random_seed'])
    wcfg = config['wigner']
    axes = wigner.default_axes(hbar, int(wcfg['figure_points']), float(wcfg['figure_half_width_units']))

    out_dir = output_dir(config) / 'figures'
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"\nWriting to: {out_dir}")

    for name, w in wigner.phase_space_panels(hbar, axes).items():
        write_panel(name, w, out_dir)

    # q[0] is measured, so the answer register is the only mode left
    circuit = dj_answer_register()
    result = executor.execute(circuit, executor.BackendSpec('gaussian', hbar), make_rng(seed))
    write_panel('dj_answer_register', wigner.wigner_from_gaussian(result.snapshot, 0, axes, axes), out_dir)

    elapsed = (datetime.now() - start).total_seconds()
    print("\n" + "=" * 80)
    print("PANELS COMPLETE")
    print("=" * 80)
    print(f"Total Time: {elapsed:.1f}s")


if __name__ == "__main__":
    main()
