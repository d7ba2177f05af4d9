#!/usr/bin/env python3
"""
Deutsch-Jozsa threshold calibration
Computes tau from the reference oracles' expected mean |outcome| and checks it
against simulated shots; the printed value is what config deutsch_jozsa.threshold holds
"""
import sys
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from scripts.algorithms import deutsch_jozsa  # noqa: E402
from scripts.utils.helpers import load_config, make_rng, output_dir, write_csv  # noqa: E402

SEEDS = 50


def simulated_means(oracle, squeeze_r, threshold, hbar, shots, seed0):
    """Mean |outcome| of each seeded batch"""
    return np.array([
        deutsch_jozsa.dj_run(oracle, squeeze_r, make_rng(seed0 + s), shots, threshold, hbar).mean_abs_outcome
        for s in range(SEEDS)
    ])


def main():
    print("=" * 80)
    print("DEUTSCH-JOZSA THRESHOLD CALIBRATION")
    print("=" * 80)

    start = datetime.now()
    config = load_config()
    hbar = float(config['physics']['hbar'])
    seed = int(config['project']['random_seed'])
    dcfg = config['deutsch_jozsa']
    squeeze_r = float(dcfg['squeeze_r'])
    kick = float(dcfg['balanced_kick'])
    shots = int(dcfg['shots'])

    expected = deutsch_jozsa.reference_means(squeeze_r, hbar, kick)
    tau = deutsch_jozsa.dj_threshold(squeeze_r, hbar, kick)
    print(f"\nsqueeze_r={squeeze_r}  hbar={hbar}  kick={kick}")
    print(f"   expected mean |x| constant: {expected[deutsch_jozsa.CONSTANT]:.6f}")
    print(f"   expected mean |x| balanced: {expected[deutsch_jozsa.BALANCED]:.6f}")
    print(f"   tau (log-midpoint):         {tau:.4f}   (config: {float(dcfg['threshold']):.4f})")

    rows = []
    for name in deutsch_jozsa.REFERENCE_ORACLES:
        oracle = deutsch_jozsa.reference_oracle(name, kick)
        means = simulated_means(oracle, squeeze_r, tau, hbar, shots, seed)
        verdicts = np.where(means < tau, deutsch_jozsa.CONSTANT, deutsch_jozsa.BALANCED)
        correct = int(np.sum(verdicts == oracle.tag))
        rows.append({'oracle': name, 'min_mean_abs': means.min(), 'max_mean_abs': means.max(),
                     'correct': correct, 'seeds': SEEDS})
        print(f"   • {name:24} mean |x| in [{means.min():.4f}, {means.max():.4f}]  correct {correct}/{SEEDS}")

    out_path = output_dir(config) / 'calibration' / 'dj_threshold.csv'
    write_csv(pd.DataFrame(rows), out_path)

    elapsed = (datetime.now() - start).total_seconds()
    print("\n" + "=" * 80)
    print("CALIBRATION COMPLETE")
    print("=" * 80)
    print(f"Report: {out_path}")
    print(f"Total Time: {elapsed:.1f}s")


if __name__ == "__main__":
    main()
