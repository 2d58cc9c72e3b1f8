#!/usr/bin/env python3
"""Regenerate data/tumor_699.csv, the bundled stand-in clinical dataset.

The canonical 699-patient tumor-feature file cannot be redistributed here,
so the repository ships a synthetic set with the same shape: 699 rows, 8
integer-graded features (1..10), a binary benign/malignant target with the
familiar ~34.5% positive rate, and 16 cells of one feature column replaced
by the '?' missing marker. A latent severity score drives both features and
label, so weight fitting has real signal to find. Deterministic: re-running
this script reproduces the committed file byte for byte.
"""

from pathlib import Path

import numpy as np

N_ROWS = 699
N_FEATURES = 8
N_MISSING = 16
MISSING_COLUMN = 5
TARGET_POSITIVES = 241  # ~34.5%
SEED = 20240699

# Per-feature response to the latent severity (slope, noise scale).
FEATURE_PROFILES = [
    (2.2, 0.9),
    (2.8, 1.1),
    (2.6, 1.0),
    (1.8, 1.3),
    (1.5, 0.8),
    (3.0, 1.2),
    (2.0, 1.0),
    (1.2, 1.5),
]


def generate(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    severity = rng.normal(size=N_ROWS)
    features = np.empty((N_ROWS, N_FEATURES), dtype=int)
    for j, (slope, noise) in enumerate(FEATURE_PROFILES):
        raw = slope * severity + noise * rng.normal(size=N_ROWS)
        grade = 1 + 9 / (1 + np.exp(-raw / 2.0))
        features[:, j] = np.clip(np.rint(grade), 1, 10)
    score = severity + 0.35 * rng.normal(size=N_ROWS)
    threshold = np.sort(score)[N_ROWS - TARGET_POSITIVES]
    labels = (score >= threshold).astype(int)
    return features, labels


def main() -> None:
    rng = np.random.default_rng(SEED)
    features, labels = generate(rng)
    missing_rows = np.sort(rng.choice(N_ROWS, size=N_MISSING, replace=False))

    out = Path(__file__).resolve().parent.parent / "data" / "tumor_699.csv"
    out.parent.mkdir(exist_ok=True)
    lines = []
    for i in range(N_ROWS):
        cells = [str(v) for v in features[i]]
        if i in missing_rows:
            cells[MISSING_COLUMN] = "?"
        cells.append(str(labels[i]))
        lines.append(",".join(cells))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({N_ROWS} rows, {labels.sum()} positives, "
          f"{N_MISSING} missing cells)")


if __name__ == "__main__":
    main()
