#!/usr/bin/env python3
"""Reference values for the scripted ten-task Iris session.

Statistics come from SciPy / NumPy / scikit-learn. The outlier step is a
from-scratch Python port of the documented seeded Isolation Forest
(mt19937_64, splitmix64 tree seeds, partial Fisher-Yates subsampling,
uniform splits over features that vary in the node), so the rows it removes
are not taken from the C++ output.

    python3 tests/oracle/make_protocol.py
"""

import csv
import json
import math
import os

import numpy as np
import pandas as pd
from scipy import stats
from sklearn.decomposition import PCA

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(os.path.dirname(HERE))
M64 = (1 << 64) - 1
SEED = 42
NUMERIC = ["sepal_length", "sepal_width", "petal_length", "petal_width"]


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & M64
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & M64
        self.index = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.index = 0

    def __call__(self):
        if self.index >= 312:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & M64

    def uniform(self):
        return (self() >> 11) * 2.0 ** -53

    def below(self, n):
        threshold = ((1 << 64) - n) % n
        while True:
            r = self()
            if r >= threshold:
                return r % n


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def c(m):
    if m <= 1:
        return 0.0
    if m <= 2:
        return 1.0
    return 2.0 * (math.log(m - 1.0) + 0.5772156649015329) - 2.0 * (m - 1.0) / m


def build(points, rows, depth, limit, rng):
    if depth >= limit or len(rows) <= 1:
        return ("leaf", len(rows))
    ranges, candidates = [], []
    for f in range(points.shape[1]):
        col = [points[r, f] for r in rows]
        lo, hi = min(col), max(col)
        ranges.append((lo, hi))
        if hi > lo:
            candidates.append(f)
    if not candidates:
        return ("leaf", len(rows))
    f = candidates[rng.below(len(candidates))]
    lo, hi = ranges[f]
    split = lo + rng.uniform() * (hi - lo)
    if split <= lo:
        split = math.nextafter(lo, hi)
    left = [r for r in rows if points[r, f] < split]
    right = [r for r in rows if points[r, f] >= split]
    return ("node", f, split, build(points, left, depth + 1, limit, rng), build(points, right, depth + 1, limit, rng))


def path(tree, x):
    depth = 0.0
    while tree[0] == "node":
        tree = tree[3] if x[tree[1]] < tree[2] else tree[4]
        depth += 1.0
    return depth + c(tree[1])


def forest_scores(points, seed, n_trees=100, subsample=256):
    n = points.shape[0]
    psi = min(subsample, n)
    limit = math.ceil(math.log2(psi))
    trees = []
    for t in range(n_trees):
        rng = MT19937_64(splitmix64(seed ^ splitmix64(t)))
        idx = list(range(n))
        for i in range(psi):
            j = i + rng.below(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        trees.append(build(points, idx[:psi], 0, limit, rng))
    return [2.0 ** (-(sum(path(tr, points[r]) for tr in trees) / n_trees) / c(psi)) for r in range(n)]


def main():
    d = pd.read_csv(os.path.join(ROOT, "data", "iris.csv"))
    sl = d["sepal_length"].to_numpy()
    pl = d["petal_length"].to_numpy()
    out = {"seed": SEED, "rows": int(d.shape[0]), "columns": int(d.shape[1])}

    out["describe_sepal_length"] = {
        "n": int(len(sl)), "mean": float(sl.mean()), "median": float(np.median(sl)),
        "sd": float(sl.std(ddof=1)), "min": float(sl.min()), "max": float(sl.max()),
        "q1": float(np.quantile(sl, 0.25)), "q3": float(np.quantile(sl, 0.75)),
    }
    counts, edges = np.histogram(sl, bins=10)
    out["histogram_sepal_length"] = {"edges": edges.tolist(), "counts": counts.tolist()}
    r = stats.ttest_1samp(sl, 5.8)
    out["t_test_sepal_length_5_8"] = {"statistic": float(r.statistic), "df": len(sl) - 1, "p_value": float(r.pvalue)}
    r = stats.shapiro(pl)
    out["shapiro_petal_length"] = {"statistic": float(r.statistic), "p_value": float(r.pvalue)}
    checks = [float(stats.shapiro(sl).pvalue), float(stats.shapiro(pl).pvalue)]
    r = stats.spearmanr(sl, pl)
    out["spearman_sepal_petal_length"] = {"coefficient": float(r.statistic), "p_value": float(r.pvalue),
                                          "n": int(len(sl)), "check_p_values": checks}

    # Iris has no gaps, so imputation leaves the values as they are.
    out["imputed"] = {k: d[k].tolist() for k in NUMERIC}

    points = d[NUMERIC].to_numpy()
    scores = forest_scores(points, SEED)
    drop = math.ceil(0.05 * len(scores))
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], -i))
    removed = sorted(order[:drop])
    kept = d.drop(index=removed).reset_index(drop=True)
    out["outliers"] = {"removed_rows": removed, "rows": int(kept.shape[0]),
                       "species_counts": kept["species"].value_counts().sort_index().to_dict()}

    x = kept[NUMERIC].to_numpy()
    pca = PCA(n_components=2, svd_solver="full").fit(x)
    comps = pca.components_.copy()
    for i in range(comps.shape[0]):
        if comps[i, np.argmax(np.abs(comps[i]))] < 0:
            comps[i] = -comps[i]
    scores_pc = (x - x.mean(axis=0)) @ comps.T
    out["pca"] = {"PC1": scores_pc[:, 0].tolist(), "PC2": scores_pc[:, 1].tolist(),
                  "explained_variance_ratio": pca.explained_variance_ratio_.tolist()}

    sw = kept["sepal_width"].to_numpy()
    scaled = (sw - sw.min()) / (sw.max() - sw.min())
    out["scaled_sepal_width"] = scaled.tolist()
    final = kept.copy()
    final["sepal_width"] = scaled
    out["export"] = {k: final[k].tolist() for k in NUMERIC}
    out["export"]["species"] = final["species"].tolist()

    with open(os.path.join(HERE, "protocol_reference.json"), "w") as f:
        json.dump(out, f, indent=1)

    key = [
        ("1", "How many rows does the imported dataset have?", out["rows"]),
        ("2", "Mean of sepal_length", out["describe_sepal_length"]["mean"]),
        ("3", "p-value of the one-sample t test of sepal_length against 5.8",
         out["t_test_sepal_length_5_8"]["p_value"]),
        ("4", "Is petal_length normally distributed (Shapiro-Wilk, alpha 0.05)?",
         "yes" if out["shapiro_petal_length"]["p_value"] >= 0.05 else "no"),
        ("5", "Spearman correlation of sepal_length and petal_length",
         out["spearman_sepal_petal_length"]["coefficient"]),
        ("6", "Missing cells after mean imputation", 0),
        ("7", "Rows left after Isolation Forest outlier removal (contamination 0.05)", out["outliers"]["rows"]),
        ("8", "Explained variance ratio of the first principal component", out["pca"]["explained_variance_ratio"][0]),
        ("9", "Mean of min-max scaled sepal_width", float(np.mean(out["scaled_sepal_width"]))),
        ("10", "Rows in the exported dataset", len(out["export"]["species"])),
    ]
    with open(os.path.join(ROOT, "data", "iris_answer_key.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["task", "question", "answer"])
        for task, question, answer in key:
            w.writerow([task, question, repr(answer) if isinstance(answer, float) else answer])


if __name__ == "__main__":
    main()
