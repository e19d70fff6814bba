#!/usr/bin/env python3
"""Generate frozen reference values for the statz kernel tests.

The values come from SciPy / NumPy / scikit-learn, which share no code with
the C++ kernel. Outputs are committed next to this script; the C++ test
suites only read the JSON, they never run Python.

    python3 tests/oracle/make_reference.py
"""

import json
import math
import os

import numpy as np
from scipy import stats
from sklearn.decomposition import PCA

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(os.path.dirname(HERE))
ALPHA = 0.05


def draw(rng, n):
    kind = rng.integers(0, 4)
    loc = rng.uniform(-5.0, 5.0)
    scale = rng.uniform(0.5, 3.0)
    if kind == 0:
        return rng.normal(loc, scale, n)
    if kind == 1:
        return loc + rng.exponential(scale, n)
    if kind == 2:
        return rng.uniform(loc - scale, loc + scale, n)
    return loc + scale * rng.standard_t(4, n)


def friedman_matrix(groups, k):
    n = min(len(g) for g in groups[:k])
    return np.column_stack([np.asarray(g[:n]) for g in groups[:k]])


def nemenyi(m):
    n, k = m.shape
    ranks = np.apply_along_axis(stats.rankdata, 1, m)
    mean_ranks = ranks.mean(axis=0)
    se = math.sqrt(k * (k + 1) / (6.0 * n))
    out = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            q = abs(mean_ranks[i] - mean_ranks[j]) / se * math.sqrt(2.0)
            p = float(stats.studentized_range.sf(q, k, np.inf))
            out[i, j] = out[j, i] = min(1.0, max(0.0, p))
    return out


def mann_whitney(a, b):
    res_u = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
    u1 = res_u.statistic
    u = min(u1, len(a) * len(b) - u1)
    if len(a) + len(b) <= 16:
        p = stats.mannwhitneyu(a, b, alternative="two-sided", method="exact").pvalue
    else:
        p = res_u.pvalue
    return float(u), float(p)


def wilcoxon(a, b):
    d = np.asarray(a) - np.asarray(b)
    d = d[d != 0]
    method = "exact" if len(d) <= 50 else "asymptotic"
    r = stats.wilcoxon(d, method=method, correction=True)
    return float(r.statistic), float(r.pvalue)


def kernel_cases(count=100, seed=20240626):
    rng = np.random.default_rng(seed)
    cases = []
    for case_id in range(count):
        n_groups = int(rng.integers(3, 6))
        sizes = [int(rng.integers(5, 61)) for _ in range(n_groups)]
        groups = [draw(rng, n) for n in sizes]
        a, b = groups[0], groups[1]
        m = min(len(a), len(b))
        mu0 = float(rng.uniform(-2.0, 2.0))
        ref = {}

        r = stats.ttest_1samp(a, mu0)
        ref["t_one_sample"] = [float(r.statistic), len(a) - 1, float(r.pvalue)]
        r = stats.ttest_ind(a, b, equal_var=False)
        va, vb = np.var(a, ddof=1) / len(a), np.var(b, ddof=1) / len(b)
        welch_df = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
        ref["t_welch"] = [float(r.statistic), float(welch_df), float(r.pvalue)]
        r = stats.ttest_ind(a, b, equal_var=True)
        ref["t_pooled"] = [float(r.statistic), len(a) + len(b) - 2, float(r.pvalue)]
        r = stats.ttest_rel(a[:m], b[:m])
        ref["t_paired"] = [float(r.statistic), m - 1, float(r.pvalue)]

        r = stats.f_oneway(*groups)
        ref["anova"] = [float(r.statistic), float(r.pvalue)]
        r = stats.levene(*groups, center="median")
        ref["levene"] = [float(r.statistic), float(r.pvalue)]
        r = stats.kruskal(*groups)
        ref["kruskal"] = [float(r.statistic), float(r.pvalue)]
        ref["mann_whitney"] = list(mann_whitney(a, b))
        ref["wilcoxon"] = list(wilcoxon(a[:m], b[:m]))

        r = stats.pearsonr(a[:m], b[:m])
        ref["pearson"] = [float(r.statistic), float(r.pvalue)]
        r = stats.spearmanr(a[:m], b[:m])
        ref["spearman"] = [float(r.statistic), float(r.pvalue)]

        r = stats.shapiro(a)
        ref["shapiro"] = [float(r.statistic), float(r.pvalue)]

        k = n_groups
        fm = friedman_matrix(groups, k)
        r = stats.friedmanchisquare(*fm.T)
        ref["friedman"] = [float(r.statistic), k - 1, float(r.pvalue)]
        ref["kendalls_w"] = float(r.statistic) / (fm.shape[0] * (k - 1))
        ref["nemenyi"] = nemenyi(fm).tolist()

        ref["describe"] = {
            "mean": float(np.mean(a)),
            "median": float(np.median(a)),
            "sd": float(np.std(a, ddof=1)),
            "q1": float(np.quantile(a, 0.25)),
            "q3": float(np.quantile(a, 0.75)),
        }
        cases.append({
            "id": case_id,
            "mu0": mu0,
            "groups": [g.tolist() for g in groups],
            "reference": ref,
        })
    return cases


def iris_reference():
    import pandas as pd

    d = pd.read_csv(os.path.join(ROOT, "data", "iris.csv"))
    numeric = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    sl = d["sepal_length"].to_numpy()
    pl = d["petal_length"].to_numpy()
    out = {"rows": int(d.shape[0]), "columns": int(d.shape[1])}
    out["describe_sepal_length"] = {
        "n": int(len(sl)),
        "mean": float(sl.mean()),
        "median": float(np.median(sl)),
        "sd": float(sl.std(ddof=1)),
        "min": float(sl.min()),
        "max": float(sl.max()),
        "q1": float(np.quantile(sl, 0.25)),
        "q3": float(np.quantile(sl, 0.75)),
    }
    counts, edges = np.histogram(sl, bins=10)
    out["histogram_sepal_length_10"] = {"edges": edges.tolist(), "counts": counts.tolist()}
    r = stats.ttest_1samp(sl, 5.8)
    out["t_one_sample_sepal_length_5_8"] = [float(r.statistic), len(sl) - 1, float(r.pvalue)]
    r = stats.shapiro(pl)
    out["shapiro_petal_length"] = [float(r.statistic), float(r.pvalue)]
    r = stats.shapiro(sl)
    out["shapiro_sepal_length"] = [float(r.statistic), float(r.pvalue)]
    r = stats.spearmanr(sl, pl)
    out["spearman_sepal_petal_length"] = [float(r.statistic), float(r.pvalue)]
    r = stats.pearsonr(sl, pl)
    out["pearson_sepal_petal_length"] = [float(r.statistic), float(r.pvalue)]
    groups = [d.loc[d.species == s, "sepal_length"].to_numpy() for s in ("setosa", "versicolor", "virginica")]
    r = stats.f_oneway(*groups)
    out["anova_sepal_length_by_species"] = [float(r.statistic), float(r.pvalue)]
    r = stats.kruskal(*groups)
    out["kruskal_sepal_length_by_species"] = [float(r.statistic), float(r.pvalue)]
    pca = PCA(n_components=4).fit(d[numeric].to_numpy())
    out["pca_explained_variance_ratio"] = pca.explained_variance_ratio_.tolist()
    return out


def main():
    with open(os.path.join(HERE, "kernel_reference.json"), "w") as f:
        json.dump({"alpha": ALPHA, "cases": kernel_cases()}, f)
    with open(os.path.join(HERE, "iris_reference.json"), "w") as f:
        json.dump(iris_reference(), f, indent=1)


if __name__ == "__main__":
    main()
