"""Freezes paired t-test results (scipy.stats.ttest_rel) for 50 random paired samples."""
import json

import numpy as np
from scipy import stats

rng = np.random.default_rng(20240607)
cases = []
for i in range(50):
    n = int(rng.integers(2, 41))
    a = rng.uniform(0.0, 0.6, size=n)
    shift = rng.normal(0.0, 0.05)
    b = np.clip(a + shift + rng.normal(0.0, 0.04, size=n), 0.0, 0.6)
    r = stats.ttest_rel(a, b)
    cases.append({"a": [float(x) for x in a], "b": [float(x) for x in b],
                  "t": float(r.statistic), "p": float(r.pvalue)})

with open("ttest_cases.json", "w") as f:
    json.dump(cases, f)
