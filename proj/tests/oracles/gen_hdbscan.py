"""Freezes reference HDBSCAN labels (scikit-learn) for the parity tests."""
import json

import numpy as np
import sklearn.cluster._hdbscan.hdbscan as skh
from sklearn.cluster import HDBSCAN

from blobs import dataset_params, make_blobs


def fit(X, **kw):
    return [int(v) for v in HDBSCAN(min_cluster_size=5, algorithm="brute", **kw).fit(X).labels_]


def stable_process_mst(mst):
    # scikit-learn sorts MST edges with an unstable argsort, so equal mutual-reachability
    # weights merge in an arbitrary order. A stable sort makes the tie order reproducible.
    order = np.argsort(mst["distance"], kind="stable")
    return skh.make_single_linkage(mst[order])


def exact_distances(X):
    return np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))


def case(i, spread=None):
    p = dataset_params(i)
    if spread is not None:
        p["spread"] = spread
    pts = make_blobs(p)
    X = np.array(pts)
    p["checksum"] = float(sum(sum(row) for row in pts))
    p["labels"] = fit(X, metric="euclidean")
    original = skh._process_mst
    skh._process_mst = stable_process_mst
    try:
        p["labels_stable_ties"] = fit(exact_distances(X), metric="precomputed")
    finally:
        skh._process_mst = original
    return p


cases = [case(i) for i in range(20)]
# Harder inputs: wide, overlapping blobs, so some points end up as noise.
cases += [case(i, spread=3.0) for i in range(20, 30)]

with open("hdbscan_cases.json", "w") as f:
    json.dump(cases, f)
