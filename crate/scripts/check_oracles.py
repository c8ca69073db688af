#!/usr/bin/env python3
"""Recompute committed oracle sidecars with numpy and compare.

Usage: python3 scripts/check_oracles.py [fixtures-dir]
"""
import json
import pathlib
import sys

import numpy as np


def matrix(rows, cols):
    m = np.zeros((len(rows), cols), dtype=complex)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            m[i, j] = complex(x[0], x[1]) if isinstance(x, list) else x
    return m


def frame_operator(doc):
    n = doc["dim"]
    s = np.zeros((n, n), dtype=complex)
    for w, basis, op in zip(doc["weights"], doc["subspaces"], doc["local_operators"]):
        q = matrix(basis, n).T
        p = q @ q.conj().T
        lam = matrix(op, n)
        s += w * w * p @ lam.conj().T @ lam @ p
    return (s + s.conj().T) / 2


def check(doc_path):
    doc = json.loads(doc_path.read_text())
    oracle = json.loads(doc_path.with_suffix(".oracle.json").read_text())
    s = frame_operator(doc)
    spectrum = np.linalg.eigvalsh(s)
    worst = np.max(np.abs(spectrum - np.array(oracle["spectrum"]))) / max(1.0, spectrum[-1])
    for name, rows in doc.get("operators", {}).items():
        k = matrix(rows, doc["dim"])
        expect = oracle["operators"][name]
        sv = np.linalg.svd(k, compute_uv=False)
        rank = int(np.sum(sv > 1e-10 + 1e-9 * max(1.0, sv[0])))
        assert rank == expect["rank"], (doc_path.name, name, rank)
        # sup{A : S - A kk* >= 0} via the generalized problem on R(S)
        w, v = np.linalg.eigh(s)
        keep = w > 1e-10 + 1e-9 * max(1.0, w[-1])
        outside = np.linalg.norm(k - v[:, keep] @ v[:, keep].conj().T @ k, 2)
        assert (outside <= 1e-10 + 1e-9 * max(1.0, sv[0])) == expect["is_frame"], (doc_path.name, name)
        if expect["a_op"] is not None:
            s_pinv = v[:, keep] @ np.diag(1 / w[keep]) @ v[:, keep].conj().T
            a = 1 / np.max(np.linalg.eigvalsh(k.conj().T @ s_pinv @ k))
            worst = max(worst, abs(a - expect["a_op"]) / abs(a))
    return worst


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures")
    worst = 0.0
    for path in sorted(root.glob("FIX-*.json")):
        if path.name.endswith(".oracle.json"):
            continue
        w = check(path)
        worst = max(worst, w)
        print(f"{path.stem:10s} max relative deviation {w:.2e}")
    print(f"worst {worst:.2e}")
    sys.exit(0 if worst <= 1e-9 else 1)


if __name__ == "__main__":
    main()
