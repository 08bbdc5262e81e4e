"""Shared fixture builders and independent oracles for the test suite.

Oracles here are deliberately written as straight-line re-derivations
(explicit loops, scalar math) so they stay independent of the vectorized
library paths they check.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from matchflow.ingest import MatchTimeline, PointRecord
from matchflow.momentum import MomentumParams


def make_record(match_id="m1", point_no=1, **overrides) -> PointRecord:
    base = dict(
        match_id=match_id,
        set_no=1,
        game_no=1,
        point_no=point_no,
        server=1,
        point_victor=1,
        p1_score=0.0,
        p2_score=0.0,
        p1_games=0,
        p2_games=0,
        p1_sets=0,
        p2_sets=0,
        p1_points_won=0,
        p2_points_won=0,
        serve_no=1,
    )
    base.update(overrides)
    return PointRecord(**base)


def make_timeline(victors, servers=None, match_id="m1", **extra_columns) -> MatchTimeline:
    """Clean-valid timeline from a victor sequence.

    Servers default to alternating blocks of four points.  Cumulative
    counters are kept consistent with the victors.  extra_columns maps a
    PointRecord field name to a per-point list.
    """
    victors = list(victors)
    n = len(victors)
    if servers is None:
        servers = [1 + (i // 4) % 2 for i in range(n)]
    records = []
    won = [0, 0]
    for i in range(n):
        won[victors[i] - 1] += 1
        overrides = {name: values[i] for name, values in extra_columns.items()}
        records.append(
            make_record(
                match_id=match_id,
                point_no=i + 1,
                server=servers[i],
                point_victor=victors[i],
                game_no=1 + i // 8,
                p1_points_won=won[0],
                p2_points_won=won[1],
                **overrides,
            )
        )
    return MatchTimeline(match_id, records)


def random_timeline(rng, n, match_id="rand") -> MatchTimeline:
    victors = rng.integers(1, 3, size=n).tolist()
    servers = rng.integers(1, 3, size=n).tolist()
    return make_timeline(victors, servers, match_id=match_id)


def timeline_to_csv(timeline, extra_header=(), path=None) -> str:
    """Minimal CSV text for a timeline (required columns only)."""
    cols = [
        "match_id",
        "set_no",
        "game_no",
        "point_no",
        "server",
        "point_victor",
        "p1_score",
        "p2_score",
        "p1_games",
        "p2_games",
        "p1_sets",
        "p2_sets",
        "p1_points_won",
        "p2_points_won",
        "serve_no",
    ] + list(extra_header)
    lines = [",".join(cols)]
    for r in timeline.records:
        lines.append(",".join(str(getattr(r, c)) for c in cols))
    text = "\n".join(lines) + "\n"
    if path is not None:
        path.write_text(text)
    return text


# ----------------------------------------------------------------- oracles

def momentum_oracle(victors, params: MomentumParams | None = None):
    """Pointwise scalar re-derivation of the dual-window momentum score."""
    params = params or MomentumParams()
    v = list(victors)
    n = len(v)
    p1, p2 = [], []
    for i in range(n):
        run = 1
        while i - run >= 0 and v[i - run] == v[i]:
            run += 1
        k = min(run, params.streak_cap)
        per_player = {}
        for player in (1, 2):
            windows = []
            for half, gain, doubled in (
                (1, params.short_streak_gain, True),
                (3, params.long_streak_gain, False),
            ):
                lo = max(0, i - half)
                hi = min(n - 1, i + half)
                total = 0.0
                for j in range(lo, hi + 1):
                    total += 0.5 if v[j] == player else -0.5
                bonus = 0.0
                if run >= params.streak_min:
                    scale = math.exp(2 * k) if doubled else math.exp(k)
                    sign = 1.0 if v[i] == player else -1.0
                    bonus = sign * (gain * scale)
                windows.append((total + bonus) / (hi - lo + 1) + 0.5)
            blend = params.short_weight * windows[0] + params.long_weight * windows[1]
            per_player[player] = min(max(blend, 0.0), 1.0)
        p1.append(per_player[1])
        p2.append(per_player[2])
    return np.array(p1), np.array(p2)


def confusion_oracle(truth, pred, n_classes):
    """Brute-force one-vs-rest counting with an explicit double loop."""
    out = {}
    for c in range(n_classes):
        tp = fp = fn = tn = 0
        for t, p in zip(truth, pred):
            if t == c and p == c:
                tp += 1
            elif t != c and p == c:
                fp += 1
            elif t == c and p != c:
                fn += 1
            else:
                tn += 1
        out[c] = (tp, fp, fn, tn)
    return out


def auc_oracle(truth, scores, positive):
    """Pairwise positive-above-negative count with half-credit ties."""
    pos = [s for t, s in zip(truth, scores) if t == positive]
    neg = [s for t, s in zip(truth, scores) if t != positive]
    total = 0.0
    for a in pos:
        for b in neg:
            if a > b:
                total += 1.0
            elif a == b:
                total += 0.5
    return total / (len(pos) * len(neg))


def cwt_oracle(signal, scales, center_frequency, boundary="zero", support_radius=6.0):
    """Naive double-loop direct summation of the wavelet transform."""
    x = np.asarray(signal, dtype=float)
    n = x.size
    if boundary == "reflect":
        pad = int(math.ceil(support_radius * max(scales)))
        ext = np.pad(x, pad, mode="reflect")
        offsets = [t - pad for t in range(ext.size)]
    else:
        ext = x
        offsets = list(range(n))
    out = np.zeros((len(scales), n), dtype=complex)
    for si, a in enumerate(scales):
        root = math.sqrt(a)
        for b in range(n):
            acc = 0j
            for idx, t in enumerate(offsets):
                u = (t - b) / a
                psi = (math.pi**-0.25) * cmath.exp(1j * center_frequency * u) * math.exp(-0.5 * u * u)
                acc += ext[idx] * psi.conjugate() / root
            out[si, b] = acc
    return out


def eigenvalue_oracle(matrix, iters=500):
    """Dominant eigenvalue by repeated multiplication, max-normalized."""
    a = np.asarray(matrix, dtype=float)
    v = np.ones(a.shape[0])
    for _ in range(iters):
        v = a @ v
        v = v / v.max()
    return float(np.mean(a @ v / v))


def ks_distance_uniform(pvalues):
    """Kolmogorov-Smirnov distance of a sample against Uniform(0, 1)."""
    x = np.sort(np.asarray(pvalues, dtype=float))
    n = x.size
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - x), np.max(x - grid_lo)))
