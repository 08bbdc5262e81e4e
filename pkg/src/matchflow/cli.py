"""Command-line front end.

Commands: clean, train-eval, momentum, analyze {ahp|trend|random|sweep|
wavelet}, report.  Every command is a pure function of its input files, the
merged configuration and the seed; outputs are byte-identical across runs.
Option precedence is command line > config file > built-in defaults.

Exit codes: 0 success, 1 analysis error, 2 I/O or schema error, 3 config
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import ahp as ahp_mod
from . import classifier, ingest, labels, metrics, momentum, plots, sweep as sweep_mod, trend, wavelet
from .errors import ConfigError, DataError, MatchFlowError, SchemaError

OUT_DIR_ENV = "MATCHFLOW_OUT_DIR"

DEFAULT_AHP_INDICATORS = [
    "score_diff",
    "psychological_factor",
    "unforced_error_ratio_p2",
    "distance_run_diff",
    "set_diff",
]

# Built-in pairwise judgments over the default indicators: the score margin
# dominates, pressure handling comes next, then the opponent's error rate.
DEFAULT_AHP_ENTRIES = [
    (0, 1, 2.0),
    (0, 2, 3.0),
    (0, 3, 5.0),
    (0, 4, 3.0),
    (1, 2, 2.0),
    (1, 3, 3.0),
    (1, 4, 2.0),
    (2, 3, 2.0),
    (2, 4, 1.0),
    (3, 4, 0.5),
]

DEFAULTS = {
    "unit": "point",
    "holdout": "1701",
    "seed": 0,
    "columns": {},
    "momentum": {},
    "train": {},
    "ahp": {"indicators": DEFAULT_AHP_INDICATORS, "method": "geometric_mean", "matrix": None,
            "matrix_csv": None},
    "trend": {"x": "momentum", "y": "streak_len_p1", "grid": 20},
    "random": {"statistic": "max_streak", "permutations": 199, "stratify_by_server": False},
    "sweep": {"indicators": ["psychological_factor"], "ranges": None, "steps": None,
              "degree": 2, "tolerance": 1e-3},
    "wavelet": {"center_frequency": 6.0, "n_scales": 32, "min_period": 2.0, "max_period": None,
                "boundary": "reflect"},
}


# ---------------------------------------------------------------- plumbing

def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def load_config(path) -> dict:
    merged = json.loads(json.dumps(DEFAULTS))  # deep copy
    if path:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(user) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config section(s): {sorted(unknown)}")
        for key, value in user.items():
            if isinstance(merged.get(key), dict) and isinstance(value, dict):
                merged[key].update(value)
            else:
                merged[key] = value
    return merged


def _out_dir(args) -> Path:
    out = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_matches(paths, config):
    all_timelines = []
    report = ingest.CleaningReport()
    for path in paths:
        timelines, part = ingest.load_and_clean(path, columns=config["columns"] or None)
        all_timelines.extend(timelines)
        ingest._merge_report(report, part)
    if not all_timelines:
        raise DataError("no matches found in the input files")
    return all_timelines, report


def _select_match(timelines, wanted):
    if wanted is None:
        return timelines[0]
    for tl in timelines:
        if tl.match_id == wanted or tl.match_id.endswith(wanted):
            return tl
    raise ConfigError(f"no match with id (or id suffix) {wanted!r} in the inputs")


def _momentum_params(config) -> momentum.MomentumParams:
    try:
        return momentum.MomentumParams(**config["momentum"])
    except TypeError as exc:
        raise ConfigError(f"bad momentum parameter: {exc}") from None


def _train_config(config, seed) -> classifier.TrainConfig:
    try:
        cfg = classifier.TrainConfig(**config["train"])
    except TypeError as exc:
        raise ConfigError(f"bad train parameter: {exc}") from None
    cfg.seed = seed
    return cfg


# ---------------------------------------------------------------- commands

def cmd_clean(args):
    config = load_config(args.config)
    timelines, report = ingest.load_and_clean(args.input, columns=config["columns"] or None)
    ingest.write_clean_csv(timelines, args.output)
    _write_json(args.report, report.to_dict())
    print(f"cleaned {sum(len(t) for t in timelines)} points from {len(timelines)} match(es)")
    print(f"wrote {args.output} and {args.report}")
    return 0


def _fit_corpus_model(train_timelines, config, seed):
    """Label and featurize a corpus, then train on a stratified split.

    Returns (model, stats, split evaluation dict).
    """
    stats = labels.estimate_serve_win_posterior(train_timelines, unit=config["unit"])
    rows, levels = [], []
    label_set = labels.LabelSet.from_stats(stats)
    for tl in train_timelines:
        table = ingest.derive_features(tl)
        rows.append(table.values)
        levels.extend(lab.level for lab in labels.label_points(tl, stats))
    x = np.vstack(rows)
    y = np.asarray(levels, dtype=int)

    cfg = _train_config(config, seed)
    train_idx, test_idx = classifier.train_test_split(y, fraction=cfg.split, seed=cfg.seed)
    table = ingest.FeatureTable("corpus", list(ingest.FEATURE_NAMES), x[train_idx])
    model = classifier.train(
        table, y[train_idx], cfg, class_values=label_set.values
    )

    test_x, test_y = x[test_idx], y[test_idx]
    pred = model.predict(test_x)
    counts = metrics.confusion(test_y, pred, n_classes=label_set.n_classes)
    summary = metrics.summary_metrics(counts)
    proba = np.atleast_2d(model.predict_proba(test_x))
    return model, stats, {"truth": test_y, "proba": proba, "summary": summary,
                          "label_set": label_set}


def _write_roc_curves(out_dir, evaluation):
    label_set = evaluation["label_set"]
    paths = {}
    for level in range(label_set.n_classes):
        curve = metrics.roc_auc(evaluation["truth"], evaluation["proba"][:, level], level)
        path = out_dir / f"roc_level{level}.csv"
        rows = [
            [repr(float(t)), repr(float(f)), repr(float(s))]
            for t, f, s in zip(curve.thresholds, curve.fpr, curve.tpr)
        ]
        _write_csv(path, ["threshold", "fpr", "tpr"], rows)
        paths[f"roc_level{level}"] = {"path": path.name, "auc": curve.auc}
    return paths


def _write_holdout_probabilities(out_dir, model, holdout, stats):
    label_set = labels.LabelSet.from_stats(stats)
    table = ingest.derive_features(holdout)
    proba = np.atleast_2d(model.predict_proba(table.values))
    pred = np.argmax(proba, axis=1)
    path = out_dir / "holdout_probabilities.csv"
    header = ["point_no"] + [f"proba_{v:g}" for v in label_set.values] + [
        "predicted_value",
        "predicted_outcome",
    ]
    rows = []
    for i, record in enumerate(holdout.records):
        level = int(pred[i])
        rows.append(
            [record.point_no]
            + [repr(float(p)) for p in proba[i]]
            + [f"{label_set.values[level]:g}", f"Player {label_set.winner(level)} wins"]
        )
    _write_csv(path, header, rows)
    return path


def cmd_train_eval(args):
    config = load_config(args.config)
    seed = args.seed if args.seed is not None else config["seed"]
    holdout_key = args.holdout or config["holdout"]
    out_dir = _out_dir(args)

    timelines, _ = _load_matches(args.inputs, config)
    holdout = _select_match(timelines, holdout_key)
    train_timelines = [tl for tl in timelines if tl.match_id != holdout.match_id]
    if not train_timelines:
        raise ConfigError("holdout match leaves no data to train on")

    model, stats, evaluation = _fit_corpus_model(train_timelines, config, seed)
    classifier.save_model(model, out_dir / "model.json")
    _write_json(out_dir / "serve_stats.json", stats.to_dict())
    table = metrics.metrics_table(evaluation["summary"], evaluation["label_set"].values)
    _write_json(out_dir / "metrics.json", table)
    roc_info = _write_roc_curves(out_dir, evaluation)
    _write_holdout_probabilities(out_dir, model, holdout, stats)

    micro = evaluation["summary"]["micro"]
    print(f"trained on {len(train_timelines)} match(es), held out {holdout.match_id}")
    print(f"micro accuracy {micro['accuracy']:.3f}, micro F1 {micro['f_measure']:.3f}")
    for name, info in sorted(roc_info.items()):
        print(f"{name}: AUC {info['auc']:.3f}")
    return 0


def _momentum_csv(out_dir, series):
    path = out_dir / "momentum.csv"
    header = [
        "point_no",
        "p1_momentum",
        "p2_momentum",
        "p1_short_window",
        "p1_long_window",
        "p2_short_window",
        "p2_long_window",
        "streak_len",
        "streak_holder",
    ]
    rows = [
        [
            int(series.point_no[i]),
            repr(float(series.p1[i])),
            repr(float(series.p2[i])),
            repr(float(series.short_p1[i])),
            repr(float(series.long_p1[i])),
            repr(float(series.short_p2[i])),
            repr(float(series.long_p2[i])),
            int(series.streak_len[i]),
            int(series.streak_holder[i]),
        ]
        for i in range(len(series))
    ]
    _write_csv(path, header, rows)
    return path


def _unit_boundaries(timeline, by_game: bool):
    key = (lambda r: (r.set_no, r.game_no)) if by_game else (lambda r: r.set_no)
    out = []
    records = timeline.records
    for i, record in enumerate(records):
        last = i + 1 == len(records) or key(records[i + 1]) != key(record)
        if last:
            out.append(
                {
                    "point_no": record.point_no,
                    "set_no": record.set_no,
                    "game_no": record.game_no,
                    "victor": record.point_victor,
                }
            )
    return out


def _swings_payload(timeline, series):
    return {
        "version": 1,
        "match_id": timeline.match_id,
        "swings": momentum.find_swings(series, player=1),
        "game_end_points": _unit_boundaries(timeline, by_game=True),
        "set_end_points": _unit_boundaries(timeline, by_game=False),
    }


def cmd_momentum(args):
    config = load_config(args.config)
    timelines, _ = _load_matches(args.inputs, config)
    match = _select_match(timelines, args.match)
    params = _momentum_params(config)
    series = momentum.momentum_series(match, params)
    out_dir = _out_dir(args)
    _momentum_csv(out_dir, series)
    _write_json(out_dir / "momentum_swings.json", _swings_payload(match, series))
    if args.plot:
        plots.line_plot_svg(
            series.point_no,
            {"player 1": series.p1, "player 2": series.p2},
            out_dir / "momentum.svg",
            title=f"momentum: {match.match_id}",
            y_range=(0.0, 1.0),
        )
    print(f"momentum series for {match.match_id}: {len(series)} points")
    print(f"p1 mean momentum {float(series.p1.mean()):.3f}")
    return 0


def _load_judgment_matrix(config):
    section = config["ahp"]
    if section.get("matrix") is not None:
        return ahp_mod.JudgmentMatrix(np.asarray(section["matrix"], dtype=float))
    if section.get("matrix_csv"):
        with open(section["matrix_csv"]) as fh:
            rows = [[float(cell) for cell in row] for row in csv.reader(fh) if row]
        return ahp_mod.JudgmentMatrix(np.asarray(rows))
    n = len(section["indicators"])
    if section["indicators"] == DEFAULT_AHP_INDICATORS:
        return ahp_mod.build_judgment_matrix(n, DEFAULT_AHP_ENTRIES)
    return ahp_mod.build_judgment_matrix(n, ())  # equal importance fallback


def _analyze_ahp(match, config, out_dir):
    section = config["ahp"]
    matrix = _load_judgment_matrix(config)
    indicator_names = section["indicators"]
    if matrix.n != len(indicator_names):
        raise ConfigError(
            f"judgment matrix order {matrix.n} does not match "
            f"{len(indicator_names)} indicators"
        )
    table = ingest.derive_features(match)
    try:
        columns = np.column_stack([table.column(name) for name in indicator_names])
    except ValueError:
        unknown = [n for n in indicator_names if n not in table.feature_names]
        raise ConfigError(f"unknown indicator column(s): {unknown}") from None

    scoring_weights = ahp_mod.weights(matrix, method=section["method"])
    result = ahp_mod.consistency(matrix)
    rounds = ahp_mod.score_rounds(columns, scoring_weights)

    payload = {
        "version": 1,
        "indicators": list(indicator_names),
        "weighting_method": section["method"],
        "scoring_weights": scoring_weights.tolist(),
        "result": result.to_dict(),
    }
    _write_json(out_dir / "ahp.json", payload)
    rows = [
        [r["round"], repr(r["score"]), repr(r["standardization"]), r["ranking"]]
        for r in rounds.to_rows()
    ]
    _write_csv(out_dir / "ahp_ranking.csv", ["round", "score", "standardization", "ranking"], rows)
    return payload


def _win_rate_series(timeline):
    p1 = np.array([r.p1_points_won for r in timeline.records], dtype=float)
    p2 = np.array([r.p2_points_won for r in timeline.records], dtype=float)
    total = p1 + p2
    total[total == 0] = 1.0
    return p1 / total


def _analyze_trend(match, config, out_dir, params):
    section = config["trend"]
    series = momentum.momentum_series(match, params)
    table = ingest.derive_features(match)
    win_rate = _win_rate_series(match)

    def axis(name):
        if name == "momentum":
            return series.p1
        if name in table.feature_names:
            return table.column(name)
        raise ConfigError(f"unknown trend axis {name!r}")

    x, y = axis(section["x"]), axis(section["y"])
    similarity = trend.cosine_similarity(series.p1, win_rate)
    distance = trend.euclidean_distance(series.p1, win_rate)
    fit = trend.fit_poly22(x, y, win_rate)

    grid_n = int(section.get("grid", 20))
    gx = np.linspace(float(x.min()), float(x.max()), grid_n)
    gy = np.linspace(float(y.min()), float(y.max()), grid_n)
    rows = []
    for vx in gx:
        for vy in gy:
            rows.append([repr(float(vx)), repr(float(vy)), repr(float(fit.predict(vx, vy)))])
    _write_csv(out_dir / "trend_surface.csv", [section["x"], section["y"], "fitted_win_rate"], rows)

    payload = {
        "version": 1,
        "pairing": {
            "similarity_pair": ["p1_momentum", "cumulative_win_rate"],
            "surface_x": section["x"],
            "surface_y": section["y"],
            "surface_z": "cumulative_win_rate",
        },
        "cosine_similarity": similarity,
        "euclidean_distance": distance,
        "surface": fit.to_dict(),
    }
    _write_json(out_dir / "trend.json", payload)
    return payload


def _analyze_random(match, config, out_dir, params, seed):
    section = config["random"]
    report = trend.randomness_test(
        match,
        params=params,
        statistic=section["statistic"],
        n_permutations=int(section["permutations"]),
        seed=seed,
        stratify_by_server=bool(section["stratify_by_server"]),
    )
    payload = report.to_dict()
    _write_json(out_dir / "randomness.json", payload)
    return payload


def _sweep_spec_from_config(config, table):
    section = config["sweep"]
    names = list(section["indicators"])
    ranges = section["ranges"]
    steps = section["steps"]
    resolved_ranges, resolved_steps = [], []
    for i, name in enumerate(names):
        if name not in table.feature_names:
            raise ConfigError(f"unknown sweep indicator {name!r}")
        column = table.column(name)
        lo, hi = (ranges[i] if ranges else (float(column.min()), float(column.max())))
        if lo >= hi:
            lo, hi = lo, lo + 1.0
        step = (steps[i] if steps else (hi - lo) / 24.0)
        resolved_ranges.append((float(lo), float(hi)))
        resolved_steps.append(float(step))
    baseline = {
        name: float(np.median(table.column(name))) for name in table.feature_names
    }
    return sweep_mod.SweepSpec(
        indicators=tuple(names),
        ranges=tuple(resolved_ranges),
        steps=tuple(resolved_steps),
        baseline=baseline,
        tolerance=float(section["tolerance"]),
    )


def _analyze_sweep(match, config, out_dir, params):
    section = config["sweep"]
    table = ingest.derive_features(match)
    series = momentum.momentum_series(match, params)
    model = sweep_mod.fit_response_model(table, series.p1, degree=int(section["degree"]))
    spec = _sweep_spec_from_config(config, table)
    if len(spec.indicators) == 1:
        result = sweep_mod.sweep_1d(model, spec)
        grid = result.grids[0]
        rows = []
        for i, value in enumerate(grid):
            rows.append([repr(float(value)), "serve_first", repr(float(result.serve_first[i]))])
            rows.append([repr(float(value)), "serve_second", repr(float(result.serve_second[i]))])
            rows.append([repr(float(value)), "mean", repr(float(result.mean[i]))])
        _write_csv(out_dir / "sweep.csv", [spec.indicators[0], "context", "momentum"], rows)
    else:
        result = sweep_mod.sweep_2d(model, spec)
        gx, gy = result.grids
        rows = []
        for i, vx in enumerate(gx):
            for j, vy in enumerate(gy):
                for context, surface in (
                    ("serve_first", result.serve_first),
                    ("serve_second", result.serve_second),
                    ("mean", result.mean),
                ):
                    rows.append(
                        [repr(float(vx)), repr(float(vy)), context, repr(float(surface[i, j]))]
                    )
        _write_csv(
            out_dir / "sweep.csv",
            [spec.indicators[0], spec.indicators[1], "context", "momentum"],
            rows,
        )
    payload = result.to_dict()
    _write_json(out_dir / "sweep.json", payload)
    return payload


def _analyze_wavelet(match, config, out_dir, params, plot=False):
    section = config["wavelet"]
    series = momentum.momentum_series(match, params)
    wavelet_config = wavelet.WaveletConfig(
        center_frequency=float(section["center_frequency"]),
        n_scales=int(section["n_scales"]),
        min_period=float(section["min_period"]),
        max_period=section["max_period"],
        boundary=section["boundary"],
    )
    scalogram = wavelet.cwt(series.p1, wavelet_config)
    export = wavelet.scalogram_export(scalogram)
    rows = [
        [repr(float(s)), int(t), repr(float(a))]
        for s, t, a in export.rows
    ]
    _write_csv(out_dir / "scalogram.csv", ["scale", "time", "amplitude"], rows)
    payload = export.to_dict()
    payload["config"] = {
        "center_frequency": wavelet_config.center_frequency,
        "n_scales": wavelet_config.n_scales,
        "min_period": wavelet_config.min_period,
        "max_period": wavelet_config.max_period,
        "boundary": wavelet_config.boundary,
    }
    _write_json(out_dir / "scalogram.json", payload)
    if plot:
        plots.heatmap_svg(
            scalogram.amplitude,
            out_dir / "scalogram.svg",
            title=f"momentum scalogram: {match.match_id}",
            x_labels=scalogram.times,
            y_labels=scalogram.scales,
        )
    return payload


ANALYSES = ("ahp", "trend", "random", "sweep", "wavelet")


def cmd_analyze(args):
    config = load_config(args.config)
    seed = args.seed if args.seed is not None else config["seed"]
    timelines, _ = _load_matches(args.inputs, config)
    match = _select_match(timelines, args.match)
    params = _momentum_params(config)
    out_dir = _out_dir(args)

    if args.which == "ahp":
        payload = _analyze_ahp(match, config, out_dir)
        result = payload["result"]
        print(f"CR {result['consistency_ratio']:.4f} (consistent: {result['consistent']})")
    elif args.which == "trend":
        payload = _analyze_trend(match, config, out_dir, params)
        print(
            f"cosine similarity {payload['cosine_similarity']:.4f}, "
            f"R^2 {payload['surface']['r_squared']:.4f}"
        )
    elif args.which == "random":
        payload = _analyze_random(match, config, out_dir, params, seed)
        print(f"{payload['statistic']}: observed {payload['observed']:.4f}, "
              f"p = {payload['p_value']:.4f}")
    elif args.which == "sweep":
        payload = _analyze_sweep(match, config, out_dir, params)
        print(f"crossovers: {payload['crossovers']}")
    else:
        payload = _analyze_wavelet(match, config, out_dir, params, plot=args.plot)
        peak = payload["global_peak"]
        print(f"peak amplitude {peak['amplitude']:.4f} at scale {peak['scale']:.2f}, "
              f"point {peak['time']}")
    return 0


def cmd_report(args):
    config = load_config(args.config)
    seed = args.seed if args.seed is not None else config["seed"]
    out_dir = _out_dir(args)
    params = _momentum_params(config)

    timelines, cleaning = _load_matches(args.inputs, config)
    if args.match:
        match = _select_match(timelines, args.match)
    else:
        try:
            match = _select_match(timelines, config["holdout"])
        except ConfigError:
            match = timelines[0]
    others = [tl for tl in timelines if tl.match_id != match.match_id]
    train_timelines = others if others else [match]

    _write_json(out_dir / "cleaning_report.json", cleaning.to_dict())
    model, stats, evaluation = _fit_corpus_model(train_timelines, config, seed)
    classifier.save_model(model, out_dir / "model.json")
    _write_json(out_dir / "serve_stats.json", stats.to_dict())
    table = metrics.metrics_table(evaluation["summary"], evaluation["label_set"].values)
    _write_json(out_dir / "metrics.json", table)
    roc_info = _write_roc_curves(out_dir, evaluation)
    _write_holdout_probabilities(out_dir, model, match, stats)

    series = momentum.momentum_series(match, params)
    _momentum_csv(out_dir, series)
    _write_json(out_dir / "momentum_swings.json", _swings_payload(match, series))
    plots.line_plot_svg(
        series.point_no,
        {"player 1": series.p1, "player 2": series.p2},
        out_dir / "momentum.svg",
        title=f"momentum: {match.match_id}",
        y_range=(0.0, 1.0),
    )

    ahp_payload = _analyze_ahp(match, config, out_dir)
    trend_payload = _analyze_trend(match, config, out_dir, params)
    random_payload = _analyze_random(match, config, out_dir, params, seed)
    sweep_payload = _analyze_sweep(match, config, out_dir, params)
    wavelet_payload = _analyze_wavelet(match, config, out_dir, params, plot=True)

    artifacts = {
        "cleaning_report": "cleaning_report.json",
        "model": "model.json",
        "serve_stats": "serve_stats.json",
        "metrics": "metrics.json",
        "holdout_probabilities": "holdout_probabilities.csv",
        "momentum_csv": "momentum.csv",
        "momentum_swings": "momentum_swings.json",
        "momentum_plot": "momentum.svg",
        "ahp": "ahp.json",
        "ahp_ranking": "ahp_ranking.csv",
        "trend": "trend.json",
        "trend_surface": "trend_surface.csv",
        "randomness": "randomness.json",
        "sweep": "sweep.json",
        "sweep_csv": "sweep.csv",
        "scalogram": "scalogram.json",
        "scalogram_csv": "scalogram.csv",
        "scalogram_plot": "scalogram.svg",
    }
    for level in range(evaluation["label_set"].n_classes):
        artifacts[f"roc_level{level}"] = f"roc_level{level}.csv"

    report = {
        "version": 1,
        "match_id": match.match_id,
        "seed": seed,
        "artifacts": artifacts,
        "serve_stats": stats.to_dict(),
        "metrics_summary": {
            "micro": evaluation["summary"]["micro"],
            "macro": evaluation["summary"]["macro"],
            "auc": {name: info["auc"] for name, info in sorted(roc_info.items())},
        },
        "momentum_summary": {
            "points": len(series),
            "p1_mean": float(series.p1.mean()),
            "p1_max": float(series.p1.max()),
            "p1_min": float(series.p1.min()),
            "swings": momentum.find_swings(series, player=1),
        },
        "ahp_summary": ahp_payload,
        "trend_summary": trend_payload,
        "randomness_summary": random_payload,
        "sweep_summary": sweep_payload,
        "wavelet_summary": wavelet_payload,
    }
    _write_json(out_dir / "report.json", report)
    print(f"report for {match.match_id} written to {out_dir}")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchflow", description="point-by-point tennis match-flow analytics"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        if inputs:
            p.add_argument("inputs", nargs="+", help="point-by-point CSV file(s)")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="seed for stochastic components")
        p.add_argument("--out-dir", default=None,
                       help=f"output directory (or ${OUT_DIR_ENV}, default .)")

    p_clean = sub.add_parser("clean", help="clean a CSV and report the repairs")
    p_clean.add_argument("input", help="point-by-point CSV file")
    p_clean.add_argument("--output", default="cleaned.csv", help="cleaned CSV path")
    p_clean.add_argument("--report", default="cleaning_report.json", help="report JSON path")
    p_clean.add_argument("--config", help="JSON config file")
    p_clean.add_argument("--seed", type=int, default=None)
    p_clean.set_defaults(func=cmd_clean)

    p_train = sub.add_parser("train-eval", help="train the classifier and evaluate it")
    common(p_train)
    p_train.add_argument("--holdout", default=None,
                         help="match id (or suffix) to hold out; default 1701")
    p_train.set_defaults(func=cmd_train_eval)

    p_mom = sub.add_parser("momentum", help="momentum series and swing annotations")
    common(p_mom)
    p_mom.add_argument("--match", default=None, help="match id or suffix (default: first)")
    p_mom.add_argument("--plot", action="store_true", help="also render an SVG line plot")
    p_mom.set_defaults(func=cmd_momentum)

    p_an = sub.add_parser("analyze", help="run one analysis")
    p_an.add_argument("which", choices=ANALYSES)
    common(p_an)
    p_an.add_argument("--match", default=None, help="match id or suffix (default: first)")
    p_an.add_argument("--plot", action="store_true", help="render SVG where applicable")
    p_an.set_defaults(func=cmd_analyze)

    p_rep = sub.add_parser("report", help="bundle every analysis for one match")
    common(p_rep)
    p_rep.add_argument("--match", default=None,
                       help="match id or suffix (default: the configured holdout)")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (SchemaError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (MatchFlowError, ValueError, ArithmeticError, KeyError, IndexError) as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
