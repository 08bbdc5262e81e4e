#!/usr/bin/env python3
"""Regenerate the bundled two-match fixture CSV.

Simulates best-of-three matches point by point with standard scoring
(deuce/advantage games, tiebreak at 6-6), a serve-win probability around
0.67 and a mild hot-hand carryover so momentum analyses have structure to
find.  Deterministic: the committed file is reproduced byte for byte.

Run:  python tools/make_fixture.py [data/fixture_matches.csv]
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import numpy as np

GAME_SCORE = {0: "0", 1: "15", 2: "30", 3: "40"}

SERVE_WIN_P = 0.67
CARRYOVER = 0.05  # extra win chance for whoever took the previous point

COLUMNS = [
    "match_id",
    "player1",
    "player2",
    "set_no",
    "game_no",
    "point_no",
    "p1_sets",
    "p2_sets",
    "p1_games",
    "p2_games",
    "p1_score",
    "p2_score",
    "server",
    "serve_no",
    "point_victor",
    "p1_points_won",
    "p2_points_won",
    "winner_shot_type",
    "p1_ace",
    "p2_ace",
    "p1_double_fault",
    "p2_double_fault",
    "p1_unf_err",
    "p2_unf_err",
    "p1_net_pt",
    "p2_net_pt",
    "p1_break_pt",
    "p2_break_pt",
    "p1_break_pt_won",
    "p2_break_pt_won",
    "p1_break_pt_missed",
    "p2_break_pt_missed",
    "p1_distance_run",
    "p2_distance_run",
    "rally_count",
    "speed_mph",
]


def display_score(own: int, other: int, tiebreak: bool) -> str:
    if tiebreak:
        return str(own)
    if own >= 3 and other >= 3:
        if own == other:
            return "40"
        return "AD" if own > other else "40"
    return GAME_SCORE.get(own, "40")


def simulate_match(match_id: str, players: tuple[str, str], seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    sets = [0, 0]
    games = [0, 0]
    points_in_game = [0, 0]
    points_won = [0, 0]
    set_no = game_no = 1
    point_no = 1
    server = 1
    tiebreak = False
    tb_points = 0
    prev_victor = 0

    while max(sets) < 2:
        receiver = 3 - server
        p_server = SERVE_WIN_P
        if prev_victor == server:
            p_server += CARRYOVER
        elif prev_victor == receiver:
            p_server -= CARRYOVER
        serve_no = 1 if rng.random() < 0.65 else 2
        victor = server if rng.random() < p_server else receiver

        # break point: the receiver can take the game with this point
        bp = 0
        if not tiebreak:
            r_pts, s_pts = points_in_game[receiver - 1], points_in_game[server - 1]
            if r_pts >= 3 and r_pts >= s_pts:
                bp = 1

        ace = 1 if victor == server and serve_no == 1 and rng.random() < 0.12 else 0
        dbl = 1 if victor == receiver and serve_no == 2 and rng.random() < 0.3 else 0
        rally = 1 if ace or dbl else int(rng.integers(1, 12))
        unf = 0 if ace or dbl else (1 if rng.random() < 0.35 else 0)
        net = 1 if rally >= 3 and rng.random() < 0.2 else 0
        shot = "" if ace or dbl else ("F" if rng.random() < 0.55 else "B")
        base_run = 3.0 + 7.5 * rally
        d1 = round(base_run * float(rng.uniform(0.75, 1.25)), 3)
        d2 = round(base_run * float(rng.uniform(0.75, 1.25)), 3)
        speed = round(float(rng.normal(118 if serve_no == 1 else 96, 6.0)), 1)

        row = {c: 0 for c in COLUMNS}
        row.update(
            match_id=match_id,
            player1=players[0],
            player2=players[1],
            set_no=set_no,
            game_no=game_no,
            point_no=point_no,
            p1_sets=sets[0],
            p2_sets=sets[1],
            p1_games=games[0],
            p2_games=games[1],
            p1_score=display_score(points_in_game[0], points_in_game[1], tiebreak),
            p2_score=display_score(points_in_game[1], points_in_game[0], tiebreak),
            server=server,
            serve_no=serve_no,
            point_victor=victor,
            winner_shot_type=shot,
            rally_count=rally,
            speed_mph=speed,
        )
        points_won[victor - 1] += 1
        row["p1_points_won"], row["p2_points_won"] = points_won
        row[f"p{victor}_ace"] = ace
        row[f"p{server}_double_fault"] = dbl
        row[f"p{3 - victor}_unf_err"] = unf
        row[f"p{victor}_net_pt"] = net
        row[f"p{receiver}_break_pt"] = bp
        if bp and victor == receiver:
            row[f"p{receiver}_break_pt_won"] = 1
        elif bp:
            row[f"p{receiver}_break_pt_missed"] = 1
        row["p1_distance_run"], row["p2_distance_run"] = d1, d2
        rows.append(row)

        prev_victor = victor
        point_no += 1
        points_in_game[victor - 1] += 1

        if tiebreak:
            tb_points += 1
            a, b = points_in_game
            if max(a, b) >= 7 and abs(a - b) >= 2:
                games[a < b] += 1  # tiebreak winner takes the set 7-6
                winner = 1 if a > b else 2
                sets[winner - 1] += 1
                games = [0, 0]
                points_in_game = [0, 0]
                set_no += 1
                game_no = 1
                tiebreak = False
                tb_points = 0
                server = 3 - server
            elif tb_points % 2 == 1:
                server = 3 - server
            continue

        a, b = points_in_game
        if max(a, b) >= 4 and abs(a - b) >= 2:
            winner = 1 if a > b else 2
            games[winner - 1] += 1
            points_in_game = [0, 0]
            game_no += 1
            server = 3 - server
            g1, g2 = games
            if max(g1, g2) >= 6 and abs(g1 - g2) >= 2:
                sets[0 if g1 > g2 else 1] += 1
                games = [0, 0]
                set_no += 1
                game_no = 1
            elif g1 == 6 and g2 == 6:
                tiebreak = True
                tb_points = 0
    return rows


def main() -> int:
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/fixture_matches.csv")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    matches = [
        ("2023-fixture-1301", ("L. Ferro", "D. Quist"), 20230701),
        ("2023-fixture-1701", ("A. Marden", "R. Solis"), 20230716),
    ]
    all_rows = []
    for match_id, players, seed in matches:
        rows = simulate_match(match_id, players, seed)
        n_ad = sum(1 for r in rows if "AD" in (r["p1_score"], r["p2_score"]))
        print(f"{match_id}: {len(rows)} points, {n_ad} AD scores")
        all_rows.extend(rows)
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(all_rows)
    print(f"wrote {out_path} ({len(all_rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
