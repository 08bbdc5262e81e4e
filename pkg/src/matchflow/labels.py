"""Serve-conditioned win probabilities estimated by counting, and the
four-level outcome labels built from them.

The estimate works at three time scales: every point, every game, or every
set.  A unit's first server is the server of its opening point; its victor is
whoever won its final point (game and set winners always take the last point
of the unit).  Counts are pooled across both players, so the headline number
is "probability that the unit's first server wins the unit".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DataError

UNITS = ("point", "game", "set")


class ClassLabel(NamedTuple):
    """One of the four outcome levels: (level index, numeric value)."""

    level: int
    value: float


@dataclass
class ServeWinStats:
    """Counted serve/win events at one time scale.

    serves[p] units where player p served first, serve_wins[p] units that
    player both served first and won, wins[p] units won by p.  Probabilities
    are exact count ratios.
    """

    unit: str
    serves: dict
    serve_wins: dict
    wins: dict
    n_units: int
    laplace: bool = False

    @property
    def p_win_given_serve(self) -> float:
        num = self.serve_wins[1] + self.serve_wins[2]
        den = self.serves[1] + self.serves[2]
        if self.laplace:
            return (num + 1) / (den + 2)
        return num / den

    @property
    def p_lose_given_serve(self) -> float:
        return 1.0 - self.p_win_given_serve

    def p_win_given_serve_player(self, player: int) -> float:
        num, den = self.serve_wins[player], self.serves[player]
        if self.laplace:
            return (num + 1) / (den + 2)
        if den == 0:
            raise DataError(f"insufficient data: player {player} never served a {self.unit}")
        return num / den

    def posterior_via_prior(self) -> float:
        """Pooled serve-win posterior composed from prior and likelihood.

        Multiplies the serve-rate-given-win likelihood by the win prior and
        divides by the serve rate, over player/unit pairs.  Algebraically the
        same ratio as p_win_given_serve; kept as a separate computation path
        so the two can be cross-checked.
        """
        pairs = 2 * self.n_units
        n_serve_and_win = self.serve_wins[1] + self.serve_wins[2]
        n_win = self.wins[1] + self.wins[2]
        n_serve = self.serves[1] + self.serves[2]
        p_serve_given_win = n_serve_and_win / n_win
        p_win = n_win / pairs
        p_serve = n_serve / pairs
        return p_serve_given_win * p_win / p_serve

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "unit": self.unit,
            "p_win_given_serve": self.p_win_given_serve,
            "p_lose_given_serve": self.p_lose_given_serve,
            "counts": {
                "serves": {str(k): v for k, v in sorted(self.serves.items())},
                "serve_wins": {str(k): v for k, v in sorted(self.serve_wins.items())},
                "wins": {str(k): v for k, v in sorted(self.wins.items())},
                "units": self.n_units,
            },
            "laplace": self.laplace,
        }


def _iter_units(timeline, unit):
    if unit == "point":
        for r in timeline.records:
            yield r.server, r.point_victor
        return
    key = (lambda r: (r.set_no, r.game_no)) if unit == "game" else (lambda r: r.set_no)
    group_key, first, last = None, None, None
    for r in timeline.records:
        k = key(r)
        if k != group_key:
            if first is not None:
                yield first.server, last.point_victor
            group_key, first = k, r
        last = r
    if first is not None:
        yield first.server, last.point_victor


def estimate_serve_win_posterior(timelines, unit="point", laplace=False) -> ServeWinStats:
    """Count serve/win events over the given timelines at one time scale.

    Args:
        timelines: iterable of MatchTimeline (cleaned).
        unit: "point", "game" or "set".
        laplace: apply add-one smoothing to the pooled ratio (off by default;
            raw ratios reproduce the counting estimate exactly).

    Raises:
        DataError: no units with an identified server were observed.
    """
    if unit not in UNITS:
        raise DataError(f"unknown unit {unit!r}; expected one of {UNITS}")
    serves = {1: 0, 2: 0}
    serve_wins = {1: 0, 2: 0}
    wins = {1: 0, 2: 0}
    n_units = 0
    for tl in timelines:
        for server, victor in _iter_units(tl, unit):
            if server not in (1, 2) or victor not in (1, 2):
                continue
            n_units += 1
            serves[server] += 1
            wins[victor] += 1
            if server == victor:
                serve_wins[server] += 1
    if n_units == 0 or serves[1] + serves[2] == 0:
        raise DataError(f"insufficient data: no {unit} units with an identified server")
    return ServeWinStats(unit, serves, serve_wins, wins, n_units, laplace)


@dataclass
class LabelSet:
    """The four ordered outcome levels {0, p_lose, p_win, 1}.

    Level 0: player 2 wins on own serve; level 1: player 2 breaks serve;
    level 2: player 1 breaks serve; level 3: player 1 wins on own serve.
    Fractional levels mark receiver wins, the upsets relative to the serve
    advantage.
    """

    values: tuple

    LEVEL_NAMES = ("p2_hold", "p2_break", "p1_break", "p1_hold")

    @classmethod
    def from_stats(cls, stats: ServeWinStats) -> "LabelSet":
        p_win = stats.p_win_given_serve
        p_lose = stats.p_lose_given_serve
        if not (0.0 < p_lose < p_win < 1.0):
            raise DataError(
                "label levels must be strictly ordered 0 < p_lose < p_win < 1; "
                f"got p_win_given_serve={p_win:.4f}"
            )
        return cls((0.0, p_lose, p_win, 1.0))

    def __post_init__(self):
        if len(self.values) != 4 or not all(
            self.values[i] < self.values[i + 1] for i in range(3)
        ):
            raise DataError("label set needs four strictly increasing values")

    @property
    def n_classes(self) -> int:
        return 4

    def label(self, level: int) -> ClassLabel:
        return ClassLabel(level, self.values[level])

    def labels(self) -> list[ClassLabel]:
        return [self.label(i) for i in range(4)]

    def winner(self, level: int) -> int:
        """Match-point winner implied by a level (levels 2,3 -> player 1)."""
        return 1 if level >= 2 else 2

    def describe(self, level: int) -> str:
        return f"{self.values[level]:g} (Player {self.winner(level)} wins)"


def label_points(timeline, stats: ServeWinStats) -> list[ClassLabel]:
    """Assign each point one of the four outcome levels.

    Player 1 winning its own serve maps to 1.0 and losing it maps to the
    p_lose level; receiver wins take the fractional levels (p_win when player
    1 breaks, 0.0 when player 2 holds).
    """
    label_set = LabelSet.from_stats(stats)
    out = []
    for r in timeline.records:
        if r.point_victor == 1:
            level = 3 if r.server == 1 else 2
        else:
            level = 1 if r.server == 1 else 0
        out.append(label_set.label(level))
    return out
