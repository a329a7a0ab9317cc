"""Elo-based pairwise preference ranking for human voting sessions.

Ratings start at 1500 and move by K*(S - E) per match with the logistic
expected score E = 1/(1 + 10^((rb - ra)/c)); defaults K=32, c=400.  Updates
are applied as one delta to the winner and its exact negation to the loser,
so the rating sum is conserved bit for bit.

Matchmaking is epsilon-greedy: with probability 0.3 a seeded-uniform random
pair, otherwise the least-played, closest-rated pair (ties by ascending ids).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NonPositiveC, SelfMatch, TooFewItems, UnknownItem

DEFAULT_K = 32.0
DEFAULT_C = 400.0
INITIAL_RATING = 1500.0
EXPLORE_PROBABILITY = 0.3

_HEADER_TAG = "elo-pool/1"


@dataclass
class EloItem:
    id: int
    label: str
    rating: float = INITIAL_RATING
    matches_played: int = 0


@dataclass
class EloPool:
    items: dict[int, EloItem]
    k: float = DEFAULT_K
    c: float = DEFAULT_C
    seed: int = 0
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.seed)

    @classmethod
    def from_labels(cls, labels: list[str], k: float = DEFAULT_K, c: float = DEFAULT_C, seed: int = 0) -> "EloPool":
        items = {i + 1: EloItem(id=i + 1, label=label) for i, label in enumerate(labels)}
        return cls(items=items, k=k, c=c, seed=seed)

    def item(self, item_id: int) -> EloItem:
        try:
            return self.items[item_id]
        except KeyError:
            raise UnknownItem(f"no item with id {item_id}") from None


def expected_score(rating_a: float, rating_b: float, c: float = DEFAULT_C) -> float:
    """Probability that a beats b under the logistic model."""
    if c <= 0:
        raise NonPositiveC(f"scale parameter c must be positive, got {c}")
    return 1.0 / (1.0 + 10.0 ** ((rating_b - rating_a) / c))


def record_match(pool: EloPool, a: int, b: int, winner: str) -> EloPool:
    """Apply one vote; ``winner`` is 'a', 'b' or 'draw'."""
    if a == b:
        raise SelfMatch(f"item {a} cannot play itself")
    item_a = pool.item(a)
    item_b = pool.item(b)
    if winner not in ("a", "b", "draw"):
        raise ValueError(f"winner must be 'a', 'b' or 'draw', got {winner!r}")
    score_a = {"a": 1.0, "b": 0.0, "draw": 0.5}[winner]
    delta = pool.k * (score_a - expected_score(item_a.rating, item_b.rating, pool.c))
    item_a.rating += delta
    item_b.rating -= delta
    item_a.matches_played += 1
    item_b.matches_played += 1
    return pool


def next_pair(pool: EloPool) -> tuple[int, int]:
    """Pick the next match-up: explore at random, otherwise exploit."""
    ids = sorted(pool.items)
    if len(ids) < 2:
        raise TooFewItems("need at least two items to form a pair")
    if pool._rng.random() < EXPLORE_PROBABILITY:
        a, b = pool._rng.sample(ids, 2)
        return a, b
    best = None
    best_key = None
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            ia, ib = pool.items[a], pool.items[b]
            key = (
                ia.matches_played + ib.matches_played,
                abs(ia.rating - ib.rating),
                a,
                b,
            )
            if best_key is None or key < best_key:
                best_key, best = key, (a, b)
    return best


def standings(pool: EloPool) -> list[tuple[int, float, int]]:
    """(id, rating, matches_played) sorted by descending rating, then id."""
    return sorted(
        ((it.id, it.rating, it.matches_played) for it in pool.items.values()),
        key=lambda row: (-row[1], row[0]),
    )


# -- plain-text persistence ----------------------------------------------------

def dump_pool(pool: EloPool) -> str:
    """One header line (K, c, seed) then one tab-separated line per item."""
    lines = [f"{_HEADER_TAG}\tK={pool.k!r}\tc={pool.c!r}\tseed={pool.seed}"]
    for item_id in sorted(pool.items):
        it = pool.items[item_id]
        if "\t" in it.label or "\n" in it.label:
            raise ValueError(f"label {it.label!r} may not contain tabs or newlines")
        lines.append(f"{it.id}\t{it.label}\t{it.rating!r}\t{it.matches_played}")
    return "\n".join(lines) + "\n"


def load_pool(text: str) -> EloPool:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(_HEADER_TAG):
        raise ValueError(f"not a pool file: expected {_HEADER_TAG} header")
    params = {"K": DEFAULT_K, "c": DEFAULT_C, "seed": 0}
    for part in lines[0].split("\t")[1:]:
        name, _, value = part.partition("=")
        if name not in params:
            raise ValueError(f"unknown pool header field {name!r}")
        params[name] = int(value) if name == "seed" else float(value)
    items: dict[int, EloItem] = {}
    for ln in lines[1:]:
        fields = ln.split("\t")
        if len(fields) != 4:
            raise ValueError(f"bad pool line: {ln!r}")
        item_id = int(fields[0])
        items[item_id] = EloItem(
            id=item_id,
            label=fields[1],
            rating=float(fields[2]),
            matches_played=int(fields[3]),
        )
    return EloPool(items=items, k=params["K"], c=params["c"], seed=int(params["seed"]))
