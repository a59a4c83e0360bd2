"""Synthetic survey logs from a Bradley-Terry preference.

Item strengths are drawn once from the seed; each comparison picks a
uniform random pair and prompt, and the left item wins with probability
s_left / (s_left + s_right). The generator doubles as the oracle for
rank-recovery checks: the ranking engine fed 2,000 such comparisons over
20 items should reorder them close to the true strength order.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .ranking import PROMPTS, ComparisonEvent


def item_name(index: int, items: int) -> str:
    width = len(str(items - 1))
    return f"item_{index:0{width}d}"


def simulate_events(
    n_events: int,
    n_items: int,
    seed: int,
    tie_prob: float = 0.0,
    dataset: str = "synthetic",
) -> tuple[list[ComparisonEvent], dict[str, float]]:
    """Returns (events, true strengths by item id); deterministic per seed."""
    if n_events < 1:
        raise ParameterError(f"need at least 1 event, got {n_events}")
    if n_items < 2:
        raise ParameterError(f"need at least 2 items, got {n_items}")
    if not 0.0 <= tie_prob < 1.0:
        raise ParameterError(f"tie_prob must lie in [0, 1), got {tie_prob}")
    rng = np.random.default_rng(seed)
    strengths = np.exp(rng.normal(0.0, 1.0, size=n_items))
    names = [item_name(i, n_items) for i in range(n_items)]
    events = []
    for k in range(n_events):
        i, j = rng.choice(n_items, size=2, replace=False)
        prompt = PROMPTS[int(rng.integers(2))]
        if tie_prob > 0.0 and rng.random() < tie_prob:
            outcome = "tie"
        else:
            p_left = strengths[i] / (strengths[i] + strengths[j])
            outcome = "left" if rng.random() < p_left else "right"
        events.append(
            ComparisonEvent(
                comparison_id=f"sim-{seed}-{k:06d}",
                session_id=f"sim-{seed}",
                dataset=dataset,
                left=names[i],
                right=names[j],
                prompt=prompt,
                outcome=outcome,
                duration_ms=int(rng.integers(500, 15000)),
                timestamp=f"1970-01-01T00:00:{k % 60:02d}.000+00:00",
            )
        )
    return events, dict(zip(names, strengths.tolist()))
