"""Pairwise-comparison ranking with the modified Glicko engine.

Simulates a survey from a hidden Bradley-Terry preference over 20 items,
replays the log through the per-match Glicko updates (no time decay), then
applies the RD confidence filter and checks how well the recovered order
matches the hidden one. Ends with the retained-count line in the
"N (x.x%)" style the `aesthia rank` command prints.
"""

from aesthia import filter_by_rd, replay
from aesthia.ranking import PROMPTS, Rating, glicko_update
from aesthia.simulate import simulate_events
from aesthia.stats import spearman


def main():
    # one match moves a fresh pair a long way and shrinks RD below 291
    a, b = glicko_update(Rating(), Rating(), 1.0)
    print(f"fresh pair, one win : {a.rating:7.2f}/{a.rd:6.2f} vs {b.rating:7.2f}/{b.rd:6.2f}")
    t, _ = glicko_update(Rating(), Rating(), 0.5)
    print(f"fresh pair, one tie : ratings stay {t.rating:.0f}, rd {t.rd:.2f}")
    print()

    events, strengths = simulate_events(2000, 20, seed=42)
    table = replay(events)
    filtered, fraction = filter_by_rd(table, 290.0)
    print(f"events 2000, items 20, rd filter < 290 -> {len(filtered)} ({fraction * 100:.1f}%)")

    for prompt in PROMPTS:
        rows = filtered.ranked(prompt)
        rho, p = spearman(
            [strengths[item] for _, item, _ in rows],
            [rating.rating for _, _, rating in rows],
        )
        print(f"{prompt:>11}: spearman(truth, glicko) = {rho:.3f} (p = {p:.2g})")

    print("\ntop five, complexity prompt:")
    for _, item, rating in filtered.ranked("complexity")[:5]:
        print(
            f"   {item}: rating {rating.rating:7.1f}, rd {rating.rd:5.1f}, "
            f"matches {rating.matches}, truth {strengths[item]:.2f}"
        )


if __name__ == "__main__":
    main()
