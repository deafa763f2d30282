"""Grow a random tight graph by moves, strip it back down, then place it."""

import random

from gridrig import ANTI, L1, SYM, extract_sequence, random_sequence, realize, replay, rigidity_report
from gridrig.quotient import find_switching_isomorphism

rng = random.Random(7)

for mode in (SYM, ANTI):
    seq = random_sequence(rng, 6, mode)
    g = replay(seq, mode)
    print(mode, "built from", seq.base_kind, "via", [m.kind for m in seq.moves])

    # greedy reduction may take a different route
    back = extract_sequence(g, mode)
    print("  extracted:", [m.kind for m in back.moves])
    print("  replay matches:", find_switching_isomorphism(replay(back, mode), g) is not None)

    r = realize(g, mode, L1)
    rep = rigidity_report(r.framework)
    print("  halvings per step:", list(r.shrink_steps))
    print("  orbit ranks:", rep.ranks, "orbits:", len(g.orbits))
