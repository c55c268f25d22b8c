from prefixdomain.dyadic import format_bits


def forged_counting_trace(n_targets=2176, fire_clock=0):
    """A hand-written trace in which every target of a c=1 fire at window
    [7, 14] gets a 14-bit description.  The engine can never produce it."""
    targets = [format(i, "015b") for i in range(n_targets)]
    lines = [
        "# prefixdomain-trace 1",
        "# depth 14",
        "# cs 1",
        "# step-limit 100000",
        "# halt-on-fire 0",
        "# universe 1/3 4",
        f"{fire_clock} FIRE 1 7 14 {n_targets}",
        f"{fire_clock} SNAP 1 14 1 3",
    ]
    for i, x in enumerate(targets):
        lines.append(f"{i + 1} {format_bits('0' + format(i, '013b'))} {x}")
    lines += [f"Q 1 {x} 1 13" for x in targets]
    lines.append(f"END exhausted {n_targets} 0000000000000000")
    return lines
