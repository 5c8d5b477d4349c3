"""Per-trial seed derivation.

    trial_seed(master, i) = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64)

splitmix64 is the output mixing function of the SplitMix generator.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, trial: int) -> int:
    return splitmix64((master + (trial + 1) * GOLDEN_GAMMA) & MASK64)


def trial_seeds(master: int, trials: int) -> list[int]:
    return [trial_seed(master, i) for i in range(trials)]
