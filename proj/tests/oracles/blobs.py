"""Dataset generator shared (bit for bit) with tests/support/blobs.hpp.

Only additions and multiplications by constants are used, so Python floats and C++
doubles produce identical points.
"""

MASK = (1 << 64) - 1


class SplitMix:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * (1.0 / 9007199254740992.0)

    def normal(self):
        # Irwin-Hall approximation
        s = 0.0
        for _ in range(12):
            s += self.uniform()
        return s - 6.0


DIMS = [2, 8, 256]


def dataset_params(i):
    return {
        "index": i,
        "seed": 1000 + i,
        "blobs": 2 + (i // 3) % 3,
        "n": 30 + (i * 37) % 171,
        "dim": DIMS[i % 3],
        "spread": 0.5 + 0.25 * (i % 2),
    }


def make_blobs(p):
    rng = SplitMix(p["seed"])
    centers = [[-10.0 + 20.0 * rng.uniform() for _ in range(p["dim"])] for _ in range(p["blobs"])]
    points = []
    for j in range(p["n"]):
        c = centers[j % p["blobs"]]
        points.append([c[d] + p["spread"] * rng.normal() for d in range(p["dim"])])
    return points
