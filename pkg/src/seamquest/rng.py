"""Named deterministic random substreams.

Every consumer of randomness draws from its own stream, keyed by a
string name under the scenario seed. Streams are mutually independent
in practice (seeded from SHA-256 of "seed/name") and, crucially, stable:
adding or removing one consumer never shifts the draws seen by another.
"""

from __future__ import annotations

import hashlib
import random


def substream_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}/{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, name: str) -> random.Random:
    return random.Random(substream_seed(seed, name))


class StreamBank:
    """Lazily-created named substreams under one master seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: dict[str, random.Random] = {}

    def get(self, name: str) -> random.Random:
        rng = self._streams.get(name)
        if rng is None:
            rng = substream(self.seed, name)
            self._streams[name] = rng
        return rng
