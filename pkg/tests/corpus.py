"""Seeded instance streams shared by the test modules."""
import random
from functools import lru_cache

from fidl_lab.generators import module_stream, random_frame

MAIN_SEED = 20260
SMALL_SEED = 417
FRAME_SEED = 93


@lru_cache(maxsize=None)
def main_modules():
    """200 mixed-strategy modules with |A| <= 8, |B| <= 6."""
    return tuple(module_stream(MAIN_SEED, 200, "mixed", 8, 6))


@lru_cache(maxsize=None)
def small_modules():
    """Modules with |A| <= 6, |B| <= 4, small enough for the slow checks."""
    return tuple(module_stream(SMALL_SEED, 120, "mixed", 6, 4))


@lru_cache(maxsize=None)
def frames(count=100, max_x=5, max_y=4):
    rng = random.Random(FRAME_SEED)
    return tuple(random_frame(rng, max_x, max_y) for _ in range(count))
