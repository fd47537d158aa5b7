import numpy as np


def make_stream(seed, stream_id=0):
    """Independent generator for (seed, stream_id), one per pulse batch."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream_id])))


def generate_seed():
    # 63 bits keeps the seed a plain JSON integer everywhere
    return int(np.random.SeedSequence().entropy % (2**63))
