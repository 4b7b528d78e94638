"""Deterministic derivation of independent random streams from a master seed."""

import hashlib


def derive_seed(master, *parts):
    """Hash a master seed plus stream labels into a 63-bit child seed.

    Independent labels give independent streams, so adding a new stream
    never perturbs an existing one.
    """
    key = "/".join([str(int(master))] + [str(p) for p in parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
