"""Worker-count helper; QNET_THREADS caps parallelism of the batch helpers."""
from __future__ import annotations

import os


def worker_count() -> int:
    raw = os.environ.get("QNET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
