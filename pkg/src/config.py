"""
Configuration from environment. No hardcoded experiment parameters here;
those come from CLI flags or sweep files. Copy .env.example to .env at project root.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Load .env from project root (parent of src)
load_dotenv(Path(__file__).resolve().parent.parent / ".env")

# Worker cap for Monte Carlo replicates; 0 = machine parallelism
THREADS = int(os.environ.get("ALLCAST_THREADS", "0"))

LOG_LEVEL = os.environ.get("ALLCAST_LOG_LEVEL", "INFO").upper()

# Replicates handed to one worker per task
CHUNKSIZE = int(os.environ.get("ALLCAST_CHUNKSIZE", "16"))


def resolve_threads(requested=None):
    """Worker count: explicit request, else ALLCAST_THREADS, else cpu count."""
    if requested:
        return max(1, int(requested))
    if THREADS > 0:
        return THREADS
    return os.cpu_count() or 1
