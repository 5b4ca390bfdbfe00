"""Solver configuration loaded from environment."""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv(override=True)

PROJECT_ROOT = Path(__file__).parent.parent.parent

# Residue enumeration budget for the two-stage engine (B^|x| must not exceed it)
DEFAULT_BUDGET = int(os.getenv("BLOCKIP_BUDGET", "200000"))

# 0 means "use available parallelism"
DEFAULT_THREADS = int(os.getenv("BLOCKIP_THREADS", "0")) or (os.cpu_count() or 1)

FACET_CAP = int(os.getenv("BLOCKIP_FACET_CAP", "16"))
DEFAULT_XI = int(os.getenv("BLOCKIP_XI", "4"))
MIP_NODE_LIMIT = int(os.getenv("BLOCKIP_MIP_NODE_LIMIT", "20000"))
GRAVER_BUDGET = int(os.getenv("BLOCKIP_GRAVER_BUDGET", "200000"))

LOG_LEVEL = os.getenv("BLOCKIP_LOG_LEVEL", "WARNING")

# Largest number of states a brute-force oracle may visit
ORACLE_LIMIT = int(os.getenv("BLOCKIP_ORACLE_LIMIT", "2000000"))
