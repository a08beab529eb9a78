"""
Runtime configuration read from environment variables.
"""

import os

# Size guards
UNIVERSE_CAP = int(os.getenv("PARADEDUCTION_UNIVERSE_CAP", "200000"))
SUBSET_CAP = int(os.getenv("PARADEDUCTION_SUBSET_CAP", "20"))
THEORY_GUARD = int(os.getenv("PARADEDUCTION_THEORY_GUARD", "16"))

# Schematic-mode search defaults
NODE_BUDGET = int(os.getenv("PARADEDUCTION_NODE_BUDGET", "5000"))
SEARCH_DEPTH = int(os.getenv("PARADEDUCTION_SEARCH_DEPTH", "1"))

# Threads used for independent subset branches of paradeducible
WORKERS = int(os.getenv("PARADEDUCTION_WORKERS", "1"))

LOG_LEVEL = os.getenv("PARADEDUCTION_LOG_LEVEL", "WARNING")

# Truth-table backend: atoms per entailment check
TRUTH_TABLE_ATOMS = int(os.getenv("PARADEDUCTION_TRUTH_TABLE_ATOMS", "20"))

# Entries kept per closure cache and consistency memo; oldest evicted first
CACHE_SIZE = int(os.getenv("PARADEDUCTION_CACHE_SIZE", "65536"))
