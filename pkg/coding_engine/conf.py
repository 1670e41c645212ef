"""
Access to PBEC_SETTINGS with defaults for use outside a configured Django process
"""
from django.conf import settings

DEFAULTS = {
    'ORACLE_MAX_ENUMERATION': 10**8,
    'ORACLE_MAX_PAIRS': 10**10,
    'ORACLE_MAX_SEARCH_NODES': 10**7,
    'ORACLE_WORKERS': 4,
    'DISTANCE_BUDGET': 2**24,
    'PACKED_DISTANCE_BUDGET': 2**30,
    'GV_CANDIDATE_POOL': 2**20,
    'GV_STALL_LIMIT': 4096,
    'GV_SPAN_BYTES': 2**28,
    'CONSTRUCTION_RETRIES': 8,
    'DEFAULT_SEED': 0,
    'SWEEP_WORKERS': 4,
    'RECORD_RUNS': True,
}


def pbec_setting(name):
    """Look up a toolkit setting, falling back to the compiled-in default"""
    if name not in DEFAULTS:
        raise KeyError(f"Unknown PBEC setting: {name}")
    if settings.configured:
        return getattr(settings, 'PBEC_SETTINGS', {}).get(name, DEFAULTS[name])
    return DEFAULTS[name]
