"""
Bipartitions of a ring of n sites into groups A (+1) and B (-1)
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from src.errors import BadPartitionParams

PARTITION_KINDS = ('even_odd', 'half_half', 'contiguous', 'one_vs_rest', 'custom')


@dataclass(frozen=True)
class Partition:
    """
    Assignment of each site to group A (+1) or group B (-1)

    Sites are indexed 0..n-1. The even-odd partition follows the 1-based
    labelling of the chain: site i carries label i+1, and even labels form A.
    """
    labels: Tuple[int, ...]
    kind: str = 'custom'
    params: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if any(label not in (1, -1) for label in self.labels):
            raise BadPartitionParams(f"Labels must be +1 or -1, got {self.labels}")
        if 1 not in self.labels or -1 not in self.labels:
            raise BadPartitionParams("Both groups of a partition must be nonempty")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def signs(self) -> np.ndarray:
        """Diagonal of the matrix P"""
        return np.array(self.labels, dtype=float)

    @property
    def group_a(self) -> Tuple[int, ...]:
        return tuple(i for i, label in enumerate(self.labels) if label == 1)

    @property
    def name(self) -> str:
        if not self.params:
            return self.kind
        args = ','.join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({args})"

    def separates(self, i: int, j: int) -> bool:
        return self.labels[i] != self.labels[j]


def _check_index(name: str, value: int, low: int, high: int) -> int:
    if not isinstance(value, (int, np.integer)) or not low <= value <= high:
        raise BadPartitionParams(f"Partition parameter {name}={value} outside [{low}, {high}]")
    return int(value)


def make_partition(kind: str, n: int, **params: Any) -> Partition:
    """
    Build one of the named partitions of a ring of n sites

    Args:
        kind (str): 'even_odd', 'half_half' (offset), 'contiguous' (m),
            'one_vs_rest' (i) or 'custom' (labels)
        n (int): Even number of sites
        **params: Parameters of the kind

    Returns:
        Partition: The requested bipartition
    """
    if not isinstance(n, (int, np.integer)) or n < 2 or n % 2 != 0:
        raise BadPartitionParams(f"Partitions need an even number of sites >= 2, got {n}")
    half = n // 2

    if kind == 'even_odd':
        labels = [1 if (i + 1) % 2 == 0 else -1 for i in range(n)]
        used = {}
    elif kind == 'half_half':
        offset = _check_index('offset', params.get('offset', 0), 0, n - 1)
        in_a = {(offset + j) % n for j in range(half)}
        labels = [1 if i in in_a else -1 for i in range(n)]
        used = {'offset': offset}
    elif kind == 'contiguous':
        m = _check_index('m', params.get('m', 0), 0, half - 1)
        labels = [1 if i < half - m else -1 for i in range(n)]
        used = {'m': m}
    elif kind == 'one_vs_rest':
        site = _check_index('i', params.get('i', 0), 0, n - 1)
        labels = [1 if i == site else -1 for i in range(n)]
        used = {'i': site}
    elif kind == 'custom':
        raw: Sequence[int] = params.get('labels', ())
        if len(raw) != n:
            raise BadPartitionParams(f"Custom partition needs {n} labels, got {len(raw)}")
        labels = [int(label) for label in raw]
        used = {}
    else:
        raise BadPartitionParams(f"Unknown partition kind: {kind}. Expected one of {PARTITION_KINDS}")

    unexpected = set(params) - set(used) - ({'labels'} if kind == 'custom' else set())
    if unexpected:
        raise BadPartitionParams(f"Unexpected parameters for '{kind}' partition: {sorted(unexpected)}")
    return Partition(tuple(labels), kind=kind, params=used)


def partition_from_setting(setting: Any, n: int) -> Partition:
    """
    Build a partition from a config entry

    Args:
        setting: A kind name ('even_odd') or a mapping {'kind': ..., params...}
        n (int): Number of sites

    Returns:
        Partition: The requested bipartition
    """
    if isinstance(setting, str):
        return make_partition(setting, n)
    params = dict(setting)
    kind = params.pop('kind', None)
    return make_partition(kind, n, **params)
