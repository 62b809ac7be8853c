"""Seeded stream of sampler passes, optionally spread over worker processes.

Passes are grouped in fixed-size blocks. Block ``b`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``, and results are
always consumed in block order. The sequence of pass outcomes therefore
depends only on the seed, never on the worker count or on scheduling.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bounds import GFactorTable, build_g_table
from .instance import Instance
from .sampler import run_pass

BLOCK_SIZE = 64

_worker_ctx = None


def resolve_seed(seed) -> int:
    """Integer seed; ``None`` draws fresh entropy so it can still be reported."""
    if seed is None:
        return int(np.random.SeedSequence().entropy)
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.entropy)
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return seed


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def run_block(inst: Instance, table: GFactorTable, col_rows, seed: int, block: int, size: int = BLOCK_SIZE):
    rng = block_generator(seed, block)
    return [run_pass(inst, table, rng, col_rows) for _ in range(size)]


def _init_worker(adj, a_max):
    global _worker_ctx
    inst = Instance(adj)
    _worker_ctx = (inst, build_g_table(a_max), inst.column_rows())


def _worker_block(seed, block, size):
    inst, table, col_rows = _worker_ctx
    return run_block(inst, table, col_rows, seed, block, size)


class PassStream:
    """Iterator over :class:`PassResult` in canonical order.

    With ``workers > 1`` blocks are computed ahead in a process pool; blocks
    computed past the point where the consumer stops are discarded.
    """

    def __init__(self, inst: Instance, table: GFactorTable, seed=None, workers: int = 1, block_size: int = BLOCK_SIZE):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.inst = inst
        self.table = table
        self.seed = resolve_seed(seed)
        self.workers = workers
        self.block_size = block_size
        self._col_rows = inst.column_rows()
        self._pool = None

    def __enter__(self):
        if self.workers > 1:
            self._pool = ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(np.asarray(self.inst.adj), self.table.a_max),
            )
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None

    def blocks(self):
        block = 0
        if self._pool is None:
            while True:
                yield run_block(self.inst, self.table, self._col_rows, self.seed, block, self.block_size)
                block += 1
        pending = deque()
        while True:
            while len(pending) < 2 * self.workers:
                pending.append(self._pool.submit(_worker_block, self.seed, block, self.block_size))
                block += 1
            yield pending.popleft().result()

    def __iter__(self):
        for results in self.blocks():
            yield from results
