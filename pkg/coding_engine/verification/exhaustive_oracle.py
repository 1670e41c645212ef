"""
Ground-truth checks for tiny PBE channels.

A code corrects every PBE of a channel iff no two distinct codewords differ
by an element of Delta(E) = {X - Y : X, Y PBEs}. For linear codes this means
C meets Delta(E) only in 0, i.e. distinct PBEs have distinct syndromes.
"""
from __future__ import annotations

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import networkx as nx
import numpy as np

from coding_engine.algebra.finite_field import FqMatrix, all_vectors, decode_vectors, encode_vectors
from coding_engine.algebra.linear_codes import LinearCode
from coding_engine.bounds.entropy import log_q
from coding_engine.channels.error_model import PbeChannel, pbe_blocks, pbe_size
from coding_engine.conf import pbec_setting
from coding_engine.exceptions import BudgetExceeded, ParameterError

logger = logging.getLogger(__name__)

PAIR_CHUNK = 2**22
UNBOUNDED = 2**62


@dataclass(frozen=True)
class OracleBudget:
    """Hard caps on elements visited, pairs compared and search nodes"""

    max_enumeration: int
    max_pairs: int
    max_search_nodes: int

    def __post_init__(self):
        if min(self.max_enumeration, self.max_pairs, self.max_search_nodes) <= 0:
            raise ParameterError("Oracle budgets must be positive")

    @classmethod
    def from_settings(cls):
        return cls(
            pbec_setting('ORACLE_MAX_ENUMERATION'),
            pbec_setting('ORACLE_MAX_PAIRS'),
            pbec_setting('ORACLE_MAX_SEARCH_NODES'),
        )

    @classmethod
    def capped(cls, cap: int):
        """The same cap for every counter"""
        return cls(cap, cap, cap)

    @classmethod
    def unbounded(cls):
        return cls.capped(UNBOUNDED)


def _flat_pbes(ch: PbeChannel, budget: OracleBudget) -> np.ndarray:
    """Every PBE flattened column-major, one per row"""
    total = pbe_size(ch)
    if total > budget.max_enumeration:
        raise BudgetExceeded(f"PBEs of {ch}", total, budget.max_enumeration)
    blocks = [block.reshape(block.shape[0], -1) for block in pbe_blocks(ch, budget.max_enumeration)]
    return np.concatenate(blocks, axis=0)


def is_pbecc_linear(C: LinearCode, ch: PbeChannel, budget: OracleBudget | None = None) -> bool:
    """
    True iff the linear code (length n*m, column-major arrays) corrects
    every PBE: ordered PBE pairs are scanned for equal syndromes.
    """
    budget = budget or OracleBudget.from_settings()
    if C.spec != ch.spec or C.n != ch.n * ch.m:
        raise ParameterError(f"{C} does not have length n*m = {ch.n * ch.m} over {ch.spec}")
    if C.k == 0:
        return True

    total = pbe_size(ch)
    if total**2 > budget.max_pairs:
        raise BudgetExceeded(f"PBE pairs of {ch}", total**2, budget.max_pairs)
    syndromes = C.syndromes(_flat_pbes(ch, budget))
    width = max(1, syndromes.shape[1])
    step = max(1, PAIR_CHUNK // (total * width))
    collision = threading.Event()

    def scan(start):
        if collision.is_set():
            return
        left = syndromes[start:start + step]
        equal = np.all(left[:, None, :] == syndromes[None, :, :], axis=2)
        equal[np.arange(left.shape[0]), np.arange(start, start + left.shape[0])] = False
        if equal.any():
            collision.set()

    with ThreadPoolExecutor(max_workers=pbec_setting('ORACLE_WORKERS')) as executor:
        list(executor.map(scan, range(0, total, step)))

    verdict = not collision.is_set()
    logger.info(f"Oracle: {C} {'corrects' if verdict else 'does not correct'} {ch}")
    return verdict


def delta_pbe_codes(ch: PbeChannel, budget: OracleBudget | None = None) -> np.ndarray:
    """Sorted canonical integers of Delta(E), from every ordered PBE pair"""
    budget = budget or OracleBudget.from_settings()
    total = pbe_size(ch)
    if total**2 > budget.max_pairs:
        raise BudgetExceeded(f"PBE pairs of {ch}", total**2, budget.max_pairs)
    spec, length = ch.spec, ch.n * ch.m
    pbes = _flat_pbes(ch, budget)
    step = max(1, PAIR_CHUNK // (total * length))
    codes = np.zeros(0, dtype=np.int64)
    for start in range(0, total, step):
        diffs = spec.sub(pbes[start:start + step, None, :], pbes[None, :, :]).reshape(-1, length)
        codes = np.union1d(codes, encode_vectors(spec.q, diffs))
    return codes


def delta_pbe_size(ch: PbeChannel, budget: OracleBudget | None = None) -> int:
    """Exact |Delta(E)|"""
    return int(delta_pbe_codes(ch, budget).size)


def delta_pbe_bound(ch: PbeChannel) -> int:
    """
    Counting bound on |Delta(E)|: sum over x bad columns of X, y of Y and z
    shared bad positions of the position multinomial times
    |E22|^z |E12|^(x+y-2z) |E11|^(m-x-y+z).
    """
    e11 = ch.E1.minus(ch.E1).size()
    e12 = ch.E1.minus(ch.E2).size()
    e22 = ch.E2.minus(ch.E2).size()
    m = ch.m
    total = 0
    for x in range(ch.w + 1):
        for y in range(ch.w + 1):
            for z in range(max(0, x + y - m), min(x, y) + 1):
                positions = math.factorial(m) // (
                    math.factorial(z) * math.factorial(x - z) * math.factorial(y - z)
                    * math.factorial(m - x - y + z)
                )
                total += positions * e22**z * e12 ** (x + y - 2 * z) * e11 ** (m - x - y + z)
    return total


def _as_flat_rows(codewords, ch: PbeChannel) -> np.ndarray:
    rows = []
    for word in codewords:
        if isinstance(word, FqMatrix):
            if word.shape != (ch.n, ch.m):
                raise ParameterError(f"Codeword shape {word.shape} is not {ch.n}x{ch.m}")
            rows.append(word.flatten().entries)
        else:
            rows.append(np.asarray(getattr(word, 'entries', word), dtype=np.int64).reshape(-1))
    if not rows:
        return np.zeros((0, ch.n * ch.m), dtype=np.int64)
    flat = np.stack(rows)
    if flat.shape[1] != ch.n * ch.m:
        raise ParameterError(f"Codewords must have length n*m = {ch.n * ch.m}")
    return flat


def is_one_shot(codewords, ch: PbeChannel, budget: OracleBudget | None = None) -> bool:
    """Fan-outs X + E of distinct codewords are pairwise disjoint"""
    budget = budget or OracleBudget.from_settings()
    spec = ch.spec
    flat = _as_flat_rows(codewords, ch)
    codes = np.unique(encode_vectors(spec.q, flat))
    count = codes.size
    if count <= 1:
        return True
    cost = count**2 * pbe_size(ch)
    if cost > budget.max_pairs:
        raise BudgetExceeded(f"one-shot check of {count} codewords on {ch}", cost, budget.max_pairs)

    delta = delta_pbe_codes(ch, budget)
    words = decode_vectors(spec.q, ch.n * ch.m, codes)
    step = max(1, PAIR_CHUNK // (count * words.shape[1]))
    for start in range(0, count, step):
        left = words[start:start + step]
        diffs = spec.sub(left[:, None, :], words[None, :, :])
        hits = np.isin(encode_vectors(spec.q, diffs), delta)
        hits[np.arange(left.shape[0]), np.arange(start, start + left.shape[0])] = False
        if hits.any():
            return False
    return True


def confusability_graph(ch: PbeChannel, budget: OracleBudget | None = None) -> nx.Graph:
    """
    Graph on all n x m arrays (canonical integer labels); X and Y are joined
    when X - Y is a nonzero element of Delta(E).
    """
    budget = budget or OracleBudget.from_settings()
    spec, length = ch.spec, ch.n * ch.m
    vertices = spec.q**length
    if vertices > budget.max_enumeration:
        raise BudgetExceeded(f"arrays of {ch}", vertices, budget.max_enumeration)

    delta = delta_pbe_codes(ch, budget)
    delta = delta[delta != 0]
    if vertices * delta.size > budget.max_pairs:
        raise BudgetExceeded(f"confusability edges of {ch}", vertices * delta.size, budget.max_pairs)

    words = all_vectors(spec.q, length)
    labels = np.arange(vertices, dtype=np.int64)
    graph = nx.Graph()
    graph.add_nodes_from(range(vertices))
    for d in decode_vectors(spec.q, length, delta):
        targets = encode_vectors(spec.q, spec.add(words, d[None, :]))
        keep = labels < targets
        graph.add_edges_from(zip(labels[keep].tolist(), targets[keep].tolist()))
    logger.debug(f"Confusability graph: {graph.number_of_nodes()} arrays, {graph.number_of_edges()} edges")
    return graph


class _CodeSearch:
    """Branch and bound over bitsets of mutually compatible arrays, with colour bounds"""

    def __init__(self, compatible, max_nodes):
        self.compatible = compatible
        self.max_nodes = max_nodes
        self.nodes = 0
        self.best = []

    def colourise(self, candidates):
        order, colours = [], []
        uncoloured, colour = candidates, 0
        while uncoloured:
            colour += 1
            open_ = uncoloured
            while open_:
                v = (open_ & -open_).bit_length() - 1
                open_ &= ~self.compatible[v] & ~(1 << v)
                uncoloured &= ~(1 << v)
                order.append(v)
                colours.append(colour)
        return order, colours

    def expand(self, chosen, candidates):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded("maximum code search nodes", self.nodes, self.max_nodes)
        order, colours = self.colourise(candidates)
        for v, colour in zip(reversed(order), reversed(colours)):
            if len(chosen) + colour <= len(self.best):
                return
            chosen.append(v)
            remaining = candidates & self.compatible[v]
            if remaining:
                self.expand(chosen, remaining)
            elif len(chosen) > len(self.best):
                self.best = list(chosen)
            chosen.pop()
            candidates &= ~(1 << v)


def max_code_search(ch: PbeChannel, budget: OracleBudget | None = None) -> tuple[int, list[FqMatrix]]:
    """
    Largest code correcting every PBE of a tiny channel, by exact maximum
    independent set search on the confusability graph. The zero array is
    fixed in the code since translates of a code correct the same errors.
    """
    budget = budget or OracleBudget.from_settings()
    graph = confusability_graph(ch, budget)
    vertices = graph.number_of_nodes()

    # Vertices by descending compatibility degree, then label
    order = sorted(graph.nodes, key=lambda v: (graph.degree(v), v))
    position = {v: i for i, v in enumerate(order)}
    everything = (1 << vertices) - 1
    compatible = [0] * vertices
    for v in order:
        confused = sum(1 << position[u] for u in graph.neighbors(v))
        compatible[position[v]] = everything & ~confused & ~(1 << position[v])

    search = _CodeSearch(compatible, budget.max_search_nodes)
    greedy = nx.maximal_independent_set(graph, nodes=[0], seed=0)
    search.best = [position[v] for v in greedy]

    root = position[0]
    chosen = [root]
    if compatible[root]:
        search.expand(chosen, compatible[root])
    best = sorted(order[i] for i in search.best)

    q, n, m = ch.spec.q, ch.n, ch.m
    witness = [
        FqMatrix(ch.spec, row.reshape(m, n).T)
        for row in decode_vectors(q, n * m, np.array(best, dtype=np.int64))
    ]
    logger.info(f"Maximum code for {ch}: {len(best)} arrays after {search.nodes} search nodes")
    return len(best), witness


def pigeonhole_bound(ch: PbeChannel) -> int:
    """Disjoint fan-outs of size |E| fit at most floor(q^(nm) / |E|) times"""
    return ch.spec.q ** (ch.n * ch.m) // pbe_size(ch)


def one_shot_rate(size: int, q: int, n: int, m: int) -> float:
    """log_q(size) / (n m)"""
    if size < 1:
        raise ParameterError(f"Code size must be positive, got {size}")
    return log_q(q, size) / (n * m)
