"""
Seeded random networks for property sweeps.
"""

from typing import Iterator, List

import numpy as np

from src.bayesnet.base import BayesNet, Cpt, Variable
from src.utils.constants import VerificationDefaults


BINARY = ("0", "1")


def random_bayesnet(rng: np.random.Generator, n_nodes: int, edge_probability: float = 0.5) -> BayesNet:
    """
    Random binary network over nodes X0..X{n-1}.

    Edges only point from lower to higher index, so the result is acyclic.
    Cpt entries are drawn away from 0 and 1 so every configuration has
    positive probability.
    """
    ids = [f"X{i}" for i in range(n_nodes)]
    variables = [Variable(id=i, states=BINARY, ordered=True) for i in ids]
    cpts: List[Cpt] = []
    for j, child in enumerate(ids):
        parents = tuple(ids[i] for i in range(j) if rng.random() < edge_probability)
        rows = []
        for _ in range(2 ** len(parents)):
            p = float(rng.uniform(0.05, 0.95))
            rows.append((p, 1.0 - p))
        cpts.append(Cpt(child=child, parents=parents, rows=tuple(rows)))
    return BayesNet.from_cpts(variables, cpts, name=f"random-{n_nodes}")


def random_bayesnets(
    count: int = VerificationDefaults.RANDOM_NETWORKS,
    max_nodes: int = VerificationDefaults.MAX_RANDOM_NODES,
    seed: int = VerificationDefaults.SEED,
) -> Iterator[BayesNet]:
    """Deterministic stream of random networks with 2..max_nodes nodes."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n_nodes = int(rng.integers(2, max_nodes + 1))
        yield random_bayesnet(rng, n_nodes)
