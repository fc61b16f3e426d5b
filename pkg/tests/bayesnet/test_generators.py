import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import numpy as np
import pytest
from src.bayesnet.base import validate
from src.bayesnet.generators import random_bayesnet, random_bayesnets
from src.bayesnet.graph import d_separated
from src.bayesnet.inference import conditional_mutual_information, joint_table


class TestRandomNetworks:
    def test_valid_and_normalised(self):
        for net in random_bayesnets(count=20, max_nodes=5, seed=3):
            assert validate(net).is_valid
            assert joint_table(net).sum() == pytest.approx(1.0)
            assert 2 <= len(net.variables) <= 5

    def test_seeded_stream_is_deterministic(self):
        first = [n.cpts for n in random_bayesnets(count=5, seed=11)]
        second = [n.cpts for n in random_bayesnets(count=5, seed=11)]
        assert first == second

    def test_edges_point_forward(self):
        net = random_bayesnet(np.random.default_rng(0), 6, edge_probability=1.0)
        assert all(int(a[1:]) < int(b[1:]) for a, b in net.dag.edges)
        assert len(net.dag.edges) == 15

    def test_separation_implies_independence(self):
        for net in random_bayesnets(count=30, max_nodes=5, seed=0):
            ids = net.ids
            x, y = ids[0], ids[-1]
            z = list(ids[1:-1])
            if d_separated(net, [x], [y], z):
                assert conditional_mutual_information(net, [x], [y], z) < 1e-9
