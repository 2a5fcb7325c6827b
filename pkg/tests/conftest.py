import numpy as np
import pytest

from signedbalance.graph import SignedNetwork, parse_edge_list


def random_signed_net(n, density, neg_frac, seed) -> SignedNetwork:
    """Erdos-Renyi positions with i.i.d. negative signs; shared test helper."""
    rng = np.random.default_rng(seed)
    eu, ev, sg = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                eu.append(i)
                ev.append(j)
                sg.append(-1 if rng.random() < neg_frac else 1)
    return SignedNetwork(
        tuple(str(i) for i in range(n)),
        np.array(eu, dtype=np.int64),
        np.array(ev, dtype=np.int64),
        np.array(sg, dtype=np.int64),
    )


@pytest.fixture
def triangle_one_negative() -> SignedNetwork:
    return parse_edge_list("a b +\nb c +\na c -")


@pytest.fixture
def triangle_all_positive() -> SignedNetwork:
    return parse_edge_list("a b +\nb c +\na c +")
