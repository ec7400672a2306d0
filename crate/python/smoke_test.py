"""Smoke test for the `cpw` extension module.

Build the module and put it on the path first, e.g.

    cargo build --release -p cpw-py --features extension-module
    cp target/release/libcpw.so python/cpw.so
    python3 python/smoke_test.py
"""

import cpw


def path(n):
    return cpw.Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return cpw.Graph(n, [(i, (i + 1) % n) for i in range(n)])


def main():
    c4 = cycle(4)
    assert (c4.n, c4.m) == (4, 4)
    assert c4.is_connected()
    assert cpw.Graph.parse(c4.to_text()) == c4

    assert cpw.exact_pathwidth(c4)[0] == 2
    k, bags = cpw.compute_cpw(c4)
    assert k == 2
    assert cpw.validate(c4, bags) == 2
    assert cpw.is_connected_decomposition(c4, bags)

    assert cpw.decide_cpw(c4, 1) is None
    assert cpw.decide_cpw(c4, 2) is not None
    assert cpw.decide_cpw(path(4), 1, [[0, 1], [1, 2], [2, 3]]) is not None
    assert cpw.oracle_cpw(c4, 2) and not cpw.oracle_cpw(c4, 1)
    assert cpw.oracle_pw(path(5)) == 1

    values, tips = cpw.tseq([4, 6, 5, 7, 3, 5, 7, 9, 4, 6, 3, 1, 4, 7, 8, 5, 6, 3, 4, 4, 5, 6])
    assert values == [4, 7, 3, 9, 1, 8, 3, 6], values
    assert len(tips) == len(values)
    assert cpw.dominates_int([1, 4, 2], [2, 5, 3])
    assert not cpw.dominates_int([3], [2])

    assert cpw.mcns(path(5)) == 2
    assert cpw.mces(c4) == 2
    assert cpw.compute_cpw(c4.apex())[0] - 1 == 2
    assert cpw.compute_cpw(c4.contract(0, 1))[0] <= 2

    for bad in (lambda: cpw.compute_cpw(cpw.Graph(4, [(0, 1), (2, 3)])),
                lambda: cpw.Graph(2, [(0, 5)]),
                lambda: cpw.validate(path(3), [[0, 1]]),
                lambda: cpw.tseq([])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test ok")


if __name__ == "__main__":
    main()
