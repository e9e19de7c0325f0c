"""Smoke test for the vlgscan Python module.

Build and install first, for example:
    pip install maturin && maturin develop -m crates/python/Cargo.toml --release
"""

import os
import random
import tempfile

import vlgscan


def main():
    idx = vlgscan.Index.build(b"abracadabra")
    assert len(idx) == 11
    assert idx.occurrences(b"abra") == [0, 7]
    lo, hi = idx.find(b"a")
    assert hi - lo == 5

    p = vlgscan.parse_pattern("ab[2,5]ra")
    assert p.k == 2 and p.gaps == [(2, 5)]
    assert vlgscan.parse_pattern("ab[0,3]ra", gap_mode="end") == p

    for strategy in vlgscan.STRATEGIES:
        r = idx.search(p, strategy=strategy, block_size=4)
        assert r.endpoints == [2, 9], (strategy, r.endpoints)

    r = idx.search(vlgscan.parse_pattern("a[1,4]a[1,4]a"), tuples=True)
    assert r.tuples == [[0, 3, 5], [0, 3, 7], [3, 5, 7], [3, 7, 10], [5, 7, 10]]
    assert r.tuples == vlgscan.oracle_search(b"abracadabra", vlgscan.parse_pattern("a[1,4]a[1,4]a")).tuples

    rng = random.Random(5)
    text = bytes(rng.choice(b"acgt") for _ in range(20000))
    big = vlgscan.Index.build(text)
    for pat in vlgscan.generate_patterns(big, k=3, m=2, gap=(5, 40), count=10, seed=1):
        truth = vlgscan.oracle_search(text, pat).endpoints
        for strategy in vlgscan.STRATEGIES:
            assert big.search(pat, strategy=strategy).endpoints == truth, (str(pat), strategy)

    with tempfile.TemporaryDirectory() as d:
        for width in (5, 8):
            path = os.path.join(d, f"t{width}.idx")
            big.save(path, width=width)
            again = vlgscan.Index.load(path)
            assert again.suffix_array() == big.suffix_array()

    try:
        vlgscan.parse_pattern("ab[5,2]ra")
    except ValueError as e:
        assert "offset" in str(e)
    else:
        raise AssertionError("bad gap accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
