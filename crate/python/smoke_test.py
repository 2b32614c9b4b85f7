"""Smoke test for the nilbohr extension module."""

from fractions import Fraction

import nilbohr as nb


def main():
    s = nb.bohr_window([nb.GpExpr.parse("lin:0.25")], ["0.1"], 0, 12)
    assert s.members == [0, 4, 8, 12], s
    assert 4 in s and 5 not in s and len(s) == 4
    assert nb.WindowSet.from_json(s.to_json()) == s

    assert nb.vandermonde_lambda(2) == ([-2, 1], 2, 6)
    assert nb.vandermonde_lambda(3) == ([3, -3, 1], 6, 42)

    a = nb.NilCoords(2, [1, 2, 0])
    b = nb.NilCoords(2, [3, 4, 0])
    assert (a @ b).entries == [4, 6, 4]
    assert a.inv().entries == [-1, -2, 2]
    x = nb.NilCoords(3, [Fraction(7, 10), "1/3", -2, "5/4", 0.125, Fraction(-9, 7)])
    assert x.pow(5) == x.pow(2) @ x.pow(3)
    z, h = x.reduce()
    assert all(abs(e) <= Fraction(1, 2) for e in z.entries)
    assert x @ nb.NilCoords.lattice(3, [-v for v in h]) == z

    assert nb.sg_d([1, 10, 100], 1) == [1, 10, 11, 100, 110, 111]
    assert len(nb.fs([3 ** k for k in range(1, 6)])) == 31
    p = [3 ** k for k in range(1, 9)]
    assert nb.is_lacunary(p)
    assert all(nb.find_star_pattern(block) is None for block in nb.ramsey_partition(p))
    assert nb.find_star_pattern(nb.sg_d(p, 2)) is not None

    assert nb.torus_orbit(2, Fraction(1, 3), 3) == [0, 0]
    ret = nb.torus_return_set(1, "1/4", "1/10", 0, 12)
    assert ret.members == [0, 4, 8, 12]
    heis = nb.nil_return_set(["1/7", "2/9"], "1/10", 0, 80)
    assert 0 in heis
    z1 = nb.z1d_sequence([Fraction(1, 3)], -1, 2)
    assert z1 == [(-1, Fraction(-1, 3)), (0, 0), (1, Fraction(1, 3)), (2, Fraction(-1, 3))]
    mr, witnesses = nb.multi_return_set(2, 0.137, 0.05, 2, 0, 100)
    assert [n for n, _ in witnesses] == mr.members

    diff = nb.common_diff_set(nb.WindowSet(0, 5, [0, 2, 3]))
    assert diff.members == [-3, -2, -1, 0, 1, 2, 3]

    reports = nb.verify("vandermonde")
    assert reports[0]["passed"], reports
    print("nilbohr smoke test ok")


if __name__ == "__main__":
    main()
