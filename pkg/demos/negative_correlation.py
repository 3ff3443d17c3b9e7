"""Lattice path matroids: bases, minors, duals and the pair-count inequality."""
from catalan_mixing import catalan_matroid, dual, make_lpm, minor_pair_counts, transversal_system
from catalan_mixing.matroid import MinorSpec, check_balanced, pair_verdicts

M = catalan_matroid(3)
print(M.num_bases, sorted(sorted(b) for b in M.bases()))

# the same family as the transversals of a set of intervals
print(transversal_system(M))

# dual = complements of bases
print(sorted(sorted(b) for b in dual(catalan_matroid(2)).bases()))

# |both| * |neither| <= |e only| * |f only| for every pair e < f
v = minor_pair_counts(M, None, 2, 4)
print(v.counts, v.slack)
print(min(v.slack for v in pair_verdicts(catalan_matroid(6))))

# inside a minor: contract 3, delete 8
N = catalan_matroid(5)
minor = MinorSpec({3}, {8})
print(min(v.slack for v in pair_verdicts(N, minor)))

# balance search: all small minors, then random ones
report = check_balanced(catalan_matroid(4), minor_budget=500, seed=3)
print(report.minors_checked, report.pairs_checked, report.balanced)

# a skew example, not a Catalan matroid
print(check_balanced(make_lpm("DUDUUDDU", "UUDUDUDD"), minor_budget=200).balanced)
