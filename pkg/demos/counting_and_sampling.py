"""Counting lattice paths between two bounds and drawing them uniformly."""
from collections import Counter

from catalan_mixing import StepConstraints, catalan, count_between, narayana
from catalan_mixing.counting import sample_many
from catalan_mixing.paths import enumerate_between, narayana_statistic, sawtooth, staircase

# Dyck paths of length 2n sit between the sawtooth (UD)^n and the staircase U^n D^n
for n in range(1, 9):
    print(n, count_between(sawtooth(n), staircase(n)), catalan(n))

# the counts are exact Python ints, so nothing stops us going large
print(count_between(sawtooth(60), staircase(60)))

# forcing steps: up at 2, down at 5
c = StepConstraints({2}, {5})
print([str(p) for p in enumerate_between(sawtooth(3), staircase(3)) if c.admits(p.steps)])
print(count_between(sawtooth(3), staircase(3), c))

# Narayana statistic = number of down-steps at even positions
n = 6
tally = Counter(narayana_statistic(p) for p in enumerate_between(sawtooth(n), staircase(n)))
print(sorted(tally.items()))
print([narayana(n, k) for k in range(1, n + 1)])

# uniform sampler; sample k uses seed ^ k so runs are reproducible
samples = sample_many(sawtooth(3), staircase(3), num=20_000, seed=1)
for path, hits in sorted(Counter(str(p) for p in samples).items()):
    print(path, hits / len(samples))
