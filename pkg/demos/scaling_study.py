"""How gap and mixing time grow with n, and the cube-like matroid."""
from catalan_mixing.analysis import scaling_experiment

for chain in ("dyck-rt", "basis-exchange", "bernoulli-laplace", "dyck-adj"):
    table = scaling_experiment(chain, range(2, 8))
    print(chain, "fitted exponent of t_mix in n:", table.exponent)
    print(table.to_csv())

# L[(DU)^n, (UD)^n] picks one element from each pair {2i-1, 2i}: a slowed-down cube walk
table = scaling_experiment("cube", range(2, 8))
for row in table.rows:
    print(row.n, row.states, row.gap * row.n**2, row.t_mix)
