"""The three cases of the pair injection, one worked example each."""
from catalan_mixing import catalan_matroid, classify_and_apply, invert, verify_injection
from catalan_mixing.paths import heights
from catalan_mixing.sweep import injection_sweep

examples = [
    (3, 2, 4, "UUDUDD", "UDUDUD"),      # paths meet between e and f
    (4, 2, 4, "UUUUDDDD", "UDUDUUDD"),  # swap a block starting at f
    (4, 5, 6, "UUDDUUDD", "UUUUDDDD"),  # swap a block ending at e
]
for n, e, f, p, q in examples:
    M = catalan_matroid(n)
    case, p2, q2 = classify_and_apply(M, e, f, p, q)
    print(case.tag.name, "pivot", case.pivot)
    print("  ", p, heights(p), "->", p2, heights(p2))
    print("  ", q, heights(q), "->", q2, heights(q2))
    print("   back:", invert(M, e, f, p2, q2))

# the map is rarely onto: here one of the two target pairs is missed
print(verify_injection(catalan_matroid(3), 2, 4))

# every lattice path matroid on up to 8 elements
rep = injection_sweep(8)
print(rep.matroids, rep.domain, rep.image, rep.cases, rep.case2_below, rep.ok)
