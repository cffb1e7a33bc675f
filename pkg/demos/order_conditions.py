"""Rooted trees and the classical order of the builtin tableaus."""
from lawsonlab.rk_tableau import BUILTIN_NAMES, builtin_tableau, parse_tableau
from lawsonlab.trees import (
    check_order, count_by_order, density, enumerate_trees, integral_weight,
    quadrature_weight, sprout, symmetry,
)

# trees up to order 4 with their symmetry, density and the exact integral I[t]1
for t in enumerate_trees(4):
    print(f"{str(t):<12} order {t.order}  sigma {symmetry(t)}  gamma {density(t):>2}  "
          f"I[t]1 = {integral_weight(t)(1)}")

print("trees per order up to 10:", count_by_order(enumerate_trees(10)))

# each tableau is certified by comparing I[t]1 with its quadrature weight Q[t]1
for name in BUILTIN_NAMES:
    cert = check_order(builtin_tableau(name), 5)
    t, lhs, rhs = cert.first_failure
    print(f"{name:<15} order {cert.certified_order}, first failing tree {t}: {lhs} vs {rhs}")

# the same check on a tableau read from text
ralston = parse_tableau("s=2\nc= 0 2/3\na2= 2/3\nb= 1/4 3/4\n", name="ralston")
print(check_order(ralston, 4).report())

# attaching leaves to a node multiplies its weight by the node value c_i
rk4 = builtin_tableau("rk4")
bushy = sprout(enumerate_trees(2)[1], (1, 1))
print(f"sprouted tree {bushy}: Q = {quadrature_weight(bushy, rk4)}, 1/gamma = 1/{density(bushy)}")
