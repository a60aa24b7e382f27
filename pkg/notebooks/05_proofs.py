# Converse proofs from LP certificates
#
# A rate-region inequality is a nonnegative combination of Shannon
# inequalities and network constraints.  A least-l1 combination, ordered
# into steps, reads as a hand proof.

from mdcs import prover
from mdcs.model import from_config_matrix
from mdcs.region import outer_region

# three sources, two encoders; X from E_1, X,Y from E_2, all from both
ex1 = from_config_matrix([[1], [2], [3]])
cert, script, text = prover.prove(ex1, (-2, -1, -1, 1, 1))
print(text)
print("rows used:", len(cert.lam), " l1:", cert.objective)

# two levels, level 1 from any pair, level 2 from all three encoders
ex2 = from_config_matrix([[3, 5, 6], [7, 0, 0]])
cert, script, text = prover.prove(ex2, (-3, -2, 2, 2, 2))
print(text)
print("l1:", cert.objective)

# every facet of an outer region has a certificate
for f in outer_region(ex2).nontrivial_facets():
    c = prover.certify(ex2, f)
    print(f, "rows", len(c.lam), "valid", c.is_valid())
