# Enumerating MDCS instances
#
# An instance is K prioritized sources, |E| encoders and a set of decoders.
# Decoder fans are bitmasks: {E_1, E_3} is 0b101 = 5.

from mdcs.enumeration import enumerate_all, nonisomorphic, sperner_families
from mdcs.model import canonical_form, from_config_matrix, to_text, validate

# Sperner families (antichains) of encoder subsets are the building blocks
for n in (2, 3, 4):
    print(n, "encoders:", len(sperner_families(n)), "Sperner families")

# a configuration matrix has one row per level
inst = from_config_matrix([[1, 0, 0], [3, 5, 6]])
print(to_text(inst), validate(inst))

# nested fans at one level break C1
bad = from_config_matrix([[1, 3]], 2, check=False)
print(validate(bad))

# relabeling encoders does not change the canonical form
print(canonical_form(inst) == canonical_form(inst.permuted((2, 0, 1))))

print("\n(K,|E|)  labeled  non-isomorphic")
for K, E in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3)]:
    full, reps = enumerate_all(K, E)
    print(f"({K},{E})   {len(full):7d}  {len(reps):5d}")

# the 23 two-level three-encoder instances
for a in nonisomorphic(2, 3):
    print("  ", to_text(a))
