# Minors and forbidden minors
#
# Deleting a source, contracting or deleting an encoder, and unifying two
# encoders shrink an instance.  Insufficiency of a code class passes from a
# minor up to every instance containing it.

from mdcs import minors as mn
from mdcs.enumeration import universe
from mdcs.model import from_text, to_text
from mdcs.polycone import compare
from mdcs.region import region

inst = from_text("2 3 | 1 ; 3 5 6")
for op in mn.operations(inst, "vector"):
    print(f"{str(op):22s} -> {to_text(mn.apply(inst, op))}")

print("\nscalar minors:")
for m in mn.minors(inst, "scalar", include_self=False).values():
    print("  ", to_text(m))

# region of a minor = projection of the region
out = region(inst, "outer")
op = mn.MinorOp("delete_source", 0)
small = mn.apply(inst, op)
print("\nH(X) = 0 projection matches the minor:",
      compare(mn.expected_region(out, op), region(small, "outer").cone))

# forbidden minors for scalar binary codes among instances up to (3,3)
fam = universe(3, 3)


def insufficient(a, kind="scalar:2"):
    return compare(region(a, kind).cone, region(a, "outer").cone) != "equal"


bad = {mn.key(a) for a in fam if insufficient(a)}
print(len(bad), "scalar-binary insufficient instances")
for a in mn.forbidden_minors(fam, bad, "scalar"):
    print("forbidden:", to_text(a))
