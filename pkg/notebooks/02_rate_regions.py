# Rate regions: Shannon outer bound against linear-code inner bounds
#
# Two sources X (level 1) and Y (level 2).  The level-1 decoder reads E_1,
# the level-2 decoders read any two encoders.

from mdcs.model import from_text
from mdcs.polycone import compare
from mdcs.region import classify_sufficiency, region

inst = from_text("2 3 | 1 ; 3 5 6")

outer = region(inst, "outer")
print("Shannon outer bound:")
print(outer)

scalar = region(inst, "scalar:2")
print("\nscalar binary codes:")
print(scalar)
print("relation to outer:", compare(scalar.cone, outer.cone))

# the extra facet is violated by this extreme ray of the outer bound
ray = (0, 2, 1, 1, 1)
print("\n(H(X),H(Y),R) =", ray, "in outer:", outer.contains(ray),
      "in scalar:", scalar.contains(ray))

# one extra element (vector codes on N+1 = 6 elements) closes the gap
vector = region(inst, "vector:2:N+1")
print("vector binary, N' = 6:", compare(vector.cone, outer.cone))

sp = region(inst, "superposition")
print("\nsuperposition coding:")
print(sp)

rec = classify_sufficiency(inst, ["scalar:2", "scalar:3", "vector:2:N+1",
                                  "superposition"])
for kind, ok in rec.flags.items():
    print(f"{kind:15s} {'sufficient' if ok else 'insufficient'}",
          rec.witnesses.get(kind, ""))

# extreme rays of the outer region
print("\nouter extreme rays:", outer.cone.rays)
