# Building block codes from basic solutions
#
# A rate point is split into a conic combination of basic solutions
# (constraint-satisfying subspace arrangements), scaled to integer
# repetition counts over a common block length L and stacked.

from fractions import Fraction

from mdcs.codes import brute_force_recovers, construct_code, describe, dumps, verify_code
from mdcs.model import from_text

inst = from_text("2 3 | 1 ; 3 5 6")

# H(X) = H(Y) = 1, every rate 1: a single basic solution
code = construct_code(inst, (1, 1, 1, 1, 1))
print(dumps(code))

# (1,2,2,2,1) = (1,1,1,1,1) + (0,1,1,1,0)
code = construct_code(inst, (1, 2, 2, 2, 1))
print(describe(code, 2))
print("provenance:", code.provenance)

# fractional point: block length 2
h = Fraction(3, 2)
code = construct_code(inst, (h,) * 5)
print(describe(code, 2))

# the point (1, 2, 3/2, 3/2, 3/2) needs vector codes (N' = 6)
code = construct_code(inst, (1, 2, h, h, h), n_prime=6)
print(dumps(code))
rep = verify_code(inst, code)
for d, ok in rep.decoders:
    print("level", d.level, "fan", bin(d.fan), "ok" if ok else "FAIL")
print("rates", rep.rates)

# exhaustive check over all 2^6 source words
print(all(ok for _, ok in brute_force_recovers(inst, code)))

# and the scalar codes cannot reach it
try:
    construct_code(inst, (0, 2, 1, 1, 1))
except ValueError as exc:
    print("scalar:", exc)
