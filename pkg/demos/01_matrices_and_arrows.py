# Alternating sign matrices and their arrow pictures.
#
# An n x n ASM has entries in {-1, 0, 1}, with the nonzero entries of every row
# and column alternating in sign and starting and ending with +1. Each one
# corresponds to exactly one arrow configuration of the six-vertex model with
# domain-wall boundaries.
from fractions import Fraction

from asmshape import Asm, asm_to_sixvertex, enumerate_asms, weighted_count
from asmshape.sixvertex import boundary_correlation, minus_histogram

m = Asm([
    [0, 0, 1, 0, 0],
    [0, 1, -1, 1, 0],
    [1, -1, 1, 0, 0],
    [0, 1, 0, -1, 1],
    [0, 0, 0, 1, 0],
])
print("a 5 x 5 ASM with", m.minus_count(), "entries equal to -1")

# Horizontal arrows point right exactly where the row partial sum is 1.
c = asm_to_sixvertex(m)
for i, row in enumerate(c.horizontal):
    print("row", i, "".join(">" if a else "<" for a in row))

# Vertex types: a/b away from nonzero entries, c on them.
for row in c.vertex_types():
    print(" ".join(t.value for t in row))

# Counting. The 2-enumeration is a power of two, the plain count is 1, 2, 7, 42, ...
for n in range(1, 8):
    print(n, weighted_count(n, 1), weighted_count(n, 2), weighted_count(n, 3), minus_histogram(n))

# Explicit enumeration is available for small n.
print(sum(1 for _ in enumerate_asms(5)), "matrices of size 5")

# Distribution of the column of the single 1 in the first row.
for q in (1, 2, 3):
    h = boundary_correlation(6, q)
    print("q =", q, [str(Fraction(x)) for x in h])
