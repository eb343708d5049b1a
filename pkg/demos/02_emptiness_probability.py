# The probability that the top-left s x (n-r) corner is empty.
#
# F(r, s) is computed two ways: by brute-force enumeration over all matrices and
# by extracting one coefficient of an s-variable power series built from the
# boundary generating functions. The two agree as exact fractions.
from asmshape import EfpQuery, efp_oracle, efp_residue, h_poly, Case
from asmshape.efp import efp_profile
from asmshape.sixvertex import ModelParams

n = 5
for q in (1, 2, 3):
    agree = all(efp_residue(EfpQuery.from_q(n, r, s, q)) == efp_oracle(n, r, s, q)
                for r in range(1, n + 1) for s in range(1, n + 1))
    print(f"q={q}: residues equal enumeration for every (r, s) at n={n}: {agree}")

# Generating function of the first-row position.
print("h_5 for q=1:", [str(c) for c in h_poly(5, Case.Q1).coeffs])

# For larger n only the residue route is cheap. The profile in r is a
# smoothed step in r = 1 .. n: near 0 deep inside, 1 at the left edge r = n.
for s in (1, 2, 3):
    prof = efp_profile(9, s, ModelParams.from_q(1))
    print(f"s={s}:", " ".join(f"{float(v):.3f}" for v in prof))
