# Sampling large matrices with q^(number of -1 entries) weights.
#
# A Metropolis chain on height functions: each move raises or lowers one
# interior height by 2, which flips a 2 x 2 pattern of the matrix. The density
# of nonzero entries shows the frozen corners and the curve between them.
import time
from pathlib import Path

from asmshape import Case, ChainConfig, empirical_boundary, sample_density
from asmshape.arctic import crossing_x, curve_sample, full_curve
from asmshape.sampler import density_csv, efp_profile_estimate, mean_curve_distance, profile_crossing
from asmshape.svg import PALETTE, SvgCanvas

n = 48
for q in (1, 2, 3):
    t = time.time()
    cfg = ChainConfig(n, q, seed=1, sweeps_burnin=5000, sweeps_between=10, n_samples=500)
    fld = sample_density(cfg)
    b = empirical_boundary(fld)
    print(f"q={q}: boundary {len(b.points)} points, mean distance to the curve "
          f"{mean_curve_distance(b.points, Case.parse(q)):.4f}, {time.time() - t:.1f}s")

    # The emptiness profile at s = n/4 steps down near the curve. At this size
    # the step sits to the right of it: the whole block must be empty.
    prof = [e.value for e in efp_profile_estimate(fld, n // 4)]
    print(f"   profile crosses 1/2 at x={profile_crossing(prof):.3f}; "
          f"curve x={crossing_x(Case.parse(q), 0.25):.3f}")

    canvas = SvgCanvas(title=f"density of nonzero entries, n={n}, q={q}")
    canvas.heatmap(fld.c_density)
    canvas.frame()
    for arc in full_curve(curve_sample(Case.parse(q), 200)):
        canvas.polyline(arc, colour=PALETTE[f"q{q}"])
    here = Path(__file__).parent
    (here / f"density_q{q}.svg").write_text(canvas.render())
    (here / f"density_q{q}.csv").write_text(density_csv(fld))
