# Limit shapes for q = 1, 2, 3.
#
# For large matrices the nonzero entries concentrate inside a curve touching
# the four sides at their midpoints; outside it the matrix is frozen. The
# top-left quarter of that curve comes from a double root of a single
# equation in one variable, solved here as a 2 x 2 linear system.
from pathlib import Path
from fractions import Fraction

from asmshape import Case, double_root_solve, parametric_curve, temperate_area
from asmshape.arctic import crossing_x, curve_sample, full_curve, implicit_residual
from asmshape.svg import PALETTE, SvgCanvas

for case in Case:
    print(case.value, "area inside the curve:", round(temperate_area(case), 6))

# q = 2 is the circle inscribed in the square; q = 3 is exact in rationals too.
print(double_root_solve(Case.Q2, Fraction(2)), parametric_curve(Case.Q2, Fraction(2)))
p = double_root_solve(Case.Q3, Fraction(2))
print(p, "sextic residual:", implicit_residual(Case.Q3, p))

# Width of the frozen corner at a quarter of the height.
for case in Case:
    print(case.value, "x at y = 1/4:", round(crossing_x(case, 0.25), 5))

canvas = SvgCanvas(title="limit shapes q=1,2,3")
canvas.frame()
for case in Case:
    for arc in full_curve(curve_sample(case, 200)):
        canvas.polyline(arc, colour=PALETTE[case.value])
out = Path(__file__).with_name("limit_shapes.svg")
out.write_text(canvas.render())
print("wrote", out)
