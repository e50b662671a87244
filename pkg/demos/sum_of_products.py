"""phi1(x+y) = phi4(x) phi5(y) + phi4(y) phi5(x), solved in closed form.

Values and slopes of phi4, phi5 at one point fix the whole solution: a pair of
hyperbolic functions with common exponential twist. Running the result back
through the identifier shows it lives on the one-period lattice with nu2 at
infinity.
"""
import cmath

from bakerfe.applications import Example2Data, example2_solve, example2_tuple
from bakerfe.identify import identify
from bakerfe.phi import INFINITY

d = Example2Data(x0=0.0, phi4_0=1.0, phi4p_0=1.0, phi5_0=1.0, phi5p_0=-1.0, kappa=1.0)
sol = example2_solve(d, grid=7)
print("N2            ", sol.N2)
print("sinh(k nu1)   ", cmath.sinh(sol.nu1))
print("lambda1       ", sol.lambda1)
print("lambda2       ", sol.lambda2)
print("exponent      ", sol.exponent)
print("4 exponent expressions agree to", max(abs(sol.exponent - v) for v in sol.exponent_checks))
print("7x7 residual  ", sol.residual)
print("ratio check   ", sol.ratio_residual)

R = identify(example2_tuple(sol), d.x0)
print()
print("re-identified degeneracy", R.degeneracy)
print("kappa^2 =", complex(R.lattice.kappa) ** 2)
print("nu2 is infinite:", R.nu[1] is INFINITY)

# a complex kappa turns the hyperbolic functions trigonometric
d2 = Example2Data(0.2, 1.1, 0.3, 0.7, -0.4, 0.6j)
sol2 = example2_solve(d2)
print()
print("kappa = 0.6i residual", sol2.residual, " nu1 =", sol2.nu1)
