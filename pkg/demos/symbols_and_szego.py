"""Build the running symbol pair and factorize it with Szego functions.

phi = ((z-0.3)/(z-0.2))^0.3 is analytic off a cut inside the unit disk, so
only its k <= 0 Fourier coefficients survive; the Hankel symbol w = d*phi
carries the extra factor d whose reflection satisfies d(z) d(1/z) = 1.
The Szego functions alpha (for phi) and beta (for d) split each symbol
into boundary values of functions analytic inside/outside the circle.
"""
import numpy as np

from thdet import (CircleGrid, ExampleParams, fourier_coeffs_auto,
                   rho_field, szego_from_symbol)

params = ExampleParams(a=0.2, b=0.3, alpha=0.3, a1=0.5, b1=0.7, alpha1=0.4)
pair = params.pair()

print("symbol pair:", pair.phi.label, "|", pair.w.label)
ri, ro = pair.annulus()
print(f"common annulus of analyticity: {ri:.4f} < |z| < {ro:.4f}")

phic = fourier_coeffs_auto(pair.phi, -8, 3)
wc = fourier_coeffs_auto(pair.w, -3, 8)
print("\nFourier coefficients (phi lives on k <= 0, w on both sides):")
print("   k      phi_k            w_k")
for k in range(-3, 4):
    print(f"  {k:+d}   {phic[k].real:+.10f}   {wc[k].real:+.10f}")

# d d~ = 1 on the circle -- the structural identity behind beta = beta~.
z = np.exp(2j * np.pi * (np.arange(64) + 0.31) / 64)
print("\nmax |d(z) d(1/z) - 1| on the circle:",
      f"{np.max(np.abs(pair.d(z) * pair.d(1.0 / z) - 1.0)):.2e}")

alpha = szego_from_symbol(pair.phi)
beta = szego_from_symbol(pair.d)

# Jump identities: the plus/minus boundary values differ by the symbol.
zz = np.exp(2j * np.pi * (np.arange(512) + 0.31) / 512)
jump_a = np.max(np.abs(alpha.eval(zz, "boundary_plus")
                       - alpha.eval(zz, "boundary_minus") * pair.phi(zz)))
jump_b = np.max(np.abs(beta.eval(zz, "boundary_plus")
                       - beta.eval(zz, "boundary_minus") * pair.d(zz)))
print("\nfactorization jump residuals at 512 nodes:")
print(f"  alpha_plus = alpha_minus * phi : {jump_a:.2e}")
print(f"  beta_plus  = beta_minus  * d   : {jump_b:.2e}")

# Interior normalization and reflection symmetry.
print(f"\nbeta(0) = {complex(beta.inside(0.0)):.15f}  (normalized to 1)")
z32 = 0.75 * np.exp(2j * np.pi * (np.arange(32) + 0.31) / 32)
refl = np.max(np.abs(beta.inside(z32) - beta.outside(1.0 / z32)))
print(f"max |beta(z) - beta(1/z)| : {refl:.2e}  (d d~ = 1 forces equality)")

# rho collects all four Szego factors; its Cauchy transform at 0 is the
# constant entering the model solution.
cf = rho_field(alpha, beta, CircleGrid(1.0, 2048))
print(f"\nC_rho(0) = {cf.at_zero.real:.13f}")
