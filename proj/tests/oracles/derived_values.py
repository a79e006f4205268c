"""Reference values for the unit tests, evaluated at 40 significant digits.

Run: python3 tests/oracles/derived_values.py
"""
from mpmath import mp, mpf, log, exp, sqrt, cos, pi

mp.dps = 40

# rate at unit distance: W log2(1 + 1 / (1 + sigma2)), W = 1, sigma2 = 0.2
print("rate_unit_distance", log(1 + 1 / (1 + mpf("0.2")), 2))

# alpha = exp(-beta (delta/T + eta cos(theta/2))) with beta=1, delta/T=0.1, eta=1, theta=0
print("alpha_example", exp(-(mpf("0.1") + 1 * cos(0))))

# corrected Huber at d=2, v=1, mu=0.5
d, v, mu = mpf(2), mpf(1), mpf("0.5")
print("huber_d2", v * (1 - mu) * d + mu / 2 * d**2 - (1 - mu) * v**2 / 2)
# both branches at d = v
print("huber_at_v_quadratic", v**2 / 2, "linear", v * (1 - mu) * v + mu / 2 * v**2 - (1 - mu) * v**2 / 2)

# combined gradient at x=0, l=(3,4), v=1, mu=0.5, plus a central difference of -h(|x-l|)
def h(r):
    return r**2 / 2 if r <= v else v * (1 - mu) * r + mu / 2 * r**2 - (1 - mu) * v**2 / 2
def U(x, y):
    return -h(sqrt((x - 3) ** 2 + (y - 4) ** 2))
eps = mpf("1e-15")
print("d2d_grad", mu * 3 + (1 - mu) * mpf(3) / 5, mu * 4 + (1 - mu) * mpf(4) / 5,
      "fd", (U(eps, 0) - U(-eps, 0)) / (2 * eps), (U(0, eps) - U(0, -eps)) / (2 * eps))

# ocean step: (|vo|^2 - a^2 v^2) g^2 - 2 <grad, vo> g + |grad|^2 = 0, vo=(0.5,0), grad=(1,0), a v = 1
A, B, C = mpf("0.25") - 1, -2 * mpf("0.5"), mpf(1)
roots = [(-B + s * sqrt(B * B - 4 * A * C)) / (2 * A) for s in (1, -1)]
print("ocean_gamma", [r for r in roots if r > 0])

# cumulative error with eps_t = t^(-1/2), T = 4
print("cumulative_error", sum(1 / mpf(t) for t in range(1, 5)))

# ocean utility example and gradient example
print("ocean_utility", -mpf("0.5") * 1 - mpf("0.5") * (0 - 1) * 1)
print("ocean_gradient", -2 * mpf("0.5") * (1 - 0) + mpf("0.5") * 0, -2 * mpf("0.5") * 0 + mpf("0.5") * 2)

# opposing current: V_r = 1.5 m/s, one-second slots
print("energy_opposing_per_slot", mpf("1.5") ** 3)
