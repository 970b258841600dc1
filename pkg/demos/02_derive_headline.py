"""From a physical cell description to the dimensionless theory.

Walks the full derivation chain for the shipped 880 Torr helium-3 /
potassium configuration: densities, magnetizations, coupling rates,
precession bookkeeping, and finally the measurement strength kappa with
its loss budget.  Also prints the matched cell-2 field and the
optical-depth identity diagnostics.
"""

import os

from noblesqueeze import (
    coupling_rates,
    derive,
    field_matching,
    magnetizations,
    optical_depth_identity,
)
from noblesqueeze.io_utils import parse_config

config = parse_config(os.path.join(os.path.dirname(__file__), os.pardir,
                                   "configs", "he3_k_headline.yaml"))
params = derive(config)

print("ensembles")
print(f"  n_a = {params.n_a_cm3:.3e} cm^-3   n_b = {params.n_b_cm3:.3e} cm^-3")
print(f"  M_a = {params.m_a:.3e}  M_b = {params.m_b:.3e}  M_L = {params.m_l:.3e}")
print(f"  P_a = {params.p_a:.3f} (pumping at R_op = {config.pump_rate_s:.0f}/s "
      f"against gamma_sd = {config.spin_destruction_rate_s:.0f}/s)")

print("couplings")
print(f"  J = {params.exchange_rate_j:.1f}/s   Q = {params.optical_rate_q:.1f}/s")
print(f"  Delta = {params.delta:.0f} rad/s  (omega_a = {params.omega_a:.0f}, "
      f"omega_b = {params.omega_b:.1f})")
print(f"  following angle psi = {params.psi * 1e3:.1f} mrad, "
      f"exchange shift = {params.delta_omega_b:.2f} rad/s")

match = field_matching(config, params.exchange_rate_j, params.m_a, params.m_b)
print(f"  cell-2 matching: B_2 - B_1 = {match.b2_gauss - config.field_gauss:.3e} G, "
      f"Omega_2 - Omega_1 = {match.pump_shift_difference_rad_s:.1f} rad/s")

print("measurement")
print(f"  kappa = {params.kappa:.3f}  epsilon = {params.epsilon:.3f}  "
      f"eta = {params.eta:.3f}  rho = {params.rho:.3f}")
print(f"  resonant optical depth d = {params.optical_depth:.0f}, "
      f"Gamma_b = {params.big_gamma_b:.3f}/s")

ident = optical_depth_identity(params, config)
print(f"  kappa^2 / (2 Gamma_b T d) = {ident.ratio:.3f} "
      f"(fraction of the optical-depth resource actually used; reaches 1 "
      f"when probe absorption dominates gamma_a and exchange dominates Gamma_b)")
