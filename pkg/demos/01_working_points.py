"""The three proposed operating points, evaluated from the closed form.

Each row fixes the dimensionless channel tuple (kappa, epsilon, eta, rho)
and reports the attainable two-mode squeezing next to the value quoted
for that configuration.
"""

from noblesqueeze import working_points

print(f"{'label':16s} {'kappa':>5s} {'eps':>5s} {'eta':>6s} {'rho':>6s} "
      f"{'xi':>7s} {'dB':>6s} {'quoted':>7s} {'|dev|':>6s}")
for row in working_points():
    print(f"{row.label:16s} {row.kappa:5.2f} {row.epsilon:5.2f} "
          f"{row.eta:6.3f} {row.rho:6.3f} {row.xi_computed:7.4f} "
          f"{row.db_computed:6.3f} {row.xi_quoted:7.2f} {row.abs_deviation:6.4f}")
