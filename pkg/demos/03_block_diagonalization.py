"""Run the recursive block-diagonalization to fourth order on one Landau
level and print the effective symbols it produces.

Expected outcome: the odd orders vanish identically, the second order
returns the bare potential, and the fourth order is the frame Laplacian of
the potential scaled by half the level energy.
"""

import numpy as np

from magbloch import FockTruncation
from magbloch.lattice import harper_potential, laplacian_DzDzbar, make_lattice
from magbloch.moyal import (build_intertwiner, build_projection,
                            effective_symbol, intertwiner_residuals,
                            projection_residuals)
from magbloch.symbols import assemble_truncated, mode_max_norm

L = make_lattice([1, 0], [0, 1])
V = harper_potential()
T = FockTruncation(n_max=24, guard=6)

H = assemble_truncated(V, None, L, T)
pi = build_projection(H, [0], 4)
u = build_intertwiner(pi, 4)
hs = effective_symbol(H, pi, u, 4)

print("gradewise residuals of the defining properties:")
for name, vals in projection_residuals(H, pi, 4).items():
    print(f"  pi {name}: {[f'{v:.1e}' for v in vals]}")
for name, vals in intertwiner_residuals(pi, u, 4).items():
    print(f"  u {name}: {[f'{v:.1e}' for v in vals]}")

print("\nband-block symbols:")
for j, h in enumerate(hs):
    print(f"  order {j}: sup norm {mode_max_norm(h, T):.3e}")

Y = laplacian_DzDzbar(V, L)
worst = max(abs(hs[4][nm][0, 0] - 0.25 * Y[nm]) for nm in Y.coeffs)
print(f"\nfourth order vs (level/2) * frame Laplacian of V: "
      f"max coefficient difference {worst:.2e}")
