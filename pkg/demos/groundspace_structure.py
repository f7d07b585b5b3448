"""How a local perturbation deforms a stabilizer groundspace.

Three diagnostics as the perturbation strength lam grows:

  * groundspace splitting E_1 - E_0 (stays far below the gap, and is higher
    order than lam for a distance-3 code)
  * infidelity of the truncated Brillouin-Wigner expansion against the exact
    groundspace (order-m truncation converges as lam^{2(m+1)})
  * the perturbed Knill-Laflamme off-diagonal for weight-1 errors (grows as
    lam^{d-2p} = lam, the source of the residual decoding error)
"""

import numpy as np

from stabdec import codes, encoding, spectral

code = codes.builtin_code("five_qubit")
pert = spectral.sample_gue_perturbation(np.random.default_rng(4), code.n)

print(f"{'lambda':>8} {'splitting':>11} {'gap':>7} "
      f"{'bw m=0':>10} {'bw m=1':>10} {'kl offdiag':>11}")
for lam in np.logspace(-2, -1, 5):
    res = spectral.lowest_eigenpairs(spectral.build_hamiltonian(code, pert, lam), 3)
    bw = [spectral.groundspace_infidelity(
        code, spectral.bw_truncated_state(code, pert, lam, m, 0), res)
        for m in (0, 1)]
    basis = encoding.fix_gauge(res, code)
    kl = spectral.perturbed_kl_offdiagonal(code, basis.omega0, basis.omega1, 1)
    print(f"{lam:8.4f} {res.splitting:11.3e} {res.gap:7.3f} "
          f"{bw[0]:10.2e} {bw[1]:10.2e} {kl:11.3e}")

print("\nsplitting is o(lambda); bw residuals fall as lambda^2 and lambda^4;")
print("the KL off-diagonal grows linearly, matching d - 2p = 1")
