"""Dark-state preparation fidelity from the driven steady state.

With the roles of probe and control swapped (strong field on 1-3, nothing
on 2-3) the dark state tends to the bare metastable level, so the fidelity
is set by how much population the decay trap leaks back out.
"""

from dataclasses import replace

from polariton_eit import (
    LambdaConfig,
    dark_state_fidelity,
    steady_state,
    to_angular,
)


def main():
    lam = LambdaConfig(
        omega_13=to_angular(6.4850e9),
        omega_23=to_angular(6.4828e9),
        gamma_31=to_angular(0.35e6),
        gamma_32=to_angular(0.47e6),
        gamma_21=to_angular(2.74e3),
        probe_rabi=to_angular(0.82e6),
        control_rabi=0.0,
        omega_p=to_angular(6.4850e9),
        omega_c=to_angular(6.4828e9),
    )
    rho = steady_state(lam)
    fid = dark_state_fidelity(rho, probe_rabi=lam.probe_rabi,
                              control_rabi=lam.control_rabi)
    print("strong pump on 1-3, control off:")
    print("  target population : %.6f" % rho.populations[1])
    print("  dark-state fidelity: %.4f %%" % (100.0 * fid))

    print("fidelity vs control admixture:")
    for control_mhz in (0.0, 0.2, 0.4, 0.6, 0.82):
        cfg = replace(lam, control_rabi=to_angular(control_mhz * 1e6))
        rho = steady_state(cfg)
        fid = dark_state_fidelity(rho, probe_rabi=cfg.probe_rabi,
                                  control_rabi=cfg.control_rabi)
        print("  control %.2f MHz: F = %.4f %%" % (control_mhz, 100.0 * fid))


if __name__ == "__main__":
    main()
