"""Trace the bounded-but-divergent family solution by solution.

For the near-projector operator the least-squares solutions stay small
while their distance to the true minimum-norm solution never decays: the
expansion coefficient along the kernel direction creeps toward 1 although
the target coefficient is 4/7. Printed per n: the recovered coefficient,
its closed form 1 - (3/7) 2^(-n), the solution norm, and the gap.
"""

from lpakit import du_divergence_check


def main() -> None:
    rep = du_divergence_check(20)
    print(f"{'n':>3} {'m':>3} {'coefficient':>18} {'closed form':>18} "
          f"{'norm':>10} {'gap':>10}")
    for row in rep.rows:
        print(f"{row.n:>3} {row.m:>3} {row.coefficient:>18.12f} "
              f"{row.coefficient_closed:>18.12f} {row.solution_norm:>10.6f} "
              f"{row.divergence_gap:>10.6f}")
    print(f"\ntarget coefficient <y, e> = {rep.inner_ye:.12f} "
          f"(expected {rep.inner_ye_expected:.12f})")
    print(f"persistent mismatch {rep.limit_mismatch:.6f} "
          f"(floor {rep.floor}, solution cap {rep.solution_cap})")
    print(f"profile check {'passed' if rep.passed else 'FAILED'}")


if __name__ == "__main__":
    main()
