"""Run the three bundled scan configs and print their verdicts side by side.

The three families cover the behavior classes the diagnostics are built to
separate: angles degrading toward a right angle (seidman), a vanishing
angle with a kernel that is never captured (du), and subspaces aligned
with the operator's own singular directions (best-lpa).
"""

from pathlib import Path

from lpakit import load_scan_config, render_csv, run_scan

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def main() -> None:
    reports = []
    for name in ("seidman", "du", "best_lpa"):
        cfg = load_scan_config(str(CONFIG_DIR / f"{name}.json"))
        reports.append(run_scan(cfg))

    width = max(len(r.config.operator_name) for r in reports)
    header = (f"{'operator':<{width}}  {'kernel_approximability':<24}"
              f"{'sup_theta_bounded':<19}bound_checks")
    print(header)
    print("-" * len(header))
    for rep in reports:
        v = rep.verdicts
        print(f"{rep.config.operator_name:<{width}}  "
              f"{v['kernel_approximability']:<24}"
              f"{v['sup_theta_bounded']:<19}"
              f"{v['bound_checks_passed']}")

    for rep in reports:
        print(f"\n# {rep.config.operator_name}")
        print(render_csv(rep), end="")


if __name__ == "__main__":
    main()
