"""Run the whole verification campaign in-process and summarize the report."""

from cantor_coarse.cli import RunConfig, run_campaign

config = RunConfig(mu=5.0, depth=10, partition_n=2, levels=2, dendrite_depth=4, seed=0)
report = run_campaign(config)

width = max(len(check["id"]) for check in report["checks"])
for check in report["checks"]:
    mark = "ok " if check["passed"] else "BAD"
    print(f"  {mark} {check['id']:<{width}}  {check['location']}")

summary = report["summary"]
print(f"\n{summary['passed']}/{summary['total']} checks passed; "
      f"all passed: {summary['all_passed']}")

print("\nthe same campaign at mu = 4.5 (modulus sum exceeds one):")
report45 = run_campaign(RunConfig(mu=4.5, depth=8, levels=1, dendrite_depth=3))
for check in report45["checks"]:
    if not check["passed"]:
        print(f"  failing check: {check['id']} measured {check['measured']:.4f} "
              f"against bound {check['bound']}")
print(f"all passed: {report45['summary']['all_passed']}")
