"""Walkthrough: the recommendation engine on the six reference deployments.

Each scenario runs through ruleset-v1; the printout shows the fired rules
with the quantities that triggered them, so every recommendation is
auditable rather than oracular.

Run: python demos/decision_walkthrough.py
"""

from detecon import load_catalog, load_scenarios, recommend

catalog = load_catalog()

for scenario in load_scenarios():
    rec = recommend(scenario, catalog)
    label = rec.chosen_profile or rec.choice
    if rec.choice == "hybrid":
        label = f"hybrid ({rec.chosen_profile} screening + supervised verify)"
    elif rec.choice == "supervised":
        label = "supervised (yolov8m)"
    print(f"=== {scenario.name}: {scenario.daily_volume:,}/day, "
          f"{scenario.n_categories} categories, floor {scenario.accuracy_floor:.0%} ===")
    print(f"  -> {label}")
    for firing in rec.rationale:
        print(f"     [{firing.rule}] {firing.effect}: {firing.detail}")
    if rec.breakeven:
        print(f"     break-even vs cheapest API: {rec.breakeven.volume:,.0f} images")
    costs = ", ".join(f"{k}=${v:,.0f}" for k, v in rec.projected_costs.items())
    print(f"     lifetime costs: {costs}")
    print()
