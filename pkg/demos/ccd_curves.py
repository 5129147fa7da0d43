"""Walkthrough: cost per correct detection, the metric that unifies price
and accuracy.

Raw TCO ignores that a cheap model which misses a third of its queries
buys you fewer *correct* detections per dollar. CCD = TCO / (N x accuracy)
prices exactly that. An API model's CCD is flat in volume; a supervised
model's falls as its upfront cost amortizes, so the two curves cross.

Run: python demos/ccd_curves.py > ccd_curve.csv   (CSV on stdout)
"""

import sys

from detecon import CurveModel, ccd_crossover, curve, load_catalog, upfront_total
from detecon.breakeven import curve_to_csv

catalog = load_catalog()
large = catalog.scale("large")
gemini = catalog.profile("gemini-flash-2.5")
yolo = catalog.profile("yolov8m")

models = [
    CurveModel(name="yolov8m", accuracy=yolo.accuracy_coco, params=large),
    CurveModel(name="gemini-flash-2.5", accuracy=gemini.accuracy_coco, profile=gemini),
    CurveModel(name="gpt-4v", accuracy=catalog.profile("gpt-4v").accuracy_coco,
               profile=catalog.profile("gpt-4v")),
]
rows = curve(models)  # default 1K..200M grid

print("CCD at a few volumes (USD per correct detection)", file=sys.stderr)
for volume in (100_000, 10_000_000, 50_000_000, 200_000_000):
    at_volume = {r.model: r.ccd for r in rows if r.volume == volume}
    line = "  ".join(f"{name}={value:.5f}" for name, value in at_volume.items())
    print(f"  N={volume:>12,}: {line}", file=sys.stderr)

crossover = ccd_crossover(
    upfront=upfront_total(large),
    supervised_per_image=large.supervised_per_image_cost,
    accuracy_supervised=yolo.accuracy_coco,
    api_price=gemini.api_price_per_image,
    accuracy_api=gemini.accuracy_coco,
)
print(f"\nsupervised CCD drops below Gemini's at N = {crossover:,.0f}", file=sys.stderr)
print("(earlier than the plain TCO break-even: the accuracy edge pulls it in)\n",
      file=sys.stderr)

# plot-ready CSV on stdout: volume,model,tco_usd,ccd_usd
sys.stdout.write(curve_to_csv(rows))
