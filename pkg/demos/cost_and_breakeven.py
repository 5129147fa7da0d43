"""Walkthrough: when does annotating your own detector beat paying per image?

A 100-category supervised system needs ~$11.6K before the first inference
(annotation + training + edge hardware), then runs for ~$0.00004/image.
A hosted VLM costs nothing upfront but $0.00025 every single image. This
script builds both cost curves and finds where they cross.

Run: python demos/cost_and_breakeven.py
"""

from detecon import break_even_volume, load_catalog, tco_api, tco_supervised, upfront_total

catalog = load_catalog()
large = catalog.scale("large")          # 100 categories, $0.30/box
gemini = catalog.profile("gemini-flash-2.5")
gpt4 = catalog.profile("gpt-4v")

print("Upfront supervised investment")
print(f"  100-category system: ${upfront_total(large):,.0f}")
print(f"  (annotation scales linearly: 10 categories -> "
      f"${upfront_total(catalog.scale('small')):,.0f}, "
      f"expert medical pricing -> ${upfront_total(catalog.scale('medical')):,.0f})")
print()

print("Total cost at increasing volumes (supervised vs pay-per-image)")
print(f"  {'volume':>12}  {'supervised':>12}  {'gemini':>12}  {'gpt-4':>14}")
for volume in (10_000, 1_000_000, 10_000_000, 55_314_286, 100_000_000):
    print(f"  {volume:>12,}  {tco_supervised(large, volume):>12,.0f}"
          f"  {tco_api(gemini, volume):>12,.2f}  {tco_api(gpt4, volume):>14,.0f}")
print()

result = break_even_volume(upfront_total(large), gemini.api_price_per_image,
                           large.supervised_per_image_cost)
print("Break-even against Gemini")
print(f"  volume: {result.volume:,.0f} images")
print(f"  that is {result.daily_for_one_year:,.0f} images/day, every day, for a year")
print(f"  margin recovered per image: ${result.cost_margin:.5f}")
print()

gpt4_result = break_even_volume(upfront_total(large), gpt4.api_price_per_image,
                                large.supervised_per_image_cost)
print("Break-even against GPT-4 (40x pricier per image)")
print(f"  volume: {gpt4_result.volume:,.0f} images "
      f"({gpt4_result.daily_for_one_year:,.0f}/day for a year)")
print()
print("Reading: below ~55M lifetime images the VLM's pay-per-use wins against")
print("Gemini-class pricing; against GPT-4-class pricing supervised training")
print("pays for itself after just ~1.2M images.")
