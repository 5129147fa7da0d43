"""Walkthrough: from raw VLM text responses to accuracies with confidence
intervals and a significance test.

The pipeline: synthesize a small ground-truth set, fake two models' raw
JSON responses (one sloppier than the other, markdown fences and all),
parse them into detection records, score IoU accuracy at 0.5/0.7, then
bootstrap CIs and run the paired test between the two models.

Run: python demos/evaluation_pipeline.py
"""

import json
import random

from detecon import BoundingBox, GroundTruthObject, RawVlmResponse, match_and_score
from detecon.stats import bootstrap_ci, compare_outcomes
from detecon.vlm_parser import parse_batch

rng = random.Random(7)

# 1. Ground truth: 60 images, one object each, varied sizes.
gt = []
for i in range(60):
    x, y = rng.randint(0, 300), rng.randint(0, 300)
    w, h = rng.randint(20, 150), rng.randint(20, 150)
    gt.append(GroundTruthObject(image_id=i, category="widget",
                                box=BoundingBox(x, y, x + w, y + h)))

# 2. Raw responses: model A is tight, model B is noisy and wraps JSON in fences.
def fake_response(obj, jitter, fence, miss_rate):
    if rng.random() < miss_rate:
        text = '{"detected": false, "confidence": 0.0}'
    else:
        b = obj.box
        dx, dy = rng.randint(-jitter, jitter), rng.randint(-jitter, jitter)
        payload = {
            "detected": True,
            "confidence": round(rng.uniform(0.5, 0.99), 2),
            "bounding_box": {"x_min": max(0, b.x_min + dx), "y_min": max(0, b.y_min + dy),
                             "x_max": min(640, b.x_max + dx), "y_max": min(640, b.y_max + dy)},
            "reasoning": "matched on shape",
        }
        text = json.dumps(payload)
    if fence:
        text = f"```json\n{text}\n```"
    return RawVlmResponse(text=text, image_width=640, image_height=640,
                          category_queried="widget", image_id=obj.image_id,
                          latency_ms=rng.uniform(250, 350))

responses_a = [fake_response(o, jitter=4, fence=False, miss_rate=0.05) for o in gt]
responses_b = [fake_response(o, jitter=30, fence=True, miss_rate=0.25) for o in gt]

# 3. Parse (invalid responses would become misses and get tallied by class).
batch_a, batch_b = parse_batch(responses_a), parse_batch(responses_b)
print(f"parse errors: model_a={sum(batch_a.error_counts.values())} "
      f"model_b={sum(batch_b.error_counts.values())}")

# 4. Score.
report_a = match_and_score(gt, batch_a.records)
report_b = match_and_score(gt, batch_b.records)
for name, report in (("model_a", report_a), ("model_b", report_b)):
    ci = bootstrap_ci(report.correctness(0.5), iterations=2000, seed=42)
    print(f"{name}: acc@0.5={report.accuracy_at[0.5]:.3f} "
          f"[{ci.lo:.3f}, {ci.hi:.3f}]  acc@0.7={report.accuracy_at[0.7]:.3f} "
          f"mean IoU={report.mean_iou:.3f} latency={report.mean_latency_ms:.0f}ms")

# 5. Paired significance on per-image correctness.
block = compare_outcomes(report_a.correctness(0.5), report_b.correctness(0.5),
                         "model_a", "model_b", iterations=2000, seed=42)
t = block["paired_t"]
print(f"\npaired t({t['df']}) = {t['t']:.2f}, p = {t['p_two_sided']:.2g}, "
      f"effect size d = {block['cohens_d']:.2f}")
