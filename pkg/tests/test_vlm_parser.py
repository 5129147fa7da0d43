import json

import pytest
from hypothesis import given, settings, strategies as st

from detecon.eval_metrics import BoundingBox, DetectionRecord
from detecon.vlm_parser import (
    BoundsError,
    GeometryError,
    ParseError,
    RangeError,
    RawVlmResponse,
    clean_response_text,
    load_responses_jsonl,
    parse_batch,
    parse_vlm_response,
)

CANONICAL_HIT = json.dumps(
    {
        "detected": True,
        "confidence": 0.9,
        "bounding_box": {"x_min": 10, "y_min": 20, "x_max": 110, "y_max": 220},
        "reasoning": "distinctive shape and color match",
    }
)
CANONICAL_MISS = '{"detected": false, "confidence": 0.0}'


def raw(text, width=640, height=480, category="AirPods Pro", image_id=1):
    return RawVlmResponse(text=text, image_width=width, image_height=height,
                          category_queried=category, image_id=image_id)


class TestCanonical:
    def test_detection_schema(self):
        record = parse_vlm_response(raw(CANONICAL_HIT))
        assert record.detected is True
        assert record.confidence == 0.9
        assert record.box == BoundingBox(10, 20, 110, 220)
        assert record.category == "AirPods Pro"
        assert "distinctive" in record.reasoning

    def test_miss_schema(self):
        record = parse_vlm_response(raw(CANONICAL_MISS))
        assert record.detected is False
        assert record.confidence == 0.0
        assert record.box is None

    def test_miss_with_box_fields_ignored(self):
        text = json.dumps({"detected": False, "confidence": 0.0,
                           "bounding_box": {"x_min": 1, "y_min": 1, "x_max": 2, "y_max": 2}})
        record = parse_vlm_response(raw(text))
        assert record.box is None


class TestCleanup:
    def test_fenced_response(self):
        fenced = f"```json\n{CANONICAL_HIT}\n```"
        assert parse_vlm_response(raw(fenced)) == parse_vlm_response(raw(CANONICAL_HIT))

    def test_bare_fence(self):
        fenced = f"```\n{CANONICAL_HIT}\n```"
        assert parse_vlm_response(raw(fenced)) == parse_vlm_response(raw(CANONICAL_HIT))

    def test_surrounding_prose(self):
        chatty = f"Sure! Here is the detection result:\n{CANONICAL_HIT}\nLet me know if more."
        assert parse_vlm_response(raw(chatty)) == parse_vlm_response(raw(CANONICAL_HIT))

    def test_clean_text_helper(self):
        assert clean_response_text("```json\n{\"a\": 1}\n```") == '{"a": 1}'
        assert clean_response_text('noise {"a": 1} noise') == '{"a": 1}'


class TestErrors:
    def test_unparseable(self):
        with pytest.raises(ParseError) as exc:
            parse_vlm_response(raw("I could not find the object, sorry."))
        assert exc.value.snippet

    def test_missing_detected(self):
        with pytest.raises(ParseError):
            parse_vlm_response(raw('{"confidence": 0.5}'))

    def test_out_of_bounds_x(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": 10, "y_min": 10, "x_max": 700, "y_max": 100}})
        with pytest.raises(BoundsError):
            parse_vlm_response(raw(text))  # 700 > 640

    def test_negative_coordinate(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": -5, "y_min": 10, "x_max": 50, "y_max": 100}})
        with pytest.raises(BoundsError):
            parse_vlm_response(raw(text))

    def test_inverted_box(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": 110, "y_min": 10, "x_max": 10, "y_max": 100}})
        with pytest.raises(GeometryError):
            parse_vlm_response(raw(text))

    def test_confidence_out_of_range(self):
        text = json.dumps({"detected": True, "confidence": 1.7,
                           "bounding_box": {"x_min": 1, "y_min": 1, "x_max": 5, "y_max": 5}})
        with pytest.raises(RangeError):
            parse_vlm_response(raw(text))

    def test_miss_with_nonzero_confidence(self):
        with pytest.raises(RangeError):
            parse_vlm_response(raw('{"detected": false, "confidence": 0.4}'))

    def test_non_integer_coordinate(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": 1.5, "y_min": 1, "x_max": 5, "y_max": 5}})
        with pytest.raises(ParseError):
            parse_vlm_response(raw(text))


class TestClamp:
    def test_clamp_recovers_out_of_bounds(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": 10, "y_min": 10, "x_max": 700, "y_max": 100}})
        record = parse_vlm_response(raw(text), clamp=True)
        assert record.box.x_max == 640

    def test_clamp_off_by_default(self):
        text = json.dumps({"detected": True, "confidence": 0.5,
                           "bounding_box": {"x_min": 10, "y_min": 10, "x_max": 700, "y_max": 100}})
        with pytest.raises(BoundsError):
            parse_vlm_response(raw(text))


class TestReasoningAndRoundTrip:
    def test_reasoning_truncated(self):
        text = json.dumps({"detected": False, "confidence": 0.0, "reasoning": "x" * 5000})
        record = parse_vlm_response(raw(text))
        assert len(record.reasoning) == 1024

    def test_round_trip(self):
        record = parse_vlm_response(raw(CANONICAL_HIT))
        serialized = json.dumps(record.to_dict())
        reparsed = parse_vlm_response(raw(serialized))
        assert reparsed == record

    def test_round_trip_miss(self):
        record = parse_vlm_response(raw(CANONICAL_MISS))
        reparsed = parse_vlm_response(raw(json.dumps(record.to_dict())))
        assert reparsed == record


class TestBatch:
    def test_invalid_records_become_misses(self):
        responses = [
            raw(CANONICAL_HIT, image_id=1),
            raw("garbage", image_id=2),
            raw(json.dumps({"detected": True, "confidence": 0.5,
                            "bounding_box": {"x_min": 0, "y_min": 0,
                                             "x_max": 9999, "y_max": 10}}), image_id=3),
        ]
        result = parse_batch(responses)
        assert len(result.records) == 3
        assert result.records[0].detected is True
        assert result.records[1].detected is False
        assert result.records[2].detected is False
        assert result.error_counts["ParseError"] == 1
        assert result.error_counts["BoundsError"] == 1
        summary = result.to_error_summary()
        assert summary["n_invalid"] == 2
        assert summary["errors"][0]["image_id"] == 2

    def test_jsonl_loading(self, tmp_path):
        path = tmp_path / "responses.jsonl"
        lines = [
            json.dumps({"text": CANONICAL_HIT, "image_width": 640, "image_height": 480,
                        "category_queried": "cat", "image_id": 5, "latency_ms": 300.0}),
            json.dumps({"text": CANONICAL_MISS, "image_width": 640, "image_height": 480,
                        "category_queried": "cat", "image_id": 6}),
        ]
        path.write_text("\n".join(lines) + "\n", "utf-8")
        responses = load_responses_jsonl(path)
        assert len(responses) == 2
        assert responses[0].latency_ms == 300.0
        records = parse_batch(responses).records
        assert records[0].image_id == 5 and records[0].detected


class TestFuzz:
    @given(st.text(max_size=300))
    @settings(max_examples=300, deadline=None)
    def test_parser_is_total_on_arbitrary_text(self, text):
        try:
            record = parse_vlm_response(raw(text))
            assert isinstance(record, DetectionRecord)
        except (ParseError, BoundsError, GeometryError, RangeError):
            pass

    @given(st.data())
    @settings(max_examples=300, deadline=None)
    def test_parser_is_total_on_mutated_json(self, data):
        doc = {
            "detected": data.draw(st.one_of(st.booleans(), st.integers(), st.none(), st.text(max_size=5))),
            "confidence": data.draw(st.one_of(st.floats(allow_nan=False), st.integers(-5, 5),
                                              st.text(max_size=3), st.none())),
        }
        if data.draw(st.booleans()):
            doc["bounding_box"] = {
                k: data.draw(st.one_of(st.integers(-1000, 2000),
                                       st.floats(allow_nan=False, allow_infinity=False),
                                       st.text(max_size=3), st.none()))
                for k in ("x_min", "y_min", "x_max", "y_max")
            }
        if data.draw(st.booleans()):
            doc["reasoning"] = data.draw(st.text(max_size=50))
        wrapper = data.draw(st.sampled_from(["{}", "```json\n{}\n```", "prefix {} suffix"]))
        text = wrapper.format(json.dumps(doc))
        try:
            record = parse_vlm_response(raw(text))
            assert isinstance(record, DetectionRecord)
        except (ParseError, BoundsError, GeometryError, RangeError):
            pass
