import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chartforge.quality import (
    FilterParams,
    ImageBuffer,
    assess_quality,
    downsample,
    fallback,
    filter_corpus,
    kernels,
    load_image,
    rgb_to_hsv,
)
from chartforge.quality.review import apply_review, export_borderline, read_review_list
from imagetools import blank_variants, dense_chart, scattered_noise, solid, with_rects, write_png


class TestRgbToHsv:
    def test_pure_white(self):
        assert rgb_to_hsv(255, 255, 255) == (0.0, 0.0, 1.0)

    def test_pure_red(self):
        assert rgb_to_hsv(255, 0, 0) == (0.0, 1.0, 1.0)

    def test_olive(self):
        h, s, v = rgb_to_hsv(128, 128, 0)
        assert h == 60.0
        assert s == 1.0
        assert v == pytest.approx(128 / 255)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_ranges(self, r, g, b):
        h, s, v = rgb_to_hsv(r, g, b)
        assert 0.0 <= h < 360.0
        assert 0.0 <= s <= 1.0
        assert 0.0 <= v <= 1.0

    @given(st.integers(0, 255))
    def test_gray_has_zero_saturation(self, x):
        h, s, v = rgb_to_hsv(x, x, x)
        assert (h, s) == (0.0, 0.0)
        assert v == pytest.approx(x / 255)


class TestBackends:
    def test_backends_agree_on_random_images(self):
        rng = random.Random(99)
        for _ in range(15):
            w, h = rng.randint(2, 48), rng.randint(2, 48)
            px = bytes(rng.randrange(256) for _ in range(w * h * 3))
            target = rng.randint(1, 12)
            assert kernels.box_downsample(px, w, h, target) == fallback.box_downsample(px, w, h, target)
            mask_a, ca, sa, va, wa = kernels.content_stats(px, 0.08, 0.85)
            mask_b, cb, sb, vb, wb = fallback.content_stats(px, 0.08, 0.85)
            assert (mask_a, ca, wa) == (mask_b, cb, wb)
            assert sa == pytest.approx(sb, abs=1e-9)
            assert va == pytest.approx(vb, abs=1e-9)
            assert kernels.largest_component(mask_a, w, h) == fallback.largest_component(mask_b, w, h)

    def test_component_shapes(self):
        # two diagonal pixels are 8-connected; a gap breaks the component
        mask = bytes([1, 0, 0, 0, 1, 0, 0, 0, 0])
        assert fallback.largest_component(mask, 3, 3) == 2
        mask = bytes([1, 0, 0, 0, 0, 0, 0, 0, 1])
        assert fallback.largest_component(mask, 3, 3) == 1


class TestDownsample:
    def test_constant_preserved(self):
        img = solid(512, 512, (13, 200, 77))
        out = downsample(img, 64)
        assert out.width == out.height == 64
        assert out.pixels == bytes((13, 200, 77)) * (64 * 64)

    def test_half_black_half_white_rounds_up(self):
        img = ImageBuffer(2, 2, bytes([0, 0, 0, 0, 0, 0, 255, 255, 255, 255, 255, 255]))
        assert downsample(img, 1).pixels == bytes([128, 128, 128])

    def test_identity_at_target(self):
        img = solid(64, 64, (1, 2, 3))
        assert downsample(img, 64) is img

    def test_twice_vs_once_within_one(self):
        rng = random.Random(4)
        px = bytes(rng.randrange(256) for _ in range(512 * 512 * 3))
        img = ImageBuffer(512, 512, px)
        twice = downsample(downsample(img, 64), 8)
        once = downsample(img, 8)
        assert all(abs(a - b) <= 1 for a, b in zip(twice.pixels, once.pixels))

    def test_bad_target(self):
        with pytest.raises(ValueError):
            downsample(solid(4, 4), 0)


class TestAssessQuality:
    def test_all_white_is_blank(self):
        q = assess_quality(solid(512, 512))
        assert q.verdict == "reject_blank"
        assert q.content_fraction == 0.0
        assert q.white_fraction == 1.0

    def test_dense_chart_accepted(self):
        q = assess_quality(dense_chart())
        assert q.verdict == "accept"
        assert q.content_fraction > 0.2

    def test_scattered_noise_rejected(self):
        q = assess_quality(scattered_noise(seed=1))
        assert q.verdict == "reject_noise"
        assert q.dispersion > 0.9
        assert q.content_fraction < 0.05

    def test_determinism(self):
        img = dense_chart()
        assert assess_quality(img) == assess_quality(img)

    def test_permutation_preserves_content_fraction(self):
        # on an already-64x64 image downsampling is the identity, so the
        # content count depends only on the pixel multiset
        rng = random.Random(5)
        pixels = [bytes((rng.randrange(256), rng.randrange(256), rng.randrange(256))) for _ in range(64 * 64)]
        img_a = ImageBuffer(64, 64, b"".join(pixels))
        rng.shuffle(pixels)
        img_b = ImageBuffer(64, 64, b"".join(pixels))
        assert assess_quality(img_a).content_fraction == assess_quality(img_b).content_fraction

    def test_adding_content_never_turns_accept_into_blank(self):
        base = dense_chart()
        assert assess_quality(base).verdict == "accept"
        more = with_rects(512, 512, [(10, 10, 120, 120, (200, 30, 30))])
        merged = ImageBuffer(
            512,
            512,
            bytes(
                min(a, b)  # overlay darker content, keeping white elsewhere
                for a, b in zip(base.pixels, more.pixels)
            ),
        )
        assert assess_quality(merged).verdict != "reject_blank"

    def test_threshold_extremes(self):
        params_zero = FilterParams(f_min=0.0)
        assert assess_quality(dense_chart(), params_zero).verdict == "accept"
        assert assess_quality(solid(512, 512), params_zero).verdict == "accept"

        params_one = FilterParams(f_min=1.0)
        assert assess_quality(dense_chart(), params_one).verdict == "reject_blank"
        full = solid(512, 512, (200, 30, 30))
        assert assess_quality(full, params_one).verdict == "accept"

    def test_verdict_invariants(self):
        params = FilterParams()
        for img in [solid(512, 512), dense_chart(), scattered_noise(seed=3)]:
            q = assess_quality(img, params)
            if q.verdict == "reject_blank":
                assert q.content_fraction < params.f_min
            if q.verdict == "reject_noise":
                assert q.content_fraction > 0
                assert q.dispersion > params.d_max
                assert q.content_fraction < params.f_noise


class TestFilterCorpus:
    def _manifest(self, tmp_path):
        records = []
        for i in range(7):
            path = tmp_path / f"chart{i}.png"
            write_png(dense_chart(shift=i * 3), path)
            records.append({"id": f"chart{i}", "path": str(path), "subtype": "basic_bar"})
        for i, img in enumerate(blank_variants()[:2]):
            path = tmp_path / f"blank{i}.png"
            write_png(img, path)
            records.append({"id": f"blank{i}", "path": str(path), "subtype": "basic_pie"})
        path = tmp_path / "noise.png"
        write_png(scattered_noise(seed=2), path)
        records.append({"id": "noise", "path": str(path), "subtype": "basic_line"})
        return records

    def test_mixed_fixture_counts(self, tmp_path):
        kept, report = filter_corpus(self._manifest(tmp_path))
        assert len(kept) == 7
        assert report.counts == {"accept": 7, "reject_blank": 2, "reject_noise": 1}
        assert report.per_subtype["basic_bar"]["accept"] == 7

    def test_empty_manifest(self):
        kept, report = filter_corpus([])
        assert kept == []
        assert report.counts == {"accept": 0, "reject_blank": 0, "reject_noise": 0}

    def test_missing_file_recorded(self, tmp_path):
        records = self._manifest(tmp_path)
        records.append({"id": "ghost", "path": str(tmp_path / "missing.png"), "subtype": "basic_bar"})
        kept, report = filter_corpus(records)
        assert len(kept) == 7
        assert len(report.io_errors) == 1
        assert report.io_errors[0]["id"] == "ghost"

    def test_load_image_composites_alpha(self, tmp_path):
        from PIL import Image

        im = Image.new("RGBA", (4, 4), (0, 0, 0, 0))  # fully transparent
        path = tmp_path / "alpha.png"
        im.save(path)
        img = load_image(path)
        assert img.pixels == b"\xff" * (4 * 4 * 3)


class TestReviewLoop:
    def test_export_and_apply(self, tmp_path):
        # 80 of 4096 downsampled cells are content: fraction 0.0195, inside
        # the +-20% band around f_min = 0.02 and just below the threshold
        img = with_rects(
            512, 512, [(0, 0, 512, 8, (200, 30, 30)), (0, 8, 128, 16, (200, 30, 30))]
        )
        path = tmp_path / "border.png"
        write_png(img, path)
        params = FilterParams()
        kept, report = filter_corpus([{"id": "border", "path": str(path), "subtype": "s"}], params)
        assert kept == []
        assert report.assessed[0]["quality"]["verdict"] == "reject_blank"
        review_dir = tmp_path / "review"
        exported = export_borderline(report.assessed, params, review_dir)
        assert exported == ["border"]
        assert read_review_list(review_dir / "review_list.txt") == {"border": "drop"}

        # a human flips the decision; re-ingesting restores the image
        (review_dir / "review_list.txt").write_text("border keep\n")
        rejected = [r for r in report.assessed if r["id"] not in {k["id"] for k in kept}]
        final = apply_review(kept, rejected, review_dir / "review_list.txt")
        assert [r["id"] for r in final] == ["border"]

    def test_bad_review_line(self, tmp_path):
        path = tmp_path / "list.txt"
        path.write_text("x maybe\n")
        with pytest.raises(ValueError):
            read_review_list(path)
