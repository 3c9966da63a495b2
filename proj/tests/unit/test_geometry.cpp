#include "oracles.hpp"

#include "swellkit/errors.hpp"
#include "swellkit/geometry.hpp"
#include "swellkit/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace swellkit;

namespace {

BinaryMask random_mask(Rng& rng, double density) {
    const auto w = static_cast<std::uint32_t>(1 + uniform_below(rng, 64));
    const auto h = static_cast<std::uint32_t>(1 + uniform_below(rng, 64));
    BinaryMask m(w, h);
    for (std::uint32_t r = 0; r < h; ++r) {
        for (std::uint32_t c = 0; c < w; ++c) {
            if (uniform01(rng) < density) {
                m.set(r, c);
            }
        }
    }
    return m;
}

BBox random_int_box(Rng& rng) {
    return {double(uniform_below(rng, 40)), double(uniform_below(rng, 40)), double(1 + uniform_below(rng, 30)),
            double(1 + uniform_below(rng, 30))};
}

} // namespace

TEST(Iou, IdenticalBoxesGiveOne) {
    EXPECT_EQ(iou({3, 4, 10, 7}, {3, 4, 10, 7}), 1.0);
    EXPECT_EQ(iou({0.1, 0.3, 0.7, 1.9}, {0.1, 0.3, 0.7, 1.9}), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
    EXPECT_EQ(iou({0, 0, 10, 10}, {20, 0, 10, 10}), 0.0);
    EXPECT_EQ(iou({0, 0, 10, 10}, {10, 0, 10, 10}), 0.0); // touching edges
}

TEST(Iou, QuarterOverlap) {
    EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {5, 5, 10, 10}), 25.0 / 175.0);
}

TEST(Iou, ZeroAreaUnionIsZero) {
    EXPECT_EQ(iou({1, 1, 0, 0}, {1, 1, 0, 0}), 0.0);
}

TEST(Iou, MatchesCellCountingOracle) {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_int_box(rng);
        const auto b = random_int_box(rng);
        EXPECT_NEAR(iou(a, b), oracle::iou_cells(a, b), 1e-9);
    }
}

TEST(Iou, SymmetricAndBounded) {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const BBox a{100 * uniform01(rng), 100 * uniform01(rng), 50 * uniform01(rng), 50 * uniform01(rng)};
        const BBox b{100 * uniform01(rng), 100 * uniform01(rng), 50 * uniform01(rng), 50 * uniform01(rng)};
        const double v = iou(a, b);
        EXPECT_EQ(v, iou(b, a));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(Cle, ThreeFourFive) {
    EXPECT_DOUBLE_EQ(cle({0, 0, 2, 2}, {3, 4, 2, 2}), 5.0);
    EXPECT_EQ(cle({7, 7, 3, 3}, {7, 7, 3, 3}), 0.0);
}

TEST(Cle, SymmetricAndTriangleInequality) {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const BBox a{100 * uniform01(rng), 100 * uniform01(rng), 20 * uniform01(rng), 20 * uniform01(rng)};
        const BBox b{100 * uniform01(rng), 100 * uniform01(rng), 20 * uniform01(rng), 20 * uniform01(rng)};
        const BBox c{100 * uniform01(rng), 100 * uniform01(rng), 20 * uniform01(rng), 20 * uniform01(rng)};
        EXPECT_EQ(cle(a, b), cle(b, a));
        EXPECT_LE(cle(a, c), cle(a, b) + cle(b, c) + 1e-12);
    }
}

TEST(MaskToBbox, SingleBit) {
    BinaryMask m(10, 10);
    m.set(3, 5);
    const auto box = mask_to_bbox(m);
    ASSERT_TRUE(box.has_value());
    EXPECT_EQ(*box, (BBox{5, 3, 1, 1}));
}

TEST(MaskToBbox, EmptyMaskHasNoBox) {
    EXPECT_FALSE(mask_to_bbox(BinaryMask(4, 4)).has_value());
}

TEST(MaskToBbox, MatchesScanOracle) {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_mask(rng, uniform01(rng) * 0.05);
        EXPECT_EQ(mask_to_bbox(m), oracle::bbox_scan(m));
    }
}

TEST(Rle, AllForeground) {
    BinaryMask m(2, 2);
    for (std::uint32_t r = 0; r < 2; ++r) {
        for (std::uint32_t c = 0; c < 2; ++c) {
            m.set(r, c);
        }
    }
    EXPECT_EQ(rle_encode(m).counts, (std::vector<std::uint32_t>{0, 4}));
}

TEST(Rle, AllBackground) {
    EXPECT_EQ(rle_encode(BinaryMask(2, 2)).counts, (std::vector<std::uint32_t>{4}));
}

TEST(Rle, ColumnMajorOrder) {
    // 2x2 with only the bottom-left pixel set: column-major index 1.
    BinaryMask m(2, 2);
    m.set(1, 0);
    EXPECT_EQ(rle_encode(m).counts, (std::vector<std::uint32_t>{1, 1, 2}));
    // 2x2 with only the top-right pixel set: column-major index 2.
    BinaryMask n(2, 2);
    n.set(0, 1);
    EXPECT_EQ(rle_encode(n).counts, (std::vector<std::uint32_t>{2, 1, 1}));
}

TEST(Rle, MatchesPixelWalkOracle) {
    Rng rng(15);
    for (int i = 0; i < 300; ++i) {
        const auto m = random_mask(rng, uniform01(rng));
        EXPECT_EQ(rle_encode(m).counts, oracle::rle_walk(m));
    }
}

TEST(Rle, RoundTripIsBitExact) {
    Rng rng(16);
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_mask(rng, uniform01(rng));
        const auto rle = rle_encode(m);
        EXPECT_EQ(rle_decode(rle), m);
        EXPECT_EQ(rle_area(rle), m.area());
    }
}

TEST(Rle, SumMismatchIsRejected) {
    EXPECT_THROW(rle_decode({2, 2, {1, 2}}), FormatError);
    EXPECT_THROW(rle_decode({2, 2, {1, 2, 2}}), FormatError);
}

TEST(Rle, InteriorZeroRunIsRejected) {
    EXPECT_THROW(rle_decode({2, 2, {1, 0, 3}}), FormatError);
    EXPECT_THROW(rle_decode({2, 2, {4, 0}}), FormatError);
}

TEST(Rle, EmptyCountsAreRejected) {
    EXPECT_THROW(validate_rle({2, 2, {}}), FormatError);
}

TEST(Rle, LeadingZeroRunIsAllowed) {
    EXPECT_NO_THROW(validate_rle({3, 1, {0, 1, 2}}));
}

TEST(NightImage, RejectsWrongBufferSize) {
    EXPECT_THROW(NightImage(2, 2, std::vector<std::uint8_t>(11)), InvalidArgument);
}

TEST(Luma, IntegerWeights) {
    EXPECT_EQ(luma_milli(255, 255, 255), 255000u);
    EXPECT_EQ(luma_milli(20, 20, 20), 20000u);
    EXPECT_EQ(luma_milli(1, 0, 0), 299u);
}
