#include <gtest/gtest.h>

#include "caelo/config.hpp"
#include "caelo/error.hpp"

namespace caelo {
namespace {

TEST(Config, DefaultsMatchPublishedSettings) {
  const Config c;
  EXPECT_EQ(c.delta_alpha_deg, 0.2);
  EXPECT_EQ(c.delta_beta_deg, 0.4254);
  EXPECT_EQ(c.beta_down_deg, -24.8);
  EXPECT_EQ(c.ring_rows, 69);
  EXPECT_EQ(c.ring_params().cols, 1800);
  EXPECT_EQ(c.detector.h, 2);
  EXPECT_EQ(c.detector.n_max, 1024u);
  EXPECT_EQ(c.detector.sigma_min, 10.0);
  EXPECT_EQ(c.detector.eip_half, 7);
  EXPECT_EQ(c.voxel_resolutions().size(1), 0.16);
  EXPECT_EQ(c.ransac.inlier_threshold, 1.0);
  EXPECT_EQ(c.ransac.min_iterations, 100);
  EXPECT_EQ(c.ransac.max_iterations, 10000);
  EXPECT_EQ(c.icp.max_iterations, 50);
  EXPECT_EQ(c.train.adam.lr, 1e-3);
  EXPECT_EQ(c.train.batch, 32);
  EXPECT_EQ(c.train.epochs, 10);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FormattedTextRoundTrips) {
  Config c;
  c.detector.delta = 0.125;
  c.ransac.seed = 42;
  c.paths.truth = "poses/00.txt";
  c.normalize_features = true;
  c.icp.decay = 0.95;
  for (bool annotate : {false, true}) {
    const std::string text = format_config(c, annotate);
    EXPECT_EQ(text.rfind("caelo-config 1\n", 0), 0u);
    EXPECT_EQ(format_config(parse_config(text), annotate), text);
  }
  const std::string annotated = format_config(c, true);
  EXPECT_NE(annotated.find("[published setting]"), std::string::npos);
  EXPECT_NE(annotated.find("[toolkit choice]"), std::string::npos);
}

TEST(Config, ParsesCommentsAndBlankLines) {
  const Config c = parse_config("caelo-config 1\n\n# comment\ndetect.h = 3   # trailing\nrun.threads=4\n");
  EXPECT_EQ(c.detector.h, 3);
  EXPECT_EQ(c.threads, 4);
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config("caelo-config 1\ndetect.h = 2\nbogus.key = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("caelo-config 1\ndetect.h = two\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_config("detect.h = 2\n"), ParseError);
  EXPECT_THROW(parse_config("caelo-config 2\n"), ParseError);
  EXPECT_THROW(parse_config("caelo-config 1\nno equals sign\n"), ParseError);
}

TEST(Config, OverridesAndValidation) {
  Config c;
  apply_override(c, "ransac.seed=7");
  apply_override(c, "ring.crop_row_offset = 0");
  apply_override(c, "describe.normalize=true");
  EXPECT_EQ(c.ransac.seed, 7u);
  EXPECT_EQ(c.crop.row_offset, 0);
  EXPECT_TRUE(c.normalize_features);
  EXPECT_THROW(apply_override(c, "ransac.seed"), ParseError);
  EXPECT_THROW(apply_override(c, "nope=1"), ParseError);
  c.crop.rows = 70;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = Config{};
  c.patch_size = 10;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace caelo
