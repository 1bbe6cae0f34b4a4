#include "kmsa/config.hpp"
#include "kmsa/errors.hpp"
#include "kmsa/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

namespace kmsa {
namespace {

MultiviewDataset small_dataset(int m = 3, Index n = 20) {
  MultiviewDataset data;
  for (int v = 0; v < m; ++v) {
    data.views.push_back(Matrix::Random(4 + v, n));
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
  data.labels = labels;
  return data;
}

ConfigError expect_config_error(const KmsaConfig& cfg, const MultiviewDataset& data) {
  try {
    validate_config(cfg, data);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "validate_config did not throw";
  return ConfigError({});
}

TEST(ValidateConfig, ValidThreeViewConfigPasses) {
  KmsaConfig cfg;
  cfg.d = 5;
  EXPECT_NO_THROW(validate_config(cfg, small_dataset(3, 20)));
}

TEST(ValidateConfig, ExponentOfOneRejected) {
  KmsaConfig cfg;
  cfg.r = 1.0;
  const ConfigError e = expect_config_error(cfg, small_dataset());
  ASSERT_EQ(e.violations().size(), 1u);
  EXPECT_EQ(e.violations()[0].reason, ConfigReason::kExponentTooSmall);
  EXPECT_NE(std::string(e.what()).find("r must exceed 1"), std::string::npos);
}

TEST(ValidateConfig, PositiveEtaRejected) {
  KmsaConfig cfg;
  cfg.eta = 1.0;
  const ConfigError e = expect_config_error(cfg, small_dataset());
  ASSERT_EQ(e.violations().size(), 1u);
  EXPECT_EQ(e.violations()[0].reason, ConfigReason::kEtaNotNegative);
  EXPECT_NE(std::string(e.what()).find("eta must be negative"), std::string::npos);
}

TEST(ValidateConfig, ErrorKindIsConfig) {
  KmsaConfig cfg;
  cfg.kappa = -1.0;
  EXPECT_EQ(expect_config_error(cfg, small_dataset()).kind(), ErrorKind::kConfig);
}

struct SingleViolation {
  const char* name;
  ConfigReason reason;
  std::function<void(KmsaConfig&, MultiviewDataset&)> apply;
};

void PrintTo(const SingleViolation& s, std::ostream* os) { *os << s.name; }

class OneViolation : public ::testing::TestWithParam<SingleViolation> {};

TEST_P(OneViolation, ReportsExactlyThatReason) {
  KmsaConfig cfg;
  MultiviewDataset data = small_dataset();
  GetParam().apply(cfg, data);
  const ConfigError e = expect_config_error(cfg, data);
  ASSERT_EQ(e.violations().size(), 1u) << e.what();
  EXPECT_EQ(e.violations()[0].reason, GetParam().reason);
  EXPECT_TRUE(e.has(GetParam().reason));
  EXPECT_NE(std::string(e.what()).find(to_string(GetParam().reason)), std::string::npos);
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

INSTANTIATE_TEST_SUITE_P(
    EveryReason, OneViolation,
    ::testing::Values(
        SingleViolation{"NoViews", ConfigReason::kNoViews,
                        [](KmsaConfig&, MultiviewDataset& d) {
                          d.views.clear();
                          d.labels.reset();
                        }},
        SingleViolation{"TooFewSamples", ConfigReason::kTooFewSamples,
                        [](KmsaConfig& c, MultiviewDataset& d) {
                          d = small_dataset(2, 1);
                          c.d = 1;
                        }},
        SingleViolation{"SampleCountMismatch", ConfigReason::kSampleCountMismatch,
                        [](KmsaConfig&, MultiviewDataset& d) {
                          d.views[1] = Matrix::Random(3, 19);
                        }},
        SingleViolation{"EmptyView", ConfigReason::kEmptyView,
                        [](KmsaConfig&, MultiviewDataset& d) { d.views[2].resize(0, 20); }},
        SingleViolation{"NonFinite", ConfigReason::kNonFiniteFeature,
                        [](KmsaConfig&, MultiviewDataset& d) { d.views[0](1, 1) = kNaN; }},
        SingleViolation{"LabelCount", ConfigReason::kLabelCountMismatch,
                        [](KmsaConfig&, MultiviewDataset& d) { d.labels->pop_back(); }},
        SingleViolation{"ViewNames", ConfigReason::kViewNameCountMismatch,
                        [](KmsaConfig&, MultiviewDataset& d) { d.view_names = {"a"}; }},
        SingleViolation{"DimensionZero", ConfigReason::kDimensionNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) { c.d = 0; }},
        SingleViolation{"DimensionTooLarge", ConfigReason::kDimensionExceedsSamples,
                        [](KmsaConfig& c, MultiviewDataset&) { c.d = 21; }},
        SingleViolation{"Exponent", ConfigReason::kExponentTooSmall,
                        [](KmsaConfig& c, MultiviewDataset&) { c.r = 0.5; }},
        SingleViolation{"Kappa", ConfigReason::kKappaNegative,
                        [](KmsaConfig& c, MultiviewDataset&) { c.kappa = -0.1; }},
        SingleViolation{"EtaZero", ConfigReason::kEtaNotNegative,
                        [](KmsaConfig& c, MultiviewDataset&) { c.eta = 0.0; }},
        SingleViolation{"MaxIters", ConfigReason::kMaxItersNegative,
                        [](KmsaConfig& c, MultiviewDataset&) { c.max_iters = -1; }},
        SingleViolation{"Tol", ConfigReason::kTolNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) { c.tol = 0.0; }},
        SingleViolation{"Ridge", ConfigReason::kRidgeNegative,
                        [](KmsaConfig& c, MultiviewDataset&) { c.ridge = -1e-3; }},
        SingleViolation{"KernelCount", ConfigReason::kKernelCountMismatch,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.kernel = {KernelSpec::linear(), KernelSpec::linear()};
                        }},
        SingleViolation{"Bandwidth", ConfigReason::kBandwidthNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.kernel = {KernelSpec::gaussian(0.0)};
                        }},
        SingleViolation{"PolyDegree", ConfigReason::kPolyDegreeInvalid,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.kernel = {KernelSpec::polynomial(0, 1.0)};
                        }},
        SingleViolation{"PolyOffset", ConfigReason::kPolyOffsetNegative,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.kernel = {KernelSpec::polynomial(2, -1.0)};
                        }},
        SingleViolation{"GraphCount", ConfigReason::kGraphCountMismatch,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.graph = {GraphRecipe::pca(), GraphRecipe::pca()};
                        }},
        SingleViolation{"LppNeighbors", ConfigReason::kLppNeighborsInvalid,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.graph = {GraphRecipe::lpp(20, 1.0)};
                        }},
        SingleViolation{"LppHeat", ConfigReason::kLppHeatNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.graph = {GraphRecipe::lpp(3, 0.0)};
                        }},
        SingleViolation{"LdaLabels", ConfigReason::kLdaRequiresLabels,
                        [](KmsaConfig& c, MultiviewDataset& d) {
                          c.graph = {GraphRecipe::lda()};
                          d.labels.reset();
                        }},
        SingleViolation{"SppLambda", ConfigReason::kSppLambdaNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.graph = {GraphRecipe::spp(0.0)};
                        }},
        SingleViolation{"SppIters", ConfigReason::kSppItersNotPositive,
                        [](KmsaConfig& c, MultiviewDataset&) {
                          c.graph = {GraphRecipe::spp(0.1, 0)};
                        }}),
    [](const ::testing::TestParamInfo<SingleViolation>& info) { return info.param.name; });

TEST(ValidateConfig, CollectsEveryViolation) {
  KmsaConfig cfg;
  cfg.r = 1.0;
  cfg.eta = 2.0;
  cfg.d = 0;
  const ConfigError e = expect_config_error(cfg, small_dataset());
  EXPECT_EQ(e.violations().size(), 3u);
  EXPECT_TRUE(e.has(ConfigReason::kExponentTooSmall));
  EXPECT_TRUE(e.has(ConfigReason::kEtaNotNegative));
  EXPECT_TRUE(e.has(ConfigReason::kDimensionNotPositive));
}

TEST(ValidateConfig, IsPure) {
  KmsaConfig cfg;
  cfg.r = 0.9;
  const MultiviewDataset data = small_dataset();
  const auto a = config_violations(cfg, data);
  const auto b = config_violations(cfg, data);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].reason, b[i].reason);
    EXPECT_EQ(a[i].message, b[i].message);
  }
}

TEST(ValidateConfig, ZeroIterationsAllowed) {
  KmsaConfig cfg;
  cfg.max_iters = 0;
  EXPECT_NO_THROW(validate_config(cfg, small_dataset()));
}

TEST(KmsaConfig, DefaultsMatchReferenceHyperparameters) {
  const KmsaConfig cfg;
  EXPECT_EQ(cfg.r, 3.0);
  EXPECT_EQ(cfg.kappa, 0.1);
  EXPECT_EQ(cfg.eta, -1.0);
  EXPECT_EQ(cfg.max_iters, 30);
  EXPECT_EQ(cfg.tol, 1e-6);
  EXPECT_FALSE(cfg.center_kernel);
}

TEST(KmsaConfig, SingleEntryListsBroadcast) {
  KmsaConfig cfg;
  cfg.kernel = {KernelSpec::linear()};
  cfg.graph = {GraphRecipe::lda(), GraphRecipe::pca(), GraphRecipe::lpp(3, 2.0)};
  EXPECT_EQ(cfg.kernel_for(2).kind, KernelKind::kLinear);
  EXPECT_EQ(cfg.graph_for(0).kind, GraphKind::kLda);
  EXPECT_EQ(cfg.graph_for(2).neighbors, 3);
}

TEST(MultiviewDataset, SubsetPicksColumnsAndLabels) {
  MultiviewDataset data = small_dataset(2, 6);
  const MultiviewDataset sub = data.subset({4, 1});
  EXPECT_EQ(sub.num_samples(), 2);
  EXPECT_EQ(sub.views[1].col(0), data.views[1].col(4));
  EXPECT_EQ((*sub.labels)[1], (*data.labels)[1]);
  EXPECT_THROW(data.subset({6}), DimensionError);
}

TEST(Names, RoundTrip) {
  for (GraphKind k : {GraphKind::kPca, GraphKind::kLpp, GraphKind::kLda, GraphKind::kSpp}) {
    EXPECT_EQ(parse_graph_kind(to_string(k)), k);
  }
  for (KernelKind k : {KernelKind::kGaussian, KernelKind::kLinear, KernelKind::kPolynomial}) {
    EXPECT_EQ(parse_kernel_kind(to_string(k)), k);
  }
  for (WeightDomain w : {WeightDomain::kShift, WeightDomain::kClamp}) {
    EXPECT_EQ(parse_weight_domain(to_string(w)), w);
  }
  EXPECT_FALSE(parse_graph_kind("ica").has_value());
}

}  // namespace
}  // namespace kmsa
