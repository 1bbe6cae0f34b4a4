#ifndef KMSA_DATA_IO_HPP
#define KMSA_DATA_IO_HPP

#include "kmsa/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kmsa {

namespace fs = std::filesystem;

/// Current on-disk model format. load_model rejects any other value.
inline constexpr int kModelFormatVersion = 1;

/// Reads a comma-separated numeric table, one row per line. A first row
/// whose first cell is not numeric is treated as a header and skipped.
/// Throws IoError / FormatError (with 1-based row and column on bad cells).
Matrix read_csv_matrix(const fs::path& path);

/// Writes one row per line with 17 significant digits.
void write_csv_matrix(const fs::path& path, const Matrix& m);

/// Directory of view_<k>.csv (rows are samples) and optional labels.csv.
/// Views are ordered by ascending k and transposed to D_v x N.
MultiviewDataset load_dataset(const fs::path& dir);
void save_dataset(const MultiviewDataset& data, const fs::path& dir);

std::vector<int> read_labels(const fs::path& path);
void write_labels(const fs::path& path, const std::vector<int>& labels);

struct SyntheticSpec {
  int classes = 3;
  int per_class = 20;
  int informative_views = 3;
  int noise_views = 1;
  int latent_dim = 2;
  double noise_scale = 0.5;
  std::uint64_t seed = 0;
  int view_dim = 10;          // features per view
  double center_spread = 3.0;  // std-dev of latent class centers
};

/// Class-structured latent points pushed through one random linear map per
/// informative view plus Gaussian noise; noise views are label-independent
/// Gaussian noise. Deterministic given the seed.
MultiviewDataset generate_synthetic(const SyntheticSpec& spec);

nlohmann::json config_to_json(const KmsaConfig& cfg);

/// Keys missing from `j` keep the values of `base`. Throws FormatError on
/// unknown keys or wrong types.
KmsaConfig config_from_json(const nlohmann::json& j,
                            const KmsaConfig& base = KmsaConfig{});

KmsaConfig load_config(const fs::path& path);
void save_config(const KmsaConfig& cfg, const fs::path& path);

/// Model directory: manifest.json (format version, config, alpha, objective
/// trace, per-view kernel), U_<v>.csv, embedding_<v>.csv, and the training
/// data needed for out-of-sample transforms.
void save_model(const KmsaModel& model, const fs::path& dir);
KmsaModel load_model(const fs::path& dir);

/// Writes `j` with sorted keys, two-space indent and a trailing newline.
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

/// %.17g formatting; reads back to the same double.
std::string format_double(double x);

}  // namespace kmsa

#endif  // KMSA_DATA_IO_HPP
