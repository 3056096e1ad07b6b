#pragma once

// Published experiment results bundled as CSV text so every check runs offline.
// Parameter counts were not published and are left empty.

#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "tlselect/csv_io.hpp"
#include "tlselect/protocol.hpp"

namespace tlselect::fixtures {

/// Stage 1: base architectures under rmsprop + categorical cross-entropy.
inline constexpr std::string_view kTable1Runs = R"(model,overfitting,val_accuracy,val_loss,sensitivity,specificity,params
Xception,0.0952,0.9008,0.3468,0.9407,0.8603,
Resnet50,0.0914,0.8925,1.4468,0.9613,0.8227,
Resnet50V2,0.1296,0.8219,0.792,0.9355,0.7066,
Resnet101,0.0968,0.8921,1.1475,0.9355,0.848,
Resnet101V2,0.1165,0.8618,0.7693,0.9226,0.8,
Resnet152,0.0892,0.8938,1.5941,0.8942,0.8934,
Resnet152V2,0.1064,0.8826,0.4262,0.9011,0.8638,
VGG16,0.0699,0.7552,2.2893,0.7498,0.7607,
VGG19,0.0751,0.7171,2.5212,0.5701,0.8664,
InceptionV3,0.0890,0.7773,0.457,0.8426,0.7109,
InceptionResNetV2,0.1004,0.7409,0.6184,0.6578,0.8253,
MobileNet,0.1202,0.8228,2.1897,0.9733,0.6699,
DenseNet121,0.0776,0.8193,0.7664,0.6939,0.9467,
DenseNet169,0.0438,0.6551,2.2782,0.3336,0.9817,
DenseNet201,0.0323,0.6937,4.342,0.7455,0.641,
NASNetLarge,0.0363,0.6308,3.2208,0.6784,0.5825,
NASNetMobile,0.0131,0.5789,2.9431,0.2614,0.9013,
)";

/// Published final ranks for kTable1Runs, in row order.
inline constexpr std::size_t kTable1Ranks[] = {1, 2, 16, 6, 10, 3, 7, 8, 13, 5, 17, 15, 4, 11, 9, 14, 12};

/// Stage 2: optimizer/loss pairs on the Xception base.
inline constexpr std::string_view kTable2Runs = R"(model,overfitting,val_accuracy,val_loss,sensitivity,specificity,params
"RMS, CCE",0.1395,0.8098,0.6115,0.9587,0.6588,
"RMS, MSE",0.1118,0.8544,0.1195,0.8521,0.8568,
"RMS, MAE",0.0890,0.8011,0.2032,0.7325,0.8707,
"Adam, CCE",0.1097,0.8817,0.3780,0.9251,0.8399,
"Adam, MSE",0.0846,0.9015,0.0925,0.9413,0.8560,
"Adam, MAE",0.0783,0.8219,0.1827,0.8667,0.7222,
"Adagrad, CCE",0.1040,0.8528,0.3540,0.8418,0.8629,
"Adagrad, MSE",0.1158,0.8133,0.1416,0.9036,0.7213,
"Adagrad, MAE",0.0787,0.7595,0.2440,0.7825,0.7362,
)";

inline constexpr std::size_t kTable2Ranks[] = {9, 3, 7, 4, 1, 2, 5, 8, 6};

/// Xception trained from randomly initialized weights.
inline constexpr std::string_view kBaselineRuns = R"(model,overfitting,val_accuracy,val_loss,sensitivity,specificity,params
Baseline,0.0223,0.5841,0.6948,0.4996,0.6699,
)";

/// Validation vs held-out test metrics of the selected model (Xception + Adam + MSE).
inline constexpr std::string_view kGeneralization = R"(split,accuracy,sensitivity,specificity
val,0.9015,0.9413,0.8560
test,0.8748,0.8952,0.8561
)";

inline std::vector<RunRecord> table1() { return csv::parse_runs(kTable1Runs, "table1_runs.csv"); }
inline std::vector<RunRecord> table2() { return csv::parse_runs(kTable2Runs, "table2_runs.csv"); }
inline RunRecord baseline() { return csv::parse_runs(kBaselineRuns, "baseline.csv").front(); }
inline csv::ValTestTriples generalization() { return csv::parse_triples(kGeneralization, "generalization.csv"); }

/// File name and contents of every bundled fixture.
inline std::vector<std::pair<std::string_view, std::string_view>> files() {
  return {{"table1_runs.csv", kTable1Runs},
          {"table2_runs.csv", kTable2Runs},
          {"baseline.csv", kBaselineRuns},
          {"generalization.csv", kGeneralization}};
}

/// Writes the bundled fixtures (plus stage1.json / stage2.json configs) into `dir`.
/// Returns the paths written.
inline std::vector<std::filesystem::path> write_all(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files()) {
    written.push_back(dir / name);
    csv::detail::write_text(written.back(), content);
  }
  written.push_back(dir / "stage1.json");
  csv::detail::write_text(written.back(), to_json(stage1_config()).dump(2) + "\n");
  written.push_back(dir / "stage2.json");
  csv::detail::write_text(written.back(), to_json(stage2_config()).dump(2) + "\n");
  return written;
}

}  // namespace tlselect::fixtures
