#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "isarff/config.hpp"
#include "isarff/io.hpp"

namespace isarff {

inline constexpr const char* kToolVersion = "0.1.0";

/// A stage failure, tagged with the stage name and the frame it hit (-1 when the
/// stage works on the whole sequence).
struct StageError : Error
{
  StageError(std::string stage_name, int frame, const std::string& what)
      : Error(stage_name + (frame >= 0 ? " (frame " + std::to_string(frame) + ")" : std::string()) + ": " + what),
        stage(std::move(stage_name)), frame_index(frame)
  {
  }
  std::string stage;
  int frame_index;
};

struct RunManifest
{
  std::vector<std::pair<std::string, std::string>> config; // every parameter, defaults included
  std::string version{kToolVersion};
  std::vector<std::pair<std::string, std::string>> input_hashes;
  std::vector<std::pair<std::string, double>> timings_s;
  int frames{0};
  int mu{0};
  double epsilon{0.0};
  double frame_scale{1.0};
  double rho_extent{1.0};
  int features{0};
  int clusters{0};
  int retained_clusters{0};

  std::string to_json() const;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

ScattererModel load_model(const std::string& spec);

std::vector<ComplexFrame> simulate_sequence(const PipelineConfig& config, const ScattererModel& model, int threads);

/// Edges, weighted Hough, peaks and segment localisation on one aligned frame.
std::vector<LineFeature> detect_frame_features(const IntensityFrame& frame, const PipelineConfig& config,
                                               int hough_threads = 1);

std::vector<LineFeature> detect_sequence_features(const std::vector<IntensityFrame>& frames,
                                                  const std::vector<FrameStatus>& status,
                                                  const PipelineConfig& config, int threads);

/// Clustering, persistence filtering and the reconstructed map.
struct FeatureAnalysis
{
  Association association;
  std::vector<FeatureCluster> retained;
  FeatureMap map;
};

FeatureAnalysis analyse_features(const std::vector<LineFeature>& features, Eigen::Index rows, Eigen::Index cols,
                                 const PipelineConfig& config);

std::vector<io::KinematicsRow> cluster_kinematics(const std::vector<FeatureCluster>& retained, int frame_total,
                                                  const ShadowRule& rule);

RunManifest run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir, int threads = 1);

} // namespace isarff
