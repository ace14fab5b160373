#include "isarff/pipeline.hpp"

#include <chrono>
#include <cstdio>

#include "json.hpp"

#include "isarff/parallel.hpp"
#include "isarff/render.hpp"

namespace isarff {

namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::to_json() const
{
  nlohmann::ordered_json j;
  j["version"] = version;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  auto& hashes = j["input_hashes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : input_hashes) hashes[k] = v;
  j["frames"] = frames;
  j["mu"] = mu;
  j["epsilon"] = epsilon;
  j["frame_scale"] = frame_scale;
  j["rho_extent"] = rho_extent;
  j["features"] = features;
  j["clusters"] = clusters;
  j["retained_clusters"] = retained_clusters;
  auto& t = j["timings_s"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : timings_s) t[k] = v;
  return j.dump(2) + "\n";
}

ScattererModel load_model(const std::string& spec)
{
  if (spec.rfind("builtin:", 0) == 0) return builtin_model(spec.substr(8));
  return io::read_model_csv(spec);
}

std::vector<ComplexFrame> simulate_sequence(const PipelineConfig& config, const ScattererModel& model, int threads)
{
  const auto apertures = frame_apertures(config.encounter);
  std::vector<ComplexFrame> frames(apertures.size());
  const VisibilityRule rule{config.visibility_exponent};
  const auto f = frequency_axis(config.encounter.centre_frequency_hz, config.encounter.bandwidth_hz,
                                config.encounter.frequency_samples);
  const auto a = angle_axis(deg2rad(config.encounter.integration_angle_deg), config.encounter.angle_samples_per_frame);
  parallel_for(apertures.size(), threads, [&](std::size_t i) {
    try {
      const auto projected = project_scatterers(model, apertures[i], rule);
      frames[i] = form_image(backscatter_field(projected, f, a), config.window, config.zero_pad_factor);
      frames[i].frame_index = apertures[i].index;
    } catch (const Error& e) {
      throw StageError("simulate", apertures[i].index, e.what());
    }
  });
  return frames;
}

std::vector<LineFeature> detect_frame_features(const IntensityFrame& frame, const PipelineConfig& config,
                                               int hough_threads)
{
  const GradientField field = compute_gradient_field(frame, config.edge_options());
  const HoughAccumulator acc =
      weighted_hough(field.mask, field.magnitude, field.direction, config.hough_options(hough_threads), config.theta_bins);
  std::vector<LineFeature> out;
  for (const HoughPeak& peak : detect_peaks(acc, config.peak_options())) {
    auto segments = localize_feature(field.mask, peak.rho, peak.theta_deg, config.localize_options());
    if (segments.empty()) continue;
    out.push_back({peak.rho, peak.theta_deg, peak.strength, std::move(segments), frame.frame_index});
  }
  return out;
}

std::vector<LineFeature> detect_sequence_features(const std::vector<IntensityFrame>& frames,
                                                  const std::vector<FrameStatus>& status,
                                                  const PipelineConfig& config, int threads)
{
  std::vector<std::vector<LineFeature>> per_frame(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t i) {
    if (i < status.size() && status[i] != FrameStatus::ok) return;
    try {
      per_frame[i] = detect_frame_features(frames[i], config);
    } catch (const Error& e) {
      throw StageError("detect", frames[i].frame_index, e.what());
    }
  });
  std::vector<LineFeature> all;
  for (auto& v : per_frame) all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return all;
}

FeatureAnalysis analyse_features(const std::vector<LineFeature>& features, Eigen::Index rows, Eigen::Index cols,
                                 const PipelineConfig& config)
{
  FeatureAnalysis out;
  const double extent = rho_extent_for(rows, cols);
  out.association = associate_features(features, extent, config.cluster_options());
  out.retained = persistence_filter(out.association.clusters, config.persist_min_frames);
  out.map = reconstruct_feature_map(out.retained, features, rows, cols, extent);
  return out;
}

std::vector<io::KinematicsRow> cluster_kinematics(const std::vector<FeatureCluster>& retained, int frame_total,
                                                  const ShadowRule& rule)
{
  std::vector<io::KinematicsRow> rows;
  const double scale = frame_scale_for(frame_total);
  for (const auto& c : retained) {
    if (c.noise) continue;
    io::KinematicsRow row{c.id, {}, Label::indeterminate};
    try {
      row.kinematics = cluster_pca(c, scale);
      row.label = classify_shadow(row.kinematics, rule);
    } catch (const InsufficientDataError&) {
      row.kinematics.frame_count = c.frame_count();
      row.kinematics.variance_fraction = 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string frame_name(int index, const char* ext)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d.%s", index, ext);
  return buf;
}

class Stopwatch
{
public:
  explicit Stopwatch(RunManifest& m) : manifest_(m), last_(clock::now()) {}
  void lap(const char* stage)
  {
    const auto now = clock::now();
    manifest_.timings_s.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

private:
  using clock = std::chrono::steady_clock;
  RunManifest& manifest_;
  clock::time_point last_;
};

// Stage wrapper: library errors become StageError tagged with the stage name.
template <typename Fn>
auto stage(const char* name, Fn&& fn)
{
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, -1, e.what());
  } catch (const std::exception& e) {
    throw StageError(name, -1, e.what());
  }
}

RunManifest run_into(const PipelineConfig& config, const fs::path& dir, int threads)
{
  RunManifest manifest;
  manifest.config = config.to_key_values();
  Stopwatch watch(manifest);

  const std::string config_text = config.to_text();
  io::write_text(dir / "config.txt", config_text);
  manifest.input_hashes.emplace_back("config", fnv1a_hex(config_text));

  const ScattererModel model = stage("load_model", [&] { return load_model(config.model); });
  const std::string model_bytes =
      config.model.rfind("builtin:", 0) == 0 ? config.model : io::read_text(config.model);
  manifest.input_hashes.emplace_back("model", fnv1a_hex(model_bytes));

  // simulate
  const auto complex_frames = simulate_sequence(config, model, threads);
  if (complex_frames.empty()) throw StageError("simulate", -1, "encounter yields no frames");
  std::vector<IntensityFrame> frames(complex_frames.size());
  stage("simulate", [&] {
    fs::create_directories(dir / "frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      frames[i] = to_intensity(complex_frames[i], config.dynamic_range_db);
      io::write_complex_frame(dir / "frames" / frame_name(frames[i].frame_index, "isarc"), complex_frames[i]);
      io::write_intensity_frame(dir / "frames" / frame_name(frames[i].frame_index, "isari"), frames[i]);
    }
    return 0;
  });
  manifest.frames = static_cast<int>(frames.size());
  watch.lap("simulate");

  // align
  const AlignedSequence aligned = stage("align", [&] { return align_sequence(frames, config.align_options(threads)); });
  stage("align", [&] {
    fs::create_directories(dir / "aligned");
    for (const auto& f : aligned.frames)
      io::write_intensity_frame(dir / "aligned" / frame_name(f.frame_index, "isari"), f);
    io::write_text(dir / "alignment.csv", io::alignment_csv(aligned));
    return 0;
  });
  watch.lap("align");

  // edges, Hough, localisation
  if (config.dump_gradients) {
    stage("edges", [&] {
      fs::create_directories(dir / "gradients");
      for (std::size_t i = 0; i < aligned.frames.size(); ++i) {
        const auto& f = aligned.frames[i];
        const GradientField g = compute_gradient_field(f, config.edge_options());
        const io::RasterMeta meta{f.range_spacing, f.crossrange_spacing, f.frame_index};
        io::write_real_raster(dir / "gradients" / frame_name(f.frame_index, "gradm"), io::kGradMagnitudeMagic,
                              g.magnitude, meta);
        io::write_real_raster(dir / "gradients" / frame_name(f.frame_index, "gradd"), io::kGradDirectionMagic,
                              g.direction, meta);
        io::write_mask(dir / "gradients" / frame_name(f.frame_index, "maskb"), g.mask, meta);
      }
      return 0;
    });
    watch.lap("edges");
  }
  const auto features = detect_sequence_features(aligned.frames, aligned.status, config, threads);
  stage("detect", [&] {
    io::write_text(dir / "features.csv", io::feature_csv(features));
    return 0;
  });
  manifest.features = static_cast<int>(features.size());
  watch.lap("detect");

  // association and persistence
  const Eigen::Index rows = aligned.frames.front().pixels.rows();
  const Eigen::Index cols = aligned.frames.front().pixels.cols();
  const FeatureAnalysis analysis = stage("cluster", [&] { return analyse_features(features, rows, cols, config); });
  stage("cluster", [&] {
    io::write_text(dir / "clusters.csv", io::cluster_csv(analysis.association.clusters, features));
    io::write_feature_map(dir / "feature_map.fmap", analysis.map.labels);
    return 0;
  });
  manifest.mu = analysis.association.mu;
  manifest.epsilon = analysis.association.epsilon;
  manifest.rho_extent = analysis.association.rho_extent;
  for (const auto& c : analysis.association.clusters) manifest.clusters += c.noise ? 0 : 1;
  manifest.retained_clusters = static_cast<int>(analysis.retained.size());
  watch.lap("cluster");

  // kinematics
  manifest.frame_scale = frame_scale_for(manifest.frames);
  const auto kinematics = stage("analyze", [&] {
    return cluster_kinematics(analysis.retained, manifest.frames, config.shadow_rule());
  });
  stage("analyze", [&] {
    io::write_text(dir / "kinematics.csv", io::kinematics_csv(kinematics));
    return 0;
  });
  watch.lap("analyze");

  // cumulative images and overlay
  stage("render", [&] {
    const IntensityFrame mean = cumulative_image(aligned.frames, Cumulative::mean);
    const IntensityFrame median = cumulative_image(aligned.frames, Cumulative::median);
    io::write_intensity_frame(dir / "cumulative_mean.isari", mean);
    io::write_intensity_frame(dir / "cumulative_median.isari", median);
    const bool png = config.overlay_format == "png";
    write_overlay(dir / (png ? "overlay.png" : "overlay.pgm"), render_overlay(mean, analysis.map.labels),
                  png ? ImageFormat::png : ImageFormat::pgm);
    return 0;
  });
  watch.lap("render");

  io::write_text(dir / "manifest.json", manifest.to_json());
  return manifest;
}

} // namespace

RunManifest run_pipeline(const PipelineConfig& config, const fs::path& out_dir, int threads)
{
  config.validate();
  const fs::path target = fs::absolute(out_dir).lexically_normal();
  if (fs::exists(target) && !fs::is_directory(target))
    throw ConfigError("output path exists and is not a directory: " + target.string());
  if (fs::exists(target) && !fs::is_empty(target) && !fs::exists(target / "manifest.json"))
    throw ConfigError("output directory is not empty and holds no previous run: " + target.string());

  fs::path staging = target;
  staging += ".staging";
  fs::remove_all(staging);
  fs::create_directories(staging);
  RunManifest manifest;
  try {
    manifest = run_into(config, staging, threads);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(target);
  fs::rename(staging, target);
  return manifest;
}

} // namespace isarff
