#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "isarff/pipeline.hpp"
#include "isarff/render.hpp"

namespace fs = std::filesystem;
using namespace isarff;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct Common
{
  std::string config_path;
  std::vector<std::string> overrides;
  int threads{0};

  PipelineConfig load() const
  {
    std::vector<std::pair<std::string, std::string>> kv;
    if (!config_path.empty()) kv = io::parse_key_values(io::read_text(config_path));
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
      auto key = o.substr(0, eq), value = o.substr(eq + 1);
      auto it = std::find_if(kv.begin(), kv.end(), [&](const auto& p) { return p.first == key; });
      if (it != kv.end()) it->second = value;
      else kv.emplace_back(key, value);
    }
    return PipelineConfig::from_key_values(kv);
  }

  int thread_count() const
  {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("ISARFF_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) return n;
      throw ConfigError("ISARFF_THREADS must be a positive integer");
    }
    return 1;
  }
};

void add_common(CLI::App* app, Common& c)
{
  app->add_option("-c,--config", c.config_path, "flat key=value pipeline config");
  app->add_option("-s,--set", c.overrides, "override a config key (key=value)");
  app->add_option("-j,--threads", c.threads, "worker threads (default: ISARFF_THREADS or 1)")->check(CLI::PositiveNumber);
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext)
{
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntensityFrame> read_frames(const fs::path& dir)
{
  std::vector<IntensityFrame> frames;
  for (const auto& p : files_with_extension(dir, ".isari")) frames.push_back(io::read_intensity_frame(p));
  if (frames.empty()) throw ConfigError("no .isari frames in " + dir.string());
  return frames;
}

std::string frame_name(int index, const char* ext)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d.%s", index, ext);
  return buf;
}

// Frame indices marked unaligned in an alignment report.
std::vector<int> unaligned_frames(const fs::path& csv)
{
  std::istringstream in(io::read_text(csv));
  std::string line;
  std::getline(in, line);
  std::vector<int> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto status = line.substr(line.rfind(',') + 1);
    if (status == "unaligned") out.push_back(std::stoi(line.substr(0, comma)));
  }
  return out;
}

std::vector<FeatureCluster> clusters_from_csv(const std::vector<io::ClusterRow>& rows, double rho_extent)
{
  std::vector<FeatureCluster> clusters;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const int id = r.is_noise ? 0 : r.cluster_id;
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const auto& c) { return c.id == id && c.noise == r.is_noise; });
    if (it == clusters.end()) {
      clusters.push_back({id, {}, r.is_noise});
      it = clusters.end() - 1;
    }
    it->members.push_back({r.rho_px / rho_extent, r.theta_deg / 360.0, r.frame, static_cast<int>(i), false});
  }
  return clusters;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Feature detection and shadow tracking on simulated ISAR sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  fs::path in_dir, out_path, alignment, features_path, clusters_path, frame_path, map_path, aligned_dir;
  int rows = 0, cols = 0, frame_total = 0;

  auto* simulate = app.add_subcommand("simulate", "synthesise complex and dB frames");
  add_common(simulate, common);
  simulate->add_option("-o,--out", out_path, "output directory")->required();

  auto* align = app.add_subcommand("align", "align a directory of dB frames");
  add_common(align, common);
  align->add_option("-i,--in", in_dir, "directory of .isari frames")->required();
  align->add_option("-o,--out", out_path, "output directory")->required();

  auto* edges = app.add_subcommand("edges", "dump gradient magnitude, direction and mask");
  add_common(edges, common);
  edges->add_option("-i,--in", in_dir, "directory of aligned .isari frames")->required();
  edges->add_option("-o,--out", out_path, "output directory")->required();

  auto* detect = app.add_subcommand("detect", "weighted Hough line features per frame");
  add_common(detect, common);
  detect->add_option("-i,--in", in_dir, "directory of aligned .isari frames")->required();
  detect->add_option("-a,--alignment", alignment, "alignment report; unaligned frames are skipped");
  detect->add_option("-o,--out", out_path, "feature CSV")->required();

  auto* cluster = app.add_subcommand("cluster", "associate features across frames");
  add_common(cluster, common);
  cluster->add_option("-f,--features", features_path, "feature CSV")->required();
  cluster->add_option("--rows", rows, "frame rows")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--cols", cols, "frame columns")->required()->check(CLI::PositiveNumber);
  cluster->add_option("-o,--out", out_path, "output directory")->required();

  auto* analyze = app.add_subcommand("analyze", "cluster kinematics and cumulative images");
  add_common(analyze, common);
  analyze->add_option("-k,--clusters", clusters_path, "cluster CSV")->required();
  analyze->add_option("--rows", rows, "frame rows")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--cols", cols, "frame columns")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--frames", frame_total, "frames in the sequence")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--aligned", aligned_dir, "aligned frames for cumulative images");
  analyze->add_option("-o,--out", out_path, "output directory")->required();

  auto* render = app.add_subcommand("render", "overlay a feature map on a dB frame");
  render->add_option("-f,--frame", frame_path, "dB frame (.isari)")->required();
  render->add_option("-m,--map", map_path, "feature map (.fmap)")->required();
  render->add_option("-o,--out", out_path, "output image (.png or .pgm)")->required();

  auto* pipeline = app.add_subcommand("pipeline", "run every stage");
  add_common(pipeline, common);
  pipeline->add_option("-o,--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  PipelineConfig config;
  int threads = 1;
  try {
    if (!render->parsed()) {
      config = common.load();
      threads = common.thread_count();
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (pipeline->parsed()) {
      const RunManifest m = run_pipeline(config, out_path, threads);
      std::cout << m.frames << " frames, " << m.features << " features, " << m.retained_clusters
                << " retained clusters -> " << out_path.string() << '\n';
    } else if (simulate->parsed()) {
      const auto frames = simulate_sequence(config, load_model(config.model), threads);
      fs::create_directories(out_path);
      for (const auto& f : frames) {
        io::write_complex_frame(out_path / frame_name(f.frame_index, "isarc"), f);
        io::write_intensity_frame(out_path / frame_name(f.frame_index, "isari"), to_intensity(f, config.dynamic_range_db));
      }
    } else if (align->parsed()) {
      const AlignedSequence seq = align_sequence(read_frames(in_dir), config.align_options(threads));
      fs::create_directories(out_path);
      for (const auto& f : seq.frames) io::write_intensity_frame(out_path / frame_name(f.frame_index, "isari"), f);
      io::write_text(out_path / "alignment.csv", io::alignment_csv(seq));
    } else if (edges->parsed()) {
      fs::create_directories(out_path);
      for (const auto& f : read_frames(in_dir)) {
        const GradientField g = compute_gradient_field(f, config.edge_options());
        const io::RasterMeta meta{f.range_spacing, f.crossrange_spacing, f.frame_index};
        io::write_real_raster(out_path / frame_name(f.frame_index, "gradm"), io::kGradMagnitudeMagic, g.magnitude, meta);
        io::write_real_raster(out_path / frame_name(f.frame_index, "gradd"), io::kGradDirectionMagic, g.direction, meta);
        io::write_mask(out_path / frame_name(f.frame_index, "maskb"), g.mask, meta);
      }
    } else if (detect->parsed()) {
      const auto frames = read_frames(in_dir);
      std::vector<FrameStatus> status(frames.size(), FrameStatus::ok);
      if (!alignment.empty()) {
        const auto skip = unaligned_frames(alignment);
        for (std::size_t i = 0; i < frames.size(); ++i)
          if (std::find(skip.begin(), skip.end(), frames[i].frame_index) != skip.end()) status[i] = FrameStatus::unaligned;
      }
      io::write_text(out_path, io::feature_csv(detect_sequence_features(frames, status, config, threads)));
    } else if (cluster->parsed()) {
      const auto features = io::parse_feature_csv(io::read_text(features_path));
      const FeatureAnalysis a = analyse_features(features, rows, cols, config);
      fs::create_directories(out_path);
      io::write_text(out_path / "clusters.csv", io::cluster_csv(a.association.clusters, features));
      io::write_feature_map(out_path / "feature_map.fmap", a.map.labels);
      std::cout << "epsilon " << io::format_double(a.association.epsilon) << ", mu " << a.association.mu << ", "
                << a.retained.size() << " retained clusters\n";
    } else if (analyze->parsed()) {
      const auto clusters = clusters_from_csv(io::parse_cluster_csv(io::read_text(clusters_path)), rho_extent_for(rows, cols));
      const auto retained = persistence_filter(clusters, config.persist_min_frames);
      fs::create_directories(out_path);
      io::write_text(out_path / "kinematics.csv",
                     io::kinematics_csv(cluster_kinematics(retained, frame_total, config.shadow_rule())));
      if (!aligned_dir.empty()) {
        const auto frames = read_frames(aligned_dir);
        io::write_intensity_frame(out_path / "cumulative_mean.isari", cumulative_image(frames, Cumulative::mean));
        io::write_intensity_frame(out_path / "cumulative_median.isari", cumulative_image(frames, Cumulative::median));
      }
    } else if (render->parsed()) {
      const auto image = render_overlay(io::read_intensity_frame(frame_path), io::read_feature_map(map_path));
      write_overlay(out_path, image, out_path.extension() == ".pgm" ? ImageFormat::pgm : ImageFormat::png);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << '\n';
    return kExitStage;
  }
  return 0;
}
