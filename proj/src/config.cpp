#include "isarff/config.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "isarff/io.hpp"

namespace isarff {

namespace {

double parse_real(const std::string& key, const std::string& v)
{
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out))
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v)
{
  const double d = parse_real(key, v);
  if (d != std::floor(d)) throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v)
{
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ConfigError("config key '" + key + "': expected 0/1/true/false, got '" + v + "'");
}

struct Field
{
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
Field real_field(T PipelineConfig::*member)
{
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.*member = parse_real(k, v); },
          [member](const PipelineConfig& c) { return io::format_double(c.*member); }};
}

Field int_field(int PipelineConfig::*member)
{
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.*member = parse_int(k, v); },
          [member](const PipelineConfig& c) { return std::to_string(c.*member); }};
}

Field bool_field(bool PipelineConfig::*member)
{
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.*member = parse_bool(k, v); },
          [member](const PipelineConfig& c) { return std::string(c.*member ? "1" : "0"); }};
}

template <typename T>
Field enc_real(T EncounterConfig::*member)
{
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.encounter.*member = parse_real(k, v); },
          [member](const PipelineConfig& c) { return io::format_double(c.encounter.*member); }};
}

Field enc_int(int EncounterConfig::*member)
{
  return {[member](PipelineConfig& c, const std::string& k, const std::string& v) { c.encounter.*member = parse_int(k, v); },
          [member](const PipelineConfig& c) { return std::to_string(c.encounter.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields()
{
  static const std::vector<std::pair<std::string, Field>> table = {
      {"centre_frequency_hz", enc_real(&EncounterConfig::centre_frequency_hz)},
      {"bandwidth_hz", enc_real(&EncounterConfig::bandwidth_hz)},
      {"frequency_samples", enc_int(&EncounterConfig::frequency_samples)},
      {"angle_samples_per_frame", enc_int(&EncounterConfig::angle_samples_per_frame)},
      {"total_aspect_span_deg", enc_real(&EncounterConfig::total_aspect_span_deg)},
      {"integration_angle_deg", enc_real(&EncounterConfig::integration_angle_deg)},
      {"grazing_start_deg", enc_real(&EncounterConfig::grazing_start_deg)},
      {"grazing_end_deg", enc_real(&EncounterConfig::grazing_end_deg)},
      {"model",
       {[](PipelineConfig& c, const std::string&, const std::string& v) { c.model = v; },
        [](const PipelineConfig& c) { return c.model; }}},
      {"window",
       {[](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v == "none") c.window = Window::none;
          else if (v == "hanning") c.window = Window::hanning;
          else throw ConfigError("config key '" + k + "': expected none or hanning, got '" + v + "'");
        },
        [](const PipelineConfig& c) { return std::string(c.window == Window::none ? "none" : "hanning"); }}},
      {"zero_pad_factor", int_field(&PipelineConfig::zero_pad_factor)},
      {"dynamic_range_db", real_field(&PipelineConfig::dynamic_range_db)},
      {"visibility_exponent", real_field(&PipelineConfig::visibility_exponent)},
      {"min_area", int_field(&PipelineConfig::min_area)},
      {"enable_shear", bool_field(&PipelineConfig::enable_shear)},
      {"interp",
       {[](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v == "nearest") c.interp = Interp::nearest;
          else if (v == "bilinear") c.interp = Interp::bilinear;
          else throw ConfigError("config key '" + k + "': expected nearest or bilinear, got '" + v + "'");
        },
        [](const PipelineConfig& c) { return std::string(c.interp == Interp::nearest ? "nearest" : "bilinear"); }}},
      {"b", real_field(&PipelineConfig::b)},
      {"sigma_dir_deg", real_field(&PipelineConfig::sigma_dir_deg)},
      {"theta_bins", int_field(&PipelineConfig::theta_bins)},
      {"min_fraction", real_field(&PipelineConfig::min_fraction)},
      {"nhood_rho", int_field(&PipelineConfig::nhood_rho)},
      {"nhood_theta", int_field(&PipelineConfig::nhood_theta)},
      {"gap_tolerance", real_field(&PipelineConfig::gap_tolerance)},
      {"min_length", real_field(&PipelineConfig::min_length)},
      {"mu", int_field(&PipelineConfig::mu)},
      {"epsilon",
       {[](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v == "auto") c.epsilon.reset();
          else c.epsilon = parse_real(k, v);
        },
        [](const PipelineConfig& c) { return c.epsilon ? io::format_double(*c.epsilon) : std::string("auto"); }}},
      {"k_distance",
       {[](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v == "mean") c.k_distance = KDistance::mean_of_k;
          else if (v == "kth") c.k_distance = KDistance::kth;
          else throw ConfigError("config key '" + k + "': expected mean or kth, got '" + v + "'");
        },
        [](const PipelineConfig& c) { return std::string(c.k_distance == KDistance::kth ? "kth" : "mean"); }}},
      {"persist_min_frames", int_field(&PipelineConfig::persist_min_frames)},
      {"min_frames", int_field(&PipelineConfig::min_frames)},
      {"pv_min", real_field(&PipelineConfig::pv_min)},
      {"phi_min_deg", real_field(&PipelineConfig::phi_min_deg)},
      {"dump_gradients", bool_field(&PipelineConfig::dump_gradients)},
      {"overlay_format",
       {[](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v != "png" && v != "pgm") throw ConfigError("config key '" + k + "': expected png or pgm, got '" + v + "'");
          c.overlay_format = v;
        },
        [](const PipelineConfig& c) { return c.overlay_format; }}},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what)
{
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

} // namespace

PipelineConfig PipelineConfig::from_key_values(const std::vector<std::pair<std::string, std::string>>& kv)
{
  std::map<std::string, const Field*> lookup;
  for (const auto& [name, field] : fields()) lookup[name] = &field;
  PipelineConfig c;
  for (const auto& [key, value] : kv) {
    auto it = lookup.find(key);
    if (it == lookup.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second->set(c, key, value);
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::from_text(const std::string& text)
{
  return from_key_values(io::parse_key_values(text));
}

void PipelineConfig::validate() const
{
  encounter.validate();
  if (model.rfind("builtin:", 0) == 0) parse_builtin_model(model.substr(8));
  require(!model.empty(), "model", "must name a builtin or a CSV file");
  require(zero_pad_factor >= 1 && zero_pad_factor <= 16, "zero_pad_factor", "must lie in [1, 16]");
  require(dynamic_range_db > 0.0, "dynamic_range_db", "must be positive");
  require(visibility_exponent > 0.0, "visibility_exponent", "must be positive");
  require(min_area >= 1, "min_area", "must be at least 1");
  require(!enable_shear, "enable_shear", "no shear estimation rule is available; must be 0");
  require(b > 0.0 && b < 1.0, "b", "must lie in (0, 1)");
  require(sigma_dir_deg > 0.0, "sigma_dir_deg", "must be positive");
  require(theta_bins >= 4 && theta_bins % 2 == 0, "theta_bins", "must be an even count of at least 4");
  require(min_fraction > 0.0 && min_fraction <= 1.0, "min_fraction", "must lie in (0, 1]");
  require(nhood_rho >= 1 && nhood_theta >= 1, "nhood_rho", "neighbourhoods must be at least 1 bin");
  require(gap_tolerance >= 0.0, "gap_tolerance", "must be non-negative");
  require(min_length >= 1.0, "min_length", "must be at least 1");
  require(mu >= 1, "mu", "must be at least 1");
  require(!epsilon || *epsilon > 0.0, "epsilon", "must be positive or auto");
  require(persist_min_frames >= 1, "persist_min_frames", "must be at least 1");
  require(min_frames >= 1, "min_frames", "must be at least 1");
  require(pv_min >= 0.0 && pv_min <= 1.0, "pv_min", "must lie in [0, 1]");
  require(phi_min_deg >= 0.0 && phi_min_deg <= 90.0, "phi_min_deg", "must lie in [0, 90]");

  const double range = range_resolution(encounter.bandwidth_hz);
  const double cross = cross_range_resolution(encounter.centre_frequency_hz, deg2rad(encounter.integration_angle_deg));
  require(std::abs(range - cross) <= 0.01 * std::max(range, cross), "integration_angle_deg",
          "range and cross-range resolution must agree within 1% (square cells)");
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::to_key_values() const
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(*this));
  return out;
}

std::string PipelineConfig::to_text() const
{
  std::ostringstream out;
  for (const auto& [k, v] : to_key_values()) out << k << " = " << v << '\n';
  return out.str();
}

AlignOptions PipelineConfig::align_options(int threads) const
{
  AlignOptions a;
  a.min_area = min_area;
  a.fill_db = -dynamic_range_db;
  a.interp = interp;
  a.enable_shear = enable_shear;
  a.threads = threads;
  return a;
}

} // namespace isarff
